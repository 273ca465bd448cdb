"""Brute-force reference miner.

Nothing here touches the encoder or the solver: embeddings are checked by
dynamic programming, patterns are grown by right extension, and regular
expressions are matched with :mod:`re` after mapping every token to a
private-use character.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dataset import Dataset, MiningConfig, compute_k
from .exceptions import BudgetExceeded, TokenNotInVocabulary
from .patterns import Pattern, PatternSet, is_subsequence
from .regex import tokenize_regex

DEFAULT_NODE_CAP = 2_000_000


@dataclass(frozen=True)
class EmbeddingQuery:
    """``gaps[i]`` bounds the distance between supports of pattern
    positions ``i + 1`` and ``i + 2`` (already combined from the max-gap
    and the dependent-gap table)."""

    pattern: tuple
    transaction: tuple
    gaps: tuple[int | None, ...] | None = None
    span: int | None = None


def gaps_for(pattern: Sequence[str], max_gap: int | None = None,
             gap_table: Mapping[tuple[int, str], int] | None = None) -> tuple[int | None, ...] | None:
    if max_gap is None and gap_table is None:
        return None
    out = []
    for pos, tok in enumerate(pattern[:-1], 1):
        bounds = [g for g in (max_gap, gap_table[(pos, tok)] if gap_table else None) if g is not None]
        out.append(min(bounds))
    return tuple(out)


def embeds(q: EmbeddingQuery) -> bool:
    """Is there at least one embedding honouring every active bound?"""
    s, t = q.pattern, q.transaction
    n, L = len(s), len(t)
    if n == 0 or n > L:
        return n == 0
    gaps = q.gaps
    # earliest[j]: for an embedding of s[:p+1] ending at position j, the
    # latest possible start (largest first position) -- maximizing the start
    # minimizes the span for a fixed end.
    best = [j if t[j] == s[0] else None for j in range(L)]
    for p in range(1, n):
        g = gaps[p - 1] if gaps else None
        nxt = [None] * L
        for j in range(L):
            if t[j] != s[p]:
                continue
            lo = 0 if g is None else max(0, j - g)
            starts = [best[jp] for jp in range(lo, j) if best[jp] is not None]
            if starts:
                nxt[j] = max(starts)
        best = nxt
    for j in range(L):
        if best[j] is not None and (q.span is None or j - best[j] <= q.span):
            return True
    return False


def embeds_naive(q: EmbeddingQuery) -> bool:
    """Same predicate by trying every increasing position tuple."""
    s, t = q.pattern, q.transaction
    for e in itertools.combinations(range(len(t)), len(s)):
        if any(t[j] != c for j, c in zip(e, s)):
            continue
        if q.gaps and any(e[i + 1] - e[i] > q.gaps[i] for i in range(len(e) - 1)):
            continue
        if q.span is not None and e[-1] - e[0] > q.span:
            continue
        return True
    return False


def cover(pattern: Sequence[str], dataset: Dataset, config: MiningConfig | None = None,
          check=embeds) -> frozenset[int]:
    """1-based ids of transactions embedding ``pattern`` (tokens)."""
    pattern = tuple(pattern)
    gaps = gaps_for(pattern, config.max_gap, config.dep_gap) if config else None
    span = config.max_span if config else None
    out = set()
    for i, seq in enumerate(dataset.sequences(), 1):
        if check(EmbeddingQuery(pattern, tuple(seq), gaps, span)):
            out.add(i)
    return frozenset(out)


# ------------------------------------------------------------------ regex


def regex_matcher(source: str, vocabulary: Sequence[str]):
    """Compile the token regex into a :mod:`re` pattern over one private-use
    character per token; returns ``match(tokens) -> bool``."""
    code = {tok: chr(0xE000 + i) for i, tok in enumerate(vocabulary)}
    parts = []
    for lx in tokenize_regex(source):
        if lx.kind == "WORD":
            if lx.text not in code:
                raise TokenNotInVocabulary(f"regex token {lx.text!r} is not in the vocabulary")
            parts.append(re.escape(code[lx.text]))
        else:
            parts.append({"ANY": ".", "STAR": "*", "WILD": "(?:.*)", "LPAREN": "(?:",
                          "RPAREN": ")", "BAR": "|"}[lx.kind])
    compiled = re.compile("".join(parts), re.DOTALL)
    return lambda toks: compiled.fullmatch("".join(code[t] for t in toks)) is not None


# ----------------------------------------------------------------- mining


def _postfilter(found: dict[tuple[str, ...], frozenset[int]], mode: str) -> list[tuple[str, ...]]:
    keys = list(found)
    if mode == "all":
        return keys
    out = []
    for p in keys:
        dominated = False
        for q in keys:
            if len(q) > len(p) and is_subsequence(p, q):
                if mode == "maximal" or found[q] == found[p]:
                    dominated = True
                    break
        if not dominated:
            out.append(p)
    return out


def _result(found, dataset, config) -> PatternSet:
    keep = _postfilter(found, config.mode)
    index = {tok: v for v, tok in enumerate(dataset.vocabulary)}
    pats = [Pattern(chars=p, support=len(found[p]), items=tuple(index[t] for t in p), cover=found[p])
            for p in keep]
    pats.sort(key=lambda p: (-p.support, -len(p), p.items))
    return PatternSet(patterns=pats, mode=config.mode, config=config)


def oracle_mine(dataset: Dataset, config: MiningConfig, node_cap: int = DEFAULT_NODE_CAP) -> PatternSet:
    """Depth-first right extension with prefix pruning, capped at length K.

    Pruning on the prefix is sound because the prefix of a valid embedding
    is itself valid under every gap and span bound.
    """
    config.validate(dataset)
    k = compute_k(dataset, config.minsup)
    vocab = dataset.vocabulary
    found: dict[tuple[str, ...], frozenset[int]] = {}
    nodes = 0
    stack: list[tuple[str, ...]] = [(tok,) for tok in reversed(vocab)]
    while stack:
        p = stack.pop()
        nodes += 1
        if nodes > node_cap:
            raise BudgetExceeded(f"oracle explored more than {node_cap} candidate patterns")
        cov = cover(p, dataset, config)
        if len(cov) < config.minsup:
            continue
        found[p] = cov
        if len(p) < k:
            stack.extend(p + (tok,) for tok in reversed(vocab))
    if config.regex is not None:
        match = regex_matcher(config.regex, vocab)
        found = {p: c for p, c in found.items() if match(p)}
    return _result(found, dataset, config)


def exhaustive_mine(dataset: Dataset, config: MiningConfig, limit: int = 10**6) -> PatternSet:
    """Every string over the vocabulary of length 1..K, each checked with
    :func:`embeds_naive`. Only for tiny instances."""
    config.validate(dataset)
    k = compute_k(dataset, config.minsup)
    vocab = dataset.vocabulary
    if sum(len(vocab) ** n for n in range(1, k + 1)) > limit:
        raise BudgetExceeded("exhaustive enumeration would exceed its limit")
    match = regex_matcher(config.regex, vocab) if config.regex is not None else None
    found = {}
    for n in range(1, k + 1):
        for p in itertools.product(vocab, repeat=n):
            cov = cover(p, dataset, config, check=embeds_naive)
            if len(cov) >= config.minsup and (match is None or match(p)):
                found[p] = cov
    return _result(found, dataset, config)
