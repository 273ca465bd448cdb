"""CNF encoding of frequent-sequence mining and of the user constraints.

Every ``encode_*`` function is a pure function returning a :class:`Cnf`;
:func:`encode` assembles the full formula for a :class:`MiningConfig`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .cnf import EPS, Cnf, VarMap, alloc_vars
from .dataset import Dataset, MiningConfig, check_gap_table, compute_k
from .regex import Dfa, compile_regex


def encode_base(dataset: Dataset, k: int, varmap: VarMap, order: bool = True) -> Cnf:
    """Well-formedness, padding symmetry, support compatibility, coverage,
    single support per position and (unless ``order`` is False) order
    preservation. The empty pattern is excluded by a unit clause."""
    cnf = Cnf(var_count=varmap.total_vars)
    m, c, t = varmap.m, varmap.c, varmap.t
    chars = [EPS, *range(len(dataset.vocabulary))]
    add = cnf.clauses.append

    for pos in range(1, k + 1):
        add([m[(pos, v)] for v in chars])
        for a, b in combinations(chars, 2):
            add([-m[(pos, a)], -m[(pos, b)]])
    for pos in range(1, k):
        add([-m[(pos, EPS)], m[(pos + 1, EPS)]])
    add([-m[(1, EPS)]])

    for i, tr in enumerate(dataset.transactions, 1):
        n = len(tr)
        for j in range(1, n + 1):
            for pos in range(1, min(j, k) + 1):
                add([-t[(i, j, pos)], m[(pos, tr[j - 1])]])
        for pos in range(1, k + 1):
            add([-c[i], m[(pos, EPS)]] + [t[(i, j, pos)] for j in range(pos, n + 1)])
            for j, j2 in combinations(range(pos, n + 1), 2):
                add([-t[(i, j, pos)], -t[(i, j2, pos)]])
        if order:
            for j in range(2, n + 1):
                for pos in range(2, min(j, k) + 1):
                    add([-t[(i, j, pos)]] + [t[(i, jp, pos - 1)] for jp in range(pos - 1, j)])
    return cnf


def encode_cardinality(cover_lits: Sequence[int], minsup: int, varmap: VarMap) -> Cnf:
    """Sequential counter ``s(i, tau) <-> |{c_1..c_i} true| >= tau``.

    Both directions are encoded, so every ``card(tau) = s(n, tau)`` is exact
    and ``card(tau + 1) -> card(tau)`` follows. ``card(minsup)`` is asserted.
    """
    cnf = Cnf(var_count=varmap.total_vars)
    add = cnf.clauses.append
    s = varmap.counter
    n = len(cover_lits)
    for i in range(1, n + 1):
        ci = cover_lits[i - 1]
        for tau in range(1, i + 1):
            cur = s[(i, tau)]
            prev_same = s.get((i - 1, tau))        # None: cannot hold (tau > i-1)
            prev_less = s.get((i - 1, tau - 1))    # None when tau == 1: always holds
            # cur -> prev_same or (ci and prev_less)
            add([-cur, ci] + ([prev_same] if prev_same else []))
            if tau > 1:
                add([-cur, prev_less] + ([prev_same] if prev_same else []))
            # prev_same -> cur ; (ci and prev_less) -> cur
            if prev_same:
                add([-prev_same, cur])
            add([-ci, cur] + ([-prev_less] if prev_less else []))
    add([varmap.card[minsup]])
    return cnf


def encode_max_gap(dataset: Dataset, k: int, gap: int, varmap: VarMap) -> Cnf:
    """Order preservation restricted to predecessors at most ``gap`` back."""
    cnf = Cnf(var_count=varmap.total_vars)
    t = varmap.t
    for i, tr in enumerate(dataset.transactions, 1):
        for j in range(2, len(tr) + 1):
            for pos in range(2, min(j, k) + 1):
                lo = max(pos - 1, j - gap)
                cnf.clauses.append([-t[(i, j, pos)]] + [t[(i, jp, pos - 1)] for jp in range(lo, j)])
    return cnf


def encode_dep_gap(
    dataset: Dataset, k: int, gap_table: Mapping[tuple[int, str], int], varmap: VarMap
) -> Cnf:
    """Gap after pattern position ``pos - 1`` bounded by ``gap(pos - 1, token)``."""
    check_gap_table(gap_table, dataset, k)
    cnf = Cnf(var_count=varmap.total_vars)
    t, m = varmap.t, varmap.m
    vocab = dataset.vocabulary
    for i, tr in enumerate(dataset.transactions, 1):
        for j in range(2, len(tr) + 1):
            for pos in range(2, min(j, k) + 1):
                for v, tok in enumerate(vocab):
                    lo = max(pos - 1, j - gap_table[(pos - 1, tok)])
                    if lo == pos - 1:
                        continue  # full window: implied by the order clauses
                    cnf.clauses.append(
                        [-t[(i, j, pos)], -m[(pos - 1, v)]] + [t[(i, jp, pos - 1)] for jp in range(lo, j)]
                    )
    return cnf


def encode_max_span(dataset: Dataset, k: int, span: int, varmap: VarMap) -> Cnf:
    """Covered transactions need an embedding with ``last - first <= span``.

    ``f(i, j)`` marks the support of the first pattern character and
    ``u(i, j)`` every position from there up to the last support.
    """
    cnf = Cnf(var_count=varmap.total_vars)
    add = cnf.clauses.append
    t, f, u, c = varmap.t, varmap.first, varmap.used, varmap.c
    for i, tr in enumerate(dataset.transactions, 1):
        n = len(tr)
        for j in range(1, n + 1):
            add([-t[(i, j, 1)], f[(i, j)]])
            add([t[(i, j, 1)], -f[(i, j)]])
            for pos in range(1, min(j, k) + 1):
                add([-t[(i, j, pos)], u[(i, j)]])
            add([-u[(i, j)], f[(i, j)]] + ([u[(i, j - 1)]] if j > 1 else []))
        for j in range(1, n - span):
            add([-c[i], -u[(i, j)], -u[(i, j + span + 1)]])
    return cnf


def encode_regular(dfa: Dfa, k: int, varmap: VarMap) -> Cnf:
    """Unrolled automaton: one state per layer, padding keeps the state."""
    cnf = Cnf(var_count=varmap.total_vars)
    add = cnf.clauses.append
    q, m = varmap.state, varmap.m
    states = range(dfa.states)
    for layer in range(0, k + 1):
        add([q[(layer, s)] for s in states])
        for a, b in combinations(states, 2):
            add([-q[(layer, a)], -q[(layer, b)]])
    add([q[(0, dfa.start)]])
    for pos in range(1, k + 1):
        for s in states:
            for v, nxt in enumerate(dfa.delta[s]):
                add([-q[(pos - 1, s)], -m[(pos, v)], q[(pos, nxt)]])
            add([-q[(pos - 1, s)], -m[(pos, EPS)], q[(pos, s)]])
    for s in states:
        if s not in dfa.accepting:
            add([-q[(k, s)]])
    return cnf


@dataclass
class Encoding:
    dataset: Dataset
    config: MiningConfig
    K: int
    varmap: VarMap
    cnf: Cnf
    dfa: Dfa | None = None


def encode(dataset: Dataset, config: MiningConfig) -> Encoding:
    """Full formula for ``config``: base model, every active constraint and
    the cardinality counter with ``card(minsup)`` asserted."""
    config.validate(dataset)
    k = compute_k(dataset, config.minsup)
    dfa = compile_regex(config.regex, dataset.vocabulary) if config.regex is not None else None
    vm = alloc_vars(dataset, k, config, n_states=dfa.states if dfa else 0)
    cnf = Cnf()
    cnf.extend(encode_base(dataset, k, vm, order=config.max_gap is None))
    if config.max_gap is not None:
        cnf.extend(encode_max_gap(dataset, k, config.max_gap, vm))
    if config.dep_gap is not None:
        cnf.extend(encode_dep_gap(dataset, k, config.dep_gap, vm))
    if config.max_span is not None:
        cnf.extend(encode_max_span(dataset, k, config.max_span, vm))
    if dfa is not None:
        cnf.extend(encode_regular(dfa, k, vm))
    cnf.extend(encode_cardinality([vm.c[i] for i in range(1, len(dataset) + 1)], config.minsup, vm))
    cnf.var_count = vm.total_vars
    return Encoding(dataset, config, k, vm, cnf, dfa)
