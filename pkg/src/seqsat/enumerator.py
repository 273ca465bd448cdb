"""Enumerate all, closed or maximal frequent patterns with the SAT solver.

``mine_all`` is blocking-clause enumeration at the minsup floor; the
exact support of each pattern is then found by raising the floor with the
pattern pinned. ``mine_closed`` and ``mine_maximal`` use the
two assumption stacks (support floor, minimum length) with subsequence
blocking when no embedding or pattern constraint is active; otherwise they
post-filter the output of ``mine_all``, since constrained covers are not
anti-monotone and subsequence blocking could lose answers.
"""
from __future__ import annotations

import time
from collections import defaultdict
from typing import Sequence

from .cnf import (
    DEFAULT_SUBSEQUENCE_CAP,
    EPS,
    blocking_clause_exact,
    decode_pattern,
    distinct_subsequences,
)
from .dataset import Dataset, MiningConfig
from .encoder import Encoding, encode
from .exceptions import SubsequenceBlowup
from .patterns import Pattern, PatternSet, is_subsequence
from .solver import make_solver, verify_model


class _Session:
    """One encoded formula loaded into one solver."""

    def __init__(self, dataset: Dataset, config: MiningConfig, witness=False, seed=None,
                 solver_command=None, check_models=False):
        t0 = time.perf_counter()
        self.enc: Encoding = encode(dataset, config)
        self.encode_time = time.perf_counter() - t0
        self.vm = self.enc.varmap
        self.K = self.enc.K
        self.n = len(dataset)
        self.witness = witness
        self.check_models = check_models
        self.solver = make_solver(solver_command, seed=seed)
        self.solver.ensure_vars(self.vm.total_vars)
        self.solver.add_clauses(self.enc.cnf.clauses)
        self.calls = 0
        self.solve_time = 0.0
        self.blocking: list[list[int]] = []

    def solve(self, assumptions: Sequence[int]) -> bool:
        self.calls += 1
        t0 = time.perf_counter()
        sat = self.solver.solve(assumptions)
        self.solve_time += time.perf_counter() - t0
        if sat and self.check_models:
            clauses = self.enc.cnf.clauses + self.blocking + [[x] for x in assumptions]
            if not verify_model(clauses, self.solver.model):
                raise AssertionError("solver returned a model violating the formula")
        return sat

    def decode(self) -> Pattern:
        return decode_pattern(self.solver.model, self.vm, witness=self.witness)

    def block(self, clause: list[int]) -> None:
        if self.check_models:
            self.blocking.append(clause)
        self.solver.add_clause(clause)

    def card(self, tau: int) -> int:
        return self.vm.card[tau]

    def length_floor(self, ell: int) -> list[int]:
        return [-self.vm.m[(k, EPS)] for k in range(1, ell + 1)]

    def pin(self, items: Sequence[int]) -> list[int]:
        lits = [self.vm.m[(k, v)] for k, v in enumerate(items, 1)]
        if len(items) < self.K:
            lits.append(self.vm.m[(len(items) + 1, EPS)])
        return lits

    def finish(self, patterns: list[Pattern], mode: str, started: float) -> PatternSet:
        return PatternSet(
            patterns=patterns,
            mode=mode,
            config=self.enc.config,
            solver_calls=self.calls,
            conflicts=self.solver.stats.conflicts,
            encode_time=self.encode_time,
            solve_time=self.solve_time,
            wall_time=time.perf_counter() - started,
        )


def _all_patterns(sess: _Session, minsup: int) -> list[Pattern]:
    found = []
    floor = [sess.card(minsup)]
    while sess.solve(floor):
        p = _exact_support(sess, sess.decode())
        found.append(p)
        sess.block(blocking_clause_exact(p.items, sess.vm, sess.K))
    return found


def mine_all(dataset: Dataset, config: MiningConfig, **kw) -> PatternSet:
    started = time.perf_counter()
    sess = _Session(dataset, config, **kw)
    return sess.finish(_all_patterns(sess, config.minsup), "all", started)


def _stacked(sess: _Session, floors: list[list[int]], cap: int, tighten: bool) -> list[Pattern]:
    """Outer loop over support-floor assumption sets, inner loop over
    length floors K..1; every pattern found blocks all its subsequences."""
    found = []
    blocked: set[tuple[int, ...]] = set()
    core: set[int] | None = None
    for outer in floors:
        for ell in range(sess.K, 0, -1):
            assumptions = outer + sess.length_floor(ell)
            if core is not None and core <= set(assumptions):
                continue  # a subset of these assumptions is already known to fail
            while sess.solve(assumptions):
                p = sess.decode()
                if tighten:
                    p = _exact_support(sess, p)
                found.append(p)
                _block_subsequences(sess, p.items, blocked, cap)
            core = set(sess.solver.core or ())
            if not core:
                return found
    return found


def _block_subsequences(sess: _Session, items, blocked: set, cap: int) -> None:
    if 2 ** len(items) > cap:
        raise SubsequenceBlowup(sess.enc.dataset.decode(items), cap)
    # ``blocked`` is closed under subsequences, so whole subtrees can be skipped
    subs = distinct_subsequences(items, blocked)
    blocked.update(subs)
    for s in subs:
        sess.block(blocking_clause_exact(s, sess.vm, sess.K))


def _exact_support(sess: _Session, p: Pattern) -> Pattern:
    """Binary search on the support floor with the pattern pinned.

    A model at floor tau has at least tau true cover literals, each backed
    by an embedding, so the highest satisfiable floor is the exact support.
    """
    pinned = sess.pin(p.items)
    lo, hi = p.support + 1, sess.n
    while lo <= hi:
        mid = (lo + hi) // 2
        if sess.solve(pinned + [sess.card(mid)]):
            p = sess.decode()
            lo = p.support + 1
        else:
            hi = mid - 1
    return p


def condense(patterns: list[Pattern], mode: str) -> list[Pattern]:
    """Keep closed (no longer supersequence with the same cover) or maximal
    (no longer supersequence at all) patterns from a complete frequent set."""
    if mode == "all":
        return list(patterns)
    if mode == "closed":
        groups: dict[frozenset, list[Pattern]] = defaultdict(list)
        for p in patterns:
            groups[p.cover].append(p)
        keep = [
            p for p in patterns
            if not any(len(q) > len(p) and is_subsequence(p.items, q.items) for q in groups[p.cover])
        ]
    elif mode == "maximal":
        keep = [
            p for p in patterns
            if not any(len(q) > len(p) and is_subsequence(p.items, q.items) for q in patterns)
        ]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    keep.sort(key=lambda p: (-p.support, -len(p)))
    return keep


def mine_closed(dataset: Dataset, config: MiningConfig, cap: int = DEFAULT_SUBSEQUENCE_CAP, **kw) -> PatternSet:
    started = time.perf_counter()
    sess = _Session(dataset, config, **kw)
    if config.constrained:
        found = condense(_all_patterns(sess, config.minsup), "closed")
    else:
        floors = [[sess.card(t) for t in range(config.minsup + 1, top + 1)]
                  for top in range(sess.n, config.minsup - 1, -1)]
        found = _stacked(sess, floors, cap, tighten=False)
    return sess.finish(found, "closed", started)


def mine_maximal(dataset: Dataset, config: MiningConfig, cap: int = DEFAULT_SUBSEQUENCE_CAP, **kw) -> PatternSet:
    started = time.perf_counter()
    sess = _Session(dataset, config, **kw)
    if config.constrained:
        found = condense(_all_patterns(sess, config.minsup), "maximal")
    else:
        found = _stacked(sess, [[sess.card(config.minsup)]], cap, tighten=True)
    return sess.finish(found, "maximal", started)


def mine(dataset: Dataset, config: MiningConfig, cap: int = DEFAULT_SUBSEQUENCE_CAP, **kw) -> PatternSet:
    """Dispatch on ``config.mode``. Extra keywords (``witness``, ``seed``,
    ``solver_command``, ``check_models``) reach the solving session."""
    if config.mode == "all":
        return mine_all(dataset, config, **kw)
    if config.mode == "closed":
        return mine_closed(dataset, config, cap=cap, **kw)
    if config.mode == "maximal":
        return mine_maximal(dataset, config, cap=cap, **kw)
    raise ValueError(f"unknown mode {config.mode!r}")
