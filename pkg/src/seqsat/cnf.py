"""Variable allocation, clause storage, model decoding and blocking clauses.

Variable families (1-based indices throughout):

* ``m(k, v)``  pattern position ``k`` holds token ``v`` (``v == EPS`` for padding)
* ``c(i)``     transaction ``i`` is covered
* ``t(i, j, k)`` position ``j`` of transaction ``i`` supports pattern position ``k``
* ``card(tau)`` at least ``tau`` transactions are covered
* auxiliary pools: counter cells, span markers, automaton states
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .dataset import Dataset, MiningConfig
from .exceptions import IllFormedModel, Overflow, SubsequenceBlowup
from .patterns import Pattern

EPS = -1
EPS_NAME = "<eps>"
MAX_VARS = 2**31 - 1
DEFAULT_SUBSEQUENCE_CAP = 2**20


@dataclass
class Cnf:
    clauses: list[list[int]] = field(default_factory=list)
    var_count: int = 0

    def __len__(self) -> int:
        return len(self.clauses)

    def add(self, clause: Sequence[int]) -> None:
        self.clauses.append(list(clause))

    def extend(self, other: "Cnf | Iterable[Sequence[int]]") -> None:
        clauses = other.clauses if isinstance(other, Cnf) else other
        self.clauses.extend(list(c) for c in clauses)
        if isinstance(other, Cnf):
            self.var_count = max(self.var_count, other.var_count)


class VarMap:
    """Bijection between named model variables and solver ids."""

    def __init__(self, vocabulary: Sequence[str], k: int):
        self.vocabulary = tuple(vocabulary)
        self.K = k
        self.names: list[str] = [""]
        self.m: dict[tuple[int, int], int] = {}
        self.c: dict[int, int] = {}
        self.t: dict[tuple[int, int, int], int] = {}
        self.card: dict[int, int] = {}
        self.counter: dict[tuple[int, int], int] = {}
        self.first: dict[tuple[int, int], int] = {}
        self.used: dict[tuple[int, int], int] = {}
        self.state: dict[tuple[int, int], int] = {}
        self.n_transactions = 0

    @property
    def total_vars(self) -> int:
        return len(self.names) - 1

    def new_var(self, name: str) -> int:
        if len(self.names) > MAX_VARS:
            raise Overflow("variable count exceeds the solver id space")
        self.names.append(name)
        return len(self.names) - 1

    def token_name(self, v: int) -> str:
        return EPS_NAME if v == EPS else self.vocabulary[v]

    def name_to_id(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names) if i}

    def alloc_counter(self, n: int) -> None:
        """Sequential-counter cells ``s(i, tau)`` for ``1 <= tau <= i <= n``;
        ``card(tau)`` is the last row."""
        self.n_transactions = n
        for i in range(1, n + 1):
            for tau in range(1, i + 1):
                name = f"card_{tau}" if i == n else f"cnt_{i}_{tau}"
                var = self.new_var(name)
                self.counter[(i, tau)] = var
                if i == n:
                    self.card[tau] = var

    def alloc_span(self, dataset: Dataset) -> None:
        for i, tr in enumerate(dataset.transactions, 1):
            for j in range(1, len(tr) + 1):
                self.first[(i, j)] = self.new_var(f"f_{i}_{j}")
                self.used[(i, j)] = self.new_var(f"u_{i}_{j}")

    def alloc_states(self, n_states: int) -> None:
        for k in range(0, self.K + 1):
            for s in range(n_states):
                self.state[(k, s)] = self.new_var(f"q_{k}_{s}")


def alloc_vars(dataset: Dataset, k: int, config: MiningConfig | None = None, n_states: int = 0) -> VarMap:
    """Allocate m, then c, then t, then the counter, then constraint pools."""
    if k < 1:
        raise ValueError("K must be >= 1")
    vm = VarMap(dataset.vocabulary, k)
    for pos in range(1, k + 1):
        vm.m[(pos, EPS)] = vm.new_var(f"m_{pos}_{EPS_NAME}")
        for v, tok in enumerate(dataset.vocabulary):
            vm.m[(pos, v)] = vm.new_var(f"m_{pos}_{tok}")
    for i in range(1, len(dataset) + 1):
        vm.c[i] = vm.new_var(f"c_{i}")
    for i, tr in enumerate(dataset.transactions, 1):
        for j in range(1, len(tr) + 1):
            for pos in range(1, min(j, k) + 1):
                vm.t[(i, j, pos)] = vm.new_var(f"t_{i}_{j}_{pos}")
    vm.alloc_counter(len(dataset))
    if config is not None and config.max_span is not None:
        vm.alloc_span(dataset)
    if n_states:
        vm.alloc_states(n_states)
    return vm


def _truth(model: Sequence[int]):
    """Lookup ``var -> bool`` for a signed-int model (``model[v-1] == ±v``)."""
    return lambda var: model[var - 1] > 0


def decode_pattern(model: Sequence[int], varmap: VarMap, witness: bool = False) -> Pattern:
    true = _truth(model)
    items: list[int] = []
    seen_eps = False
    for pos in range(1, varmap.K + 1):
        hits = [v for v in [EPS, *range(len(varmap.vocabulary))] if true(varmap.m[(pos, v)])]
        if len(hits) != 1:
            raise IllFormedModel(f"position {pos} has {len(hits)} characters assigned")
        if hits[0] == EPS:
            seen_eps = True
        elif seen_eps:
            raise IllFormedModel(f"character after padding at position {pos}")
        else:
            items.append(hits[0])
    if not items:
        raise IllFormedModel("model encodes the empty pattern")
    cover = frozenset(i for i, var in varmap.c.items() if true(var))
    emb = None
    if witness:
        support_of = {}
        for (i, j, pos), var in varmap.t.items():
            if i in cover and pos <= len(items) and true(var):
                support_of[(i, pos)] = j
        emb = {i: tuple(support_of[(i, pos)] for pos in range(1, len(items) + 1)) for i in sorted(cover)}
    return Pattern(
        chars=tuple(varmap.vocabulary[v] for v in items),
        support=len(cover),
        items=tuple(items),
        cover=cover,
        witness=emb,
    )


def export_dimacs(cnf: Cnf, varmap: VarMap | None, sink: TextIO, sidecar: TextIO | None = None) -> None:
    nvars = max(cnf.var_count, varmap.total_vars if varmap is not None else 0)
    sink.write(f"p cnf {nvars} {len(cnf.clauses)}\n")
    for c in cnf.clauses:
        sink.write(" ".join(map(str, c)) + " 0\n")
    if sidecar is not None and varmap is not None:
        json.dump(varmap.name_to_id(), sidecar, indent=1, ensure_ascii=False)
        sidecar.write("\n")


def blocking_clause_exact(pattern: Sequence[int], varmap: VarMap, k: int) -> list[int]:
    """Clause ruling out exactly ``pattern`` (indices), padding included."""
    clause = [-varmap.m[(pos, v)] for pos, v in enumerate(pattern, 1)]
    if len(pattern) < k:
        clause.append(-varmap.m[(len(pattern) + 1, EPS)])
    return clause


def distinct_subsequences(pattern: Sequence[int], exclude=frozenset()) -> list[tuple[int, ...]]:
    """All distinct nonempty subsequences of ``pattern``.

    Anything in ``exclude`` is skipped together with its own subsequences,
    which is only correct when ``exclude`` is closed under taking
    subsequences (as a set of already-blocked patterns is).
    """
    out = []
    visited = set(exclude)
    stack = [tuple(pattern)]
    while stack:
        s = stack.pop()
        if not s or s in visited:
            continue
        visited.add(s)
        out.append(s)
        stack.extend(s[:i] + s[i + 1:] for i in range(len(s)))
    return out


def blocking_clauses_subsequences(
    pattern: Sequence[int],
    varmap: VarMap,
    k: int,
    cap: int = DEFAULT_SUBSEQUENCE_CAP,
    exclude=frozenset(),
) -> list[list[int]]:
    if 2 ** len(pattern) > cap:
        raise SubsequenceBlowup([varmap.vocabulary[v] for v in pattern], cap)
    return [blocking_clause_exact(s, varmap, k) for s in distinct_subsequences(pattern, exclude)]
