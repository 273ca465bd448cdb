"""Incremental CDCL SAT solver with assumption-based solving.

Literals use the DIMACS convention at the API boundary (``v`` / ``-v``,
variables numbered from 1). Internally a literal is ``2*v`` (positive) or
``2*v + 1`` (negative) so negation is ``lit ^ 1``.

The design follows MiniSat: two watched literals kept at positions 0 and 1
of each clause, first-UIP learning with local minimization, VSIDS with
phase saving, Luby restarts and periodic deletion of high-LBD learned
clauses. Assumptions are taken as the first decisions, so learned clauses
never depend on them and stay valid across calls.
"""
from __future__ import annotations

import heapq
import os
import random
import subprocess
import sys
import tempfile
from dataclasses import dataclass
from typing import Iterable, Sequence


def _luby(y: float, x: int) -> float:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


@dataclass
class SolverStats:
    solves: int = 0
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learnts: int = 0


class Solver:
    """CDCL solver. ``solve`` returns a bool and leaves ``model`` (signed
    ints, ``model[v-1] == ±v``) or ``core`` (failing assumptions) behind."""

    restart_first = 100
    var_decay = 0.95
    clause_reduce_first = 2000
    clause_reduce_growth = 1.1

    def __init__(self, seed: int | None = None):
        self.nvars = 0
        self.ok = True
        self.model: list[int] | None = None
        self.core: list[int] | None = None
        self.stats = SolverStats()

        self._val = [0, 0]  # indexed by internal literal
        self._level = [0]
        self._reason: list[list[int] | None] = [None]
        self._activity = [0.0]
        self._polarity = [False]
        self._seen = [False]
        self._watches: list[list[list[int]]] = [[], []]
        # binary clauses: _bins[a] holds (b, [b, a]) -- when a is false, b is implied
        self._bins: list[list[tuple[int, list[int]]]] = [[], []]
        self._clauses: list[list[int]] = []
        self._learnts: list[list[int]] = []
        self._lbd: dict[int, int] = {}
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._heap: list[tuple[float, int]] = []
        self._var_inc = 1.0
        self._max_learnts = float(self.clause_reduce_first)
        self._rng = random.Random(seed) if seed is not None else None

    # ------------------------------------------------------------------ setup

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self._val += (0, 0)
        self._level.append(0)
        self._reason.append(None)
        act = self._rng.random() * 1e-5 if self._rng is not None else 0.0
        self._activity.append(act)
        self._polarity.append(False)
        self._seen.append(False)
        self._watches += ([], [])
        self._bins += ([], [])
        heapq.heappush(self._heap, (-act, v))
        return v

    def ensure_vars(self, n: int) -> None:
        while self.nvars < n:
            self.new_var()

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> bool:
        for c in clauses:
            if not self.add_clause(c):
                return False
        return True

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a problem clause. Returns False once the database is
        unsatisfiable at the top level (the solver then stays UNSAT)."""
        if not self.ok:
            return False
        if self._trail_lim:
            self._cancel_until(0)
        val = self._val
        clause = []
        seen = set()
        for x in lits:
            if x == 0:
                raise ValueError("0 is not a literal")
            v = abs(x)
            if v > self.nvars:
                raise ValueError(f"variable {v} has not been created")
            lit = 2 * v + (x < 0)
            if lit ^ 1 in seen or val[lit] == 1:
                return True  # tautology or already satisfied
            if lit in seen or val[lit] == -1:
                continue
            seen.add(lit)
            clause.append(lit)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._assign(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        if len(clause) == 2:
            self._add_binary(clause[0], clause[1])
            return True
        self._clauses.append(clause)
        self._watches[clause[0]].append(clause)
        self._watches[clause[1]].append(clause)
        return True

    def _add_binary(self, a: int, b: int) -> None:
        self._bins[a].append((b, [b, a]))
        self._bins[b].append((a, [a, b]))

    # ---------------------------------------------------------------- solving

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        self.model = None
        self.core = None
        self.stats.solves += 1
        if not self.ok:
            self.core = []
            return False
        assumps = []
        for x in assumptions:
            v = abs(x)
            if not 1 <= v <= self.nvars:
                raise ValueError(f"assumption on unknown variable {v}")
            assumps.append(2 * v + (x < 0))
        if self._propagate() is not None:
            self.ok = False
            self.core = []
            return False
        curr_restarts = 0
        while True:
            budget = _luby(2, curr_restarts) * self.restart_first
            status = self._search(budget, assumps)
            if status is not None:
                break
            curr_restarts += 1
            self.stats.restarts += 1
        self._cancel_until(0)
        return status

    def value(self, x: int) -> bool | None:
        """Value of a literal in the last model."""
        if self.model is None:
            return None
        return (self.model[abs(x) - 1] > 0) == (x > 0)

    def _search(self, budget: float, assumps: list[int]) -> bool | None:
        stats = self.stats
        conflicts = 0
        val = self._val
        while True:
            confl = self._propagate()
            if confl is not None:
                stats.conflicts += 1
                conflicts += 1
                if not self._trail_lim:
                    self.ok = False
                    self.core = []
                    return False
                learnt, bt_level, lbd = self._analyze(confl)
                self._cancel_until(bt_level)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                elif len(learnt) == 2:
                    self._add_binary(learnt[0], learnt[1])
                    self._assign(learnt[0], [learnt[0], learnt[1]])
                    stats.learnts += 1
                else:
                    self._learnts.append(learnt)
                    self._lbd[id(learnt)] = lbd
                    self._watches[learnt[0]].append(learnt)
                    self._watches[learnt[1]].append(learnt)
                    self._assign(learnt[0], learnt)
                    stats.learnts += 1
                self._var_inc /= self.var_decay
                continue

            if conflicts >= budget:
                self._cancel_until(0)
                return None
            if len(self._learnts) - len(self._trail) >= self._max_learnts:
                self._reduce_db()

            nxt = None
            while len(self._trail_lim) < len(assumps):
                p = assumps[len(self._trail_lim)]
                if val[p] == 1:
                    self._trail_lim.append(len(self._trail))
                elif val[p] == -1:
                    self.core = [self._external(x) for x in self._analyze_final(p)]
                    return False
                else:
                    nxt = p
                    break
            if nxt is None:
                nxt = self._pick_branch()
                if nxt is None:
                    self.model = [v if val[2 * v] == 1 else -v for v in range(1, self.nvars + 1)]
                    return True
                stats.decisions += 1
            self._trail_lim.append(len(self._trail))
            self._assign(nxt, None)

    # ------------------------------------------------------------- internals

    @staticmethod
    def _external(lit: int) -> int:
        return -(lit >> 1) if lit & 1 else lit >> 1

    def _assign(self, lit: int, reason) -> None:
        self._val[lit] = 1
        self._val[lit ^ 1] = -1
        v = lit >> 1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self):
        val = self._val
        watches = self._watches
        trail = self._trail
        level = self._level
        reason = self._reason
        dl = len(self._trail_lim)
        qhead = self._qhead
        confl = None
        start = qhead
        bins = self._bins
        while qhead < len(trail):
            fl = trail[qhead] ^ 1
            qhead += 1
            for other, r in bins[fl]:
                vo = val[other]
                if vo == 1:
                    continue
                if vo == -1:
                    confl = r
                    break
                val[other] = 1
                val[other ^ 1] = -1
                v = other >> 1
                level[v] = dl
                reason[v] = r
                trail.append(other)
            if confl is not None:
                qhead = len(trail)
                break
            ws = watches[fl]
            n = len(ws)
            i = j = 0
            while i < n:
                c = ws[i]
                i += 1
                c0 = c[0]
                if c0 == fl:
                    c0 = c[1]
                    c[0] = c0
                    c[1] = fl
                if val[c0] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = fl
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[c0] == -1:
                        confl = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        val[c0] = 1
                        val[c0 ^ 1] = -1
                        v = c0 >> 1
                        level[v] = dl
                        reason[v] = c
                        trail.append(c0)
            del ws[j:]
            if confl is not None:
                qhead = len(trail)
                break
        self.stats.propagations += qhead - start
        self._qhead = qhead
        return confl

    def _bump(self, v: int) -> None:
        act = self._activity
        act[v] += self._var_inc
        if act[v] > 1e100:
            for u in range(1, self.nvars + 1):
                act[u] *= 1e-100
            self._var_inc *= 1e-100
            self._rebuild_heap()
        elif self._val[2 * v] == 0:
            heapq.heappush(self._heap, (-act[v], v))

    def _rebuild_heap(self) -> None:
        act = self._activity
        val = self._val
        self._heap = [(-act[v], v) for v in range(1, self.nvars + 1) if val[2 * v] == 0]
        heapq.heapify(self._heap)

    def _pick_branch(self) -> int | None:
        heap = self._heap
        val = self._val
        act = self._activity
        if len(heap) > 8 * self.nvars + 1000:
            self._rebuild_heap()
            heap = self._heap
        while heap:
            a, v = heapq.heappop(heap)
            if val[2 * v] != 0 or -a != act[v]:
                continue
            return 2 * v + (not self._polarity[v])
        return None

    def _cancel_until(self, target: int) -> None:
        if len(self._trail_lim) <= target:
            return
        trail = self._trail
        val = self._val
        pol = self._polarity
        act = self._activity
        heap = self._heap
        reason = self._reason
        stop = self._trail_lim[target]
        for idx in range(len(trail) - 1, stop - 1, -1):
            lit = trail[idx]
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            reason[v] = None
            pol[v] = not (lit & 1)
            heapq.heappush(heap, (-act[v], v))
        del trail[stop:]
        del self._trail_lim[target:]
        self._qhead = stop

    def _analyze(self, confl: list[int]):
        seen = self._seen
        level = self._level
        reason = self._reason
        trail = self._trail
        dl = len(self._trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        clause = confl
        while True:
            for q in clause if p == -1 else clause[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            clause = reason[p >> 1]
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None:
                kept.append(q)
                continue
            for x in r[1:]:
                u = x >> 1
                if not seen[u] and level[u] > 0:
                    kept.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = False

        bt_level = 0
        if len(kept) > 1:
            best = 1
            for k in range(2, len(kept)):
                if level[kept[k] >> 1] > level[kept[best] >> 1]:
                    best = k
            kept[1], kept[best] = kept[best], kept[1]
            bt_level = level[kept[1] >> 1]
        lbd = len({level[q >> 1] for q in kept})
        return kept, bt_level, lbd

    def _analyze_final(self, failed: int) -> list[int]:
        """Assumption literals responsible for ``failed`` being false."""
        core = [failed]
        if not self._trail_lim:
            return core
        seen = self._seen
        level = self._level
        reason = self._reason
        trail = self._trail
        seen[failed >> 1] = True
        for i in range(len(trail) - 1, self._trail_lim[0] - 1, -1):
            v = trail[i] >> 1
            if not seen[v]:
                continue
            r = reason[v]
            if r is None:
                if level[v] > 0:
                    core.append(trail[i])
            else:
                for q in r[1:]:
                    if level[q >> 1] > 0:
                        seen[q >> 1] = True
            seen[v] = False
        seen[failed >> 1] = False
        return core

    def _reduce_db(self) -> None:
        reason = self._reason
        val = self._val
        lbd = self._lbd

        def locked(c):
            return val[c[0]] == 1 and reason[c[0] >> 1] is c

        ranked = sorted(self._learnts, key=lambda c: (lbd[id(c)], len(c)))
        half = len(ranked) // 2
        keep = []
        for n, c in enumerate(ranked):
            if n < half or lbd[id(c)] <= 2 or locked(c):
                keep.append(c)
            else:
                del lbd[id(c)]
        self._learnts = keep
        self._max_learnts *= self.clause_reduce_growth
        watches = [[] for _ in range(2 * self.nvars + 2)]
        for group in (self._clauses, keep):
            for c in group:
                watches[c[0]].append(c)
                watches[c[1]].append(c)
        self._watches = watches


def verify_model(clauses: Iterable[Sequence[int]], model: Sequence[int]) -> bool:
    """True iff every clause has a literal made true by ``model``.

    ``model`` is a list of signed ints covering every variable."""
    truth = {abs(x): x > 0 for x in model}
    for clause in clauses:
        if not any(truth.get(abs(x), False) == (x > 0) for x in clause):
            return False
    return True


# ---------------------------------------------------------------- DIMACS I/O


def write_dimacs(nvars: int, clauses: Sequence[Sequence[int]], sink) -> None:
    sink.write(f"p cnf {nvars} {len(clauses)}\n")
    for c in clauses:
        sink.write(" ".join(map(str, c)))
        sink.write(" 0\n" if c else "0\n")


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    nvars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                clauses.append(current)
                current = []
            else:
                current.append(x)
    if nvars is None:
        raise ValueError("missing 'p cnf' header")
    if current:
        clauses.append(current)
    return nvars, clauses


def parse_solver_output(text: str, nvars: int) -> list[int] | None:
    """Read competition-style ``s``/``v`` lines. Returns a model or None."""
    status = None
    lits: dict[int, bool] = {}
    for line in text.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            for tok in line[2:].split():
                x = int(tok)
                if x:
                    lits[abs(x)] = x > 0
    if status == "UNSATISFIABLE":
        return None
    if status != "SATISFIABLE":
        raise RuntimeError(f"external solver gave no verdict:\n{text[-500:]}")
    return [v if lits.get(v, False) else -v for v in range(1, nvars + 1)]


class ExternalSolver:
    """Same surface as :class:`Solver`, backed by a DIMACS command-line solver.

    Every ``solve`` writes the whole formula (assumptions as unit clauses)
    to a temporary file and runs ``command`` on it. No cores are available,
    so a failed solve reports all assumptions as the core.
    """

    def __init__(self, command: Sequence[str] | str):
        self.command = command.split() if isinstance(command, str) else list(command)
        self.nvars = 0
        self.ok = True
        self.clauses: list[list[int]] = []
        self.model: list[int] | None = None
        self.core: list[int] | None = None
        self.stats = SolverStats()

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def ensure_vars(self, n: int) -> None:
        self.nvars = max(self.nvars, n)

    def add_clause(self, lits: Iterable[int]) -> bool:
        c = list(lits)
        if not c:
            self.ok = False
        self.clauses.append(c)
        return self.ok

    def add_clauses(self, clauses) -> bool:
        for c in clauses:
            self.add_clause(c)
        return self.ok

    def value(self, x: int) -> bool | None:
        if self.model is None:
            return None
        return (self.model[abs(x) - 1] > 0) == (x > 0)

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        self.stats.solves += 1
        self.model = None
        self.core = None
        if not self.ok:
            self.core = []
            return False
        clauses = self.clauses + [[x] for x in assumptions]
        fd, path = tempfile.mkstemp(suffix=".cnf")
        try:
            with os.fdopen(fd, "w") as fh:
                write_dimacs(self.nvars, clauses, fh)
            proc = subprocess.run(self.command + [path], capture_output=True, text=True)
        finally:
            os.unlink(path)
        model = parse_solver_output(proc.stdout, self.nvars)
        if model is None:
            self.core = list(assumptions)
            return False
        self.model = model
        return True


def make_solver(command: Sequence[str] | str | None = None, seed: int | None = None):
    return Solver(seed=seed) if command is None else ExternalSolver(command)


def main(argv=None) -> int:
    """Minimal DIMACS front end: ``python -m seqsat.solver FILE``."""
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m seqsat.solver FILE.cnf", file=sys.stderr)
        return 2
    with open(argv[0]) as fh:
        nvars, clauses = parse_dimacs(fh.read())
    s = Solver()
    s.ensure_vars(nvars)
    s.add_clauses(clauses)
    if s.solve():
        print("s SATISFIABLE")
        print("v " + " ".join(map(str, s.model)) + " 0")
        return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    sys.exit(main())
