"""A small deterministic CDCL solver.

Two watched literals, first-UIP clause learning and non-chronological
backjumping.  Branching picks the lowest-index unassigned variable and tries
it false first; ``branching="activity"`` switches to VSIDS-style activity
ordering (still deterministic).  ``learn=False`` falls back to plain DPLL
with chronological backtracking.  Every mode is complete and returns the
same status.
"""
from __future__ import annotations

import heapq
import time
from typing import Iterable, Optional, Sequence


class SolverBudgetExceeded(RuntimeError):
    pass


def _luby(x: int) -> int:
    """x-th element (from 0) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


class Solver:
    """Solve a CNF given as DIMACS-style integer clauses over variables 1..num_vars."""

    def __init__(
        self,
        num_vars: int,
        clauses: Iterable[Sequence[int]],
        *,
        learn: bool = True,
        branching: str = "lowest",
        restarts: bool = False,
        conflict_budget: Optional[int] = None,
        time_budget_ms: Optional[int] = None,
    ):
        if branching not in ("lowest", "activity"):
            raise ValueError("branching must be 'lowest' or 'activity'")
        self.nv = num_vars
        self.learn = learn
        self.branching = branching
        self.restarts = restarts and learn
        self.conflict_budget = conflict_budget
        self.deadline = (
            time.perf_counter() + time_budget_ms / 1000.0 if time_budget_ms is not None else None
        )
        size = 2 * (num_vars + 1)
        # literal code: 2*v for v, 2*v+1 for -v; vals indexed by code
        self.vals = [0] * size
        self.level = [0] * (num_vars + 1)
        self.reason: list[Optional[int]] = [None] * (num_vars + 1)
        self.watches: list[list[int]] = [[] for _ in range(size)]
        self.clauses: list[list[int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity = [0.0] * (num_vars + 1)
        self.bump = 1.0
        self.heap: list[tuple[float, int]] = []
        self.next_var = 1
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.flipped: list[bool] = []
        self.ok = True
        units = []
        for clause in clauses:
            codes = []
            seen = set()
            taut = False
            for lit in clause:
                if lit == 0 or abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} out of range")
                c = 2 * lit if lit > 0 else -2 * lit + 1
                if c ^ 1 in seen:
                    taut = True
                    break
                if c not in seen:
                    seen.add(c)
                    codes.append(c)
            if taut:
                continue
            if not codes:
                self.ok = False
            elif len(codes) == 1:
                units.append(codes[0])
            else:
                self._attach(codes)
        self._units = units
        if branching == "activity":
            self.heap = [(0.0, v) for v in range(1, num_vars + 1)]

    def _attach(self, codes: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(codes)
        self.watches[codes[0]].append(ci)
        self.watches[codes[1]].append(ci)
        return ci

    def _enqueue(self, code: int, reason: Optional[int]) -> bool:
        v = self.vals[code]
        if v == 1:
            return True
        if v == -1:
            return False
        self.vals[code] = 1
        self.vals[code ^ 1] = -1
        var = code >> 1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(code)
        return True

    def _propagate(self) -> Optional[int]:
        vals = self.vals
        watches = self.watches
        clauses = self.clauses
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        deadline = self.deadline
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            if deadline is not None and not self.qhead & 1023 and time.perf_counter() > deadline:
                raise SolverBudgetExceeded("time budget exhausted")
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if vals[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if vals[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if vals[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return ci
                    vals[first] = 1
                    vals[first ^ 1] = -1
                    var = first >> 1
                    level[var] = lvl
                    reason[var] = ci
                    trail.append(first)
                    self.propagations += 1
            del ws[j:]
        return None

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        lvl = len(self.trail_lim)
        level = self.level
        while True:
            c = self.clauses[confl]
            for q in c if p is None else c[1:]:
                var = q >> 1
                if var not in seen and level[var] > 0:
                    seen.add(var)
                    self._bump(var)
                    if level[var] >= lvl:
                        counter += 1
                    else:
                        learnt.append(q)
            while (self.trail[idx] >> 1) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            # reason clauses keep the implied literal at position 0
            confl = self.reason[p >> 1]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda k: (level[learnt[k] >> 1], -k))
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        self.bump *= 1.05
        return learnt, back

    def _bump(self, var: int) -> None:
        if self.branching != "activity":
            return
        self.activity[var] += self.bump
        if self.activity[var] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.bump *= 1e-100
            self.heap = [(-self.activity[v], v) for v in range(1, self.nv + 1) if self.vals[2 * v] == 0]
            heapq.heapify(self.heap)
            return
        heapq.heappush(self.heap, (-self.activity[var], var))

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        vals = self.vals
        for k in range(len(self.trail) - 1, stop - 1, -1):
            code = self.trail[k]
            vals[code] = 0
            vals[code ^ 1] = 0
            var = code >> 1
            self.reason[var] = None
            if var < self.next_var:
                self.next_var = var
            if self.branching == "activity":
                heapq.heappush(self.heap, (-self.activity[var], var))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        del self.flipped[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> Optional[int]:
        vals = self.vals
        if self.branching == "activity":
            heap = self.heap
            while heap:
                act, var = heap[0]
                if vals[2 * var] != 0 or -act != self.activity[var]:
                    heapq.heappop(heap)
                    continue
                return var
            # fall through: stale heap, scan
        v = self.next_var
        while v <= self.nv and vals[2 * v] != 0:
            v += 1
        self.next_var = v
        return v if v <= self.nv else None

    def _check_budget(self) -> None:
        if self.conflict_budget is not None and self.conflicts > self.conflict_budget:
            raise SolverBudgetExceeded(f"conflict budget {self.conflict_budget} exhausted")
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise SolverBudgetExceeded("time budget exhausted")

    def add_clause(self, clause: Sequence[int]) -> None:
        """Add a clause between calls to :meth:`solve` (used for blocking clauses)."""
        self._cancel_until(0)
        if not self.ok:
            return
        codes = []
        for lit in clause:
            if lit == 0 or abs(lit) > self.nv:
                raise ValueError(f"literal {lit} out of range")
            c = 2 * lit if lit > 0 else -2 * lit + 1
            if self.vals[c] == 1:
                return
            if self.vals[c] == 0 and c not in codes:
                codes.append(c)
        if not codes:
            self.ok = False
        elif len(codes) == 1:
            self._units.append(codes[0])
        else:
            self._attach(codes)

    def solve(self) -> Optional[list[bool]]:
        """Return a model (index 0 unused) or None when unsatisfiable."""
        self._cancel_until(0)
        if not self.ok:
            return None
        for code in self._units:
            if not self._enqueue(code, None):
                self.ok = False
                return None
        if self._propagate() is not None:
            self.ok = False
            return None
        restart_idx = 0
        restart_left = 100 * _luby(0)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                self._check_budget()
                if not self.trail_lim:
                    self.ok = False
                    return None
                if self.learn:
                    learnt, back = self._analyze(confl)
                    self._cancel_until(back)
                    if len(learnt) == 1:
                        self._enqueue(learnt[0], None)
                    else:
                        ci = self._attach(learnt)
                        self._enqueue(learnt[0], ci)
                    if self.restarts:
                        restart_left -= 1
                        if restart_left <= 0:
                            restart_idx += 1
                            restart_left = 100 * _luby(restart_idx)
                            self._cancel_until(0)
                else:
                    # chronological: flip the deepest unflipped decision
                    while self.flipped and self.flipped[-1]:
                        self._cancel_until(len(self.trail_lim) - 1)
                    if not self.trail_lim:
                        self.ok = False
                        return None
                    lvl = len(self.trail_lim) - 1
                    decision = self.trail[self.trail_lim[lvl]]
                    self._cancel_until(lvl)
                    self.trail_lim.append(len(self.trail))
                    self.flipped.append(True)
                    self._enqueue(decision ^ 1, None)
                continue
            var = self._pick()
            if var is None:
                return [False] + [self.vals[2 * v] == 1 for v in range(1, self.nv + 1)]
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self.flipped.append(False)
            self._enqueue(2 * var + 1, None)  # false first

    def stats(self) -> dict:
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
        }


def solve_clauses(num_vars: int, clauses: Iterable[Sequence[int]], **options) -> Optional[list[bool]]:
    return Solver(num_vars, clauses, **options).solve()
