"""Model enumeration and exact model counting.

:func:`iter_models` adds a blocking clause over the decision variables after
every model.  :func:`count_components` is an exact #DPLL counter (unit
propagation, connected-component splitting and a component cache) for spaces
too large to enumerate.  Both count decision-variable assignments: auxiliary
variables are always functionally defined by the encoders, so counting every
variable gives the same number.
"""
from __future__ import annotations

import sys
from typing import Iterator, Optional

from .cnf import CnfFormula
from .solver import Solver


def iter_models(f: CnfFormula, limit: Optional[int] = None, **options) -> Iterator[list[bool]]:
    solver = Solver(f.num_vars, f.clauses, **options)
    decision = f.decision_vars()
    found = 0
    while limit is None or found < limit:
        model = solver.solve()
        if model is None:
            return
        found += 1
        yield model
        solver.add_clause([-v if model[v] else v for v in decision])
        if not decision:
            return


def count_blocking(f: CnfFormula, limit: Optional[int] = None, **options) -> int:
    return sum(1 for _ in iter_models(f, limit, **options))


def _simplify(clauses, lit):
    """Condition on ``lit`` being true; None on an empty clause."""
    out = []
    neg = -lit
    for c in clauses:
        if lit in c:
            continue
        if neg in c:
            c = tuple(x for x in c if x != neg)
            if not c:
                return None
        out.append(c)
    return out


def _propagate(clauses):
    assigned = set()
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            return clauses, assigned
        assigned.add(abs(unit))
        clauses = _simplify(clauses, unit)
        if clauses is None:
            return None, assigned


def _components(clauses):
    parent: dict[int, int] = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for c in clauses:
        root = None
        for lit in c:
            v = abs(lit)
            if v not in parent:
                parent[v] = v
            r = find(v)
            if root is None:
                root = r
            elif r != root:
                parent[r] = root
    groups: dict[int, list] = {}
    for c in clauses:
        groups.setdefault(find(abs(c[0])), []).append(c)
    return list(groups.values())


class _Counter:
    def __init__(self):
        self.cache: dict[frozenset, int] = {}
        self.nodes = 0

    def count(self, clauses, nvars: int) -> int:
        """Models of ``clauses`` over exactly ``nvars`` variables (a superset of those occurring)."""
        self.nodes += 1
        clauses, assigned = _propagate(clauses)
        if clauses is None:
            return 0
        occurring = {abs(lit) for c in clauses for lit in c}
        total = 1 << (nvars - len(assigned) - len(occurring))
        for comp in _components(clauses):
            total *= self.component(comp)
            if total == 0:
                return 0
        return total

    def component(self, clauses) -> int:
        key = frozenset(clauses)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        freq: dict[int, int] = {}
        for c in clauses:
            for lit in c:
                v = abs(lit)
                freq[v] = freq.get(v, 0) + 1
        nvars = len(freq)
        var = max(freq, key=lambda v: (freq[v], -v))
        result = 0
        for lit in (-var, var):
            sub = _simplify(clauses, lit)
            if sub is not None:
                result += self.count(sub, nvars - 1)
        self.cache[key] = result
        return result


def count_components(f: CnfFormula) -> int:
    """Exact number of models over all variables of ``f``."""
    clauses = []
    for c in f.clauses:
        c = tuple(sorted(set(c)))
        if any(-lit in c for lit in c):
            continue
        if not c:
            return 0
        clauses.append(c)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * f.num_vars + 1000))
    try:
        return _Counter().count(clauses, f.num_vars)
    finally:
        sys.setrecursionlimit(limit)
