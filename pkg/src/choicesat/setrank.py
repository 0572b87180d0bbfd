"""Weak orders over the non-empty subsets of a ranked ground set.

The ground set is positions ``0..size-1`` with ``x_0`` best.  Subsets are
bitmasks; the dense index of a subset is ``mask - 1``.  A
:class:`SetWeakOrder` stores, for every subset ``A``, the bitmask (over dense
indices) of all ``B`` with ``A >= B``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import audit
from .sat.cnf import CnfFormula
from .sat.solver import Solver

MAX_SIZE = 7


@dataclass(frozen=True)
class GroundSet:
    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_SIZE:
            raise ValueError(f"ground set size must be in 1..{MAX_SIZE}, got {self.size}")

    @property
    def count(self) -> int:
        return (1 << self.size) - 1

    def subsets(self) -> list[int]:
        return list(range(1, self.count + 1))


def enumerate_subsets(x: GroundSet) -> list[int]:
    """All non-empty subsets in increasing bitmask order."""
    return x.subsets()


def subset_index(mask: int) -> int:
    if mask < 1:
        raise ValueError("subsets are non-empty")
    return mask - 1


def subset_from_index(i: int) -> int:
    if i < 0:
        raise ValueError("negative subset index")
    return i + 1


def members(mask: int) -> list[int]:
    return [e for e in range(mask.bit_length()) if mask >> e & 1]


def subset_str(mask: int) -> str:
    return "{" + ",".join(f"x{e}" for e in members(mask)) + "}"


# constraint instances (shared by the encoder and the witness checker)


def gf_instances(x: GroundSet) -> Iterator[tuple[int, int, bool]]:
    """(A, x, above): x is outside A and better (above) or worse than every member."""
    for a in x.subsets():
        els = members(a)
        for e in range(x.size):
            if a >> e & 1:
                continue
            if e < els[0]:
                yield a, e, True
            elif e > els[-1]:
                yield a, e, False


def ind_instances(x: GroundSet) -> Iterator[tuple[int, int, int]]:
    """(A, B, x) with A != B and x outside both."""
    for a in x.subsets():
        for b in x.subsets():
            if a == b:
                continue
            outside = ~(a | b)
            for e in range(x.size):
                if outside >> e & 1:
                    yield a, b, e


class SetEncoding:
    """Variables r(A,B) meaning A >= B, numbered ``(A-1)*count + B``."""

    def __init__(self, x: GroundSet):
        self.x = x
        self.f = CnfFormula(meta={"family": "setrank", "size": str(x.size)})
        for a in x.subsets():
            for b in x.subsets():
                self.f.new_var("rank", a, b)

    def r(self, a: int, b: int) -> int:
        return (a - 1) * self.x.count + b


def order_clauses(enc: SetEncoding) -> list[tuple[int, ...]]:
    r, subs = enc.r, enc.x.subsets()
    out = [(r(a, a),) for a in subs]
    out += [(r(a, b), r(b, a)) for a in subs for b in subs if a < b]
    for a in subs:
        for b in subs:
            if b == a:
                continue
            nab = -r(a, b)
            for c in subs:
                if c != a and c != b:
                    out.append((nab, -r(b, c), r(a, c)))
    return out


def gf_clauses(enc: SetEncoding) -> list[tuple[int, ...]]:
    """A+x strictly above A when x beats all of A, strictly below when x loses to all."""
    r = enc.r
    out = []
    for a, e, above in gf_instances(enc.x):
        ax = a | 1 << e
        hi, lo = (ax, a) if above else (a, ax)
        out += [(r(hi, lo),), (-r(lo, hi),)]
    return out


def ind_clauses(enc: SetEncoding) -> list[tuple[int, ...]]:
    """A > B implies A+x >= B+x, i.e. not r(A,B) or r(B,A) or r(A+x, B+x)."""
    r = enc.r
    return [(-r(a, b), r(b, a), r(a | 1 << e, b | 1 << e)) for a, b, e in ind_instances(enc.x)]


def encode_setrank(x: GroundSet, gf: bool = True, ind: bool = True) -> CnfFormula:
    enc = SetEncoding(x)
    clauses = order_clauses(enc)
    if gf:
        clauses += gf_clauses(enc)
    if ind:
        clauses += ind_clauses(enc)
    # literals come from r() and are in range by construction
    enc.f.clauses.extend(clauses)
    enc.f.meta["axioms"] = ",".join(n for n, on in (("gf", gf), ("ind", ind)) if on)
    return enc.f


@dataclass(frozen=True)
class SetWeakOrder:
    size: int
    geq: tuple[int, ...]  # geq[A-1]: bitmask over dense indices of B with A >= B

    def holds(self, a: int, b: int) -> bool:
        return bool(self.geq[a - 1] >> (b - 1) & 1)

    def strictly(self, a: int, b: int) -> bool:
        return self.holds(a, b) and not self.holds(b, a)

    @classmethod
    def from_ranking(cls, size: int, ranking: list[list[int]]) -> SetWeakOrder:
        x = GroundSet(size)
        level = {}
        for k, block in enumerate(ranking):
            for a in block:
                if a in level or not 1 <= a <= x.count:
                    raise ValueError(f"bad or repeated subset {a} in ranking")
                level[a] = k
        if len(level) != x.count:
            raise ValueError(f"ranking covers {len(level)} of {x.count} subsets")
        geq = tuple(
            sum(1 << (b - 1) for b in x.subsets() if level[a] <= level[b]) for a in x.subsets()
        )
        return cls(size, geq)

    def ranking(self) -> list[list[int]]:
        """Equivalence classes best first; only meaningful for a weak order."""
        x = GroundSet(self.size)
        score = {a: bin(self.geq[a - 1]).count("1") for a in x.subsets()}
        classes: dict[int, list[int]] = {}
        for a in x.subsets():
            classes.setdefault(score[a], []).append(a)
        return [classes[s] for s in sorted(classes, reverse=True)]

    def to_json(self) -> dict:
        return {"size": self.size, "ranking": self.ranking()}

    @classmethod
    def from_json(cls, data: dict | str) -> SetWeakOrder:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_ranking(int(data["size"]), [list(map(int, c)) for c in data["ranking"]])


def verify_set_witness(w: SetWeakOrder, gf: bool = True, ind: bool = True) -> list[tuple]:
    """Every violated requirement, as tuples such as ``("transitive", A, B, C)``; empty means pass."""
    x = GroundSet(w.size)
    subs = x.subsets()
    bad: list[tuple] = []
    for a in subs:
        if not w.holds(a, a):
            bad.append(("reflexive", a))
        for b in subs:
            if a < b and not (w.holds(a, b) or w.holds(b, a)):
                bad.append(("complete", a, b))
    for a in subs:
        for b in subs:
            if b != a and w.holds(a, b):
                missing = w.geq[b - 1] & ~w.geq[a - 1]
                for i in range(x.count):
                    if missing >> i & 1:
                        bad.append(("transitive", a, b, i + 1))
    if gf:
        for a, e, above in gf_instances(x):
            ax = a | 1 << e
            ok = w.strictly(ax, a) if above else w.strictly(a, ax)
            if not ok:
                bad.append(("gf", a, e))
    if ind:
        for a, b, e in ind_instances(x):
            if w.strictly(a, b) and not w.holds(a | 1 << e, b | 1 << e):
                bad.append(("ind", a, b, e))
    return bad


def decode_set_model(f: CnfFormula, model) -> SetWeakOrder:
    size = int(f.meta["size"])
    x = GroundSet(size)
    geq = [0] * x.count
    for v, tag in f.legend.items():
        if tag[0] == "rank" and model[v]:
            geq[tag[1] - 1] |= 1 << (tag[2] - 1)
    return SetWeakOrder(size, tuple(geq))


@dataclass
class KPResult:
    size: int
    status: str  # "sat" | "unsat"
    witness: Optional[SetWeakOrder] = None
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)


def kp_check(size: int, gf: bool = True, ind: bool = True, **options) -> KPResult:
    """Is there a weak order on the subsets satisfying the selected axioms?

    Options go to the SAT solver; a budget overrun raises
    :class:`~choicesat.sat.SolverBudgetExceeded` rather than reporting Unsat.
    """
    x = GroundSet(size)
    f = encode_setrank(x, gf, ind)
    solver = Solver(f.num_vars, f.clauses, **options)
    model = solver.solve()
    stats = dict(solver.stats(), variables=f.num_vars, clauses=len(f.clauses))
    if model is None:
        return KPResult(size, "unsat", stats=stats)
    w = decode_set_model(f, model)
    violations = verify_set_witness(w, gf, ind)
    if violations:
        raise AssertionError(f"solver model fails the witness check: {violations[:3]}")
    audit.emit("setrank", w, gf=gf, ind=ind)
    return KPResult(size, "sat", w, violations, stats)


def _ordered_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    n = len(items)
    for mask in range(1, 1 << n):
        block = [items[i] for i in range(n) if mask >> i & 1]
        rest = [items[i] for i in range(n) if not mask >> i & 1]
        for tail in _ordered_partitions(rest):
            yield [block] + tail


def weak_orders(x: GroundSet) -> Iterator[SetWeakOrder]:
    """Every weak order on the subsets of a small ground set."""
    if x.size > 3:
        raise ValueError("exhaustive weak-order enumeration is limited to size 3")
    for ranking in _ordered_partitions(x.subsets()):
        yield SetWeakOrder.from_ranking(x.size, ranking)


def brute_force_kp(size: int, gf: bool = True, ind: bool = True) -> int:
    """Number of weak orders meeting the selected axioms (size <= 3)."""
    return sum(1 for w in weak_orders(GroundSet(size)) if not verify_set_witness(w, gf, ind))
