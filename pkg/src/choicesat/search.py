"""Depth-first backtracking search over partial rule tables.

Cells (profiles) are assigned in increasing profile index and values in
increasing outcome index.  Each axiom contributes a propagator that keeps
the candidate values of the unassigned cells consistent with everything
assigned so far (forward checking); a branch is abandoned as soon as any
cell runs out of values or an existential axiom can no longer be met.

``count`` mode caches subtree counts keyed by the remaining cell domains
plus each propagator's summary of the assigned prefix, which is exact
because every constraint linking an assigned cell to an unassigned one has
already been folded into that cell's domain.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import audit
from . import axioms as ax
from .axioms import AxiomLiteral, Context, context
from .prefcore import Domain, order_by_index
from .rules import Rule, _choice_relations, outcome_count

MODES = ("decide", "count", "enumerate")


class SearchError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Node or wall-clock budget ran out before the search finished."""

    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats


@dataclass(frozen=True)
class SearchSpec:
    family: str
    domain: Domain
    n: int
    axioms: tuple[AxiomLiteral, ...]
    mode: str = "decide"
    limit: Optional[int] = None
    prune: bool = True
    node_budget: Optional[int] = None
    time_budget_ms: Optional[int] = None
    workers: int = 1
    decisive: str = "pair"

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        if not self.axioms:
            raise SearchError("a search needs at least one axiom")
        if self.mode not in MODES:
            raise SearchError(f"mode must be one of {MODES}")
        if self.mode == "enumerate" and (self.limit is None or self.limit < 1):
            raise SearchError("enumerate mode needs a positive limit")
        if self.n < 1:
            raise SearchError("need at least one voter")
        for lit in self.axioms:
            lit.axiom(self.family)

    @classmethod
    def build(cls, family: str, domain: Domain, n: int, axioms, **kw) -> SearchSpec:
        if isinstance(axioms, str) or (axioms and isinstance(next(iter(axioms)), str)):
            axioms = ax.parse_axioms(axioms)
        return cls(family, domain, n, tuple(axioms), **kw)

    @property
    def cells(self) -> int:
        return len(self.domain) ** self.n

    @property
    def values(self) -> int:
        return outcome_count(self.family, self.domain.m)


@dataclass
class SearchResult:
    status: str  # "sat" | "unsat"
    witnesses: list[Rule] = field(default_factory=list)
    count: Optional[int] = None
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == "sat"

    @property
    def witness(self) -> Optional[Rule]:
        return self.witnesses[0] if self.witnesses else None


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# propagators


class Propagator:
    """Incremental view of one axiom during search.

    ``assign`` runs after a cell is fixed and may shrink unassigned domains
    through ``engine.restrict``; it returns False on a wipe-out.  ``feasible``
    is a necessary condition for the axiom to still hold in some completion;
    ``final`` decides the axiom on a total assignment.  ``key`` summarises
    whatever the propagator remembers about the assigned prefix (None when
    the state cannot be summarised, which disables count caching).
    """

    name = "?"

    def init(self, engine: Engine) -> bool:
        return True

    def assign(self, engine: Engine, cell: int, value: int) -> bool:
        return True

    def unassign(self, engine: Engine, cell: int, value: int) -> None:
        pass

    def feasible(self, engine: Engine) -> bool:
        return True

    def final(self, engine: Engine) -> bool:
        return True

    def key(self):
        return ()


class Unary(Propagator):
    """Axiom that restricts each cell independently: ``allowed[c]`` masks."""

    def __init__(self, name: str, allowed: Sequence[int]):
        self.name = name
        self.allowed = allowed

    def init(self, engine):
        return all(engine.restrict(c, engine.domains[c] & m, self) for c, m in enumerate(self.allowed))


class UnaryViolation(Propagator):
    """Negation of a unary axiom: some cell must take a value in ``bad[c]``."""

    def __init__(self, name: str, bad: Sequence[int]):
        self.name = name
        self.bad = bad
        self.found = 0

    def assign(self, engine, cell, value):
        if self.bad[cell] >> value & 1:
            self.found += 1
        return True

    def unassign(self, engine, cell, value):
        if self.bad[cell] >> value & 1:
            self.found -= 1

    def feasible(self, engine):
        if self.found:
            return True
        return any(engine.domains[c] & self.bad[c] for c in engine.unassigned())

    def final(self, engine):
        return self.found > 0

    def key(self):
        return bool(self.found)


class PairPropagator(Propagator):
    """IIA as forward propagation over per-pair decision tables.

    For every unordered pair, profiles are grouped by the voters' joint
    restriction to that pair.  The first assignment inside a group records
    the social direction in ``table`` and forces it on every other member.
    """

    name = "iia"

    def __init__(self, ctx: Context, order_masks):
        self.groups: dict[tuple[int, int], list[int]] = {}
        for p in range(ctx.size):
            for k in range(len(ctx.pairs)):
                self.groups.setdefault((k, ctx.key[p][k]), []).append(p)
        self.ctx = ctx
        self.order_masks = order_masks  # [k][direction] -> mask over order indices
        self.table: dict[tuple[int, int], bool] = {}
        self._added: list[list[tuple[int, int]]] = []

    def assign(self, engine, cell, value):
        ctx = self.ctx
        social = order_by_index(ctx.m, value)
        added = []
        self._added.append(added)
        for k, (a, b) in enumerate(ctx.pairs):
            g = (k, ctx.key[cell][k])
            if g in self.table:
                continue
            direction = social.prefers(a, b)
            self.table[g] = direction
            added.append(g)
            mask = self.order_masks[k][direction]
            for q in self.groups[g]:
                if engine.assigned[q] is None and not engine.restrict(q, engine.domains[q] & mask, self):
                    return False
        return True

    def unassign(self, engine, cell, value):
        for g in self._added.pop():
            del self.table[g]


class IIAViolation(Propagator):
    """Negated IIA: two profiles in one pair group get opposite directions."""

    name = "!iia"

    def __init__(self, ctx: Context, order_masks):
        self.ctx = ctx
        self.groups = PairPropagator(ctx, order_masks).groups
        self.order_masks = order_masks
        self.dirs: dict[tuple[int, int], list[int]] = {g: [0, 0] for g in self.groups}
        self.found = 0

    def _delta(self, cell, value, step):
        social = order_by_index(self.ctx.m, value)
        for k, (a, b) in enumerate(self.ctx.pairs):
            counts = self.dirs[(k, self.ctx.key[cell][k])]
            before = counts[0] > 0 and counts[1] > 0
            counts[social.prefers(a, b)] += step
            after = counts[0] > 0 and counts[1] > 0
            self.found += after - before

    def assign(self, engine, cell, value):
        self._delta(cell, value, 1)
        return True

    def unassign(self, engine, cell, value):
        self._delta(cell, value, -1)

    def feasible(self, engine):
        if self.found:
            return True
        for (k, _), members in self.groups.items():
            can = [[], []]
            for q in members:
                v = engine.assigned[q]
                for d in (0, 1):
                    if v is not None:
                        ok = (order_by_index(self.ctx.m, v).prefers(*self.ctx.pairs[k])) == bool(d)
                    else:
                        ok = bool(engine.domains[q] & self.order_masks[k][d])
                    if ok:
                        can[d].append(q)
            if can[0] and can[1] and not (can[0] == can[1] and len(can[0]) == 1):
                return True
        return False

    def final(self, engine):
        return self.found > 0

    def key(self):
        return (bool(self.found), tuple(
            (c[0] > 0, c[1] > 0) for c in self.dirs.values()
        ))


class Realise(Propagator):
    """Every item must be realised by some cell: ``hits[v]`` is the item mask of value v.

    With ``positive=False`` the requirement flips to: some item is never
    realised.  ``value_masks[item]`` lists the values realising an item.
    """

    def __init__(self, name: str, items: int, hits: Sequence[int], positive: bool = True):
        self.name = name
        self.items = items
        self.hits = hits
        self.positive = positive
        self.value_masks = [
            sum(1 << v for v, h in enumerate(hits) if h >> item & 1) for item in range(items)
        ]
        self.counts = [0] * items
        self.realised = 0

    def assign(self, engine, cell, value):
        for item in _bits(self.hits[value]):
            if self.counts[item] == 0:
                self.realised |= 1 << item
            self.counts[item] += 1
        return True

    def unassign(self, engine, cell, value):
        for item in _bits(self.hits[value]):
            self.counts[item] -= 1
            if self.counts[item] == 0:
                self.realised &= ~(1 << item)

    def feasible(self, engine):
        full = (1 << self.items) - 1
        free = list(engine.unassigned())
        if self.positive:
            missing = full & ~self.realised
            if not missing:
                return True
            reach = 0
            for c in free:
                d = engine.domains[c]
                for v in _bits(d):
                    reach |= self.hits[v]
            if missing & ~reach:
                return False
            return bin(missing).count("1") <= len(free) * max(
                (bin(h).count("1") for h in self.hits), default=0
            )
        # some item must survive: it is unrealised so far and every free cell can avoid it
        for item in _bits(full & ~self.realised):
            avoid = ~self.value_masks[item]
            if all(engine.domains[c] & avoid for c in free):
                return True
        return False

    def final(self, engine):
        full = (1 << self.items) - 1
        return (self.realised == full) == self.positive

    def key(self):
        return self.realised


class VoterMatch(Propagator):
    """(Anti-)dictatorship style axioms: voter i matches when value == target[c][i].

    Positive form: some voter matches every cell.  Negative form: every voter
    is contradicted at some cell.
    """

    def __init__(self, name: str, target: Sequence[Sequence[int]], n: int, positive: bool):
        self.name = name
        self.target = target
        self.n = n
        self.positive = positive
        self.full = (1 << n) - 1
        self.state = [0]  # positive: candidate voters; negative: refuted voters

    def init(self, engine):
        self.state = [self.full if self.positive else 0]
        return True

    def assign(self, engine, cell, value):
        cur = self.state[-1]
        tgt = self.target[cell]
        if self.positive:
            nxt = cur & sum(1 << i for i in range(self.n) if tgt[i] == value)
        else:
            nxt = cur | sum(1 << i for i in range(self.n) if tgt[i] != value)
        self.state.append(nxt)
        if self.positive:
            if not nxt:
                return False
            if nxt & (nxt - 1) == 0:
                i = nxt.bit_length() - 1
                for c in engine.unassigned():
                    if not engine.restrict(c, engine.domains[c] & (1 << self.target[c][i]), self):
                        return False
        return True

    def unassign(self, engine, cell, value):
        self.state.pop()

    def feasible(self, engine):
        cur = self.state[-1]
        free = list(engine.unassigned())
        if self.positive:
            return any(
                all(engine.domains[c] >> self.target[c][i] & 1 for c in free)
                for i in _bits(cur)
            )
        for i in range(self.n):
            if cur >> i & 1:
                continue
            if not any(engine.domains[c] & ~(1 << self.target[c][i]) for c in free):
                return False
        return True

    def final(self, engine):
        cur = self.state[-1]
        return bool(cur) if self.positive else cur == self.full

    def key(self):
        return self.state[-1]


class AllEqual(Propagator):
    name = "const"

    def assign(self, engine, cell, value):
        for c in engine.unassigned():
            if not engine.restrict(c, engine.domains[c] & (1 << value), self):
                return False
        return True


class NotAllEqual(Propagator):
    name = "!const"

    def __init__(self):
        self.values: list[int] = []

    def assign(self, engine, cell, value):
        self.values.append(value)
        return True

    def unassign(self, engine, cell, value):
        self.values.pop()

    def _distinct(self):
        return bool(self.values) and any(v != self.values[0] for v in self.values)

    def feasible(self, engine):
        if self._distinct():
            return True
        free = list(engine.unassigned())
        if self.values:
            first = self.values[0]
            return any(engine.domains[c] & ~(1 << first) for c in free)
        union = 0
        for c in free:
            union |= engine.domains[c]
        return len(free) >= 2 and union & (union - 1) != 0

    def final(self, engine):
        return self._distinct()

    def key(self):
        if self._distinct():
            return "split"
        return self.values[0] if self.values else None


class Pairwise(Propagator):
    """Binary constraints: ``allowed(cell, value)`` yields (other cell, mask) pairs."""

    def __init__(self, name: str, allowed):
        self.name = name
        self.allowed = allowed

    def assign(self, engine, cell, value):
        for q, mask in self.allowed(cell, value):
            if engine.assigned[q] is None:
                if not engine.restrict(q, engine.domains[q] & mask, self):
                    return False
            elif not mask >> engine.assigned[q] & 1:
                return False
        return True


class Liberal(Propagator):
    """At least two voters keep a live pair over which they are decisive."""

    name = "liberal"

    def __init__(self, ctx: Context, decisive: str):
        self.ctx = ctx
        relations = _choice_relations(ctx.m)
        candidates = ax.decisive_pairs(ctx.m, decisive)
        self.npairs = len(candidates)
        # ok[c][i][r]: mask over candidate pairs on which voter i is consistent at cell c with relation r
        self.ok = [
            [
                [
                    sum(1 << k for k, (a1, a2) in enumerate(candidates)
                        if ax.decisive_at(ctx.voters[c][i], rel, a1, a2, decisive))
                    for rel in relations
                ]
                for i in range(ctx.n)
            ]
            for c in range(ctx.size)
        ]
        self.live = [tuple([(1 << self.npairs) - 1] * ctx.n)]

    def init(self, engine):
        self.live = [tuple([(1 << self.npairs) - 1] * self.ctx.n)]
        return True

    def assign(self, engine, cell, value):
        cur = self.live[-1]
        nxt = tuple(cur[i] & self.ok[cell][i][value] for i in range(self.ctx.n))
        self.live.append(nxt)
        return sum(1 for m in nxt if m) >= 2

    def unassign(self, engine, cell, value):
        self.live.pop()

    def final(self, engine):
        return sum(1 for m in self.live[-1] if m) >= 2

    def key(self):
        return self.live[-1]

    def split(self) -> list[list[Propagator]]:
        """Alternative witnesses: two voters with one fixed decisive pair each."""
        ctx = self.ctx
        out = []
        for i, j in itertools.combinations(range(ctx.n), 2):
            for ki in range(self.npairs):
                for kj in range(self.npairs):
                    out.append([
                        Unary("liberal", [self._pair_mask(c, i, ki) for c in range(ctx.size)]),
                        Unary("liberal", [self._pair_mask(c, j, kj) for c in range(ctx.size)]),
                    ])
        return out

    def _pair_mask(self, cell, voter, k):
        return sum(1 << r for r, m in enumerate(self.ok[cell][voter]) if m >> k & 1)


class Negated(Propagator):
    """Fallback negation for axioms without a dedicated propagator (no pruning)."""

    def __init__(self, literal: AxiomLiteral, spec: SearchSpec):
        self.name = str(literal)
        self.positive = AxiomLiteral(literal.name, True)
        self.spec = spec

    def final(self, engine):
        rule = Rule(self.spec.family, self.spec.domain, self.spec.n, tuple(engine.assigned))
        return ax.evaluate(self.positive, rule, self.spec.decisive).violated

    def key(self):
        return None


def _order_masks(ctx: Context):
    orders = [order_by_index(ctx.m, o) for o in range(outcome_count("aswf", ctx.m))]
    return [
        [
            sum(1 << o.index for o in orders if not o.prefers(a, b)),
            sum(1 << o.index for o in orders if o.prefers(a, b)),
        ]
        for a, b in ctx.pairs
    ]


def build_propagators(spec: SearchSpec) -> list[Propagator]:
    ctx = context(spec.domain, spec.n)
    fam = spec.family
    m = ctx.m
    k = outcome_count(fam, m)
    full = (1 << k) - 1
    props: list[Propagator] = []
    for lit in spec.axioms:
        name, pos = lit.name, lit.positive
        if fam == "aswf":
            orders = [order_by_index(m, o) for o in range(k)]
            if name == "wp":
                good = [
                    sum(1 << o.index for o in orders if all(o.prefers(a, b) for a, b in ctx.unanimous[c]))
                    for c in range(ctx.size)
                ]
                props.append(Unary("wp", good) if pos else UnaryViolation("!wp", [full & ~g for g in good]))
            elif name == "iia":
                masks = _order_masks(ctx)
                props.append(PairPropagator(ctx, masks) if pos else IIAViolation(ctx, masks))
            elif name == "ni":
                hits = [
                    sum(1 << t for t, (a, b) in enumerate(ctx.ordered_pairs) if o.prefers(a, b))
                    for o in orders
                ]
                props.append(Realise(str(lit), len(ctx.ordered_pairs), hits, pos))
            elif name in ("dict", "antidict"):
                if name == "dict":
                    target = [[o.index for o in ctx.voters[c]] for c in range(ctx.size)]
                else:
                    target = [[o.reversed().index for o in ctx.voters[c]] for c in range(ctx.size)]
                props.append(VoterMatch(str(lit), target, spec.n, pos))
            elif name == "const":
                props.append(AllEqual() if pos else NotAllEqual())
            else:
                raise SearchError(f"no aswf propagator for {lit}")
        elif fam == "scf":
            if name == "u":
                good = []
                for c in range(ctx.size):
                    tops = set(ctx.tops[c])
                    good.append(1 << tops.pop() if len(tops) == 1 else full)
                props.append(Unary("u", good) if pos else UnaryViolation("!u", [full & ~g for g in good]))
            elif name == "eff":
                good = [
                    sum(1 << x for x in range(m) if ax.dominated(ctx, c, x) is None)
                    for c in range(ctx.size)
                ]
                props.append(Unary("eff", good) if pos else UnaryViolation("!eff", [full & ~g for g in good]))
            elif name == "onto":
                props.append(Realise(str(lit), m, [1 << x for x in range(m)], pos))
            elif name == "dict_scf":
                target = [list(ctx.tops[c]) for c in range(ctx.size)]
                props.append(VoterMatch(str(lit), target, spec.n, pos))
            elif name == "sp" and pos:
                props.append(Pairwise("sp", _sp_allowed(ctx)))
            elif name == "m" and pos:
                props.append(Pairwise("m", _m_allowed(ctx)))
            elif name == "anon" and pos:
                props.append(Pairwise("anon", _anon_allowed(ctx)))
            elif not pos:
                props.append(Negated(lit, spec))
            else:
                raise SearchError(f"no scf propagator for {lit}")
        elif fam == "sdf":
            relations = _choice_relations(m)
            if name == "u":
                good = [
                    sum(1 << r for r, rel in enumerate(relations)
                        if all(rel.strictly(a, b) for a, b in ctx.unanimous[c]))
                    for c in range(ctx.size)
                ]
                props.append(Unary("u", good) if pos else UnaryViolation("!u", [full & ~g for g in good]))
            elif name == "liberal" and pos:
                props.append(Liberal(ctx, spec.decisive))
            elif not pos:
                props.append(Negated(lit, spec))
            else:
                raise SearchError(f"no sdf propagator for {lit}")
    return props


def _sp_allowed(ctx: Context):
    m = ctx.m
    # better_eq[o][x]: values y with y == x or y ranked above x by order o
    table = {}
    for o in set(o for prof in ctx.voters for o in prof):
        table[o.index] = (
            [sum(1 << y for y in range(m) if y == x or o.prefers(y, x)) for x in range(m)],
            [sum(1 << y for y in range(m) if y == x or o.prefers(x, y)) for x in range(m)],
        )
    links = []
    for c in range(ctx.size):
        row = []
        for i in range(ctx.n):
            for q in ctx.neighbours[c][i]:
                row.append((q, ctx.voters[c][i].index, ctx.voters[q][i].index))
        links.append(row)

    def allowed(cell, x):
        for q, here, there in links[cell]:
            # q's outcome y: not better than x for the truthful voter here,
            # and x not better than y for the truthful voter at q
            yield q, table[here][1][x] & table[there][0][x]

    return allowed


def _m_allowed(ctx: Context):
    m = ctx.m
    imp = [[sum(1 << x for x in range(m) if ax.improves(ctx, p, q, x)) for q in range(ctx.size)]
           for p in range(ctx.size)]
    full = (1 << m) - 1

    def allowed(cell, x):
        for q in range(ctx.size):
            if q == cell:
                continue
            mask = full & ~(imp[q][cell] & ~(1 << x))
            if imp[cell][q] >> x & 1:
                mask &= 1 << x
            yield q, mask

    return allowed


def _anon_allowed(ctx: Context):
    images = [
        sorted({ctx.permuted(c, s) for s in itertools.permutations(range(ctx.n))} - {c})
        for c in range(ctx.size)
    ]

    def allowed(cell, x):
        for q in images[cell]:
            yield q, 1 << x

    return allowed


# engine


class Engine:
    def __init__(self, spec: SearchSpec, props: Optional[list[Propagator]] = None):
        self.spec = spec
        self.size = spec.cells
        self.nvalues = spec.values
        self.props = build_propagators(spec) if props is None else props
        self.domains = [(1 << self.nvalues) - 1] * self.size
        self.assigned: list[Optional[int]] = [None] * self.size
        self.depth = 0
        self.trail: list[tuple[int, int]] = []
        self.nodes = 0
        self.prunes: dict[str, int] = {}
        self.start = time.perf_counter()
        self.deadline = (
            self.start + spec.time_budget_ms / 1000.0 if spec.time_budget_ms is not None else None
        )
        self.memo: dict = {}

    def unassigned(self):
        return range(self.depth, self.size)

    def restrict(self, cell: int, mask: int, by: Propagator) -> bool:
        old = self.domains[cell]
        if mask != old:
            self.trail.append((cell, old))
            self.domains[cell] = mask
            removed = bin(old & ~mask).count("1")
            self.prunes[by.name] = self.prunes.get(by.name, 0) + removed
        return mask != 0

    def _tick(self):
        self.nodes += 1
        budget = self.spec.node_budget
        if budget is not None and self.nodes > budget:
            raise BudgetExceeded(f"node budget {budget} exhausted", self.stats())
        if self.deadline is not None and self.nodes % 256 == 0 and time.perf_counter() > self.deadline:
            raise BudgetExceeded(f"time budget {self.spec.time_budget_ms} ms exhausted", self.stats())

    def init(self) -> bool:
        return all(p.init(self) for p in self.props) and all(p.feasible(self) for p in self.props)

    def push(self, cell: int, value: int) -> tuple[int, int, bool]:
        """Assign ``cell``; returns (trail mark, propagators applied) for :meth:`pop`."""
        self._tick()
        mark = len(self.trail)
        self.trail.append((cell, self.domains[cell]))
        self.domains[cell] = 1 << value
        self.assigned[cell] = value
        self.depth = cell + 1
        applied = 0
        ok = True
        for p in self.props:
            applied += 1
            if not p.assign(self, cell, value):
                ok = False
                self.prunes[p.name] = self.prunes.get(p.name, 0) + 1
                break
        if ok:
            for p in self.props:
                if not p.feasible(self):
                    ok = False
                    self.prunes[p.name] = self.prunes.get(p.name, 0) + 1
                    break
        return mark, applied, ok

    def pop(self, cell: int, value: int, mark: int, applied: int) -> None:
        for p in reversed(self.props[:applied]):
            p.unassign(self, cell, value)
        while len(self.trail) > mark:
            c, old = self.trail.pop()
            self.domains[c] = old
        self.assigned[cell] = None
        self.depth = cell

    def leaf_ok(self) -> bool:
        return all(p.final(self) for p in self.props)

    def rule(self) -> Rule:
        return Rule(self.spec.family, self.spec.domain, self.spec.n, tuple(self.assigned))

    # traversal

    def models(self):
        """Yield total assignments satisfying every propagator, in canonical order."""
        if self.depth == self.size:
            if self.leaf_ok():
                yield self.rule()
            return
        cell = self.depth
        for v in _bits(self.domains[cell]):
            mark, applied, ok = self.push(cell, v)
            if ok:
                yield from self.models()
            self.pop(cell, v, mark, applied)

    def count(self) -> int:
        if self.depth == self.size:
            return 1 if self.leaf_ok() else 0
        cell = self.depth
        keys = tuple(p.key() for p in self.props)
        memo_key = None
        if all(k is not None for k in keys):
            memo_key = (cell, tuple(self.domains[cell:]), keys)
            hit = self.memo.get(memo_key)
            if hit is not None:
                return hit
        total = 0
        for v in _bits(self.domains[cell]):
            mark, applied, ok = self.push(cell, v)
            if ok:
                total += self.count()
            self.pop(cell, v, mark, applied)
        if memo_key is not None:
            self.memo[memo_key] = total
        return total

    def stats(self) -> dict:
        return {
            "nodes": self.nodes,
            "prunes_by_axiom": dict(sorted(self.prunes.items())),
            "time_ms": int((time.perf_counter() - self.start) * 1000),
        }


def _generate_and_test(spec: SearchSpec, first: Optional[int] = None):
    """Pruning disabled: walk every total table and test it with the axiom checks."""
    k = spec.values
    ranges = [range(k)] * spec.cells
    if first is not None:
        ranges[0] = [first]
    nodes = 0
    for outcomes in itertools.product(*ranges):
        nodes += 1
        if spec.node_budget is not None and nodes > spec.node_budget:
            raise BudgetExceeded("node budget exhausted", {"nodes": nodes})
        rule = Rule(spec.family, spec.domain, spec.n, outcomes)
        if ax.satisfies_all(spec.axioms, rule, spec.decisive):
            yield rule


def _run(spec: SearchSpec, first: Optional[int] = None) -> SearchResult:
    """Single-worker search, optionally with cell 0 fixed to ``first``."""
    if not spec.prune:
        t0 = time.perf_counter()
        gen = _generate_and_test(spec, first)
        found, count = [], 0
        for rule in gen:
            count += 1
            if spec.mode == "decide" or (spec.mode == "enumerate" and len(found) < spec.limit):
                found.append(rule)
            if spec.mode == "decide" or (spec.mode == "enumerate" and len(found) >= spec.limit):
                break
        stats = {"nodes": None, "prunes_by_axiom": {}, "time_ms": int((time.perf_counter() - t0) * 1000)}
        if spec.mode == "count":
            return SearchResult("sat" if count else "unsat", [], count, stats)
        return SearchResult("sat" if found else "unsat", found, None, stats)

    variants: list[Optional[list[Propagator]]] = [None]
    if spec.mode == "decide":
        props = build_propagators(spec)
        split = [p for p in props if hasattr(p, "split")]
        if split:
            rest = [p for p in props if not hasattr(p, "split")]
            variants = []
            for alt in split[0].split():
                variants.append(rest + alt + split[1:])
    agg_stats = {"nodes": 0, "prunes_by_axiom": {}, "time_ms": 0}
    found: list[Rule] = []
    total = 0
    for props in variants:
        engine = Engine(spec, props)
        if first is not None:
            engine.domains[0] &= 1 << first
        try:
            if engine.init() and engine.domains[0]:
                if spec.mode == "count":
                    total += engine.count()
                else:
                    for rule in engine.models():
                        found.append(rule)
                        if spec.mode == "decide" or len(found) >= spec.limit:
                            break
        finally:
            st = engine.stats()
            agg_stats["nodes"] += st["nodes"]
            agg_stats["time_ms"] += st["time_ms"]
            for k2, v2 in st["prunes_by_axiom"].items():
                agg_stats["prunes_by_axiom"][k2] = agg_stats["prunes_by_axiom"].get(k2, 0) + v2
        if found and spec.mode == "decide":
            break
    if spec.mode == "count":
        return SearchResult("sat" if total else "unsat", [], total, agg_stats)
    return SearchResult("sat" if found else "unsat", found, None, agg_stats)


def _merge(spec: SearchSpec, parts: list[SearchResult], workers: int) -> SearchResult:
    stats = {"nodes": 0, "prunes_by_axiom": {}, "time_ms": 0, "workers": workers}
    for r in parts:
        stats["nodes"] = (stats["nodes"] or 0) + (r.stats.get("nodes") or 0)
        stats["time_ms"] = max(stats["time_ms"], r.stats.get("time_ms", 0))
        for k, v in r.stats.get("prunes_by_axiom", {}).items():
            stats["prunes_by_axiom"][k] = stats["prunes_by_axiom"].get(k, 0) + v
    if spec.mode == "count":
        total = sum(r.count for r in parts)
        return SearchResult("sat" if total else "unsat", [], total, stats)
    found = [w for r in parts for w in r.witnesses]
    if spec.mode == "decide":
        found = found[:1]
    else:
        found = found[: spec.limit]
    return SearchResult("sat" if found else "unsat", found, None, stats)


def _verify(spec: SearchSpec, result: SearchResult) -> SearchResult:
    for rule in result.witnesses:
        failed = ax.confirm(spec.axioms, rule, spec.decisive)
        if failed:
            raise AssertionError(f"search produced a witness failing {failed}")
        audit.emit("rule", rule, literals=spec.axioms, decisive=spec.decisive)
    return result


def solve(spec: SearchSpec) -> SearchResult:
    """Run the search; every witness is re-checked against the axiom definitions."""
    if spec.workers <= 1:
        result = _run(spec)
        result.stats["workers"] = 1
        return _verify(spec, result)
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        parts = list(pool.map(_run, [spec] * spec.values, range(spec.values)))
    return _verify(spec, _merge(spec, parts, spec.workers))


def count_models(spec: SearchSpec) -> int:
    return solve(replace(spec, mode="count")).count


def enumerate_models(spec: SearchSpec, limit: int) -> list[Rule]:
    if limit < 1:
        raise SearchError("limit must be positive")
    return solve(replace(spec, mode="enumerate", limit=limit)).witnesses
