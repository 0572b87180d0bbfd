"""CNF encodings of rule-search scenarios and decoding of models.

ASWF: one variable per (profile, unordered pair a<b), true when society ranks
a above b; only transitivity needs clauses.  SCF: one-hot ``out(p, x)``.
SDF: one-hot ``rel(p, r)`` over the choice-generating relations.

Axioms whose positive form is a plain conjunction of clauses over decision
variables are negated generically: each clause gets a defined selector
``f <-> not clause`` and one clause asks for some selector.  Selectors are
functionally determined, so model counts are preserved.
"""
from __future__ import annotations

import itertools
from typing import Callable, Sequence

from ..axioms import Context, context, decisive_at, decisive_pairs, dominated, improves
from ..prefcore import LinearOrder
from ..rules import Rule, _choice_relations
from .cnf import CnfFormula


class EncodingError(ValueError):
    pass


class _Encoder:
    def __init__(self, spec):
        self.spec = spec
        self.ctx: Context = context(spec.domain, spec.n)
        self.f = CnfFormula()
        self.f.meta.update(
            family=spec.family,
            m=str(spec.domain.m),
            n=str(spec.n),
            domain=",".join(spec.domain.words),
            axioms=",".join(str(a) for a in spec.axioms),
            decisive=spec.decisive,
        )

    def negate(self, name: str, clauses: list[tuple[int, ...]]) -> None:
        f = self.f
        if not clauses:
            f.add(())  # the positive axiom holds vacuously
            return
        selectors = []
        for k, clause in enumerate(clauses):
            selectors.append(f.define_and([-lit for lit in clause], "not", name, k))
        f.add(selectors)

    def run(self) -> CnfFormula:
        for lit in self.spec.axioms:
            special = getattr(self, f"lit_{lit.name}", None)
            if special is not None:
                special(lit.positive)
                continue
            clauses = getattr(self, f"pos_{lit.name}")()
            if lit.positive:
                self.f.extend(clauses)
            else:
                self.negate(lit.name, clauses)
        return self.f


class AswfEncoder(_Encoder):
    def __init__(self, spec):
        super().__init__(spec)
        ctx, f = self.ctx, self.f
        npairs = len(ctx.pairs)
        self.pair_index = {ab: k for k, ab in enumerate(ctx.pairs)}
        for p in range(ctx.size):
            for a, b in ctx.pairs:
                f.new_var("pair", p, a, b)
        self.npairs = npairs
        m = ctx.m
        for p in range(ctx.size):
            for a, b, c in itertools.permutations(range(m), 3):
                f.add((-self.lit(p, a, b), -self.lit(p, b, c), self.lit(p, a, c)))

    def lit(self, p: int, a: int, b: int) -> int:
        """Literal for 'a socially above b' at profile p."""
        if a < b:
            return 1 + p * self.npairs + self.pair_index[(a, b)]
        return -(1 + p * self.npairs + self.pair_index[(b, a)])

    def pos_wp(self):
        return [(self.lit(p, a, b),) for p in range(self.ctx.size) for a, b in self.ctx.unanimous[p]]

    def pos_iia(self):
        ctx = self.ctx
        out = []
        for k, (a, b) in enumerate(ctx.pairs):
            first: dict[int, int] = {}
            for p in range(ctx.size):
                q = first.setdefault(ctx.key[p][k], p)
                if q != p:
                    x, y = self.lit(q, a, b), self.lit(p, a, b)
                    out += [(-x, y), (x, -y)]
        return out

    def pos_ni(self):
        ctx = self.ctx
        return [tuple(self.lit(p, a, b) for p in range(ctx.size)) for a, b in ctx.ordered_pairs]

    def pos_const(self):
        ctx = self.ctx
        out = []
        for p in range(1, ctx.size):
            for a, b in ctx.pairs:
                x, y = self.lit(0, a, b), self.lit(p, a, b)
                out += [(-x, y), (x, -y)]
        return out

    def _match(self, name: str, positive: bool, follows: Callable[[LinearOrder, int, int], bool]):
        """(Anti-)dictatorship: some voter whose pairwise rankings society copies."""
        ctx, f = self.ctx, self.f
        per_voter = []
        for i in range(ctx.n):
            lits = []
            for p in range(ctx.size):
                o = ctx.voters[p][i]
                for a, b in ctx.pairs:
                    lits.append(self.lit(p, a, b) if follows(o, a, b) else self.lit(p, b, a))
            per_voter.append(lits)
        if positive:
            f.add(f.define_and(lits, name, i) for i, lits in enumerate(per_voter))
        else:
            for lits in per_voter:
                f.add(-lit for lit in lits)

    def lit_dict(self, positive: bool):
        self._match("dict", positive, lambda o, a, b: o.prefers(a, b))

    def lit_antidict(self, positive: bool):
        self._match("antidict", positive, lambda o, a, b: o.prefers(b, a))


class ScfEncoder(_Encoder):
    def __init__(self, spec):
        super().__init__(spec)
        ctx, f = self.ctx, self.f
        for p in range(ctx.size):
            for x in range(ctx.m):
                f.new_var("out", p, x)
        for p in range(ctx.size):
            f.add(self.y(p, x) for x in range(ctx.m))
            for x, z in itertools.combinations(range(ctx.m), 2):
                f.add((-self.y(p, x), -self.y(p, z)))

    def y(self, p: int, x: int) -> int:
        return 1 + p * self.ctx.m + x

    def pos_sp(self):
        ctx = self.ctx
        out = []
        for p in range(ctx.size):
            for i in range(ctx.n):
                truth = ctx.voters[p][i]
                for q in ctx.neighbours[p][i]:
                    for x in range(ctx.m):
                        for z in range(ctx.m):
                            if truth.prefers(z, x):
                                out.append((-self.y(p, x), -self.y(q, z)))
        return out

    def pos_m(self):
        ctx = self.ctx
        out = []
        for p in range(ctx.size):
            for q in range(ctx.size):
                if q == p:
                    continue
                for x in range(ctx.m):
                    if improves(ctx, p, q, x):
                        out.append((-self.y(p, x), self.y(q, x)))
        return out

    def pos_eff(self):
        ctx = self.ctx
        return [
            (-self.y(p, x),)
            for p in range(ctx.size)
            for x in range(ctx.m)
            if dominated(ctx, p, x) is not None
        ]

    def pos_anon(self):
        ctx = self.ctx
        out = []
        for sigma in itertools.permutations(range(ctx.n)):
            for p in range(ctx.size):
                q = ctx.permuted(p, sigma)
                if q != p:
                    out += [(-self.y(p, x), self.y(q, x)) for x in range(ctx.m)]
        return out

    def pos_onto(self):
        ctx = self.ctx
        return [tuple(self.y(p, x) for p in range(ctx.size)) for x in range(ctx.m)]

    def pos_u(self):
        ctx = self.ctx
        return [
            (self.y(p, ctx.tops[p][0]),)
            for p in range(ctx.size)
            if len(set(ctx.tops[p])) == 1
        ]

    def lit_dict_scf(self, positive: bool):
        ctx, f = self.ctx, self.f
        per_voter = [[self.y(p, ctx.tops[p][i]) for p in range(ctx.size)] for i in range(ctx.n)]
        if positive:
            f.add(f.define_and(lits, "dict_scf", i) for i, lits in enumerate(per_voter))
        else:
            for lits in per_voter:
                f.add(-lit for lit in lits)


class SdfEncoder(_Encoder):
    def __init__(self, spec):
        super().__init__(spec)
        ctx, f = self.ctx, self.f
        self.relations = _choice_relations(ctx.m)
        self.k = len(self.relations)
        for p in range(ctx.size):
            for r in range(self.k):
                f.new_var("rel", p, r)
        for p in range(ctx.size):
            f.add(self.z(p, r) for r in range(self.k))
            for r, s in itertools.combinations(range(self.k), 2):
                f.add((-self.z(p, r), -self.z(p, s)))

    def z(self, p: int, r: int) -> int:
        return 1 + p * self.k + r

    def pos_u(self):
        ctx = self.ctx
        out = []
        for p in range(ctx.size):
            for r, rel in enumerate(self.relations):
                if any(not rel.strictly(a, b) for a, b in ctx.unanimous[p]):
                    out.append((-self.z(p, r),))
        return out

    def lit_liberal(self, positive: bool):
        ctx, f = self.ctx, self.f
        mode = self.spec.decisive
        voters = []
        for i in range(ctx.n):
            decisive = []
            for a1, a2 in decisive_pairs(ctx.m, mode):
                bad = [
                    self.z(p, r)
                    for p in range(ctx.size)
                    for r, rel in enumerate(self.relations)
                    if not decisive_at(ctx.voters[p][i], rel, a1, a2, mode)
                ]
                decisive.append(f.define_and([-b for b in bad], "decisive", i, a1, a2))
            voters.append(f.define_or(decisive, "liberal", i))
        if positive:
            for i in range(ctx.n):
                f.add(voters[j] for j in range(ctx.n) if j != i)
        else:
            for i, j in itertools.combinations(range(ctx.n), 2):
                f.add((-voters[i], -voters[j]))


ENCODERS = {"aswf": AswfEncoder, "scf": ScfEncoder, "sdf": SdfEncoder}


def encode(spec) -> CnfFormula:
    """CNF for a :class:`~choicesat.search.SearchSpec`; models biject with its rules."""
    try:
        cls = ENCODERS[spec.family]
    except KeyError:
        raise EncodingError(f"no encoding for family {spec.family!r}") from None
    enc = cls(spec)
    for lit in spec.axioms:
        if not (hasattr(enc, f"lit_{lit.name}") or hasattr(enc, f"pos_{lit.name}")):
            raise EncodingError(f"axiom {lit} has no {spec.family} encoding")
    return enc.run()


def encode_aswf(spec) -> CnfFormula:
    if spec.family != "aswf":
        raise EncodingError("encode_aswf needs an aswf scenario")
    return encode(spec)


def encode_scf(spec) -> CnfFormula:
    if spec.family != "scf":
        raise EncodingError("encode_scf needs an scf scenario")
    return encode(spec)


def encode_sdf(spec) -> CnfFormula:
    if spec.family != "sdf":
        raise EncodingError("encode_sdf needs an sdf scenario")
    return encode(spec)


class DecodeError(ValueError):
    pass


def _domain_from_meta(f: CnfFormula):
    from ..prefcore import Domain

    try:
        return f.meta["family"], Domain.from_words(f.meta["domain"].split(",")), int(f.meta["n"])
    except KeyError as exc:
        raise DecodeError(f"formula metadata lacks {exc.args[0]!r}") from None


def decode_model(f: CnfFormula, model: Sequence[bool]) -> Rule:
    """Rebuild the rule table named by ``model`` through the formula legend."""
    family, domain, n = _domain_from_meta(f)
    if len(model) != f.num_vars + 1:
        raise DecodeError(f"model has {len(model) - 1} variables, formula has {f.num_vars}")
    size = len(domain) ** n
    m = domain.m
    if family == "aswf":
        above = [[[False] * m for _ in range(m)] for _ in range(size)]
        seen = [0] * size
        for v, tag in f.legend.items():
            if tag[0] == "pair":
                _, p, a, b = tag
                value = bool(model[v])
                above[p][a][b] = value
                above[p][b][a] = not value
                seen[p] += 1
        outcomes = []
        for p in range(size):
            if seen[p] != m * (m - 1) // 2:
                raise DecodeError(f"legend misses pair variables of profile {p}")
            wins = [sum(above[p][a]) for a in range(m)]
            word = sorted(range(m), key=lambda a: -wins[a])
            if sorted(wins) != list(range(m)):
                raise DecodeError(f"profile {p}: social relation is not transitive")
            outcomes.append(LinearOrder(tuple(word)).index)
    elif family in ("scf", "sdf"):
        tagname = "out" if family == "scf" else "rel"
        chosen: list[list[int]] = [[] for _ in range(size)]
        for v, tag in f.legend.items():
            if tag[0] == tagname and model[v]:
                chosen[tag[1]].append(tag[2])
        outcomes = []
        for p, values in enumerate(chosen):
            if len(values) != 1:
                raise DecodeError(f"profile {p}: {len(values)} outcomes selected, expected 1")
            outcomes.append(values[0])
    else:
        raise DecodeError(f"unknown family {family!r}")
    try:
        return Rule(family, domain, n, tuple(outcomes))
    except ValueError as exc:
        raise DecodeError(str(exc)) from None
