"""Brute-force oracles: every total rule table, generated and tested in numpy.

Tables are produced in chunks in profile-index order (cell 0 most
significant), evaluated column-wise, and never pruned: a row is only dropped
once some requested axiom literal has been evaluated on it and failed.
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterator, Sequence

import numpy as np

from . import axioms as ax
from .axioms import AxiomLiteral, Context, context, dominated, improves
from .prefcore import Domain, enumerate_orders, pairs
from .rules import Rule, outcome_count

MAX_SPACE = 10**8
CHUNK = 1 << 18


class OracleTooLarge(ValueError):
    pass


def rule_space(family: str, domain: Domain, n: int) -> int:
    return outcome_count(family, domain.m) ** (len(domain) ** n)


def iter_tables(values: int, cells: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """All tables in lexicographic order as int arrays of shape (rows, cells)."""
    total = values**cells
    powers = values ** np.arange(cells - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield ((idx[:, None] // powers[None, :]) % values).astype(np.int16)


# vectorized axiom evaluators: table chunk (rows, cells) -> bool per row


def _above(m: int) -> np.ndarray:
    """above[o, k]: order index o ranks pairs(m)[k][0] over [1]."""
    return np.array([[o.prefers(a, b) for a, b in pairs(m)] for o in enumerate_orders(m)])


class _Aswf:
    def __init__(self, ctx: Context):
        self.ctx = ctx
        m = ctx.m
        orders = enumerate_orders(m)
        # bit k of pairbits[o]: order o ranks pairs[k][0] over pairs[k][1]
        self.pairbits = np.array(
            [sum(1 << k for k, (a, b) in enumerate(ctx.pairs) if o.prefers(a, b)) for o in orders],
            dtype=np.uint8,
        )
        # bit j of realised[o]: order o ranks ordered_pairs[j] in that direction
        self.realised = np.array(
            [sum(1 << j for j, (a, b) in enumerate(ctx.ordered_pairs) if o.prefers(a, b)) for o in orders],
            dtype=np.int64,
        )
        self.full_realised = (1 << len(ctx.ordered_pairs)) - 1
        self.wp_allowed = [
            np.array([all(o.prefers(a, b) for a, b in ctx.unanimous[p]) for o in orders])
            for p in range(ctx.size)
        ]
        # iia: (p, q, pair mask) - p must agree with the first profile q of its group
        links: dict[tuple[int, int], int] = {}
        for k in range(len(ctx.pairs)):
            seen: dict[int, int] = {}
            for p in range(ctx.size):
                q = seen.setdefault(ctx.key[p][k], p)
                if q != p:
                    links[(p, q)] = links.get((p, q), 0) | 1 << k
        self.iia_links = sorted(links.items())
        self.dict_target = [np.array([prof[i].index for prof in ctx.voters]) for i in range(ctx.n)]
        self.anti_target = [
            np.array([prof[i].reversed().index for prof in ctx.voters]) for i in range(ctx.n)
        ]

    def wp_(self, T):
        ok = np.ones(len(T), dtype=bool)
        for p, allowed in enumerate(self.wp_allowed):
            if not allowed.all():
                ok &= allowed[T[:, p]]
        return ok

    def iia(self, T):
        B = self.pairbits[T]
        ok = np.ones(len(T), dtype=bool)
        for (p, q), mask in self.iia_links:
            ok &= ((B[:, p] ^ B[:, q]) & mask) == 0
        return ok

    def ni(self, T):
        return np.bitwise_or.reduce(self.realised[T], axis=1) == self.full_realised

    @staticmethod
    def _any_row(T, targets):
        ok = np.zeros(len(T), dtype=bool)
        for target in targets:
            ok |= (T == target).all(axis=1)
        return ok

    def dict(self, T):
        return self._any_row(T, self.dict_target)

    def antidict(self, T):
        return self._any_row(T, self.anti_target)

    def const(self, T):
        return (T == T[:, :1]).all(axis=1)


class _Scf:
    def __init__(self, ctx: Context):
        self.ctx = ctx
        m = ctx.m
        # sp: (p, q, bad[x, z]) where the truth at p strictly prefers z to x
        self.sp_checks = []
        for p in range(ctx.size):
            for i in range(ctx.n):
                truth = ctx.voters[p][i]
                bad = np.array([[truth.prefers(z, x) for z in range(m)] for x in range(m)])
                for q in ctx.neighbours[p][i]:
                    self.sp_checks.append((p, q, bad))
        self.m_checks = [
            (p, q, x)
            for p in range(ctx.size)
            for q in range(ctx.size)
            if q != p
            for x in range(m)
            if improves(ctx, p, q, x)
        ]
        self.dominated = [
            [x for x in range(m) if dominated(ctx, p, x) is not None] for p in range(ctx.size)
        ]
        perms = set()
        for sigma in itertools.permutations(range(ctx.n)):
            for p in range(ctx.size):
                q = ctx.permuted(p, sigma)
                if q != p:
                    perms.add((min(p, q), max(p, q)))
        self.anon_pairs = sorted(perms)
        self.u_cells = [
            (p, ctx.tops[p][0]) for p in range(ctx.size) if len(set(ctx.tops[p])) == 1
        ]
        self.tops = [np.array([t[i] for t in ctx.tops]) for i in range(ctx.n)]

    def sp(self, T):
        ok = np.ones(len(T), dtype=bool)
        for p, q, bad in self.sp_checks:
            ok &= ~bad[T[:, p], T[:, q]]
        return ok

    def m_(self, T):
        ok = np.ones(len(T), dtype=bool)
        for p, q, x in self.m_checks:
            ok &= ~((T[:, p] == x) & (T[:, q] != x))
        return ok

    def eff(self, T):
        ok = np.ones(len(T), dtype=bool)
        for p, xs in enumerate(self.dominated):
            for x in xs:
                ok &= T[:, p] != x
        return ok

    def anon(self, T):
        ok = np.ones(len(T), dtype=bool)
        for p, q in self.anon_pairs:
            ok &= T[:, p] == T[:, q]
        return ok

    def onto(self, T):
        return np.stack([(T == x).any(axis=1) for x in range(self.ctx.m)], axis=1).all(axis=1)

    def u(self, T):
        ok = np.ones(len(T), dtype=bool)
        for p, t in self.u_cells:
            ok &= T[:, p] == t
        return ok

    def dict_scf(self, T):
        return _Aswf._any_row(T, self.tops)


_METHOD = {"wp": "wp_", "m": "m_"}
# cheap unary filters first so later checks see fewer rows
_COST = {"eff": 0, "u": 0, "wp": 0, "anon": 1, "const": 1, "iia": 2, "m": 3, "sp": 3}


def _evaluator(family: str, ctx: Context):
    if family == "aswf":
        return _Aswf(ctx)
    if family == "scf":
        return _Scf(ctx)
    return None


def _mask(ev, family, ctx, name, T, decisive):
    if ev is not None:
        return getattr(ev, _METHOD.get(name, name))(T)
    # rows evaluated one at a time through the reference checks
    lit = AxiomLiteral(name)
    return np.array(
        [ax.evaluate(lit, Rule(family, ctx.domain, ctx.n, tuple(map(int, row))), decisive).satisfied
         for row in T],
        dtype=bool,
    )


def _guard(family: str, domain: Domain, n: int, max_space: int) -> None:
    size = rule_space(family, domain, n)
    if size > max_space:
        raise OracleTooLarge(f"rule space {size} exceeds the oracle limit {max_space}")


def oracle_tables(
    family: str,
    domain: Domain,
    n: int,
    literals: Sequence[AxiomLiteral],
    decisive: str = "pair",
    max_space: int = MAX_SPACE,
) -> Iterator[np.ndarray]:
    """Chunks of the tables satisfying every literal."""
    _guard(family, domain, n, max_space)
    ctx = context(domain, n)
    ev = _evaluator(family, ctx)
    for lit in literals:
        lit.axiom(family)
    order = sorted(literals, key=lambda lit: _COST.get(lit.name, 2) if lit.positive else 4)
    for T in iter_tables(outcome_count(family, domain.m), ctx.size):
        for lit in order:
            if not len(T):
                break
            keep = _mask(ev, family, ctx, lit.name, T, decisive)
            T = T[keep if lit.positive else ~keep]
        if len(T):
            yield T


def oracle_count(spec, max_space: int = MAX_SPACE) -> int:
    """Exact count of rules meeting ``spec.axioms`` by exhaustive generate-and-test."""
    return sum(
        len(T)
        for T in oracle_tables(spec.family, spec.domain, spec.n, spec.axioms, spec.decisive, max_space)
    )


def oracle_rules(spec, max_space: int = MAX_SPACE) -> list[Rule]:
    out = []
    for T in oracle_tables(spec.family, spec.domain, spec.n, spec.axioms, spec.decisive, max_space):
        out += [Rule(spec.family, spec.domain, spec.n, tuple(map(int, row))) for row in T]
    return out


def signature_counts(
    family: str, domain: Domain, n: int, names: Sequence[str], max_space: int = MAX_SPACE
) -> Counter:
    """Histogram over all tables of which of ``names`` hold (tuple of bools)."""
    _guard(family, domain, n, max_space)
    ctx = context(domain, n)
    ev = _evaluator(family, ctx)
    weights = 1 << np.arange(len(names), dtype=np.int64)
    hist = np.zeros(1 << len(names), dtype=np.int64)
    for T in iter_tables(outcome_count(family, domain.m), ctx.size):
        code = np.zeros(len(T), dtype=np.int64)
        for w, name in zip(weights, names):
            code += w * _mask(ev, family, ctx, name, T, "pair")
        hist += np.bincount(code, minlength=len(hist))
    return Counter(
        {tuple(bool(s >> j & 1) for j in range(len(names))): int(c) for s, c in enumerate(hist) if c}
    )


def count_from_signatures(hist: Counter, names: Sequence[str], literals: Sequence[AxiomLiteral]) -> int:
    where = {name: j for j, name in enumerate(names)}
    return sum(
        c for sig, c in hist.items() if all(sig[where[lit.name]] == lit.positive for lit in literals)
    )


def iia_pairwise_oracle(n: int = 2, m: int = 3, rules: bool = False):
    """Count IIA welfare functions by composing one boolean function per pair.

    Under IIA the social ranking of each pair is a function of the voters'
    rankings of that pair alone (a function of ``n`` bits).  Every
    combination of pair functions is kept when it yields a strict order at
    every profile of the full domain.
    """
    if m > 3 or n > 3:
        raise OracleTooLarge("pairwise oracle is limited to n <= 3, m <= 3")
    domain = Domain.full(m)
    ctx = context(domain, n)
    npairs = len(ctx.pairs)
    nfun = 1 << (1 << n)
    keys = np.array(ctx.key, dtype=np.int64)  # (profiles, pairs)
    # combos: (functions^pairs, pairs) truth tables
    combos = np.array(list(itertools.product(range(nfun), repeat=npairs)), dtype=np.int64)
    # S[c, p, k]: direction chosen by combo c at profile p for pair k
    S = ((combos[:, None, :] >> keys[None, :, :]) & 1).astype(bool)
    above = _above(m)  # (orders, pairs)
    match = (S[:, :, None, :] == above[None, None, :, :]).all(axis=3)  # (c, p, order)
    valid = match.any(axis=2).all(axis=1)
    if not rules:
        return int(valid.sum())
    out = []
    for c in np.flatnonzero(valid):
        outcomes = tuple(int(np.argmax(match[c, p])) for p in range(ctx.size))
        out.append(Rule("aswf", domain, n, outcomes))
    return out

