"""Axioms as tri-state predicates over total and partial rule tables.

Every check returns a :class:`Verdict`.  On a partial rule the verdict is
monotone: ``VIOLATED`` and ``SATISFIED`` persist under every extension, and
anything that could still go either way is ``UNDETERMINED``.  Violations
carry a :class:`Certificate` that :func:`replay` confirms against the rule
from the definitions alone.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .prefcore import Domain, LinearOrder, ProfileCodec, letter, order_by_index, pairs
from .rules import PartialRule, Rule, _choice_relations


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Certificate:
    axiom: str
    profiles: tuple[int, ...] = ()
    detail: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "profiles": list(self.profiles), "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Optional[Certificate] = None
    witness: Optional[int] = None

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED

    @property
    def violated(self) -> bool:
        return self.status is Status.VIOLATED

    @property
    def undetermined(self) -> bool:
        return self.status is Status.UNDETERMINED


SATISFIED = Verdict(Status.SATISFIED)
UNDETERMINED = Verdict(Status.UNDETERMINED)


def _violated(axiom: str, profiles: Sequence[int] = (), **detail) -> Verdict:
    return Verdict(Status.VIOLATED, Certificate(axiom, tuple(profiles), detail))


class Context:
    """Per-(domain, n) lookup tables shared by all checks."""

    def __init__(self, domain: Domain, n: int):
        self.domain = domain
        self.n = n
        self.m = m = domain.m
        self.codec = codec = ProfileCodec(domain, n)
        self.size = codec.size
        self.pairs = pairs(m)
        self.ordered_pairs = [(a, b) for a in range(m) for b in range(m) if a != b]
        self.voters = tuple(tuple(domain.orders[d] for d in digits) for digits in codec.digits)
        # key[p][k]: bitmask over voters preferring pairs[k][0] to pairs[k][1]
        self.key = [
            tuple(
                sum(1 << i for i, o in enumerate(prof) if o.prefers(a, b)) for a, b in self.pairs
            )
            for prof in self.voters
        ]
        full = (1 << n) - 1
        self.unanimous = []
        for p, prof in enumerate(self.voters):
            unan = []
            for k, (a, b) in enumerate(self.pairs):
                if self.key[p][k] == full:
                    unan.append((a, b))
                elif self.key[p][k] == 0:
                    unan.append((b, a))
            self.unanimous.append(unan)
        # neighbours[p][i]: profiles that differ from p only in voter i's order
        self.neighbours = []
        radix = len(domain)
        for p, digits in enumerate(codec.digits):
            row = []
            for i in range(n):
                row.append(
                    [
                        codec.encode_digits(digits[:i] + (d,) + digits[i + 1 :])
                        for d in range(radix)
                        if d != digits[i]
                    ]
                )
            self.neighbours.append(row)
        self.tops = [tuple(o.top for o in prof) for prof in self.voters]

    def order(self, index: int) -> LinearOrder:
        return order_by_index(self.m, index)

    def permuted(self, p: int, sigma: Sequence[int]) -> int:
        digits = self.codec.digits[p]
        return self.codec.encode_digits(tuple(digits[s] for s in sigma))


@lru_cache(maxsize=256)
def context(domain: Domain, n: int) -> Context:
    return Context(domain, n)


def _ctx(rule: Rule | PartialRule) -> Context:
    return context(rule.domain, rule.n)


def _require(rule, family: str, axiom: str) -> None:
    if rule.family != family:
        raise ValueError(f"axiom {axiom} applies to {family} rules, not {rule.family}")


def _pair_str(a: int, b: int) -> str:
    return f"{letter(a)}>{letter(b)}"


# ASWF axioms


def check_wp(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "aswf", "wp")
    ctx = _ctx(rule)
    pending = False
    for p, v in enumerate(rule.outcomes):
        if v is None:
            pending = pending or bool(ctx.unanimous[p])
            continue
        social = ctx.order(v)
        for a, b in ctx.unanimous[p]:
            if not social.prefers(a, b):
                return _violated("wp", (p,), pair=[a, b])
    return UNDETERMINED if pending else SATISFIED


def check_iia(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "aswf", "iia")
    ctx = _ctx(rule)
    seen: dict[tuple[int, int], tuple[int, bool]] = {}
    for p, v in enumerate(rule.outcomes):
        if v is None:
            continue
        social = ctx.order(v)
        for k, (a, b) in enumerate(ctx.pairs):
            direction = social.prefers(a, b)
            first = seen.setdefault((k, ctx.key[p][k]), (p, direction))
            if first[1] != direction:
                return _violated("iia", (first[0], p), pair=[a, b])
    if any(v is None for v in rule.outcomes):
        return UNDETERMINED
    return SATISFIED


def check_ni(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "aswf", "ni")
    ctx = _ctx(rule)
    realised = set()
    for v in rule.outcomes:
        if v is not None:
            social = ctx.order(v)
            realised.update((a, b) for a, b in ctx.ordered_pairs if social.prefers(a, b))
    missing = [ab for ab in ctx.ordered_pairs if ab not in realised]
    if not missing:
        return SATISFIED
    if any(v is None for v in rule.outcomes):
        return UNDETERMINED
    return _violated("ni", (), pair=list(missing[0]))


def _voter_match(rule, axiom: str, target: Callable[[Context, int, int], int]) -> Verdict:
    """Shared logic for (anti-)dictatorship: voter i matches when outcome == target(p, i)."""
    ctx = _ctx(rule)
    refuted: dict[int, int] = {}
    for p, v in enumerate(rule.outcomes):
        if v is None:
            continue
        for i in range(rule.n):
            if i not in refuted and v != target(ctx, p, i):
                refuted[i] = p
        if len(refuted) == rule.n:
            return _violated(
                axiom,
                tuple(refuted[i] for i in range(rule.n)),
                refutations={str(i): refuted[i] for i in range(rule.n)},
            )
    if any(v is None for v in rule.outcomes):
        return UNDETERMINED
    winner = min(i for i in range(rule.n) if i not in refuted)
    return Verdict(Status.SATISFIED, witness=winner)


def check_dictatorial(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "aswf", "dict")
    return _voter_match(rule, "dict", lambda ctx, p, i: ctx.voters[p][i].index)


def check_antidictatorial(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "aswf", "antidict")
    return _voter_match(rule, "antidict", lambda ctx, p, i: ctx.voters[p][i].reversed().index)


def check_constant(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "aswf", "const")
    first = None
    for p, v in enumerate(rule.outcomes):
        if v is None:
            continue
        if first is None:
            first = p
        elif v != rule.outcomes[first]:
            return _violated("const", (first, p))
    if any(v is None for v in rule.outcomes):
        return UNDETERMINED
    return SATISFIED


# SDF axioms


def check_u_sdf(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "sdf", "u")
    ctx = _ctx(rule)
    relations = _choice_relations(rule.m)
    pending = False
    for p, v in enumerate(rule.outcomes):
        if v is None:
            pending = pending or bool(ctx.unanimous[p])
            continue
        rel = relations[v]
        for a, b in ctx.unanimous[p]:
            if not rel.strictly(a, b):
                return _violated("u", (p,), pair=[a, b])
    return UNDETERMINED if pending else SATISFIED


DECISIVENESS = ("pair", "weak", "strict")


def decisive_pairs(m: int, mode: str = "pair") -> list[tuple[int, int]]:
    """Candidate pairs for decisiveness: unordered for ``pair``, ordered otherwise."""
    if mode not in DECISIVENESS:
        raise ValueError(f"decisiveness mode must be one of {DECISIVENESS}")
    if mode == "pair":
        return pairs(m)
    return [(a, b) for a in range(m) for b in range(m) if a != b]


def decisive_at(order: LinearOrder, rel, a1: int, a2: int, mode: str = "pair") -> bool:
    """Whether one profile is consistent with the voter being decisive on (a1, a2).

    ``pair``: the social relation restricted to {a1, a2} equals the voter's
    ranking, strictly in both orientations.  ``weak`` and ``strict`` use the
    single ordered biconditional ``a1 P a2 <=> a1 S a2`` against the relation
    itself or its strict component.
    """
    if mode == "weak":
        return order.prefers(a1, a2) == rel.holds(a1, a2)
    if mode == "strict":
        return order.prefers(a1, a2) == rel.strictly(a1, a2)
    return order.prefers(a1, a2) == rel.holds(a1, a2) and order.prefers(a2, a1) == rel.holds(a2, a1)


def decisive_refutations(
    rule: Rule | PartialRule, voter: int, mode: str = "pair"
) -> dict[tuple[int, int], int]:
    """For each candidate pair, the first assigned profile refuting ``voter``'s decisiveness."""
    ctx = _ctx(rule)
    relations = _choice_relations(rule.m)
    candidates = decisive_pairs(rule.m, mode)
    found: dict[tuple[int, int], int] = {}
    for p, v in enumerate(rule.outcomes):
        if v is None:
            continue
        rel = relations[v]
        order = ctx.voters[p][voter]
        for a1, a2 in candidates:
            if (a1, a2) not in found and not decisive_at(order, rel, a1, a2, mode):
                found[(a1, a2)] = p
    return found


def check_liberal(rule: Rule | PartialRule, decisive: str = "pair") -> Verdict:
    """At least two voters are decisive over some pair (see :func:`decisive_at`)."""
    _require(rule, "sdf", "liberal")
    total = all(v is not None for v in rule.outcomes)
    ncand = len(decisive_pairs(rule.m, decisive))
    live = []
    dead = {}
    for i in range(rule.n):
        refuted = decisive_refutations(rule, i, decisive)
        if len(refuted) < ncand:
            live.append(i)
        else:
            dead[str(i)] = {_pair_str(a, b): p for (a, b), p in sorted(refuted.items())}
    if len(live) < 2:
        profiles = sorted({p for refs in dead.values() for p in refs.values()})
        return _violated("liberal", profiles, refutations=dead, decisive=decisive)
    if total:
        return Verdict(Status.SATISFIED, witness=live[0])
    return UNDETERMINED


# SCF axioms


def check_sp(rule: Rule | PartialRule, domain: Domain | None = None) -> Verdict:
    """No voter gains by reporting another order of the domain."""
    _require(rule, "scf", "sp")
    if domain is not None and domain != rule.domain:
        raise ValueError("strategy-proofness domain must match the rule's domain")
    ctx = _ctx(rule)
    out = rule.outcomes
    for p, x in enumerate(out):
        if x is None:
            continue
        for i in range(rule.n):
            truth = ctx.voters[p][i]
            for q in ctx.neighbours[p][i]:
                y = out[q]
                if y is not None and truth.prefers(y, x):
                    return _violated("sp", (p, q), voter=i)
    if any(v is None for v in out):
        return UNDETERMINED
    return SATISFIED


def improves(ctx: Context, p: int, q: int, x: int) -> bool:
    """``x`` keeps beating everything it beat at ``p`` when moving to ``q``, for every voter."""
    for before, after in zip(ctx.voters[p], ctx.voters[q]):
        for b in range(ctx.m):
            if b != x and before.prefers(x, b) and not after.prefers(x, b):
                return False
    return True


def check_m(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "scf", "m")
    ctx = _ctx(rule)
    out = rule.outcomes
    for p, x in enumerate(out):
        if x is None:
            continue
        for q, y in enumerate(out):
            if y is not None and y != x and improves(ctx, p, q, x):
                return _violated("m", (p, q))
    if any(v is None for v in out):
        return UNDETERMINED
    return SATISFIED


def dominated(ctx: Context, p: int, x: int) -> Optional[int]:
    for b in range(ctx.m):
        if b != x and all(o.prefers(b, x) for o in ctx.voters[p]):
            return b
    return None


def check_eff(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "scf", "eff")
    ctx = _ctx(rule)
    pending = False
    for p, x in enumerate(rule.outcomes):
        if x is None:
            pending = True
            continue
        b = dominated(ctx, p, x)
        if b is not None:
            return _violated("eff", (p,), dominator=b)
    return UNDETERMINED if pending else SATISFIED


def check_anon(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "scf", "anon")
    ctx = _ctx(rule)
    out = rule.outcomes
    for sigma in itertools.permutations(range(rule.n)):
        for p, x in enumerate(out):
            if x is None:
                continue
            q = ctx.permuted(p, sigma)
            if out[q] is not None and out[q] != x:
                return _violated("anon", (p, q), sigma=list(sigma))
    if any(v is None for v in out):
        return UNDETERMINED
    return SATISFIED


def check_onto(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "scf", "onto")
    attained = {x for x in rule.outcomes if x is not None}
    missing = [x for x in range(rule.m) if x not in attained]
    if not missing:
        return SATISFIED
    unassigned = sum(v is None for v in rule.outcomes)
    if len(missing) > unassigned:
        return _violated("onto", (), missing=missing, unassigned=unassigned)
    return UNDETERMINED


def check_dict_scf(rule: Rule | PartialRule) -> Verdict:
    _require(rule, "scf", "dict_scf")
    return _voter_match(rule, "dict_scf", lambda ctx, p, i: ctx.tops[p][i])


def check_u_scf(rule: Rule | PartialRule) -> Verdict:
    """Tops-unanimity: a commonly top-ranked alternative is chosen."""
    _require(rule, "scf", "u")
    ctx = _ctx(rule)
    pending = False
    for p, x in enumerate(rule.outcomes):
        tops = set(ctx.tops[p])
        if len(tops) != 1:
            continue
        if x is None:
            pending = True
        elif x not in tops:
            return _violated("u", (p,), top=next(iter(tops)))
    return UNDETERMINED if pending else SATISFIED


# registry


@dataclass(frozen=True)
class Axiom:
    name: str
    family: str
    check: Callable[..., Verdict]
    description: str


AXIOMS: dict[tuple[str, str], Axiom] = {}


def _register(name: str, family: str, check, description: str) -> None:
    AXIOMS[(name, family)] = Axiom(name, family, check, description)


_register("wp", "aswf", check_wp, "weak Pareto")
_register("iia", "aswf", check_iia, "independence of irrelevant alternatives")
_register("ni", "aswf", check_ni, "non-imposition")
_register("dict", "aswf", check_dictatorial, "dictatorial")
_register("antidict", "aswf", check_antidictatorial, "anti-dictatorial")
_register("const", "aswf", check_constant, "constant social order")
_register("u", "sdf", check_u_sdf, "unanimity (strict component)")
_register("liberal", "sdf", check_liberal, "at least two decisive voters")
_register("sp", "scf", check_sp, "strategy-proof")
_register("m", "scf", check_m, "monotonic")
_register("eff", "scf", check_eff, "efficient")
_register("anon", "scf", check_anon, "anonymous")
_register("onto", "scf", check_onto, "onto")
_register("dict_scf", "scf", check_dict_scf, "dictatorial (picks one voter's top)")
_register("u", "scf", check_u_scf, "tops-unanimity")

AXIOM_NAMES = ("wp", "iia", "ni", "dict", "antidict", "const", "u", "liberal",
               "m", "sp", "eff", "anon", "onto", "dict_scf")


class UnknownAxiom(ValueError):
    pass


@dataclass(frozen=True)
class AxiomLiteral:
    """An axiom requirement, possibly negated (``!dict``)."""

    name: str
    positive: bool = True

    @classmethod
    def parse(cls, text: str) -> AxiomLiteral:
        text = text.strip().lower()
        positive = not text.startswith("!")
        name = text.lstrip("!")
        if name not in AXIOM_NAMES:
            raise UnknownAxiom(
                f"unknown axiom {text!r}; accepted: {', '.join(AXIOM_NAMES)} (negate with '!')"
            )
        return cls(name, positive)

    def __str__(self) -> str:
        return self.name if self.positive else "!" + self.name

    def axiom(self, family: str) -> Axiom:
        try:
            return AXIOMS[(self.name, family)]
        except KeyError:
            raise UnknownAxiom(f"axiom {self.name!r} is not defined for {family} rules") from None


def parse_axioms(text: str | Sequence[str]) -> tuple[AxiomLiteral, ...]:
    items = text.split(",") if isinstance(text, str) else list(text)
    return tuple(AxiomLiteral.parse(t) for t in items if t.strip())


def evaluate(literal: AxiomLiteral, rule: Rule | PartialRule, decisive: str = "pair") -> Verdict:
    """Tri-state evaluation of a possibly negated axiom.

    ``decisive`` selects the decisiveness reading used by ``liberal``.
    """
    check = literal.axiom(rule.family).check
    verdict = check(rule, decisive=decisive) if literal.name == "liberal" else check(rule)
    if literal.positive:
        return verdict
    if verdict.satisfied:
        return _violated(
            str(literal), (), holds=literal.name, witness=verdict.witness, decisive=decisive
        )
    if verdict.violated:
        return SATISFIED
    return UNDETERMINED


def evaluate_all(
    literals: Sequence[AxiomLiteral], rule: Rule | PartialRule, decisive: str = "pair"
) -> dict[str, Verdict]:
    return {str(lit): evaluate(lit, rule, decisive) for lit in literals}


def satisfies_all(literals: Sequence[AxiomLiteral], rule: Rule, decisive: str = "pair") -> bool:
    return all(evaluate(lit, rule, decisive).satisfied for lit in literals)


# certificate replay: independent re-derivation from the definitions


def _outcome(rule, p):
    v = rule.outcomes[p]
    if v is None:
        raise ValueError(f"certificate refers to unassigned profile {p}")
    return v


def replay(cert: Certificate, rule: Rule | PartialRule) -> bool:
    """True when the certificate demonstrates a violation in ``rule``."""
    codec = ProfileCodec(rule.domain, rule.n)
    m = rule.m
    prof = lambda p: codec.decode(p)  # noqa: E731
    name = cert.axiom
    d = cert.detail
    try:
        if name.startswith("!"):
            return evaluate(AxiomLiteral(name[1:], True), rule, d.get("decisive", "pair")).satisfied
        if name == "wp":
            (p,) = cert.profiles
            a, b = d["pair"]
            social = order_by_index(m, _outcome(rule, p))
            return all(o.prefers(a, b) for o in prof(p)) and social.prefers(b, a)
        if name == "iia":
            p, q = cert.profiles
            a, b = d["pair"]
            same = all(x.prefers(a, b) == y.prefers(a, b) for x, y in zip(prof(p), prof(q)))
            sp = order_by_index(m, _outcome(rule, p)).prefers(a, b)
            sq = order_by_index(m, _outcome(rule, q)).prefers(a, b)
            return same and sp != sq
        if name == "ni":
            a, b = d["pair"]
            return all(
                v is not None and not order_by_index(m, v).prefers(a, b) for v in rule.outcomes
            )
        if name in ("dict", "antidict", "dict_scf"):
            refs = d["refutations"]
            if sorted(int(i) for i in refs) != list(range(rule.n)):
                return False
            for i, p in refs.items():
                voter = prof(p)[int(i)]
                v = _outcome(rule, p)
                if name == "dict" and v == voter.index:
                    return False
                if name == "antidict" and v == voter.reversed().index:
                    return False
                if name == "dict_scf" and v == voter.top:
                    return False
            return True
        if name == "const":
            p, q = cert.profiles
            return _outcome(rule, p) != _outcome(rule, q)
        if name == "u" and rule.family == "sdf":
            (p,) = cert.profiles
            a, b = d["pair"]
            rel = _choice_relations(m)[_outcome(rule, p)]
            return all(o.prefers(a, b) for o in prof(p)) and not rel.strictly(a, b)
        if name == "u":
            (p,) = cert.profiles
            tops = {o.top for o in prof(p)}
            return len(tops) == 1 and _outcome(rule, p) not in tops
        if name == "liberal":
            mode = d.get("decisive", "pair")
            refs = d["refutations"]
            if rule.n - len(refs) >= 2:
                return False
            relations = _choice_relations(m)
            for i, by_pair in refs.items():
                if len(by_pair) != len(decisive_pairs(m, mode)):
                    return False
                for pair, p in by_pair.items():
                    a1, a2 = (ord(ch) - ord("a") for ch in pair.split(">"))
                    rel = relations[_outcome(rule, p)]
                    if decisive_at(prof(p)[int(i)], rel, a1, a2, mode):
                        return False
            return True
        if name == "sp":
            p, q = cert.profiles
            i = d["voter"]
            pp, qq = prof(p), prof(q)
            others_same = all(pp[j] == qq[j] for j in range(rule.n) if j != i)
            return others_same and pp[i].prefers(_outcome(rule, q), _outcome(rule, p))
        if name == "m":
            p, q = cert.profiles
            x = _outcome(rule, p)
            for before, after in zip(prof(p), prof(q)):
                for b in range(m):
                    if b != x and before.prefers(x, b) and not after.prefers(x, b):
                        return False
            return _outcome(rule, q) != x
        if name == "eff":
            (p,) = cert.profiles
            b = d["dominator"]
            return all(o.prefers(b, _outcome(rule, p)) for o in prof(p))
        if name == "anon":
            p, q = cert.profiles
            sigma = d["sigma"]
            pp, qq = prof(p), prof(q)
            permuted = all(qq[k] == pp[sigma[k]] for k in range(rule.n))
            return permuted and _outcome(rule, p) != _outcome(rule, q)
        if name == "onto":
            attained = {v for v in rule.outcomes if v is not None}
            unassigned = sum(v is None for v in rule.outcomes)
            missing = [x for x in range(m) if x not in attained]
            return missing == d["missing"] and len(missing) > unassigned
    except (KeyError, ValueError, TypeError, IndexError):
        return False
    raise ValueError(f"no replay rule for certificate axiom {name!r}")


def confirm(literals: Sequence[AxiomLiteral], rule: Rule, decisive: str = "pair") -> list[str]:
    """Names of required axioms the total rule fails (empty list means certified)."""
    failed = []
    for lit in literals:
        verdict = evaluate(lit, rule, decisive)
        if not verdict.satisfied:
            failed.append(str(lit))
    return failed
