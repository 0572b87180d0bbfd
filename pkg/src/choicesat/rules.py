"""Rule tables for social welfare, choice and decision functions.

A rule is a dense table indexed by profile index.  The outcome encoding
depends on the family:

* ``aswf`` - order index of the social order (see :mod:`choicesat.prefcore`)
* ``scf``  - the chosen alternative
* ``sdf``  - position in :func:`enumerate_choice_relations`
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial
from typing import Optional, Sequence

from .prefcore import Domain, LinearOrder, ProfileCodec, order_by_index

FAMILIES = ("aswf", "scf", "sdf")


@dataclass(frozen=True)
class ChoiceRelation:
    """Binary relation over ``m`` alternatives; bit ``a*m + b`` means ``a L b``."""

    m: int
    bits: int

    def holds(self, a: int, b: int) -> bool:
        return bool(self.bits >> (a * self.m + b) & 1)

    def strictly(self, a: int, b: int) -> bool:
        return self.holds(a, b) and not self.holds(b, a)

    def matrix(self) -> list[list[bool]]:
        return [[self.holds(a, b) for b in range(self.m)] for a in range(self.m)]

    @classmethod
    def from_order(cls, order: LinearOrder) -> ChoiceRelation:
        """Reflexive closure of a strict order."""
        m = order.m
        bits = 0
        for a in range(m):
            for b in range(m):
                if a == b or order.prefers(a, b):
                    bits |= 1 << (a * m + b)
        return cls(m, bits)

    def __str__(self) -> str:
        return " ".join(
            "".join("1" if self.holds(a, b) else "0" for b in range(self.m))
            for a in range(self.m)
        )


def generates_choice(m: int, bits: int) -> bool:
    """Every non-empty subset has an element related to all of its members."""
    for subset in range(1, 1 << m):
        members = [a for a in range(m) if subset >> a & 1]
        if not any(all(bits >> (b * m + a) & 1 for a in members) for b in members):
            return False
    return True


@lru_cache(maxsize=None)
def _choice_relations(m: int) -> tuple[ChoiceRelation, ...]:
    return tuple(
        ChoiceRelation(m, bits) for bits in range(1 << (m * m)) if generates_choice(m, bits)
    )


def enumerate_choice_relations(m: int) -> list[ChoiceRelation]:
    """All relations that generate a choice function, ordered by bitmask."""
    if not 1 <= m <= 4:
        raise ValueError(f"exhaustive relation filtering supports 1 <= m <= 4, got {m}")
    return list(_choice_relations(m))


def outcome_count(family: str, m: int) -> int:
    if family == "aswf":
        return factorial(m)
    if family == "scf":
        return m
    if family == "sdf":
        return len(_choice_relations(m))
    raise ValueError(f"unknown rule family {family!r}")


class _TableBase:
    family: str
    domain: Domain
    n: int
    outcomes: tuple

    @property
    def m(self) -> int:
        return self.domain.m

    @cached_property
    def codec(self) -> ProfileCodec:
        return ProfileCodec(self.domain, self.n)

    def __len__(self) -> int:
        return len(self.outcomes)

    def _validate(self, allow_none: bool) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown rule family {self.family!r}")
        size = len(self.domain) ** self.n
        if len(self.outcomes) != size:
            raise ValueError(f"table needs {size} entries, got {len(self.outcomes)}")
        limit = outcome_count(self.family, self.m)
        for v in self.outcomes:
            if v is None and allow_none:
                continue
            if not isinstance(v, int) or not 0 <= v < limit:
                raise ValueError(f"invalid {self.family} outcome {v!r}")

    def order_at(self, cell: int) -> LinearOrder:
        return order_by_index(self.m, self.outcomes[cell])

    def relation_at(self, cell: int) -> ChoiceRelation:
        return _choice_relations(self.m)[self.outcomes[cell]]


@dataclass(frozen=True, eq=True)
class Rule(_TableBase):
    """A total rule table."""

    family: str
    domain: Domain
    n: int
    outcomes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        self._validate(allow_none=False)

    def range(self) -> list[int]:
        return sorted(set(self.outcomes))

    def as_partial(self) -> PartialRule:
        return PartialRule(self.family, self.domain, self.n, self.outcomes)


@dataclass(frozen=True, eq=True)
class PartialRule(_TableBase):
    """A rule table with some cells unassigned (``None``)."""

    family: str
    domain: Domain
    n: int
    outcomes: tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        self._validate(allow_none=True)

    @classmethod
    def empty(cls, family: str, domain: Domain, n: int) -> PartialRule:
        return cls(family, domain, n, (None,) * (len(domain) ** n))

    @property
    def assigned_count(self) -> int:
        return sum(v is not None for v in self.outcomes)

    def is_total(self) -> bool:
        return all(v is not None for v in self.outcomes)

    def to_rule(self) -> Rule:
        if not self.is_total():
            raise ValueError("partial rule still has unassigned cells")
        return Rule(self.family, self.domain, self.n, self.outcomes)


def complete(partial: PartialRule, cell: int, value: int) -> PartialRule:
    """Return a copy of ``partial`` with ``cell`` set to ``value``."""
    if not 0 <= cell < len(partial.outcomes):
        raise IndexError(f"cell {cell} out of range")
    if partial.outcomes[cell] is not None:
        raise ValueError(f"cell {cell} already assigned")
    outcomes = list(partial.outcomes)
    outcomes[cell] = value
    return PartialRule(partial.family, partial.domain, partial.n, tuple(outcomes))


def cells_of(rule: Rule | PartialRule) -> Sequence[Optional[int]]:
    return rule.outcomes


# canonical rules


def aswf_dictatorship(domain: Domain, n: int, voter: int) -> Rule:
    codec = ProfileCodec(domain, n)
    return Rule("aswf", domain, n, tuple(domain.orders[d[voter]].index for d in codec.digits))


def aswf_antidictatorship(domain: Domain, n: int, voter: int) -> Rule:
    codec = ProfileCodec(domain, n)
    return Rule(
        "aswf",
        domain,
        n,
        tuple(domain.orders[d[voter]].reversed().index for d in codec.digits),
    )


def aswf_constant(domain: Domain, n: int, order: LinearOrder) -> Rule:
    return Rule("aswf", domain, n, (order.index,) * len(domain) ** n)


def scf_dictatorship(domain: Domain, n: int, voter: int) -> Rule:
    codec = ProfileCodec(domain, n)
    return Rule("scf", domain, n, tuple(domain.orders[d[voter]].top for d in codec.digits))


def scf_constant(domain: Domain, n: int, alternative: int) -> Rule:
    return Rule("scf", domain, n, (alternative,) * len(domain) ** n)


def sdf_from_voter(domain: Domain, n: int, voter: int) -> Rule:
    """SDF returning the reflexive closure of one voter's order."""
    relations = _choice_relations(domain.m)
    codec = ProfileCodec(domain, n)
    outcomes = tuple(
        relations.index(ChoiceRelation.from_order(domain.orders[d[voter]])) for d in codec.digits
    )
    return Rule("sdf", domain, n, outcomes)


def random_rule(family: str, domain: Domain, n: int, rng: random.Random) -> Rule:
    k = outcome_count(family, domain.m)
    return Rule(family, domain, n, tuple(rng.randrange(k) for _ in range(len(domain) ** n)))


# witness serialization


def rule_to_dict(rule: Rule) -> dict:
    return {
        "family": rule.family,
        "m": rule.m,
        "n": rule.n,
        "domain": rule.domain.words,
        "outcomes": list(rule.outcomes),
    }


def rule_from_dict(data: dict) -> Rule:
    domain = Domain.from_words(data["domain"])
    if domain.m != data["m"]:
        raise ValueError("domain words disagree with m")
    return Rule(data["family"], domain, int(data["n"]), tuple(int(v) for v in data["outcomes"]))


def rule_signature(rule: Rule) -> str:
    """Deterministic JSON text for a total rule; inverse of :func:`parse_signature`."""
    return json.dumps(rule_to_dict(rule), separators=(",", ":"))


def parse_signature(text: str) -> Rule:
    return rule_from_dict(json.loads(text))
