"""Strict orders, profiles, preference domains and Kendall distance.

Orders over ``m`` alternatives are enumerated lexicographically by their
permutation word (best alternative first), so ``enumerate_orders(3)`` yields
``abc, acb, bac, bca, cab, cba`` with order indices 0..5.  Profiles over a
domain ``D`` are numbered mixed-radix in base ``|D|`` with voter 0 as the most
significant digit.
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

LETTERS = string.ascii_lowercase


def letter(a: int) -> str:
    return LETTERS[a]


def lehmer_index(word: Sequence[int]) -> int:
    """Position of ``word`` in the lexicographic enumeration of permutations."""
    m = len(word)
    index = 0
    remaining = sorted(word)
    for k, a in enumerate(word):
        pos = remaining.index(a)
        index += pos * factorial(m - 1 - k)
        remaining.pop(pos)
    return index


@dataclass(frozen=True)
class LinearOrder:
    """A strict total order; ``word[0]`` is the most preferred alternative."""

    word: tuple[int, ...]
    rank: tuple[int, ...] = field(init=False, repr=False, compare=False)
    index: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        word = tuple(int(a) for a in self.word)
        m = len(word)
        if m < 1 or sorted(word) != list(range(m)):
            raise ValueError(f"not a permutation of 0..{m - 1}: {self.word!r}")
        rank = [0] * m
        for pos, a in enumerate(word):
            rank[a] = pos
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "rank", tuple(rank))
        object.__setattr__(self, "index", lehmer_index(word))

    @classmethod
    def from_rank(cls, rank: Sequence[int]) -> LinearOrder:
        word = [0] * len(rank)
        for a, pos in enumerate(rank):
            word[pos] = a
        return cls(tuple(word))

    @classmethod
    def parse(cls, text: str) -> LinearOrder:
        """Parse a permutation word such as ``"bac"``."""
        return cls(tuple(LETTERS.index(ch) for ch in text.strip()))

    @property
    def m(self) -> int:
        return len(self.word)

    @property
    def top(self) -> int:
        return self.word[0]

    def prefers(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]

    def reversed(self) -> LinearOrder:
        return LinearOrder(self.word[::-1])

    def __str__(self) -> str:
        return "".join(letter(a) for a in self.word)


@dataclass(frozen=True)
class PairRanking:
    """Restriction of an order to a pair: ``high`` is ranked above ``low``."""

    high: int
    low: int

    def __post_init__(self):
        if self.high == self.low:
            raise ValueError("a pair ranking needs two distinct alternatives")

    def __str__(self) -> str:
        return f"{letter(self.high)}>{letter(self.low)}"


@lru_cache(maxsize=None)
def _orders(m: int) -> tuple[LinearOrder, ...]:
    return tuple(LinearOrder(w) for w in itertools.permutations(range(m)))


def enumerate_orders(m: int) -> list[LinearOrder]:
    """All ``m!`` strict orders in lexicographic sequence; ``index`` equals position."""
    if m < 1:
        raise ValueError("need at least one alternative")
    return list(_orders(m))


def order_by_index(m: int, index: int) -> LinearOrder:
    orders = _orders(m)
    if not 0 <= index < len(orders):
        raise IndexError(f"order index {index} out of range for m={m}")
    return orders[index]


def pairs(m: int) -> list[tuple[int, int]]:
    """Unordered pairs ``(a, b)`` with ``a < b``."""
    return list(itertools.combinations(range(m), 2))


def restrict(p: LinearOrder, a: int, b: int) -> PairRanking:
    if a == b:
        raise ValueError("restriction needs two distinct alternatives")
    return PairRanking(a, b) if p.prefers(a, b) else PairRanking(b, a)


def kendall_distance(p: LinearOrder, q: LinearOrder) -> int:
    if p.m != q.m:
        raise ValueError(f"orders over different alternative counts ({p.m} vs {q.m})")
    return sum(p.prefers(a, b) != q.prefers(a, b) for a, b in pairs(p.m))


@dataclass(frozen=True)
class Domain:
    """A non-empty set of strict orders over ``m`` alternatives, sorted by index."""

    m: int
    orders: tuple[LinearOrder, ...]

    def __post_init__(self):
        if not self.orders:
            raise ValueError("a domain must be non-empty")
        if any(o.m != self.m for o in self.orders):
            raise ValueError("domain orders must share the alternative count")
        ordered = tuple(sorted(self.orders, key=lambda o: o.index))
        if len({o.index for o in ordered}) != len(ordered):
            raise ValueError("duplicate orders in domain")
        object.__setattr__(self, "orders", ordered)

    @classmethod
    def full(cls, m: int) -> Domain:
        return cls(m, _orders(m))

    @classmethod
    def from_words(cls, words: Iterable[str]) -> Domain:
        orders = tuple(LinearOrder.parse(w) for w in words)
        if not orders:
            raise ValueError("a domain must be non-empty")
        return cls(orders[0].m, orders)

    @classmethod
    def from_indices(cls, m: int, indices: Iterable[int]) -> Domain:
        return cls(m, tuple(order_by_index(m, i) for i in indices))

    def __len__(self) -> int:
        return len(self.orders)

    def __iter__(self):
        return iter(self.orders)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(o.index for o in self.orders)

    @property
    def words(self) -> list[str]:
        return [str(o) for o in self.orders]

    def is_full(self) -> bool:
        return len(self.orders) == factorial(self.m)

    def position(self, order: LinearOrder) -> int:
        for k, o in enumerate(self.orders):
            if o.index == order.index:
                return k
        raise ValueError(f"order {order} not in domain")

    def __str__(self) -> str:
        return "{" + ",".join(self.words) + "}"


Profile = tuple[LinearOrder, ...]


class ProfileCodec:
    """Bijection between profiles over ``domain`` and ``range(len(domain) ** n)``.

    Voter 0 is the most significant digit, so profile 0 has every voter on the
    domain's first order and consecutive indices vary the last voter fastest.
    """

    def __init__(self, domain: Domain, n: int):
        if n < 1:
            raise ValueError("need at least one voter")
        self.domain = domain
        self.n = n
        self.size = len(domain) ** n
        # digits[i][v] is voter v's position in the domain at profile i
        self.digits: list[tuple[int, ...]] = list(
            itertools.product(range(len(domain)), repeat=n)
        )

    def __len__(self) -> int:
        return self.size

    def decode(self, index: int) -> Profile:
        if not 0 <= index < self.size:
            raise IndexError(f"profile index {index} out of range [0, {self.size})")
        return tuple(self.domain.orders[d] for d in self.digits[index])

    def encode(self, profile: Sequence[LinearOrder]) -> int:
        if len(profile) != self.n:
            raise ValueError(f"expected {self.n} orders, got {len(profile)}")
        index = 0
        for order in profile:
            index = index * len(self.domain) + self.domain.position(order)
        return index

    def encode_digits(self, digits: Sequence[int]) -> int:
        index = 0
        for d in digits:
            index = index * len(self.domain) + d
        return index

    def profiles(self) -> list[Profile]:
        return [self.decode(i) for i in range(self.size)]


def profile_str(profile: Sequence[LinearOrder]) -> str:
    return "(" + ",".join(str(o) for o in profile) + ")"


def is_single_peaked(order: LinearOrder, base: LinearOrder | None = None) -> bool:
    """Single-peakedness with respect to the axis ``base`` (left to right).

    With ``pos`` the axis position, the order is single-peaked when every
    alternative strictly between another one and the peak is preferred to it.
    """
    m = order.m
    pos = base.rank if base is not None else tuple(range(m))
    peak = pos[order.top]
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            between = pos[a] < pos[b] <= peak or peak <= pos[b] < pos[a]
            if between and not order.prefers(b, a):
                return False
    return True


def single_peaked_domain(m: int, base: LinearOrder | None = None) -> Domain:
    return Domain(m, tuple(o for o in _orders(m) if is_single_peaked(o, base)))
