import itertools
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from choicesat.prefcore import (
    Domain,
    LinearOrder,
    ProfileCodec,
    enumerate_orders,
    is_single_peaked,
    kendall_distance,
    lehmer_index,
    order_by_index,
    pairs,
    restrict,
    single_peaked_domain,
)

orders3 = st.integers(0, 5).map(lambda i: order_by_index(3, i))
orders4 = st.integers(0, 23).map(lambda i: order_by_index(4, i))


def test_enumeration_order_m3():
    assert [str(o) for o in enumerate_orders(3)] == ["abc", "acb", "bac", "bca", "cab", "cba"]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_order_count_and_index(m):
    orders = enumerate_orders(m)
    assert len(orders) == factorial(m)
    assert [o.index for o in orders] == list(range(factorial(m)))


def test_bad_inputs():
    with pytest.raises(ValueError):
        enumerate_orders(0)
    with pytest.raises(ValueError):
        LinearOrder((0, 0, 1))
    with pytest.raises(IndexError):
        order_by_index(3, 6)
    with pytest.raises(ValueError):
        restrict(order_by_index(3, 0), 1, 1)


def test_lehmer_matches_itertools():
    for k, word in enumerate(itertools.permutations(range(4))):
        assert lehmer_index(word) == k


def test_parse_and_rank():
    o = LinearOrder.parse("bca")
    assert o.word == (1, 2, 0)
    assert o.rank == (2, 0, 1)
    assert o.top == 1 and o.prefers(2, 0)
    assert LinearOrder.from_rank(o.rank) == o
    assert str(restrict(o, 0, 2)) == "c>a"


@given(orders4, orders4)
def test_kendall_is_a_metric_with_reversal(p, q):
    assert kendall_distance(p, q) == kendall_distance(q, p)
    assert kendall_distance(p, p) == 0
    assert kendall_distance(p, p.reversed()) == len(pairs(4))
    assert kendall_distance(p, q) + kendall_distance(q, q.reversed()) >= kendall_distance(p, q.reversed())


def test_kendall_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        kendall_distance(order_by_index(3, 0), order_by_index(4, 0))


def test_domain_normalises_order():
    d = Domain.from_words(["cba", "abc"])
    assert d.words == ["abc", "cba"]
    assert d.indices == (0, 5)
    with pytest.raises(ValueError):
        Domain.from_words(["abc", "abc"])
    with pytest.raises(ValueError):
        Domain(3, ())


@pytest.mark.parametrize("size,n", [(1, 1), (2, 2), (3, 2), (6, 2), (4, 3)])
def test_codec_bijective(size, n):
    domain = Domain.from_indices(3, range(size))
    codec = ProfileCodec(domain, n)
    assert codec.size == size**n
    for i in range(codec.size):
        assert codec.encode(codec.decode(i)) == i
    with pytest.raises(IndexError):
        codec.decode(codec.size)


def test_codec_voter_zero_most_significant():
    codec = ProfileCodec(Domain.full(3), 2)
    assert [str(o) for o in codec.decode(1)] == ["abc", "acb"]
    assert [str(o) for o in codec.decode(6)] == ["acb", "abc"]


def test_single_peaked_domain_m3():
    assert single_peaked_domain(3).words == ["abc", "bac", "bca", "cba"]


@given(st.integers(2, 5))
def test_single_peaked_count(m):
    # 2^(m-1) single-peaked orders on a line
    assert len(single_peaked_domain(m)) == 2 ** (m - 1)


def test_single_peaked_respects_axis():
    axis = LinearOrder.parse("bac")
    assert is_single_peaked(LinearOrder.parse("acb"), axis)
    assert not is_single_peaked(LinearOrder.parse("acb"))
