import itertools
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choicesat import axioms as ax
from choicesat.prefcore import Domain
from choicesat.search import BudgetExceeded, SearchError, SearchSpec, count_models, enumerate_models, solve

FULL = Domain.full(3)
ASWF_NAMES = ["wp", "iia", "ni", "dict", "antidict", "const"]
SCF_NAMES = ["sp", "m", "eff", "anon", "onto", "dict_scf", "u"]


def spec(axioms, family="aswf", domain=FULL, n=2, **kw):
    return SearchSpec.build(family, domain, n, axioms, **kw)


@pytest.mark.parametrize(
    "axioms,family,count",
    [
        ("iia", "aswf", 94),
        ("wp,iia", "aswf", 2),
        ("iia,ni", "aswf", 4),
        ("dict", "aswf", 2),
        ("antidict", "aswf", 2),
        ("const", "aswf", 6),
        ("sp,onto", "scf", 2),
        ("dict_scf", "scf", 2),
    ],
)
def test_known_counts(axioms, family, count):
    assert count_models(spec(axioms, family)) == count


@pytest.mark.parametrize(
    "axioms,family",
    [
        ("wp,iia,!dict", "aswf"),
        ("iia,ni,!dict,!antidict", "aswf"),
        ("sp,onto,!dict_scf", "scf"),
        ("eff,m,!dict_scf", "scf"),
        ("u,liberal", "sdf"),
    ],
)
def test_impossibilities(axioms, family):
    result = solve(spec(axioms, family))
    assert result.status == "unsat" and result.witness is None


def test_decide_witness_is_checked():
    result = solve(spec("wp,iia"))
    assert result.sat
    assert ax.confirm(ax.parse_axioms("wp,iia"), result.witness) == []


@pytest.mark.parametrize("decisive", ["weak", "strict"])
def test_single_pair_decisiveness_admits_liberal_unanimous_rules(decisive):
    # the one-orientation readings are weaker than the two-orientation one and leave room for witnesses
    result = solve(spec("u,liberal", "sdf", decisive=decisive))
    assert result.sat
    assert ax.confirm(ax.parse_axioms("u,liberal"), result.witness, decisive) == []


def test_enumerate_is_deterministic_and_ordered():
    a = enumerate_models(spec("iia"), 10)
    b = enumerate_models(spec("iia"), 10)
    assert [r.outcomes for r in a] == [r.outcomes for r in b]
    assert [r.outcomes for r in a] == sorted(r.outcomes for r in a)


def test_enumerate_all_matches_count():
    rules = enumerate_models(spec("iia,ni"), 100)
    assert len(rules) == 4
    assert len({r.outcomes for r in rules}) == 4


def test_workers_agree_with_sequential():
    s = spec("iia", mode="count")
    assert solve(replace(s, workers=2)).count == solve(s).count == 94
    e = spec("wp,iia", mode="enumerate", limit=5)
    assert [r.outcomes for r in solve(replace(e, workers=2)).witnesses] == [
        r.outcomes for r in solve(e).witnesses
    ]


def test_node_budget_is_distinct_from_unsat():
    with pytest.raises(BudgetExceeded):
        solve(spec("sp,onto,!dict_scf", "scf", node_budget=3))


def test_time_budget():
    with pytest.raises(BudgetExceeded):
        solve(spec("!dict", mode="enumerate", limit=10**6, time_budget_ms=1))


def test_spec_validation():
    with pytest.raises(SearchError):
        spec("")
    with pytest.raises(SearchError):
        spec("iia", mode="enumerate")
    with pytest.raises(SearchError):
        spec("iia", mode="bogus")
    with pytest.raises(ax.UnknownAxiom):
        spec("sp", family="aswf")


def test_stats_report_prunes():
    result = solve(spec("wp,iia,!dict"))
    assert result.stats["nodes"] > 0
    assert sum(result.stats["prunes_by_axiom"].values()) > 0


literal = st.tuples(st.sampled_from(ASWF_NAMES), st.booleans())


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 5), min_size=1, max_size=2, unique=True),
    st.lists(literal, min_size=1, max_size=3, unique_by=lambda t: t[0]),
)
def test_prune_on_off_agree_aswf(indices, lits):
    domain = Domain.from_indices(3, indices)
    axioms = tuple(ax.AxiomLiteral(n, p) for n, p in lits)
    on = solve(SearchSpec("aswf", domain, 2, axioms, mode="count"))
    off = solve(SearchSpec("aswf", domain, 2, axioms, mode="count", prune=False))
    assert on.count == off.count


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 5), min_size=1, max_size=3, unique=True),
    st.lists(st.tuples(st.sampled_from(SCF_NAMES), st.booleans()), min_size=1, max_size=3,
             unique_by=lambda t: t[0]),
)
def test_prune_on_off_agree_scf(indices, lits):
    domain = Domain.from_indices(3, indices)
    axioms = tuple(ax.AxiomLiteral(n, p) for n, p in lits)
    on = solve(SearchSpec("scf", domain, 2, axioms, mode="count"))
    off = solve(SearchSpec("scf", domain, 2, axioms, mode="count", prune=False))
    assert on.count == off.count


def test_count_every_literal_combination_small_domain():
    domain = Domain.from_indices(3, [0, 5])
    for combo in itertools.product((None, True, False), repeat=3):
        axioms = tuple(ax.AxiomLiteral(n, c) for n, c in zip(["iia", "ni", "dict"], combo) if c is not None)
        if not axioms:
            continue
        on = solve(SearchSpec("aswf", domain, 2, axioms, mode="count")).count
        off = solve(SearchSpec("aswf", domain, 2, axioms, mode="count", prune=False)).count
        assert on == off
