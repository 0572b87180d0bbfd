import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choicesat import axioms as ax
from choicesat.oracles import (
    OracleTooLarge,
    count_from_signatures,
    iia_pairwise_oracle,
    iter_tables,
    oracle_count,
    oracle_rules,
    signature_counts,
)
from choicesat.prefcore import Domain
from choicesat.rules import Rule
from choicesat.search import SearchSpec, count_models

ASWF = ["wp", "iia", "ni", "dict", "antidict", "const"]
SCF = ["sp", "m", "eff", "anon", "onto", "dict_scf", "u"]


def test_tables_lexicographic():
    rows = np.concatenate(list(iter_tables(3, 2, chunk=4)))
    assert rows.tolist() == [list(t) for t in itertools.product(range(3), repeat=2)]


def test_empty_axiom_space():
    domain = Domain.from_indices(3, [0, 1])
    hist = signature_counts("aswf", domain, 2, ASWF)
    assert sum(hist.values()) == 6**4 == 1296


def test_iia_two_order_domain_matches_search():
    s = SearchSpec.build("aswf", Domain.from_indices(3, [0, 1]), 2, "iia")
    assert oracle_count(s) == count_models(s)


def test_pairwise_oracle_94():
    assert iia_pairwise_oracle(2, 3) == 94


def test_pairwise_oracle_rules_are_iia():
    rules = iia_pairwise_oracle(2, 3, rules=True)
    assert len(rules) == 94
    assert all(ax.check_iia(r).satisfied for r in rules)


def test_pairwise_oracle_single_voter():
    # one voter: each pair function is a 1-bit function; 4^3 combinations
    assert iia_pairwise_oracle(1, 3) == count_models(SearchSpec.build("aswf", Domain.full(3), 1, "iia"))


def test_guard():
    with pytest.raises(OracleTooLarge):
        oracle_count(SearchSpec.build("aswf", Domain.full(3), 2, "iia"))


def _rowwise(family, domain, literals):
    """Reference: the axiom checks, one table at a time."""
    k = {"aswf": 6, "scf": 3}[family]
    return sum(
        ax.satisfies_all(literals, Rule(family, domain, 2, t))
        for t in itertools.product(range(k), repeat=len(domain) ** 2)
    )


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["aswf", "scf"]),
    st.lists(st.integers(0, 5), min_size=1, max_size=2, unique=True),
    st.data(),
)
def test_vectorized_checks_match_reference(family, indices, data):
    names = ASWF if family == "aswf" else SCF
    lits = data.draw(st.lists(st.tuples(st.sampled_from(names), st.booleans()), min_size=1, max_size=3,
                              unique_by=lambda t: t[0]))
    domain = Domain.from_indices(3, indices)
    literals = tuple(ax.AxiomLiteral(n, p) for n, p in lits)
    spec = SearchSpec(family, domain, 2, literals)
    assert oracle_count(spec) == _rowwise(family, domain, literals)


def test_signature_histogram_answers_any_combination():
    domain = Domain.from_indices(3, [0, 5])
    hist = signature_counts("aswf", domain, 2, ASWF)
    for combo in itertools.product((None, True, False), repeat=3):
        lits = tuple(ax.AxiomLiteral(n, c) for n, c in zip(["wp", "iia", "const"], combo) if c is not None)
        if lits:
            expected = oracle_count(SearchSpec("aswf", domain, 2, lits))
            assert count_from_signatures(hist, ASWF, lits) == expected


def test_oracle_rules_scf():
    domain = Domain.from_indices(3, [0, 5])
    rules = oracle_rules(SearchSpec.build("scf", domain, 2, "dict_scf"))
    assert len(rules) == 2
