import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choicesat import axioms as ax
from choicesat.axioms import AxiomLiteral, Status, evaluate, replay
from choicesat.prefcore import Domain, LinearOrder, ProfileCodec, order_by_index, single_peaked_domain
from choicesat.rules import (
    PartialRule,
    Rule,
    aswf_antidictatorship,
    aswf_constant,
    aswf_dictatorship,
    outcome_count,
    scf_constant,
    scf_dictatorship,
    sdf_from_voter,
)

FULL = Domain.full(3)
ABC = LinearOrder.parse("abc")

NAMES = {
    "aswf": ["wp", "iia", "ni", "dict", "antidict", "const"],
    "scf": ["sp", "m", "eff", "anon", "onto", "dict_scf", "u"],
    "sdf": ["u", "liberal"],
}


def test_dictatorship_profile():
    d = aswf_dictatorship(FULL, 2, 0)
    for name in ("wp", "iia", "ni", "dict"):
        assert evaluate(AxiomLiteral(name), d).satisfied
    assert evaluate(AxiomLiteral("antidict"), d).violated
    assert evaluate(AxiomLiteral("const"), d).violated


def test_constant_rule_fails_wp_and_ni():
    c = aswf_constant(FULL, 2, ABC)
    assert ax.check_iia(c).satisfied
    wp = ax.check_wp(c)
    assert wp.violated and replay(wp.certificate, c)
    ni = ax.check_ni(c)
    assert ni.violated and replay(ni.certificate, c)


def test_antidictatorship_violates_wp():
    a = aswf_antidictatorship(FULL, 2, 1)
    assert ax.check_iia(a).satisfied and ax.check_ni(a).satisfied
    assert ax.check_wp(a).violated


def test_scf_dictatorship_is_sp_and_onto():
    d = scf_dictatorship(FULL, 2, 1)
    for name in ("sp", "onto", "eff", "m", "u"):
        assert evaluate(AxiomLiteral(name), d).satisfied
    assert ax.check_dict_scf(d).witness == 1
    assert ax.check_anon(d).violated


def test_constant_scf():
    c = scf_constant(FULL, 2, 0)
    assert ax.check_sp(c).satisfied
    assert ax.check_onto(c).violated
    assert ax.check_u_scf(c).violated


def test_min_peak_rule_is_median_like():
    sp = single_peaked_domain(3)
    codec = ProfileCodec(sp, 2)
    rule = Rule("scf", sp, 2, tuple(min(o.top for o in codec.decode(p)) for p in range(codec.size)))
    for name in ("sp", "anon", "eff"):
        assert evaluate(AxiomLiteral(name), rule).satisfied


def test_sdf_voter_closure():
    r = sdf_from_voter(FULL, 2, 0)
    assert ax.check_u_sdf(r).satisfied
    # a single voter copied everywhere is decisive on every pair; the other is not
    assert ax.check_liberal(r).violated
    assert replay(ax.check_liberal(r).certificate, r)


@pytest.mark.parametrize("mode", ax.DECISIVENESS)
def test_decisive_modes_listed(mode):
    cands = ax.decisive_pairs(3, mode)
    assert len(cands) == (3 if mode == "pair" else 6)


def test_unknown_axiom_lists_names():
    with pytest.raises(ax.UnknownAxiom, match="accepted"):
        AxiomLiteral.parse("bogus")
    with pytest.raises(ax.UnknownAxiom):
        AxiomLiteral("sp").axiom("aswf")


def test_parse_negation():
    lits = ax.parse_axioms("wp, !dict")
    assert lits == (AxiomLiteral("wp"), AxiomLiteral("dict", False))
    assert str(lits[1]) == "!dict"


def test_negated_certificate_replays():
    d = aswf_dictatorship(FULL, 2, 0)
    v = evaluate(AxiomLiteral("dict", False), d)
    assert v.violated and replay(v.certificate, d)
    assert not replay(v.certificate, aswf_constant(FULL, 2, ABC))


def test_confirm_reports_failures():
    d = aswf_dictatorship(FULL, 2, 0)
    assert ax.confirm(ax.parse_axioms("wp,iia,dict"), d) == []
    assert ax.confirm(ax.parse_axioms("wp,!dict,const"), d) == ["!dict", "const"]


def _random_partial(family, domain, rng, holes):
    k = outcome_count(family, domain.m)
    cells = len(domain) ** 2
    outcomes = [rng.randrange(k) for _ in range(cells)]
    for c in rng.sample(range(cells), min(holes, cells)):
        outcomes[c] = None
    return PartialRule(family, domain, 2, tuple(outcomes))


def _completions(partial, rng, count):
    k = outcome_count(partial.family, partial.m)
    for _ in range(count):
        yield Rule(
            partial.family,
            partial.domain,
            partial.n,
            tuple(rng.randrange(k) if v is None else v for v in partial.outcomes),
        )


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(["aswf", "scf", "sdf"]),
    st.integers(1, 3),
    st.integers(0, 9),
    st.integers(0, 10**9),
    st.booleans(),
)
def test_tri_state_is_monotone(family, size, holes, seed, positive):
    """A decided verdict on a partial table holds for every completion."""
    rng = random.Random(seed)
    domain = Domain.from_indices(3, rng.sample(range(6), size))
    partial = _random_partial(family, domain, rng, holes)
    name = rng.choice(NAMES[family])
    lit = AxiomLiteral(name, positive)
    verdict = evaluate(lit, partial)
    if verdict.status is Status.UNDETERMINED:
        return
    if verdict.violated:
        assert replay(verdict.certificate, partial)
    for rule in _completions(partial, rng, 5):
        assert evaluate(lit, rule).status is verdict.status


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["aswf", "scf", "sdf"]), st.integers(1, 4), st.integers(0, 10**9))
def test_certificates_replay_on_total_rules(family, size, seed):
    rng = random.Random(seed)
    domain = Domain.from_indices(3, rng.sample(range(6), size))
    rule = next(_completions(PartialRule.empty(family, domain, 2), rng, 1))
    for name in NAMES[family]:
        for positive in (True, False):
            v = evaluate(AxiomLiteral(name, positive), rule)
            assert v.status is not Status.UNDETERMINED
            if v.violated:
                assert replay(v.certificate, rule)


def test_replay_rejects_forged_certificate():
    d = aswf_dictatorship(FULL, 2, 0)
    forged = ax.Certificate("wp", (0,), {"pair": [0, 1]})
    assert not replay(forged, d)


def test_sp_domain_must_match():
    rule = scf_dictatorship(FULL, 2, 0)
    with pytest.raises(ValueError):
        ax.check_sp(rule, single_peaked_domain(3))


def test_family_mismatch():
    with pytest.raises(ValueError):
        ax.check_wp(scf_constant(FULL, 2, 0))


def test_order_index_helper():
    assert str(order_by_index(3, 5)) == "cba"
