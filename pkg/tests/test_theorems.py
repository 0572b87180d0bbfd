import pytest

from choicesat import axioms as ax
from choicesat import theorems
from choicesat.prefcore import Domain, LinearOrder, single_peaked_domain
from choicesat.rules import Rule
from choicesat.theorems import (
    MedianRule,
    ScenarioError,
    is_median_rule,
    minimally_rich,
    run_query,
    run_scenario,
    scan_dictatorial_domains,
)
from choicesat.search import SearchSpec


@pytest.mark.parametrize("name", ["arrow", "wilson", "gs", "ms", "sen"])
def test_impossibility_scenarios(name):
    report = run_scenario(name)
    assert report.status == "unsat"
    assert report.matches_expectation


@pytest.mark.parametrize("name", ["arrow", "wilson", "gs", "ms", "sen", "moulin"])
def test_engines_agree(name):
    report = run_scenario(name, engine="both")
    assert report.engines_agree is True
    assert report.matches_expectation


@pytest.mark.parametrize("n", [1, 2, 3])
def test_arrow_census_is_dictatorships(n):
    report = theorems.run_arrow(n)
    assert report.count == n
    assert report.classification["census_dictators"] == list(range(n))


def test_arrow_bounds():
    with pytest.raises(ScenarioError):
        theorems.run_arrow(4)


def test_iia_census_tally():
    report = run_scenario("iia-census")
    assert report.count == 94
    assert report.classification["tally"] == {
        "constant": 6, "other": 84, "dictatorial": 2, "anti-dictatorial": 2,
    }
    assert report.matches_expectation


def test_wilson_census():
    report = run_scenario("wilson")
    assert report.count == 4
    assert report.classification["queries"]["without_null_clause"]["status"] == "unsat"


@pytest.mark.parametrize("decisive", ["weak", "strict"])
def test_sen_one_orientation_readings(decisive):
    report = run_scenario("sen", decisive=decisive)
    assert report.status == "sat"
    assert not report.matches_expectation


def test_choice_relations():
    assert theorems.choice_relation_oracle(3) == 25


def test_moulin_census():
    report = run_scenario("moulin")
    assert report.count == 3
    assert sorted(map(tuple, report.classification["phantoms"])) == [(0,), (1,), (2,)]


def test_median_min_peak():
    # phantom at the left end of the axis: the leftmost peak wins
    domain = single_peaked_domain(3)
    rule = MedianRule((0,)).to_rule(domain, 2)
    codec_profiles = [(LinearOrder.parse("bca"), LinearOrder.parse("cba"))]
    assert MedianRule((0,)).evaluate(codec_profiles[0]) == 1
    assert is_median_rule(rule) == (0,)


def test_dictatorship_is_not_median():
    domain = single_peaked_domain(3)
    rule = Rule("scf", domain, 2, tuple(list(domain)[p // 4].top for p in range(16)))
    assert ax.check_dict_scf(rule).satisfied
    assert is_median_rule(rule) is None


def test_median_arity():
    with pytest.raises(ValueError):
        MedianRule(()).evaluate([LinearOrder.parse("abc")] * 2)


def test_median_needs_single_peaked_domain():
    rule = Rule("scf", Domain.full(3), 1, tuple(o.top for o in Domain.full(3)))
    with pytest.raises(ValueError):
        is_median_rule(rule)


def test_kp_scenario():
    report = run_scenario("kp", size=5)
    assert report.status == "sat" and report.expected is None
    assert report.classification["witness_violations"] == 0


def test_unknown_scenario():
    with pytest.raises(ScenarioError):
        run_scenario("condorcet")


def test_run_query_both_reports_agreement():
    s = SearchSpec.build("aswf", Domain.full(3), 2, "iia", mode="count")
    run = run_query(s, "both")
    assert run.count == 94 and run.engines_agree


def test_minimally_rich():
    assert minimally_rich(Domain.from_words(["abc", "bca", "cab"]))
    assert not minimally_rich(Domain.from_words(["abc", "acb"]))


@pytest.fixture(scope="module")
def scan():
    return scan_dictatorial_domains()


def test_scan_covers_every_domain(scan):
    assert len(scan.classification["domains"]) == 63
    assert scan.count == len(scan.classification["dictatorial"]) == 10


def test_scan_dictatorial_domains(scan):
    cls = scan.classification
    assert Domain.full(3).words in cls["dictatorial"]
    # the rest have a single top, where any rule is a dictatorship of that top
    assert len(cls["dictatorial_single_top"]) == 9
    assert not cls["only_complete_domain"]
    assert cls["only_complete_domain_among_minimally_rich"]


def test_scan_witnesses_are_certified(scan):
    for entry in scan.classification["domains"]:
        if not entry["dictatorial"]:
            assert entry["witness"] is not None
        else:
            assert entry["sat_confirmed"]


def test_singleton_domains_are_dictatorial(scan):
    # with one order every rule picks a constant, which is that order's top for
    # every voter, so the rule coincides with every voter's dictatorship
    singles = [e for e in scan.classification["domains"] if len(e["domain"]) == 1]
    assert len(singles) == 6
    assert all(e["dictatorial"] for e in singles)
