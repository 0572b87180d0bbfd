"""Acceptance criteria 1 to 11, one summary line each (printed at the end of the run).

Set CHOICESAT_FULL_SWEEP=1 to run criterion 10 exhaustively on three-order domains
as well; that sweep takes about 80 minutes on one core.
"""

import itertools
import os
import random
import time
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from choicesat import axioms as ax
from choicesat import sat
from choicesat.cli import main as cli_main
from choicesat.oracles import count_from_signatures, iia_pairwise_oracle, signature_counts
from choicesat.prefcore import Domain, kendall_distance, single_peaked_domain
from choicesat.rules import enumerate_choice_relations, rule_from_dict
from choicesat.sat.count import count_blocking, count_components
from choicesat.search import SearchSpec, count_models, enumerate_models, solve
from choicesat.setrank import GroundSet, encode_setrank, kp_check, verify_set_witness
from choicesat.theorems import (
    SCENARIOS,
    is_median_rule,
    run_moulin,
    run_query,
    run_wilson,
    scan_dictatorial_domains,
    scenario_spec,
)

FULL = Domain.full(3)
ASWF = ["wp", "iia", "ni", "dict", "antidict", "const"]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def record(acceptance, number, passed, detail):
    acceptance[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"


def spec(axioms, family="aswf", domain=FULL, **kw):
    return SearchSpec.build(family, domain, 2, axioms, **kw)


def test_criterion_01_iia_census_three_routes(acceptance, capsys):
    with Timer() as t_search:
        by_search = count_models(spec("iia"))
    with Timer() as t_sat:
        by_blocking = count_blocking(sat.encode(spec("iia")))
    with Timer() as t_oracle:
        by_oracle = iia_pairwise_oracle(2, 3)
    assert cli_main(["count", "--axioms", "iia", "--voters", "2", "--alts", "3"]) == 0
    assert "count           94" in capsys.readouterr().out
    times = [t_search.seconds, t_sat.seconds, t_oracle.seconds]
    record(acceptance, 1, by_search == by_blocking == by_oracle == 94 and max(times) <= 60,
           f"IIA count 94 by search ({times[0]:.2f}s), blocking ({times[1]:.2f}s), pairwise oracle ({times[2]:.2f}s)")
    assert by_search == by_blocking == by_oracle == 94
    assert max(times) <= 60


def test_criterion_02_arrow(acceptance):
    with Timer() as t:
        search_status = solve(spec("wp,iia,!dict")).status
        sat_model = sat.solve_cnf(sat.encode(spec("wp,iia,!dict")))
    census = run_query(spec("wp,iia", mode="count"), "both")
    ok = search_status == "unsat" and sat_model is None and census.count == 2 and census.engines_agree
    record(acceptance, 2, ok and t.seconds <= 10,
           f"WP+IIA+!dict unsat on both engines in {t.seconds:.2f}s; WP+IIA census {census.count}")
    assert ok and t.seconds <= 10


def test_criterion_03_wilson(acceptance):
    report = run_wilson(engine="both")
    kinds = sorted(report.classification["census_kinds"])
    direct = solve(spec("iia,ni,!dict,!antidict")).status
    ok = (
        report.count == 4
        and kinds == ["anti-dictatorial", "anti-dictatorial", "dictatorial", "dictatorial"]
        and direct == "unsat"
        and report.engines_agree
    )
    record(acceptance, 3, ok, "IIA+NI census 4 = 2 dictatorships + 2 anti-dictatorships; IIA+NI+!dict+!antidict unsat")
    assert ok


def test_criterion_04_structure_of_the_94(acceptance):
    rules = enumerate_models(spec("iia"), 1000)
    assert len(rules) == 94
    rest = [
        r for r in rules
        if ax.check_dictatorial(r).violated and ax.check_antidictatorial(r).violated
    ]
    worst_range = worst_kendall = 0
    for r in rest:
        outputs = {r.order_at(c) for c in range(len(r))}
        worst_range = max(worst_range, len(outputs))
        worst_kendall = max(
            [worst_kendall] + [kendall_distance(p, q) for p, q in itertools.combinations(outputs, 2)]
        )
    ok = len(rest) == 90 and worst_range <= 2 and worst_kendall <= 1
    record(acceptance, 4, ok,
           f"{len(rest)} non-(anti)dictatorial IIA rules: max range {worst_range}, max Kendall {worst_kendall}")
    assert ok


def _brute_choice_relations():
    subsets = [s for r in range(1, 4) for s in itertools.combinations(range(3), r)]
    count = 0
    for cells in itertools.product((False, True), repeat=9):
        rel = {(a, b) for a in range(3) for b in range(3) if cells[3 * a + b]}
        count += all(any(all((x, y) in rel for y in s) for x in s) for s in subsets)
    return count


def test_criterion_05_sen(acceptance):
    with Timer() as t:
        run = run_query(spec("u,liberal", "sdf"), "both")
    brute = _brute_choice_relations()
    relations = len(enumerate_choice_relations(3))
    # the single-orientation readings admit a witness (social ties absorb the conflict)
    one_way = {mode: run_query(spec("u,liberal", "sdf", decisive=mode), "both").status
               for mode in ("weak", "strict")}
    ok = run.status == "unsat" and run.engines_agree and relations == brute == 25 and t.seconds <= 60
    record(acceptance, 5, ok,
           f"SDF U+LIBERAL unsat on both engines in {t.seconds:.2f}s with pair decisiveness"
           f" (single-orientation readings: {one_way}); {relations} choice relations (brute force {brute})")
    assert ok
    assert one_way == {"weak": "sat", "strict": "sat"}


def test_criterion_06_gs_ms(acceptance):
    gs = run_query(spec("sp,onto,!dict_scf", "scf"), "both")
    ms = run_query(spec("eff,m,!dict_scf", "scf"), "both")
    census = run_query(spec("sp,onto", "scf", mode="count"), "both")
    ok = gs.status == ms.status == "unsat" and census.count == 2 and gs.engines_agree and ms.engines_agree
    record(acceptance, 6, ok, f"SP+ONTO+!dict unsat; EFF+M+!dict unsat; SP+ONTO census {census.count}")
    assert ok


def test_criterion_07_set_ranking(acceptance):
    with Timer() as t6:
        six = kp_check(6)
    with Timer() as t5:
        five = kp_check(5)
    ok = (
        six.status == "unsat" and t6.seconds <= 600
        and five.status == "sat" and verify_set_witness(five.witness) == [] and t5.seconds <= 60
    )
    record(acceptance, 7, ok,
           f"size 6 unsat in {t6.seconds:.2f}s; size 5 sat with a verified witness in {t5.seconds:.2f}s")
    assert ok


def test_criterion_08_dictatorial_domains(acceptance):
    with Timer() as t:
        report = scan_dictatorial_domains(engine="search")
    cls = report.classification
    for entry in cls["domains"]:
        if entry["dictatorial"]:
            assert entry["sat_confirmed"]
        else:
            w = rule_from_dict(entry["witness"])
            assert w.domain.words == entry["domain"]
            assert ax.check_sp(w).satisfied and ax.check_u_scf(w).satisfied
            assert ax.check_dict_scf(w).violated
    # the literal claim (complete domain alone) does not hold: the nine domains with a
    # single top are trivially dictatorial; restricted to minimally rich domains it holds
    literal = cls["only_complete_domain"]
    record(
        acceptance, 8, literal,
        f"{len(cls['dictatorial'])} dictatorial domains, not just the complete one: the other"
        f" {len(cls['dictatorial_single_top'])} have a single top. Among minimally rich domains only the"
        f" complete one is dictatorial ({cls['only_complete_domain_among_minimally_rich']}); scan {t.seconds:.2f}s",
    )
    assert len(cls["dictatorial"]) == 10
    assert len(cls["dictatorial_single_top"]) == 9
    assert cls["only_complete_domain_among_minimally_rich"]
    assert t.seconds <= 1800


def test_criterion_09_moulin(acceptance):
    with Timer() as t:
        report = run_moulin(brute_force=True)
    rules = [rule_from_dict(w) for w in report.witnesses]
    ok = (
        report.count == 3
        and all(is_median_rule(r) is not None for r in rules)
        and report.checks["every_median_is_member"]
        and report.classification["brute_force_count"] == 3
        and report.checks["brute_force_agrees"]
        and t.seconds <= 60
    )
    record(acceptance, 9, ok, f"census 3, all median rules, phantoms {report.classification['phantoms']};"
                              f" 3^16 brute force agrees in {t.seconds:.2f}s")
    assert ok


# criterion 10


def _literal_sets():
    for combo in itertools.product((None, True, False), repeat=len(ASWF)):
        lits = tuple(ax.AxiomLiteral(n, c) for n, c in zip(ASWF, combo) if c is not None)
        if lits:
            yield lits


LITERAL_SETS = list(_literal_sets())


def _domains(size):
    return [Domain.from_indices(3, c) for c in itertools.combinations(range(6), size)]


@lru_cache(maxsize=None)
def _histogram(indices):
    return signature_counts("aswf", Domain.from_indices(3, indices), 2, ASWF)


def _three_way(domain, lits):
    s = SearchSpec("aswf", domain, 2, lits)
    oracle = count_from_signatures(_histogram(domain.indices), ASWF, lits)
    return oracle, count_models(s), count_components(sat.encode(s))


SWEEP = {"exhaustive": 0, "prune_off": 0, "sampled": 0, "mismatches": []}


def test_criterion_10_exhaustive_small_domains():
    for domain in _domains(1) + _domains(2):
        for lits in LITERAL_SETS:
            counts = _three_way(domain, lits)
            SWEEP["exhaustive"] += 1
            if len(set(counts)) != 1:
                SWEEP["mismatches"].append((domain.words, lits, counts))
    assert SWEEP["exhaustive"] == 21 * 728
    assert SWEEP["mismatches"] == []


def test_criterion_10_prune_off_statuses():
    rng = random.Random(2024)
    jobs = [(d, lits) for d in _domains(1) + _domains(2) for lits in LITERAL_SETS]
    for domain, lits in rng.sample(jobs, 1000):
        on = solve(SearchSpec("aswf", domain, 2, lits)).status
        off = solve(SearchSpec("aswf", domain, 2, lits, prune=False)).status
        SWEEP["prune_off"] += 1
        if on != off:
            SWEEP["mismatches"].append((domain.words, lits, (on, off)))
    assert SWEEP["mismatches"] == []


@settings(max_examples=20, deadline=None, derandomize=True,
          suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(_domains(3)), st.sampled_from(LITERAL_SETS))
def test_criterion_10_sampled_three_order_domains(domain, lits):
    counts = _three_way(domain, lits)
    SWEEP["sampled"] += 1
    if len(set(counts)) != 1:
        SWEEP["mismatches"].append((domain.words, lits, counts))
    assert len(set(counts)) == 1


@pytest.mark.skipif(not os.environ.get("CHOICESAT_FULL_SWEEP"), reason="set CHOICESAT_FULL_SWEEP=1")
def test_criterion_10_full_three_order_domains():
    for domain in _domains(3):
        for lits in LITERAL_SETS:
            counts = _three_way(domain, lits)
            SWEEP["exhaustive"] += 1
            if len(set(counts)) != 1:
                SWEEP["mismatches"].append((domain.words, lits, counts))
    assert SWEEP["mismatches"] == []


def test_criterion_10_summary(acceptance):
    full = SWEEP["exhaustive"] == 41 * 728
    scope = (
        "exhaustive over all 41 domains with |D| <= 3" if full else
        f"exhaustive over 21 domains with |D| <= 2 ({SWEEP['exhaustive']} queries),"
        f" {SWEEP['sampled']} sampled |D| = 3 queries (full sweep: CHOICESAT_FULL_SWEEP=1)"
    )
    ok = not SWEEP["mismatches"] and SWEEP["exhaustive"] >= 21 * 728 and SWEEP["prune_off"] == 1000
    record(acceptance, 10, ok,
           f"search = SAT = brute force, {scope}; prune on/off statuses agree on {SWEEP['prune_off']} sampled queries")
    assert ok


def test_criterion_11_soundness(acceptance, witness_audit, tmp_path):
    exported = 0
    for name in SCENARIOS:
        if name == "dict-domains":
            formulas = [sat.encode(SearchSpec.build("scf", d, 2, "sp,u,!dict_scf"))
                        for d in (FULL, single_peaked_domain(3))]
        elif name == "kp":
            formulas = [encode_setrank(GroundSet(k)) for k in (3, 6)]
        else:
            formulas = [sat.encode(scenario_spec(name))]
        for f in formulas:
            data = sat.write_dimacs(f)
            back = sat.parse_dimacs(data)
            assert back == f and sat.write_dimacs(back) == data
            exported += 1
    # an exported formula solved and checked through the command-line path
    cnf, model = tmp_path / "moulin.cnf", tmp_path / "moulin.model"
    assert cli_main(["cnf-export", "--scenario", "moulin", "--out", str(cnf)]) == 0
    f = sat.parse_dimacs(cnf.read_bytes())
    model.write_text(sat.write_model(sat.solve_cnf(f)))
    assert cli_main(["cnf-check", str(cnf), str(model), "--out", str(tmp_path / "report")]) == 0

    audited = witness_audit["rule"] + witness_audit["setrank"]
    ok = not witness_audit["failures"] and audited > 0
    record(acceptance, 11, ok,
           f"{audited} witnesses emitted so far in the suite all pass the independent check;"
           f" DIMACS write/parse identity on {exported} exported formulas")
    assert ok
