"""Named scenarios: impossibility base cases, censuses and scans.

Each ``run_*`` function returns a :class:`ScenarioReport`.  The ``engine``
argument picks backtracking search (``"search"``), the SAT encoding
(``"sat"``) or both with an agreement check (``"both"``).  Every witness in
a report has been re-checked against the axiom definitions.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import audit
from . import axioms as ax
from . import sat
from .prefcore import (
    Domain,
    LinearOrder,
    ProfileCodec,
    enumerate_orders,
    is_single_peaked,
    kendall_distance,
    single_peaked_domain,
)
from .rules import Rule, enumerate_choice_relations, generates_choice, rule_to_dict
from .search import SearchSpec, solve
from .setrank import kp_check

ENGINES = ("search", "sat", "both")
# blocking-clause enumeration is used up to this many models; larger spaces
# are counted with the component counter
BLOCKING_LIMIT = 5000


class ScenarioError(ValueError):
    pass


class EngineDisagreement(AssertionError):
    pass


@dataclass
class EngineRun:
    status: str
    count: Optional[int] = None
    witnesses: list[Rule] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    engines_agree: Optional[bool] = None


def _check_witnesses(spec: SearchSpec, rules: Sequence[Rule]) -> None:
    for rule in rules:
        failed = ax.confirm(spec.axioms, rule, spec.decisive)
        if failed:
            raise AssertionError(f"witness fails {failed} under the axiom definitions")
        audit.emit("rule", rule, literals=spec.axioms, decisive=spec.decisive)


def _sat_run(spec: SearchSpec) -> EngineRun:
    start = time.perf_counter()
    f = sat.encode(spec)
    options = {}
    if spec.node_budget is not None:
        options["conflict_budget"] = spec.node_budget
    if spec.time_budget_ms is not None:
        options["time_budget_ms"] = spec.time_budget_ms
    stats = {"variables": f.num_vars, "clauses": len(f.clauses)}
    count = None
    if spec.mode == "decide":
        solver = sat.Solver(f.num_vars, f.clauses, **options)
        model = solver.solve()
        stats.update(solver.stats())
        witnesses = [] if model is None else [sat.decode_model(f, model)]
        status = "sat" if witnesses else "unsat"
    elif spec.mode == "enumerate":
        witnesses = [sat.decode_model(f, mdl) for mdl in sat.iter_models(f, spec.limit, **options)]
        status = "sat" if witnesses else "unsat"
    else:
        witnesses = []
        models = list(itertools.islice(sat.iter_models(f, **options), BLOCKING_LIMIT + 1))
        if len(models) <= BLOCKING_LIMIT:
            count = len(models)
            stats["count_method"] = "blocking"
        else:
            count = sat.count_components(f)
            stats["count_method"] = "components"
        status = "sat" if count else "unsat"
    _check_witnesses(spec, witnesses)
    stats["nodes"] = stats.get("decisions", 0)
    stats["time_ms"] = round((time.perf_counter() - start) * 1000)
    stats["workers"] = 1
    return EngineRun(status, count, witnesses, stats)


def _search_run(spec: SearchSpec) -> EngineRun:
    result = solve(spec)
    return EngineRun(result.status, result.count, list(result.witnesses), dict(result.stats))


def run_query(spec: SearchSpec, engine: str = "search") -> EngineRun:
    """Decide, count or enumerate ``spec`` on the chosen engine(s)."""
    if engine not in ENGINES:
        raise ScenarioError(f"engine must be one of {ENGINES}")
    if engine == "search":
        return _search_run(spec)
    if engine == "sat":
        return _sat_run(spec)
    a, b = _search_run(spec), _sat_run(spec)
    agree = a.status == b.status and a.count == b.count
    if spec.mode == "enumerate":
        agree = agree and len(a.witnesses) == len(b.witnesses)
        if len(a.witnesses) < (spec.limit or 0):
            agree = agree and {w.outcomes for w in a.witnesses} == {w.outcomes for w in b.witnesses}
    stats = {
        "nodes": a.stats.get("nodes", 0),
        "time_ms": a.stats.get("time_ms", 0) + b.stats.get("time_ms", 0),
        "workers": a.stats.get("workers", 1),
        "search": a.stats,
        "sat": b.stats,
    }
    return EngineRun(a.status, a.count, a.witnesses, stats, agree)


@dataclass
class ScenarioReport:
    scenario: str
    params: dict
    status: str
    count: Optional[int] = None
    witnesses: list = field(default_factory=list)
    classification: Optional[dict] = None
    stats: dict = field(default_factory=dict)
    engines_agree: Optional[bool] = None
    expected: Optional[str] = None
    checks: dict = field(default_factory=dict)

    @property
    def matches_expectation(self) -> bool:
        """True unless a registered expectation or internal check is contradicted."""
        if self.expected is not None and self.status != self.expected:
            return False
        if self.engines_agree is False:
            return False
        return all(self.checks.values())

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "params": self.params,
            "status": self.status,
            "count": self.count,
            "witnesses": self.witnesses,
            "classification": self.classification,
            "stats": self.stats,
            "engines_agree": self.engines_agree,
        }
        if self.expected is not None:
            out["expected"] = self.expected
        if self.checks:
            out["checks"] = self.checks
        return out


class _Runner:
    """Accumulates the engine runs of one scenario."""

    def __init__(self, engine: str, node_budget=None, time_budget_ms=None, workers=1, decisive="pair"):
        if engine not in ENGINES:
            raise ScenarioError(f"engine must be one of {ENGINES}")
        self.engine = engine
        self.opts = dict(
            node_budget=node_budget, time_budget_ms=time_budget_ms, workers=workers, decisive=decisive
        )
        self.agree: Optional[bool] = None if engine != "both" else True
        self.nodes = 0
        self.start = time.perf_counter()
        self.workers = workers
        self.runs: dict[str, dict] = {}

    def __call__(self, label, family, domain, n, axioms, mode="decide", limit=None) -> EngineRun:
        spec = SearchSpec.build(family, domain, n, axioms, mode=mode, limit=limit, **self.opts)
        run = run_query(spec, self.engine)
        if run.engines_agree is not None:
            self.agree = self.agree and run.engines_agree
        self.nodes += run.stats.get("nodes", 0)
        self.runs[label] = {"axioms": ",".join(map(str, spec.axioms)), "status": run.status}
        if run.count is not None:
            self.runs[label]["count"] = run.count
        return run

    def stats(self) -> dict:
        return {
            "nodes": self.nodes,
            "time_ms": round((time.perf_counter() - self.start) * 1000),
            "workers": self.workers,
        }


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioError(message)


def _census(run: _Runner, label, family, domain, n, axioms, limit=10000) -> list[Rule]:
    return run(label, family, domain, n, axioms, mode="enumerate", limit=limit).witnesses


def _voter_of(rule: Rule, name: str) -> Optional[int]:
    verdict = ax.evaluate(ax.AxiomLiteral(name), rule)
    return verdict.witness if verdict.satisfied else None


# ASWF scenarios


def run_arrow(n: int = 2, m: int = 3, engine: str = "search", **opts) -> ScenarioReport:
    _require(1 <= n <= 3 and m == 3, "arrow runs at desk scale: 1 <= n <= 3, m = 3")
    run = _Runner(engine, **opts)
    domain = Domain.full(m)
    main = run("main", "aswf", domain, n, "wp,iia,!dict")
    census = _census(run, "census", "aswf", domain, n, "wp,iia")
    dictators = sorted(_voter_of(r, "dict") for r in census if _voter_of(r, "dict") is not None)
    checks = {
        "main_unsat": main.status == "unsat",
        "census_is_the_dictatorships": len(census) == n and dictators == list(range(n)),
    }
    return ScenarioReport(
        "arrow", {"n": n, "m": m, "engine": engine}, main.status, len(census),
        [rule_to_dict(r) for r in census],
        {"queries": run.runs, "census_dictators": dictators},
        run.stats(), run.agree, "unsat", checks,
    )


def classify_iia_rule(rule: Rule) -> dict:
    dictator = _voter_of(rule, "dict")
    if dictator is not None:
        return {"kind": "dictatorial", "voter": dictator}
    anti = _voter_of(rule, "antidict")
    if anti is not None:
        return {"kind": "anti-dictatorial", "voter": anti}
    orders = [rule.order_at(c) for c in range(len(rule))]
    rng = sorted({o.index for o in orders})
    rep = {o.index: o for o in orders}
    spread = max((kendall_distance(rep[a], rep[b]) for a, b in itertools.combinations(rng, 2)), default=0)
    kind = "constant" if len(rng) == 1 else "other"
    return {"kind": kind, "range": [str(rep[i]) for i in rng], "range_size": len(rng), "max_kendall": spread}


def run_iia_census(n: int = 2, m: int = 3, engine: str = "search", **opts) -> ScenarioReport:
    _require((n, m) == (2, 3), "the IIA census is defined at n = 2, m = 3")
    from .oracles import iia_pairwise_oracle

    run = _Runner(engine, **opts)
    rules = _census(run, "census", "aswf", Domain.full(m), n, "iia")
    kinds = [classify_iia_rule(r) for r in rules]
    tally: dict[str, int] = {}
    for k in kinds:
        tally[k["kind"]] = tally.get(k["kind"], 0) + 1
    rest = [k for k in kinds if k["kind"] not in ("dictatorial", "anti-dictatorial")]
    oracle = iia_pairwise_oracle(n, m)
    checks = {
        "count_94": len(rules) == 94,
        "pairwise_oracle_agrees": oracle == len(rules),
        "two_dictatorships": tally.get("dictatorial", 0) == 2,
        "two_anti_dictatorships": tally.get("anti-dictatorial", 0) == 2,
        "others_range_at_most_two": all(k["range_size"] <= 2 for k in rest),
        "others_kendall_at_most_one": all(k["max_kendall"] <= 1 for k in rest),
    }
    classification = {
        "tally": tally,
        "pairwise_oracle_count": oracle,
        "range_sizes": sorted({k["range_size"] for k in rest}),
        "max_kendall": max((k["max_kendall"] for k in rest), default=0),
        "members": kinds,
    }
    return ScenarioReport(
        "iia-census", {"n": n, "m": m, "engine": engine}, "sat" if rules else "unsat", len(rules),
        [rule_to_dict(r) for r in rules], classification, run.stats(), run.agree, "sat", checks,
    )


def run_wilson(n: int = 2, m: int = 3, engine: str = "search", **opts) -> ScenarioReport:
    _require((n, m) == (2, 3), "wilson runs at n = 2, m = 3")
    run = _Runner(engine, **opts)
    domain = Domain.full(m)
    main = run("main", "aswf", domain, n, "iia,ni,!dict,!antidict,!const")
    variant = run("without_null_clause", "aswf", domain, n, "iia,ni,!dict,!antidict")
    census = _census(run, "census", "aswf", domain, n, "iia,ni")
    kinds = [classify_iia_rule(r)["kind"] for r in census]
    checks = {
        "main_unsat": main.status == "unsat",
        "variant_unsat": variant.status == "unsat",
        "census_two_dict_two_antidict": sorted(kinds)
        == ["anti-dictatorial", "anti-dictatorial", "dictatorial", "dictatorial"],
    }
    return ScenarioReport(
        "wilson", {"n": n, "m": m, "engine": engine}, main.status, len(census),
        [rule_to_dict(r) for r in census], {"queries": run.runs, "census_kinds": kinds},
        run.stats(), run.agree, "unsat", checks,
    )


# SDF


def choice_relation_oracle(m: int = 3) -> int:
    """Relations generating a choice function, by testing all 2^(m*m) relations."""
    return sum(generates_choice(m, bits) for bits in range(1 << (m * m)))


def run_sen(n: int = 2, m: int = 3, engine: str = "search", decisive: str = "pair", **opts) -> ScenarioReport:
    _require((n, m) == (2, 3), "sen runs at n = 2, m = 3")
    run = _Runner(engine, decisive=decisive, **opts)
    domain = Domain.full(m)
    main = run("main", "sdf", domain, n, "u,liberal")
    u_only = run("u_only", "sdf", domain, n, "u")
    lib_only = run("liberal_only", "sdf", domain, n, "liberal")
    relations = len(enumerate_choice_relations(m))
    oracle = choice_relation_oracle(m)
    checks = {
        "main_unsat": main.status == "unsat",
        "u_alone_sat": u_only.status == "sat",
        "liberal_alone_sat": lib_only.status == "sat",
        "relation_count_matches_brute_force": relations == oracle,
    }
    witnesses = [rule_to_dict(r) for r in u_only.witnesses + lib_only.witnesses]
    return ScenarioReport(
        "sen", {"n": n, "m": m, "engine": engine, "decisive": decisive}, main.status, None, witnesses,
        {"queries": run.runs, "choice_relations": relations, "choice_relations_brute_force": oracle},
        run.stats(), run.agree, "unsat", checks,
    )


# SCF


def run_gs(n: int = 2, m: int = 3, engine: str = "search", **opts) -> ScenarioReport:
    _require((n, m) == (2, 3), "gs runs at n = 2, m = 3")
    run = _Runner(engine, **opts)
    domain = Domain.full(m)
    main = run("main", "scf", domain, n, "sp,onto,!dict_scf")
    census = _census(run, "census", "scf", domain, n, "sp,onto")
    dictators = sorted(v for v in (_voter_of(r, "dict_scf") for r in census) if v is not None)
    checks = {
        "main_unsat": main.status == "unsat",
        "census_is_the_dictatorships": len(census) == n and dictators == list(range(n)),
    }
    return ScenarioReport(
        "gs", {"n": n, "m": m, "engine": engine}, main.status, len(census),
        [rule_to_dict(r) for r in census], {"queries": run.runs, "census_dictators": dictators},
        run.stats(), run.agree, "unsat", checks,
    )


def run_ms(n: int = 2, m: int = 3, engine: str = "search", **opts) -> ScenarioReport:
    _require((n, m) == (2, 3), "ms runs at n = 2, m = 3")
    run = _Runner(engine, **opts)
    main = run("main", "scf", Domain.full(m), n, "eff,m,!dict_scf")
    return ScenarioReport(
        "ms", {"n": n, "m": m, "engine": engine}, main.status, None, [], {"queries": run.runs},
        run.stats(), run.agree, "unsat", {"main_unsat": main.status == "unsat"},
    )


@dataclass(frozen=True)
class MedianRule:
    """Median of the voters' peaks and ``n - 1`` phantom alternatives along an axis."""

    phantoms: tuple[int, ...]
    axis: Optional[LinearOrder] = None  # left-to-right; default a, b, c, ...

    def _pos(self, m: int) -> tuple[int, ...]:
        return self.axis.rank if self.axis is not None else tuple(range(m))

    def evaluate(self, profile: Sequence[LinearOrder]) -> int:
        if len(self.phantoms) != len(profile) - 1:
            raise ValueError(f"{len(profile)} voters need {len(profile) - 1} phantoms")
        m = profile[0].m
        pos = self._pos(m)
        points = sorted([pos[o.top] for o in profile] + [pos[a] for a in self.phantoms])
        median = points[len(points) // 2]
        return pos.index(median)

    def to_rule(self, domain: Domain, n: int) -> Rule:
        codec = ProfileCodec(domain, n)
        return Rule("scf", domain, n, tuple(self.evaluate(codec.decode(p)) for p in range(codec.size)))


def is_median_rule(rule: Rule, axis: Optional[LinearOrder] = None) -> Optional[tuple[int, ...]]:
    """Phantoms (over the alternatives) reproducing ``rule`` everywhere, or None."""
    if rule.family != "scf":
        raise ValueError("median rules are social choice functions")
    if not all(is_single_peaked(o, axis) for o in rule.domain):
        raise ValueError("median rules need a single-peaked domain")
    for phantoms in itertools.product(range(rule.m), repeat=rule.n - 1):
        if MedianRule(phantoms, axis).to_rule(rule.domain, rule.n).outcomes == rule.outcomes:
            return phantoms
    return None


def run_moulin(n: int = 2, m: int = 3, engine: str = "search", brute_force: bool = False, **opts) -> ScenarioReport:
    _require((n, m) == (2, 3), "moulin runs at n = 2, m = 3")
    run = _Runner(engine, **opts)
    domain = single_peaked_domain(m)
    census = _census(run, "census", "scf", domain, n, "anon,eff,sp")
    matched = [is_median_rule(r) for r in census]
    members = {r.outcomes for r in census}
    medians = {
        phantoms: MedianRule(phantoms).to_rule(domain, n)
        for phantoms in itertools.product(range(m), repeat=n - 1)
    }
    checks = {
        "census_three": len(census) == 3,
        "every_member_is_median": all(p is not None for p in matched),
        "every_median_is_member": all(r.outcomes in members for r in medians.values()),
    }
    classification = {
        "domain": domain.words,
        "phantoms": [list(p) if p is not None else None for p in matched],
    }
    if brute_force:
        from .oracles import oracle_rules

        spec = SearchSpec.build("scf", domain, n, "anon,eff,sp")
        brute = {r.outcomes for r in oracle_rules(spec)}
        classification["brute_force_count"] = len(brute)
        checks["brute_force_agrees"] = brute == members
    return ScenarioReport(
        "moulin", {"n": n, "m": m, "engine": engine}, "sat" if census else "unsat", len(census),
        [rule_to_dict(r) for r in census], classification, run.stats(), run.agree, "sat", checks,
    )


# set ranking


def run_kp(size: int = 6, gf: bool = True, ind: bool = True, time_budget_ms=None, node_budget=None, **_) -> ScenarioReport:
    start = time.perf_counter()
    options = {}
    if time_budget_ms is not None:
        options["time_budget_ms"] = time_budget_ms
    if node_budget is not None:
        options["conflict_budget"] = node_budget
    result = kp_check(size, gf, ind, **options)
    stats = dict(result.stats, nodes=result.stats.get("decisions", 0),
                 time_ms=round((time.perf_counter() - start) * 1000), workers=1)
    expected = "unsat" if size >= 6 and gf and ind else None
    witnesses = [result.witness.to_json()] if result.witness is not None else []
    return ScenarioReport(
        "kp", {"size": size, "gf": gf, "ind": ind}, result.status, None, witnesses,
        {"witness_violations": len(result.violations)}, stats, None, expected,
    )


# dictatorial domains


def minimally_rich(domain: Domain) -> bool:
    return {o.top for o in domain} == set(range(domain.m))


def _scan_one(args) -> dict:
    mask, m, n, engine, opts = args
    orders = enumerate_orders(m)
    domain = Domain(m, tuple(o for o in orders if mask >> o.index & 1))
    spec = SearchSpec.build("scf", domain, n, "sp,u,!dict_scf", **opts)
    run = run_query(spec, engine)
    entry = {"domain": domain.words, "dictatorial": run.status == "unsat", "witness": None}
    if run.status == "sat":
        w = run.witnesses[0]
        ok = (
            ax.check_sp(w).satisfied
            and ax.check_u_scf(w).satisfied
            and ax.check_dict_scf(w).violated
        )
        if not ok:
            raise AssertionError(f"scan witness for {domain} fails its certificate check")
        entry["witness"] = rule_to_dict(w)
    elif engine == "search":
        # every Unsat is confirmed on the SAT engine as well
        if sat.solve_cnf(sat.encode(spec)) is not None:
            raise EngineDisagreement(f"SAT engine finds a witness on {domain}")
        entry["sat_confirmed"] = True
    else:
        entry["sat_confirmed"] = True
    entry["engines_agree"] = run.engines_agree
    return entry


def scan_dictatorial_domains(
    m: int = 3, n: int = 2, engine: str = "search", workers: int = 1, **opts
) -> ScenarioReport:
    """Decide {SP, tops-unanimity, not dictatorial} on every non-empty domain."""
    _require((m, n) == (3, 2), "the domain scan runs at m = 3, n = 2")
    _require(engine in ENGINES, f"engine must be one of {ENGINES}")
    start = time.perf_counter()
    opts = {k: v for k, v in opts.items() if k in ("node_budget", "time_budget_ms", "decisive")}
    jobs = [(mask, m, n, engine, opts) for mask in range(1, 1 << len(enumerate_orders(m)))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_scan_one, jobs))
    else:
        entries = [_scan_one(job) for job in jobs]
    full = Domain.full(m).words
    dictatorial = [e["domain"] for e in entries if e["dictatorial"]]
    rich = [d for d in dictatorial if minimally_rich(Domain.from_words(d))]
    single_top = [d for d in dictatorial if len({w[0] for w in d}) == 1]
    agree = None if engine != "both" else all(e["engines_agree"] for e in entries)
    classification = {
        "domains": entries,
        "dictatorial": dictatorial,
        "dictatorial_minimally_rich": rich,
        "dictatorial_single_top": single_top,
        "only_complete_domain": dictatorial == [full],
        "only_complete_domain_among_minimally_rich": rich == [full],
    }
    status = "unsat" if len(dictatorial) == len(entries) else "sat"
    stats = {"nodes": 0, "time_ms": round((time.perf_counter() - start) * 1000), "workers": workers}
    return ScenarioReport(
        "dict-domains", {"n": n, "m": m, "engine": engine}, status, len(dictatorial),
        [e["witness"] for e in entries if e["witness"] is not None], classification, stats, agree,
    )


SCENARIOS: dict[str, Callable[..., ScenarioReport]] = {
    "arrow": run_arrow,
    "iia-census": run_iia_census,
    "wilson": run_wilson,
    "sen": run_sen,
    "gs": run_gs,
    "ms": run_ms,
    "moulin": run_moulin,
    "kp": run_kp,
    "dict-domains": scan_dictatorial_domains,
}


def run_scenario(name: str, **params) -> ScenarioReport:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}; registered: {', '.join(SCENARIOS)}") from None
    return fn(**params)


def scenario_spec(name: str, n: int = 2, m: int = 3, decisive: str = "pair") -> SearchSpec:
    """The headline query of a rule scenario, for CNF export."""
    queries = {
        "arrow": ("aswf", Domain.full(m), "wp,iia,!dict"),
        "iia-census": ("aswf", Domain.full(m), "iia"),
        "wilson": ("aswf", Domain.full(m), "iia,ni,!dict,!antidict,!const"),
        "sen": ("sdf", Domain.full(m), "u,liberal"),
        "gs": ("scf", Domain.full(m), "sp,onto,!dict_scf"),
        "ms": ("scf", Domain.full(m), "eff,m,!dict_scf"),
        "moulin": ("scf", single_peaked_domain(m), "anon,eff,sp"),
    }
    if name not in queries:
        raise ScenarioError(f"scenario {name!r} has no single rule query to export")
    family, domain, axioms = queries[name]
    return SearchSpec.build(family, domain, n, axioms, decisive=decisive)
