"""Decide social choice axiom sets by search or SAT from the command line.

Exit codes: 0 finished (and matched any registered expectation), 1 an
expectation or certificate check failed, 2 usage error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import axioms as ax
from . import sat, setrank, theorems
from .prefcore import Domain, single_peaked_domain
from .rules import FAMILIES, rule_to_dict
from .sat.solver import SolverBudgetExceeded
from .search import BudgetExceeded, SearchSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_domain(text: Optional[str], m: int) -> Domain:
    """``full`` (default), ``single-peaked`` or comma-separated order words."""
    if text is None or text == "full":
        return Domain.full(m)
    if text == "single-peaked":
        return single_peaked_domain(m)
    words = [w.strip() for w in text.split(",") if w.strip()]
    try:
        domain = Domain.from_words(words)
    except ValueError as exc:
        raise UsageError(f"bad --domain {text!r}: {exc}") from None
    if domain.m != m:
        raise UsageError(f"--domain orders rank {domain.m} alternatives but --alts is {m}")
    return domain


def _common(p: argparse.ArgumentParser, engine: bool = True) -> None:
    p.add_argument("--voters", type=int, default=2)
    p.add_argument("--alts", type=int, default=3)
    if engine:
        p.add_argument("--engine", choices=theorems.ENGINES, default="search")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--node-budget", type=int)
        p.add_argument("--time-budget-ms", type=int)
        p.add_argument("--decisive", choices=ax.DECISIVENESS, default="pair",
                       help="decisiveness reading for the liberal axiom")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")


def _query(p: argparse.ArgumentParser) -> None:
    p.add_argument("--axioms", required=True, help="comma-separated, e.g. wp,iia,!dict")
    p.add_argument("--family", choices=FAMILIES, default="aswf")
    p.add_argument("--domain", help="full, single-peaked or words like abc,bac")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="choicesat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theorem", help="run a registered scenario")
    p.add_argument("name", choices=list(theorems.SCENARIOS))
    _common(p)
    p.add_argument("--size", type=int, default=6, help="ground-set size for kp")
    p.add_argument("--brute-force", action="store_true", help="moulin: also run the 3^16 oracle")

    for name, text in (("count", "count rules meeting the axioms"),
                       ("enumerate", "list rules meeting the axioms")):
        p = sub.add_parser(name, help=text)
        _query(p)
        _common(p)
        if name == "enumerate":
            p.add_argument("--limit", type=int, default=10)

    p = sub.add_parser("cnf-export", help="write a scenario's CNF in DIMACS format")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario", choices=[*theorems.SCENARIOS])
    group.add_argument("--axioms")
    p.add_argument("--family", choices=FAMILIES, default="aswf")
    p.add_argument("--domain")
    p.add_argument("--voters", type=int, default=2)
    p.add_argument("--alts", type=int, default=3)
    p.add_argument("--size", type=int, default=6, help="ground-set size for kp")
    p.add_argument("--decisive", choices=ax.DECISIVENESS, default="pair")
    p.add_argument("--out", help="DIMACS file (default stdout)")

    p = sub.add_parser("cnf-check", help="verify an external model of an exported CNF")
    p.add_argument("formula")
    p.add_argument("model")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("domains", help="scan every domain for dictatorial SCFs (m=3, n=2)")
    _common(p)

    p = sub.add_parser("setrank", help="weak orders on subsets under GF and IND")
    p.add_argument("--size", type=int, default=6)
    p.add_argument("--no-gf", action="store_true")
    p.add_argument("--no-ind", action="store_true")
    p.add_argument("--time-budget-ms", type=int)
    p.add_argument("--node-budget", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    return parser


def _spec_from_args(args, mode: str, limit=None) -> SearchSpec:
    if args.voters < 1 or args.alts < 1:
        raise UsageError("--voters and --alts must be positive")
    domain = parse_domain(args.domain, args.alts)
    return SearchSpec.build(
        args.family, domain, args.voters, ax.parse_axioms(args.axioms),
        mode=mode, limit=limit, workers=getattr(args, "workers", 1),
        node_budget=getattr(args, "node_budget", None),
        time_budget_ms=getattr(args, "time_budget_ms", None),
        decisive=args.decisive,
    )


def _budgets(args) -> dict:
    return {"node_budget": args.node_budget, "time_budget_ms": args.time_budget_ms}


def _query_report(args, mode: str) -> theorems.ScenarioReport:
    limit = args.limit if mode == "enumerate" else None
    if limit is not None and limit < 1:
        raise UsageError("--limit must be positive")
    spec = _spec_from_args(args, mode, limit)
    run = theorems.run_query(spec, args.engine)
    params = {
        "family": spec.family, "n": spec.n, "m": spec.domain.m, "domain": spec.domain.words,
        "axioms": ",".join(map(str, spec.axioms)), "engine": args.engine,
    }
    if limit is not None:
        params["limit"] = limit
    stats = {k: run.stats.get(k, 0) for k in ("nodes", "time_ms", "workers")}
    count = run.count if mode == "count" else len(run.witnesses)
    return theorems.ScenarioReport(
        mode, params, run.status, count, [rule_to_dict(w) for w in run.witnesses], None, stats,
        run.engines_agree,
    )


def _theorem_report(args) -> theorems.ScenarioReport:
    name = args.name
    if name == "kp":
        return theorems.run_kp(args.size, **_budgets(args))
    params = dict(n=args.voters, m=args.alts, engine=args.engine, **_budgets(args))
    if name == "dict-domains":
        return theorems.scan_dictatorial_domains(workers=args.workers, **params)
    if name == "sen":
        params["decisive"] = args.decisive
    if name == "moulin":
        params["brute_force"] = args.brute_force
    params["workers"] = args.workers
    return theorems.run_scenario(name, **params)


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = []
    for key in ("scenario", "status", "count", "engines_agree", "expected"):
        if report.get(key) is not None:
            lines.append(f"{key:<15} {report[key]}")
    lines.append(f"{'params':<15} " + " ".join(f"{k}={v}" for k, v in report["params"].items()))
    for key, ok in (report.get("checks") or {}).items():
        lines.append(f"{'check':<15} {'ok  ' if ok else 'FAIL'} {key}")
    cls = report.get("classification") or {}
    for key, value in cls.items():
        if isinstance(value, (int, str, bool)) or (isinstance(value, list) and len(str(value)) < 100):
            lines.append(f"{key:<15} {value}")
    if report.get("witnesses"):
        lines.append(f"{'witnesses':<15} {len(report['witnesses'])}")
    stats = report.get("stats") or {}
    lines.append(
        f"{'stats':<15} nodes={stats.get('nodes', 0)} time_ms={stats.get('time_ms', 0)}"
        f" workers={stats.get('workers', 1)}"
    )
    return "\n".join(lines) + "\n"


def _emit(text: str | bytes, out: Optional[str]) -> None:
    if out:
        data = text.encode() if isinstance(text, str) else text
        Path(out).write_bytes(data)
    elif isinstance(text, bytes):
        sys.stdout.buffer.write(text)
        sys.stdout.flush()
    else:
        sys.stdout.write(text)


def _export(args) -> int:
    if args.scenario == "kp":
        f = setrank.encode_setrank(setrank.GroundSet(args.size))
    elif args.scenario is not None:
        if args.scenario == "dict-domains":
            raise UsageError("dict-domains is a scan of 63 queries; export one with --axioms")
        f = sat.encode(theorems.scenario_spec(args.scenario, args.voters, args.alts, args.decisive))
    else:
        args.engine = "sat"
        f = sat.encode(_spec_from_args(args, "decide"))
    _emit(sat.write_dimacs(f), args.out)
    return EXIT_OK


def check_external_model(formula: sat.CnfFormula, model: Sequence[bool]) -> dict:
    """Clause check plus solver-independent certificate check of the decoded object."""
    report: dict = {"scenario": "cnf-check", "params": dict(formula.meta), "violations": []}
    falsified = formula.check(model)
    for k in falsified[:20]:
        report["violations"].append({"clause": k + 1, "literals": list(formula.clauses[k])})
    family = formula.meta.get("family")
    try:
        if family == "setrank":
            names = formula.meta.get("axioms", "gf,ind").split(",")
            w = setrank.decode_set_model(formula, model)
            problems = setrank.verify_set_witness(w, "gf" in names, "ind" in names)
            report["violations"] += [{"witness": list(v)} for v in problems[:20]]
            report["witness"] = w.to_json()
        elif family in FAMILIES:
            rule = sat.decode_model(formula, model)
            literals = ax.parse_axioms(formula.meta.get("axioms", ""))
            failed = ax.confirm(literals, rule, formula.meta.get("decisive", "pair"))
            report["violations"] += [{"axiom": name} for name in failed]
            report["witness"] = rule_to_dict(rule)
        else:
            report["note"] = "no scenario metadata; only clauses were checked"
    except (sat.DecodeError, ValueError) as exc:
        report["violations"].append({"decode": str(exc)})
    report["status"] = "pass" if not report["violations"] else "fail"
    return report


def _cnf_check(args) -> int:
    formula = sat.parse_dimacs(Path(args.formula).read_bytes())
    model = sat.parse_model(Path(args.model).read_text(), formula.num_vars)
    report = check_external_model(formula, model)
    if args.format == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        lines = [f"{'status':<15} {report['status']}"]
        lines += [f"{'violation':<15} {json.dumps(v)}" for v in report["violations"]]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def _setrank(args) -> int:
    report = theorems.run_kp(args.size, not args.no_gf, not args.no_ind, **_budgets(args))
    _emit(_render(report.to_dict(), args.format), args.out)
    return EXIT_OK if report.matches_expectation else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be at least 1")
        if args.command == "cnf-export":
            return _export(args)
        if args.command == "cnf-check":
            return _cnf_check(args)
        if args.command == "setrank":
            return _setrank(args)
        if args.command == "theorem":
            report = _theorem_report(args)
        elif args.command == "domains":
            report = theorems.scan_dictatorial_domains(
                args.alts, args.voters, args.engine, args.workers, **_budgets(args)
            )
        else:
            report = _query_report(args, args.command)
    except (BudgetExceeded, SolverBudgetExceeded) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ValueError) as exc:
        # UnknownAxiom, SearchError, ScenarioError, DimacsError, ... are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(_render(report.to_dict(), args.format), args.out)
    return EXIT_OK if report.matches_expectation else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
