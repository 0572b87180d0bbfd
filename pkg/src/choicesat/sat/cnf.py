"""CNF formulas with a variable legend, and DIMACS reading/writing.

The legend maps each variable to a tag tuple such as ``("pair", 7, 0, 2)``
(profile 7 ranks alternative 0 above 2).  Tags whose first element is
``"aux"`` mark functionally defined helper variables; every other variable
is a decision variable.  In DIMACS the legend and scenario metadata travel
as comment lines::

    c meta family=aswf
    c var 1 pair 0 0 1
    p cnf 108 1404
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class DimacsError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    legend: dict[int, tuple] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def new_var(self, *tag) -> int:
        self.num_vars += 1
        if tag:
            self.legend[self.num_vars] = tuple(tag)
        return self.num_vars

    def aux(self, *tag) -> int:
        return self.new_var("aux", *tag)

    def add(self, clause: Iterable[int]) -> None:
        clause = tuple(clause)
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")
        self.clauses.append(clause)

    def extend(self, clauses: Iterable[Iterable[int]]) -> None:
        for c in clauses:
            self.add(c)

    def decision_vars(self) -> list[int]:
        return [v for v in range(1, self.num_vars + 1) if self.legend.get(v, ("",))[0] != "aux"]

    def define_and(self, lits: Sequence[int], *tag) -> int:
        """Fresh variable equivalent to the conjunction of ``lits``."""
        d = self.aux(*tag)
        for lit in lits:
            self.add((-d, lit))
        self.add((d,) + tuple(-lit for lit in lits))
        return d

    def define_or(self, lits: Sequence[int], *tag) -> int:
        d = self.aux(*tag)
        for lit in lits:
            self.add((d, -lit))
        self.add((-d,) + tuple(lits))
        return d

    def check(self, model: Sequence[bool]) -> list[int]:
        """Indices of clauses falsified by ``model`` (index 0 unused)."""
        bad = []
        for k, clause in enumerate(self.clauses):
            if not any(model[lit] if lit > 0 else not model[-lit] for lit in clause):
                bad.append(k)
        return bad

    def __eq__(self, other) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.clauses == other.clauses
            and self.legend == other.legend
            and self.meta == other.meta
        )


def _tag_text(tag: tuple) -> str:
    return " ".join(str(t) for t in tag)


def _parse_tag(tokens: Sequence[str]) -> tuple:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return tuple(out)


def write_dimacs(f: CnfFormula) -> bytes:
    lines = []
    for key in sorted(f.meta):
        lines.append(f"c meta {key}={f.meta[key]}")
    for v in sorted(f.legend):
        lines.append(f"c var {v} {_tag_text(f.legend[v])}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for clause in f.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_dimacs(data: bytes | str) -> CnfFormula:
    text = data.decode("ascii") if isinstance(data, bytes) else data
    f = CnfFormula()
    header = None
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 3 and parts[1] == "meta" and "=" in parts[2]:
                key, _, value = line.split(None, 2)[2].partition("=")
                f.meta[key] = value
            elif len(parts) >= 4 and parts[1] == "var":
                try:
                    f.legend[int(parts[2])] = _parse_tag(parts[3:])
                except ValueError:
                    raise DimacsError(f"bad legend entry {line!r}", lineno) from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError("negative counts in header", lineno)
            f.num_vars = header[0]
            continue
        if header is None:
            raise DimacsError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                f.clauses.append(tuple(pending))
                pending = []
            elif abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} exceeds declared {header[0]} variables", lineno)
            else:
                pending.append(lit)
    if header is None:
        raise DimacsError("missing problem line")
    if pending:
        raise DimacsError("last clause not terminated by 0")
    if len(f.clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(f.clauses)}")
    for v in f.legend:
        if not 1 <= v <= f.num_vars:
            raise DimacsError(f"legend names variable {v} outside 1..{f.num_vars}")
    return f


def write_model(model: Sequence[bool]) -> str:
    """Model in the competition output style: ``v 1 -2 3 ... 0``."""
    lits = [str(v if model[v] else -v) for v in range(1, len(model))]
    return "s SATISFIABLE\nv " + " ".join(lits) + " 0\n"


def parse_model(text: str, num_vars: int) -> list[bool]:
    """Read a model written as signed literals (``v`` lines or bare integers)."""
    model: list[Optional[bool]] = [None] * (num_vars + 1)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "s")):
            if line.startswith("s") and "UNSAT" in line.upper():
                raise DimacsError("model file reports UNSATISFIABLE", lineno)
            continue
        if line.startswith("v"):
            line = line[1:]
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                continue
            if abs(lit) > num_vars:
                raise DimacsError(f"literal {lit} exceeds {num_vars} variables", lineno)
            model[abs(lit)] = lit > 0
    missing = [v for v in range(1, num_vars + 1) if model[v] is None]
    if missing:
        raise DimacsError(f"model leaves {len(missing)} variables unassigned (first {missing[0]})")
    model[0] = False
    return model  # type: ignore[return-value]
