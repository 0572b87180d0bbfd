"""CNF encodings, DIMACS I/O and an embedded CDCL solver."""
from __future__ import annotations

from typing import Optional

from .cnf import CnfFormula, DimacsError, parse_dimacs, parse_model, write_dimacs, write_model
from .count import count_blocking, count_components, iter_models
from .encode import (
    DecodeError,
    EncodingError,
    decode_model,
    encode,
    encode_aswf,
    encode_scf,
    encode_sdf,
)
from .solver import Solver, SolverBudgetExceeded, solve_clauses


def solve_cnf(f: CnfFormula, **options) -> Optional[list[bool]]:
    """A model of ``f`` (index 0 unused), or None when unsatisfiable.

    Options go to :class:`Solver`; budgets raise :class:`SolverBudgetExceeded`.
    """
    return Solver(f.num_vars, f.clauses, **options).solve()


__all__ = [
    "CnfFormula",
    "DecodeError",
    "DimacsError",
    "EncodingError",
    "Solver",
    "SolverBudgetExceeded",
    "count_blocking",
    "count_components",
    "decode_model",
    "encode",
    "encode_aswf",
    "encode_scf",
    "encode_sdf",
    "iter_models",
    "parse_dimacs",
    "parse_model",
    "solve_clauses",
    "solve_cnf",
    "write_dimacs",
    "write_model",
]
