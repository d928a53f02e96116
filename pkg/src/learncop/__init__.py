"""Connection tableau prover with conflict-driven learning and backjumping."""
from .calculus import Extend, Proof, Reduce, Start, Tableau
from .checker import check_proof, format_proof, parse_proof
from .search import (
    DepthOut,
    LevelStats,
    Saturated,
    SearchOptions,
    Theorem,
    TimeOut,
    prove,
    run_level,
)
from .terms import KERNEL
from .tptp import Problem, TPTPError, parse_problem, parse_string

__all__ = [
    "Extend", "Proof", "Reduce", "Start", "Tableau",
    "check_proof", "format_proof", "parse_proof",
    "DepthOut", "LevelStats", "Saturated", "SearchOptions", "Theorem", "TimeOut", "prove", "run_level",
    "KERNEL", "Problem", "TPTPError", "parse_problem", "parse_string",
]
