"""Satisfiability through special coverings of set decompositions."""

from .cnf import CnfFormula, parse_dimacs, write_dimacs
from .decomposition import SpecialDecomposition, decomposition_of_cnf, is_special_covering
from .kernels import BACKEND
from .oracle import brute_force_covering, brute_force_sat, differential_run, random_cnf
from .solver import Verdict, VerdictKind, decide, to_proportional

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CnfFormula",
    "SpecialDecomposition",
    "Verdict",
    "VerdictKind",
    "brute_force_covering",
    "brute_force_sat",
    "decide",
    "decomposition_of_cnf",
    "differential_run",
    "is_special_covering",
    "parse_dimacs",
    "random_cnf",
    "to_proportional",
    "write_dimacs",
]
