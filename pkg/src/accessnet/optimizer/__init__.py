"""Exact solution of the cheap-network design program."""

from ._kernel import KERNEL
from .ilp import IlpModel, build_ilp
from .solve import (
    ORACLE_MAX_ACCESS,
    ORACLE_MAX_DIST,
    ORACLE_MAX_USERS,
    DesignSolution,
    brute_force,
    check_solution,
    design_cost,
    induced_tree,
    is_tree,
    solve_exact,
)

__all__ = [
    "KERNEL",
    "ORACLE_MAX_ACCESS",
    "ORACLE_MAX_DIST",
    "ORACLE_MAX_USERS",
    "DesignSolution",
    "IlpModel",
    "brute_force",
    "build_ilp",
    "check_solution",
    "design_cost",
    "induced_tree",
    "is_tree",
    "solve_exact",
]
