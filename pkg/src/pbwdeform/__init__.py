"""Exact PBW-deformation toolkit for skew group algebras S(V)#G.

Decides whether a parameter kappa gives a PBW deformation (by two independent
procedures), computes normal forms and products, works with Koszul cochains
and their brackets, and solves for admissible parameters.
"""

from .cohomology import (
    Cochain,
    RepresentativeSpace,
    bracket,
    constant_cochain,
    differential,
    is_coboundary,
    is_cocycle,
    linear_cochain,
    representative_space,
)
from .group import Group, conjugacy_data, fixed_space, generate_group, invariant_form
from .kappa import KappaParameter, apply_gauge, check_conditions, check_lie_orbifold
from .linalg import Matrix, Subspace, nullspace, rank, solve_affine
from .problem import Problem, ProblemSpec, load_bundled, load_problem
from .rewrite import FreeElement, PbwElement, graded_dimension, multiply, normal_form, overlap_check
from .scalar import CyclotomicContext, Scalar, conjugate, parse_scalar
from .solver import ParameterSpace, solve_constant_part, solve_linear_part

__all__ = [
    "Cochain",
    "CyclotomicContext",
    "FreeElement",
    "Group",
    "KappaParameter",
    "Matrix",
    "ParameterSpace",
    "PbwElement",
    "Problem",
    "ProblemSpec",
    "RepresentativeSpace",
    "Scalar",
    "Subspace",
    "apply_gauge",
    "bracket",
    "check_conditions",
    "check_lie_orbifold",
    "conjugacy_data",
    "conjugate",
    "constant_cochain",
    "differential",
    "fixed_space",
    "generate_group",
    "graded_dimension",
    "invariant_form",
    "is_coboundary",
    "is_cocycle",
    "linear_cochain",
    "load_bundled",
    "load_problem",
    "multiply",
    "normal_form",
    "nullspace",
    "overlap_check",
    "parse_scalar",
    "rank",
    "representative_space",
    "solve_affine",
    "solve_constant_part",
    "solve_linear_part",
]
