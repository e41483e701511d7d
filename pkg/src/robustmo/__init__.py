"""Set-based minmax robustness for uncertain multiobjective problems."""

__version__ = "0.1.0"

from .cones import Bounds, ConeSpec, fit_alpha, fit_lower_bound
from .points import DimensionError, EmptySetError, pareto_max, pareto_min
from .problem import (BilinearObjective, BilinearTerm, ExplicitSpace, GridSpace, InstanceError,
                      ObjectiveWiseObjective, TableObjective, UncertainInstance, auto_bounds,
                      build_F, demo_instance, image_set)
from .relations import RelationKind, certify_strict_upper, holds, psi
from .solver import (compare_point_based, oracle_robust, solve_mp, verify_approximation,
                     verify_coverage, wfdvp_p)
from .staircase import Staircase, build_staircase, staircase_prec

__all__ = [
    "Bounds", "ConeSpec", "fit_alpha", "fit_lower_bound", "DimensionError", "EmptySetError",
    "pareto_max", "pareto_min", "BilinearObjective", "BilinearTerm", "ExplicitSpace", "GridSpace",
    "InstanceError", "ObjectiveWiseObjective", "TableObjective", "UncertainInstance",
    "auto_bounds", "build_F", "demo_instance", "image_set", "RelationKind",
    "certify_strict_upper", "holds", "psi", "compare_point_based", "oracle_robust", "solve_mp",
    "verify_approximation", "verify_coverage", "wfdvp_p", "Staircase", "build_staircase",
    "staircase_prec",
]
