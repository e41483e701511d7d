"""Robust weak efficiency: brute-force oracle, epigraphical reformulation, checks.

``oracle_robust`` applies the definition directly: a decision is robust weakly
efficient when no decision's image set lies strictly below its image set in
the upper set order.  ``solve_mp`` solves the finite
epigraphical reformulation with ``p`` epigraph vectors per decision by
comparing minimal points of the transformed sets.
"""

from __future__ import annotations

import itertools
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .cones import Bounds, cone_contains_many
from .points import PointCloud, as_cloud, dominated_by_any
from .problem import (ExplicitSpace, GridSpace, TableObjective, UncertainInstance,
                      auto_bounds, build_F, evaluate_on, image_set, point_based_counterpart,
                      upper_bound_map)
from .relations import RelationKind, holds
from .staircase import DEFAULT_TOL, Staircase, membership_tol

logger = logging.getLogger(__name__)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("ROBUSTMO_THREADS", "1")))
    except ValueError:
        return 1


def build_all_staircases(inst: UncertainInstance, bounds: Bounds,
                         tol: float = DEFAULT_TOL) -> list[Staircase]:
    """``F(x)`` for every decision, in decision order."""
    indices = range(len(inst.decisions))
    workers = _workers()
    if workers == 1:
        return [build_F(inst, i, bounds, tol) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: build_F(inst, i, bounds, tol), indices))


def strict_upper_matrix(inst: UncertainInstance) -> NDArray[np.bool_]:
    """``M[i, j]`` iff ``F_U(x_i)`` is strictly upper-dominated by ``F_U(x_j)``."""
    N = len(inst.decisions)
    M = np.zeros((N, N), dtype=bool)
    for i in range(N):
        for j in range(N):
            M[i, j] = holds(RelationKind.STRICT_UPPER, inst.images[i], inst.images[j])
    return M


def oracle_robust(inst: UncertainInstance) -> list[int]:
    """Decisions ``x`` for which no ``x'`` has ``F_U(x')`` strictly upper-below ``F_U(x)``."""
    M = strict_upper_matrix(inst)
    return [j for j in range(M.shape[0]) if not M[:, j].any()]


def semiinfinite_feasible(inst: UncertainInstance, x: ArrayLike | int, ys: ArrayLike,
                          bounds: Bounds, on_grid: bool = True, refine: int = 1,
                          tol: float | None = None) -> bool:
    """Feasibility of ``(x, y^1..y^p)`` for the semi-infinite reformulation.

    Every ``y^i`` must satisfy ``min_j (f_j(x, u) - y^i_j) <= 0`` for all ``u``
    and ``y^i - lb`` must lie in ``C^alpha``.  With ``on_grid=False`` the
    constraints are checked on the uncertainty grid refined by ``refine``.
    """
    Y = as_cloud(ys, inst.m)
    ix = inst.index_of(x)
    if on_grid or refine <= 1:
        F = image_set(inst, ix)
    else:
        if isinstance(inst.objective, TableObjective) or not isinstance(inst.uset, GridSpace):
            raise ValueError("refinement needs a grid uncertainty set and an analytic objective")
        U = inst.uset.refined(refine).materialize()
        F = evaluate_on(inst.objective, inst.decisions[ix:ix + 1], U)[0]
    # gaps[i, u] = min_j (f_j(x, u) - y^i_j)
    gaps = np.min(F[None, :, :] - Y[:, None, :], axis=2)
    if np.any(gaps > 0):
        return False
    if tol is None:
        tol = membership_tol(bounds.lb, upper_bound_map(inst, ix))
    return bool(np.all(cone_contains_many(bounds.cone, Y - bounds.lb, tol=tol)))


@dataclass
class SolveReport:
    solution_indices: list[int]
    p: int
    epsilon: float
    witnesses: dict[int, PointCloud]
    bounds_used: Bounds
    grid_info: dict[str, Any]
    timings: dict[str, float] = field(default_factory=dict)
    staircases: list[Staircase] = field(default_factory=list, repr=False)
    warnings: list[str] = field(default_factory=list)


def _grid_info(inst: UncertainInstance) -> dict[str, Any]:
    def describe(space):
        if isinstance(space, ExplicitSpace):
            return {"type": "explicit", "size": len(space.points)}
        return {"type": "grid", "size": int(np.prod([s + 1 for s in space.steps])),
                "steps": list(space.steps)}
    return {"omega": describe(inst.omega), "uncertainty": describe(inst.uset)}


def _accepting_tuple(mins: PointCloud, others: list[PointCloud], p: int,
                     epsilon: float) -> Optional[tuple[int, ...]]:
    # dom[x', r] <=> some minimal point of F(x') is strictly below mins[r] - eps*e
    shifted = mins - epsilon
    dom = np.array([dominated_by_any(shifted, q, strict=True) for q in others])
    size = min(p, len(mins))
    for combo in itertools.combinations(range(len(mins)), size):
        if not np.any(np.all(dom[:, combo], axis=1)):
            return combo
    return None


def solve_mp(inst: UncertainInstance, p: int, epsilon: float = 0.0,
             bounds: Bounds | None = None, delta: float = 1.0, tol: float = DEFAULT_TOL,
             refine: int = 1, staircases: list[Staircase] | None = None) -> SolveReport:
    """Projected epsilon-weakly efficient decisions of the reformulation with ``p`` vectors.

    A decision is accepted when some ``min(p, M)``-subset of the minimal
    points of its transformed set (``M`` of them) cannot be jointly strictly
    improved, after the ``epsilon * e`` shift, by the transformed set of any
    decision.  The accepting subset, padded by repetition to length ``p``, is
    reported as the witness.
    """
    if int(p) != p or p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    if not epsilon >= 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    p = int(p)
    t0 = time.perf_counter()
    if bounds is None:
        bounds = auto_bounds(inst, delta)
    if staircases is None:
        staircases = build_all_staircases(inst, bounds, tol)
    t1 = time.perf_counter()
    all_mins = [st.minimal_points for st in staircases]
    solutions, witnesses = [], {}
    for i, mins in enumerate(all_mins):
        combo = _accepting_tuple(mins, all_mins, p, epsilon)
        if combo is None:
            continue
        solutions.append(i)
        witnesses[i] = mins[[combo[r % len(combo)] for r in range(p)]]
    t2 = time.perf_counter()

    warnings = []
    if refine > 1:
        if isinstance(inst.uset, GridSpace) and not isinstance(inst.objective, TableObjective):
            for i in solutions:
                if not semiinfinite_feasible(inst, i, witnesses[i], bounds, on_grid=False,
                                             refine=refine):
                    warnings.append(f"decision {i}: witness violates constraints on the "
                                    f"uncertainty grid refined x{refine}")
        else:
            logger.info("refinement skipped: uncertainty set is not an analytic grid")
    for w in warnings:
        logger.warning(w)
    return SolveReport(
        solution_indices=solutions, p=p, epsilon=float(epsilon), witnesses=witnesses,
        bounds_used=bounds, grid_info=_grid_info(inst),
        timings={"staircases": t1 - t0, "selection": t2 - t1, "total": time.perf_counter() - t0},
        staircases=list(staircases), warnings=warnings,
    )


def wfdvp_p(inst: UncertainInstance) -> int | None:
    """Smallest guaranteed exactness threshold for ``p``, or ``None``."""
    omega_finite = isinstance(inst.omega, ExplicitSpace)
    uset_finite = isinstance(inst.uset, ExplicitSpace)
    omega_bound = max(1, len(inst.decisions) - 1) if omega_finite else None
    if inst.is_objective_wise:
        return inst.m
    if uset_finite:
        by_scenarios = inst.m ** len(inst.scenarios)
        return by_scenarios if omega_bound is None else min(omega_bound, by_scenarios)
    return omega_bound


@dataclass
class ApproximationReport:
    passed: bool
    chain: dict[int, list[int]]
    oracle: list[int]
    exact_p: int | None
    epsilon: float
    violation: str | None = None


def verify_approximation(inst: UncertainInstance, p_max: int, epsilon: float = 0.0,
                         bounds: Bounds | None = None, delta: float = 1.0) -> ApproximationReport:
    """Check monotonicity in ``p``, soundness against the oracle, and exactness.

    Oracle inclusion and exactness only hold for ``epsilon == 0`` and are
    skipped otherwise.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    if bounds is None:
        bounds = auto_bounds(inst, delta)
    staircases = build_all_staircases(inst, bounds)
    oracle = oracle_robust(inst)
    exact_p = wfdvp_p(inst)
    ps = list(range(1, p_max + 1))
    if exact_p is not None and exact_p not in ps:
        ps.append(exact_p)
    chain = {p: solve_mp(inst, p, epsilon, bounds=bounds, staircases=staircases).solution_indices
             for p in ps}
    violation = None
    ordered = sorted(chain)
    for p1, p2 in zip(ordered, ordered[1:]):
        if not set(chain[p1]) <= set(chain[p2]):
            violation = f"solutions at p={p1} not contained in p={p2}"
            break
    if violation is None and epsilon == 0:
        for p in ordered:
            if not set(chain[p]) <= set(oracle):
                violation = f"solutions at p={p} not contained in the oracle set"
                break
        if violation is None and exact_p is not None and chain[exact_p] != oracle:
            violation = f"solutions at p={exact_p} differ from the oracle set"
    return ApproximationReport(passed=violation is None, chain=chain, oracle=oracle,
                               exact_p=exact_p, epsilon=float(epsilon), violation=violation)


@dataclass
class CoverageReport:
    passed: bool
    covered_by: dict[int, list[int]]
    solutions: list[int]
    first_uncovered: int | None = None


def verify_coverage(inst: UncertainInstance, p: int, bounds: Bounds | None = None,
                    delta: float = 1.0) -> CoverageReport:
    """Every decision must be upper-dominated (non-strictly) by a computed solution.

    ``covered_by`` lists, per decision, every solution that covers it.
    """
    sol = solve_mp(inst, p, 0.0, bounds=bounds, delta=delta).solution_indices
    covered = {}
    for x in range(len(inst.decisions)):
        covered[x] = [xbar for xbar in sol
                      if holds(RelationKind.UPPER, inst.images[xbar], inst.images[x])]
        if not covered[x]:
            return CoverageReport(False, covered, sol, first_uncovered=x)
    return CoverageReport(True, covered, sol)


@dataclass
class PointBasedComparison:
    point_based: list[int]
    set_based: list[int]
    worst_case: NDArray[np.float64]

    @property
    def differences(self) -> list[int]:
        return sorted(set(self.point_based) ^ set(self.set_based))


def compare_point_based(inst: UncertainInstance) -> PointBasedComparison:
    """Weakly efficient decisions of the objective-wise worst case vs. the set-based oracle."""
    W = np.array([point_based_counterpart(inst, i) for i in range(len(inst.decisions))])
    beaten = dominated_by_any(W, W, strict=True)
    return PointBasedComparison(point_based=[int(i) for i in np.flatnonzero(~beaten)],
                                set_based=oracle_robust(inst), worst_case=W)
