"""Minimal-point representation of transformed image sets.

For a finite image set ``S`` strictly inside ``(lb, ub)_C`` the transformed set

    F = cl(S - R^m_+)^c ∩ [lb, ub]_C
      = {y in [lb, ub]_C : y is not strictly below any z in S}

is compact, and its finitely many minimal points are built by inserting the
points of ``S`` one at a time.  Each insertion replaces every current minimal
point ``l < z`` by the strong minimizers of ``m`` small box problems, one per
coordinate, each solved by a contracting fixed-point iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike

from .cones import Bounds, ConeSpec, interval_contains_many
from .points import (DimensionError, Point, PointCloud, as_cloud, as_point,
                     dominated_by_any, pareto_min)
from .relations import RelationKind, psi, psi_many

DEFAULT_TOL = 1e-10


class InfeasibleBoundsError(ValueError):
    """Source points are not strictly inside the cone interval."""


class ConvergenceError(RuntimeError):
    """Fixed-point iteration exceeded its guaranteed iteration budget."""


def membership_tol(lb: ArrayLike, ub: ArrayLike) -> float:
    """Absolute slack used when re-checking computed points against the interval."""
    span = float(np.max(np.abs(np.asarray(ub, float) - np.asarray(lb, float))))
    return 1e-9 * max(1.0, span)


@dataclass(frozen=True)
class BoxProblem:
    """Strong-minimization problem over ``[a, b]_{C^alpha}``.

    Minimize ``y`` subject to ``y[index] == zbar[index]``, ``y >= ell`` and
    ``y`` in the interval ``[a, b]`` of the cone ``C^alpha``.  ``index`` is
    0-based.
    """

    index: int
    ell: Point
    zbar: Point
    a: Point
    b: Point
    alpha: float

    def __post_init__(self):
        m = len(np.asarray(self.a))
        for name in ("ell", "zbar", "a", "b"):
            object.__setattr__(self, name, as_point(getattr(self, name), m))
        if not 0 <= self.index < m:
            raise ValueError(f"index {self.index} out of range for m={m}")

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def contraction(self) -> float:
        """Lipschitz constant ``(m - 1) / alpha`` of the map in the 1-norm."""
        return (self.m - 1) / self.alpha

    def validate(self, tol: float = 0.0) -> None:
        problems = []
        if not self.alpha > self.m - 1:
            problems.append(f"alpha={self.alpha} must exceed m - 1")
        if not np.all(self.a < self.b):
            problems.append("a < b violated")
        if not np.all(self.ell < self.zbar):
            problems.append("ell < zbar violated")
        if not problems:
            cone = ConeSpec.polyhedral(self.alpha, self.m)
            inside = interval_contains_many(cone, self.a, self.b,
                                            np.vstack([self.ell, self.zbar]), tol=tol)
            if not inside.all():
                problems.append("ell and zbar must lie in [a, b]_C")
        if problems:
            raise ValueError("invalid box problem: " + "; ".join(problems))

    def step(self, y: Point) -> Point:
        """One application of the map ``T``."""
        out = self.a + (np.sum(y - self.a) - (y - self.a)) / self.alpha
        out = np.maximum(self.ell, out)
        out[self.index] = self.zbar[self.index]
        return out

    def iteration_budget(self, tol: float) -> int:
        r0 = float(np.sum(np.abs(self.step(self.zbar) - self.zbar)))
        gamma = self.contraction
        if r0 <= tol or gamma == 0.0:
            return 1
        return math.ceil(math.log(tol / r0) / math.log(gamma)) + 1


@dataclass
class BoxTrace:
    point: Point
    iterates: list[Point] = field(default_factory=list)

    @property
    def residuals(self) -> list[float]:
        """1-norm distances between consecutive iterates."""
        return [float(np.sum(np.abs(b - a))) for a, b in zip(self.iterates, self.iterates[1:])]


def trace_box_problem(bp: BoxProblem, tol: float = DEFAULT_TOL) -> BoxTrace:
    """Run the fixed-point iteration from ``zbar`` and keep every iterate."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    budget = bp.iteration_budget(tol)
    y = bp.zbar.copy()
    iterates = [y]
    for _ in range(budget):
        nxt = bp.step(y)
        iterates.append(nxt)
        if np.sum(np.abs(nxt - y)) <= tol:
            return BoxTrace(point=nxt, iterates=iterates)
        y = nxt
    raise ConvergenceError(
        f"no fixed point within {budget} iterations; box problem preconditions are violated"
    )


def solve_box_problem(bp: BoxProblem, tol: float = DEFAULT_TOL, validate: bool = True) -> Point:
    if validate:
        bp.validate(tol=membership_tol(bp.a, bp.b))
    return trace_box_problem(bp, tol).point


@dataclass(frozen=True, eq=False)
class Staircase:
    lb: Point
    ub: Point
    cone: ConeSpec
    minimal_points: PointCloud
    source: PointCloud
    tol: float = 0.0

    @property
    def m(self) -> int:
        return self.lb.shape[0]

    def __len__(self) -> int:
        return len(self.minimal_points)


Step = Callable[[Point, Point, int], Point]


def _insert_all(S: PointCloud, lb: Point, ub: Point, cone: ConeSpec, step: Step,
                tol: float) -> PointCloud:
    m = lb.shape[0]
    mins = lb[None, :].copy()
    for k, z in enumerate(S):
        below = np.all(mins < z, axis=1)
        if not below.any():
            continue
        new = [step(ell, z, i) for ell in mins[below] for i in range(m)]
        cand = np.vstack([np.asarray(new), mins[~below]])
        keep = psi_many(S[:k + 1], cand) >= 0
        keep &= interval_contains_many(cone, lb, ub, cand, tol=tol)
        if not keep.any():
            raise RuntimeError("staircase update removed every candidate")
        mins = pareto_min(cand[keep])
    return mins


def build_staircase(S: ArrayLike, bounds: Bounds, ub: ArrayLike,
                    tol: float = DEFAULT_TOL) -> Staircase:
    """Build the minimal points of ``cl(S - R^m_+)^c ∩ [lb, ub]_{C^alpha}``.

    Points of ``S`` are inserted in input order; the resulting minimal set
    does not depend on that order.
    """
    S = as_cloud(S, bounds.m)
    ub = as_point(ub, bounds.m)
    cone = bounds.cone
    lb = bounds.lb
    inside = interval_contains_many(cone, lb, ub, S, open=True)
    if not inside.all():
        bad = int(np.flatnonzero(~inside)[0])
        raise InfeasibleBoundsError(
            f"source point {bad} = {S[bad].tolist()} is not strictly inside (lb, ub)_C"
        )
    mtol = membership_tol(lb, ub)

    def step(ell: Point, z: Point, i: int) -> Point:
        bp = BoxProblem(index=i, ell=ell, zbar=z, a=lb, b=ub, alpha=bounds.alpha)
        return solve_box_problem(bp, tol=tol, validate=False)

    mins = _insert_all(S, lb, ub, cone, step, mtol)
    return Staircase(lb=lb, ub=ub, cone=cone, minimal_points=mins, source=S, tol=mtol)


def orthant_staircase(S: ArrayLike, lb: ArrayLike, ub: ArrayLike) -> Staircase:
    """Diagnostic variant over the plain box ``[lb, ub]`` (orthant cone).

    The box-problem minimizer degenerates to ``ell`` with one coordinate
    raised to ``z``.  Not used by the solver.
    """
    S = as_cloud(S)
    m = S.shape[1]
    lb, ub = as_point(lb, m), as_point(ub, m)
    cone = ConeSpec.orthant(m)
    inside = interval_contains_many(cone, lb, ub, S, open=True)
    if not inside.all():
        raise InfeasibleBoundsError("source points must lie strictly inside (lb, ub)")

    def step(ell: Point, z: Point, i: int) -> Point:
        out = ell.copy()
        out[i] = z[i]
        return out

    mins = _insert_all(S, lb, ub, cone, step, 0.0)
    return Staircase(lb=lb, ub=ub, cone=cone, minimal_points=mins, source=S, tol=0.0)


def staircase_contains(st: Staircase, y: ArrayLike) -> bool:
    y = as_point(y, st.m)
    if psi(st.source, y) < 0:
        return False
    return bool(interval_contains_many(st.cone, st.lb, st.ub, y[None, :], tol=st.tol)[0])


def minimal_points_prec(kind: RelationKind | str, P1: ArrayLike, P2: ArrayLike) -> bool:
    """Lower-type relation between compact sets given by their minimal points."""
    kind = RelationKind(kind)
    if kind not in (RelationKind.STRICT_LOWER, RelationKind.LOWER):
        raise ValueError(f"only lower-type relations apply to staircases, got {kind.value}")
    P1, P2 = as_cloud(P1), as_cloud(P2)
    strict = kind is RelationKind.STRICT_LOWER
    return bool(np.all(dominated_by_any(P2, P1, strict=strict)))


def staircase_prec(kind: RelationKind | str, s1: Staircase, s2: Staircase) -> bool:
    """``s1 rel s2`` for ``rel`` in {strict_lower, lower}.

    Both staircases must share ``lb`` and the cone; their upper bounds may
    differ.
    """
    if s1.m != s2.m:
        raise DimensionError("staircases have different dimensions")
    if not np.array_equal(s1.lb, s2.lb) or s1.cone != s2.cone:
        raise ValueError("staircases were built against different lb or cone")
    return minimal_points_prec(kind, s1.minimal_points, s2.minimal_points)
