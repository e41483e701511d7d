"""Polyhedral cones ``C^alpha``, cone intervals, and lower-bound fitting.

``C^alpha = {y : sum_{j != k} y_j <= alpha * y_k for all k}`` is a closed,
pointed, solid cone contained in ``int R^m_+ ∪ {0}`` whenever
``alpha > m - 1``; larger ``alpha`` gives a larger cone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .points import Point, as_cloud, as_point, check_same_dim


@dataclass(frozen=True)
class ConeSpec:
    """Either the nonnegative orthant (``alpha is None``) or ``C^alpha``."""

    m: int
    alpha: float | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("cone dimension must be >= 1")
        if self.alpha is not None and not self.alpha > self.m - 1:
            raise ValueError(f"alpha must exceed m - 1 = {self.m - 1}, got {self.alpha}")

    @classmethod
    def orthant(cls, m: int) -> ConeSpec:
        return cls(m=m)

    @classmethod
    def polyhedral(cls, alpha: float, m: int) -> ConeSpec:
        return cls(m=m, alpha=float(alpha))

    @property
    def is_orthant(self) -> bool:
        return self.alpha is None

    def matrix(self) -> NDArray[np.float64]:
        """Constraint matrix ``M`` with ``C = {y : M y <= 0}``."""
        if self.is_orthant:
            return -np.eye(self.m)
        M = np.ones((self.m, self.m))
        np.fill_diagonal(M, -self.alpha)
        return M

    def slack(self, ys: ArrayLike) -> NDArray[np.float64]:
        """Row slacks ``-M y`` for each row of ``ys``; all ``>= 0`` on the cone."""
        Y = np.atleast_2d(np.asarray(ys, dtype=float))
        if Y.shape[-1] != self.m:
            raise ValueError(f"expected dimension {self.m}, got {Y.shape[-1]}")
        if self.is_orthant:
            return Y.copy()
        # alpha*y_k - sum_{j != k} y_j  ==  (alpha + 1)*y_k - sum_j y_j
        return (self.alpha + 1.0) * Y - Y.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class Bounds:
    """A strict common lower bound ``lb`` together with the cone ``C^alpha``."""

    lb: Point
    alpha: float
    delta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lb", as_point(self.lb))
        if not self.alpha > self.m - 1:
            raise ValueError(f"alpha must exceed m - 1 = {self.m - 1}, got {self.alpha}")
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @property
    def m(self) -> int:
        return self.lb.shape[0]

    @property
    def cone(self) -> ConeSpec:
        return ConeSpec.polyhedral(self.alpha, self.m)

    def __eq__(self, other):
        if not isinstance(other, Bounds):
            return NotImplemented
        return (np.array_equal(self.lb, other.lb) and self.alpha == other.alpha
                and self.delta == other.delta)

    def __hash__(self):
        return hash((tuple(self.lb), self.alpha, self.delta))


def cone_contains(cone: ConeSpec, y: ArrayLike, strict: bool = False, tol: float = 0.0) -> bool:
    """Membership of ``y`` in the cone (``strict``: in its interior).

    ``tol`` relaxes every row of the closed check by an absolute amount; it is
    zero by default and only used to absorb rounding when re-checking computed
    points.  It has no effect in strict mode.
    """
    y = as_point(y, cone.m)
    return bool(cone_contains_many(cone, y[None, :], strict=strict, tol=tol)[0])


def cone_contains_many(cone: ConeSpec, ys: ArrayLike, strict: bool = False,
                       tol: float = 0.0) -> NDArray[np.bool_]:
    s = cone.slack(ys)
    if strict:
        return np.all(s > 0, axis=1)
    return np.all(s >= -tol, axis=1)


def interval_contains(cone: ConeSpec, lo: ArrayLike, hi: ArrayLike, y: ArrayLike,
                      open: bool = False, tol: float = 0.0) -> bool:
    """Membership in ``[lo, hi]_C`` (closed) or ``(lo, hi)_C`` (open).

    Closed: ``y - lo in C`` and ``y <= hi``.  Open: ``y - lo in int C`` and
    ``y < hi``.
    """
    y = as_point(y, cone.m)
    return bool(interval_contains_many(cone, lo, hi, y[None, :], open=open, tol=tol)[0])


def interval_contains_many(cone: ConeSpec, lo: ArrayLike, hi: ArrayLike, ys: ArrayLike,
                           open: bool = False, tol: float = 0.0) -> NDArray[np.bool_]:
    lo, hi = as_point(lo, cone.m), as_point(hi, cone.m)
    Y = as_cloud(ys, cone.m)
    in_cone = cone_contains_many(cone, Y - lo, strict=open, tol=tol)
    if open:
        below = np.all(Y < hi, axis=1)
    else:
        below = np.all(Y <= hi + tol, axis=1)
    return in_cone & below


def fit_alpha(shifted_points: ArrayLike) -> float:
    """Smallest-ratio cone parameter plus a unit margin.

    For strictly positive points returns ``1 + max(m, max_{y,i} sum_{j!=i} y_j / y_i)``,
    which places every input point in the interior of ``C^alpha``.
    """
    Y = as_cloud(shifted_points)
    if np.any(Y <= 0):
        raise ValueError("fit_alpha requires strictly positive points")
    m = Y.shape[1]
    ratios = (Y.sum(axis=1, keepdims=True) - Y) / Y
    return float(max(m, float(ratios.max()))) + 1.0


def fit_lower_bound(image_points: ArrayLike, delta: float = 1.0) -> Bounds:
    """Fit ``lb = min - delta`` componentwise and ``alpha`` from the shifted sample."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    Y = as_cloud(image_points)
    lb = Y.min(axis=0) - delta
    return Bounds(lb=lb, alpha=fit_alpha(Y - lb), delta=float(delta))


def check_bounds(bounds: Bounds, image_points: ArrayLike, alpha: float | None = None) -> bool:
    """Whether every image point lies in ``{lb} + int C^alpha``."""
    Y = as_cloud(image_points)
    check_same_dim(Y, bounds.lb)
    cone = ConeSpec.polyhedral(bounds.alpha if alpha is None else alpha, bounds.m)
    return bool(np.all(cone_contains_many(cone, Y - bounds.lb, strict=True)))
