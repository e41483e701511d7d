"""Finite point clouds in objective space and componentwise dominance.

A point is a 1-d float array of length ``m``; a cloud is a 2-d array of
shape ``(N, m)`` with ``N >= 1``.  All comparisons are exact (no tolerance).
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

Point = NDArray[np.float64]
PointCloud = NDArray[np.float64]

# pairwise comparisons are done in row blocks of this size to bound memory
_CHUNK = 512


class DimensionError(ValueError):
    """Operands do not share the same objective dimension."""


class EmptySetError(ValueError):
    """A set that must be nonempty is empty."""


def as_point(y: ArrayLike, m: int | None = None) -> Point:
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    if m is not None and arr.shape[0] != m:
        raise DimensionError(f"expected dimension {m}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point has non-finite entries")
    return arr


def as_cloud(points: ArrayLike, m: int | None = None) -> PointCloud:
    """Validate and convert ``points`` to an ``(N, m)`` float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and arr.size > 0:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d array of points, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise EmptySetError("point cloud is empty")
    if arr.shape[1] == 0:
        raise DimensionError("points have dimension 0")
    if m is not None and arr.shape[1] != m:
        raise DimensionError(f"expected dimension {m}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point cloud has non-finite entries")
    return arr


def check_same_dim(*arrays: np.ndarray) -> int:
    dims = {a.shape[-1] for a in arrays}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def strictly_less(a: ArrayLike, b: ArrayLike) -> bool:
    """True iff ``a_j < b_j`` for every coordinate."""
    a, b = as_point(a), as_point(b)
    check_same_dim(a, b)
    return bool(np.all(a < b))


def less_equal(a: ArrayLike, b: ArrayLike) -> bool:
    a, b = as_point(a), as_point(b)
    check_same_dim(a, b)
    return bool(np.all(a <= b))


def unique_stable(cloud: ArrayLike) -> PointCloud:
    """Drop exact duplicates, keeping the first occurrence order."""
    pts = as_cloud(cloud)
    _, first = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(first)]


def pareto_min(cloud: ArrayLike) -> PointCloud:
    """Efficient (minimal) points of a finite cloud w.r.t. the orthant order.

    Returns the points ``a`` for which no ``b`` in the cloud has ``b <= a``
    and ``b != a``.  The result is duplicate-free and keeps the order of
    first occurrence in the input.
    """
    pts = unique_stable(cloud)
    keep = np.ones(len(pts), dtype=bool)
    for start in range(0, len(pts), _CHUNK):
        block = pts[start:start + _CHUNK]
        # dominated[r] <=> some other point b satisfies b <= block[r]
        le = np.all(pts[None, :, :] <= block[:, None, :], axis=2)
        ne = np.any(pts[None, :, :] != block[:, None, :], axis=2)
        keep[start:start + len(block)] = ~np.any(le & ne, axis=1)
    return pts[keep]


def pareto_max(cloud: ArrayLike) -> PointCloud:
    """Maximal points of a finite cloud (the generators of ``A - R^m_+``)."""
    return -pareto_min(-as_cloud(cloud))


def dominated_by_any(targets: ArrayLike, dominators: ArrayLike, strict: bool = True) -> NDArray[np.bool_]:
    """For each target row, whether some dominator is ``<`` (or ``<=``) it."""
    t, d = as_cloud(targets), as_cloud(dominators)
    check_same_dim(t, d)
    out = np.empty(len(t), dtype=bool)
    for start in range(0, len(t), _CHUNK):
        block = t[start:start + _CHUNK]
        if strict:
            cmp = np.all(d[None, :, :] < block[:, None, :], axis=2)
        else:
            cmp = np.all(d[None, :, :] <= block[:, None, :], axis=2)
        out[start:start + len(block)] = np.any(cmp, axis=1)
    return out
