"""Scalarizing functional and the lower/upper set relations on finite clouds.

For a finite set ``A`` the functional

    psi(A, y) = min_{a in A} max_j (y_j - a_j)

classifies ``y`` against the lower set ``A - R^m_+``: ``psi <= 0`` inside it,
``psi >= 0`` in the closure of its complement.
"""

from __future__ import annotations

import enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .points import _CHUNK, as_cloud, as_point, check_same_dim, dominated_by_any


class RelationKind(str, enum.Enum):
    STRICT_LOWER = "strict_lower"
    LOWER = "lower"
    STRICT_UPPER = "strict_upper"
    UPPER = "upper"


class Position(str, enum.Enum):
    INSIDE_LOWER_SET = "inside_lower_set"
    BOUNDARY = "boundary"
    OUTSIDE_LOWER_SET = "outside_lower_set"


def psi(a_set: ArrayLike, y: ArrayLike) -> float:
    A = as_cloud(a_set)
    y = as_point(y)
    check_same_dim(A, y)
    return float(np.min(np.max(y[None, :] - A, axis=1)))


def psi_many(a_set: ArrayLike, ys: ArrayLike) -> NDArray[np.float64]:
    """Vectorized ``psi(a_set, y)`` for every row ``y`` of ``ys``."""
    A = as_cloud(a_set)
    Y = as_cloud(ys)
    check_same_dim(A, Y)
    out = np.empty(len(Y))
    for start in range(0, len(Y), _CHUNK):
        block = Y[start:start + _CHUNK]
        out[start:start + len(block)] = np.min(
            np.max(block[:, None, :] - A[None, :, :], axis=2), axis=1
        )
    return out


def _exists_below(lo_set: np.ndarray, hi_set: np.ndarray, strict: bool) -> NDArray[np.bool_]:
    # for each row h of hi_set: is there l in lo_set with l < h (or l <= h)?
    return dominated_by_any(hi_set, lo_set, strict=strict)


def _exists_above(lo_set: np.ndarray, hi_set: np.ndarray, strict: bool) -> NDArray[np.bool_]:
    # for each row l of lo_set: is there h in hi_set with l < h (or l <= h)?
    return dominated_by_any(-lo_set, -hi_set, strict=strict)


def holds(kind: RelationKind | str, A: ArrayLike, B: ArrayLike) -> bool:
    """Evaluate ``A rel B`` for finite nonempty clouds by definition.

    ``strict_upper``: every ``a`` is strictly below some ``b``;
    ``upper``: every ``a`` is ``<=`` some ``b``;
    ``strict_lower``: every ``b`` is strictly above some ``a``;
    ``lower``: every ``b`` is ``>=`` some ``a``.
    """
    kind = RelationKind(kind)
    A, B = as_cloud(A), as_cloud(B)
    check_same_dim(A, B)
    if kind is RelationKind.STRICT_UPPER:
        return bool(np.all(_exists_above(A, B, strict=True)))
    if kind is RelationKind.UPPER:
        return bool(np.all(_exists_above(A, B, strict=False)))
    if kind is RelationKind.STRICT_LOWER:
        return bool(np.all(_exists_below(A, B, strict=True)))
    return bool(np.all(_exists_below(A, B, strict=False)))


def certify_strict_upper(A: ArrayLike, B: ArrayLike) -> float | None:
    """Margin ``eps = -max_{a in A} psi(B, a)`` if positive, else ``None``.

    A positive margin means ``A - R^m_+`` lies in ``{psi_B <= -eps}``, which
    is equivalent to ``A`` being strictly upper-dominated by ``B``.
    """
    A, B = as_cloud(A), as_cloud(B)
    check_same_dim(A, B)
    eps = -float(np.max(psi_many(B, A)))
    return eps if eps > 0 else None


def complement_closure_position(A: ArrayLike, y: ArrayLike) -> Position:
    value = psi(A, y)
    if value < 0:
        return Position.INSIDE_LOWER_SET
    if value == 0:
        return Position.BOUNDARY
    return Position.OUTSIDE_LOWER_SET
