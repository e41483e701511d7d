"""Uncertain multiobjective instances and the maps derived from them.

An instance bundles a decision space, an uncertainty set and a vector
objective ``f(x, u)``.  Both spaces are finite after materialization: either
an explicit point list or a uniform lattice on a box.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .cones import Bounds, fit_lower_bound
from .points import DimensionError, Point, PointCloud, as_cloud, as_point, pareto_max
from .staircase import DEFAULT_TOL, Staircase, build_staircase


@dataclass(frozen=True, eq=False)
class ExplicitSpace:
    points: PointCloud

    def __post_init__(self):
        object.__setattr__(self, "points", as_cloud(self.points))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def materialize(self) -> PointCloud:
        return self.points

    def __eq__(self, other):
        return isinstance(other, ExplicitSpace) and np.array_equal(self.points, other.points)


@dataclass(frozen=True, eq=False)
class GridSpace:
    """Uniform lattice on ``[lower, upper]`` with ``steps[d]`` intervals per axis."""

    lower: Point
    upper: Point
    steps: tuple[int, ...]

    def __post_init__(self):
        lower = as_point(self.lower)
        upper = as_point(self.upper, lower.shape[0])
        steps = tuple(int(s) for s in self.steps)
        if len(steps) != lower.shape[0]:
            raise DimensionError("grid steps must have one entry per axis")
        if any(s < 1 for s in steps):
            raise ValueError("grid steps must be >= 1 per axis")
        if np.any(lower > upper):
            raise ValueError("grid lower corner exceeds upper corner")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "steps", steps)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def axes(self) -> list[NDArray[np.float64]]:
        return [np.linspace(lo, hi, s + 1) for lo, hi, s in zip(self.lower, self.upper, self.steps)]

    def materialize(self) -> PointCloud:
        return np.array(list(itertools.product(*self.axes())), dtype=float)

    def refined(self, factor: int) -> GridSpace:
        return GridSpace(self.lower, self.upper, tuple(s * factor for s in self.steps))

    def __eq__(self, other):
        return (isinstance(other, GridSpace) and np.array_equal(self.lower, other.lower)
                and np.array_equal(self.upper, other.upper) and self.steps == other.steps)


SpaceSpec = Union[ExplicitSpace, GridSpace]


@dataclass(frozen=True, eq=False)
class TableObjective:
    """Values ``f(x_i, u_j)`` indexed decision-major: shape ``(|Omega|, |U|, m)``."""

    values: NDArray[np.float64]

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 3:
            raise DimensionError("table values must be indexed [x][u][objective]")
        if not np.all(np.isfinite(vals)):
            raise ValueError("table values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.values.shape[2]

    def __eq__(self, other):
        return isinstance(other, TableObjective) and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class BilinearTerm:
    """``f_j(x, u) = x^T Q u + c^T x + d^T u + e``."""

    Q: NDArray[np.float64]
    c: NDArray[np.float64]
    d: NDArray[np.float64]
    e: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "Q", np.atleast_2d(np.asarray(self.Q, dtype=float)))
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(-1))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float).reshape(-1))
        object.__setattr__(self, "e", float(self.e))

    def __call__(self, x: Point, u: Point) -> float:
        return float(x @ self.Q @ u + self.c @ x + self.d @ u + self.e)

    def on_grid(self, X: PointCloud, U: PointCloud) -> NDArray[np.float64]:
        """Values for every pair, shape ``(len(X), len(U))``."""
        return X @ self.Q @ U.T + (X @ self.c)[:, None] + (U @ self.d)[None, :] + self.e

    def __eq__(self, other):
        return (isinstance(other, BilinearTerm) and np.array_equal(self.Q, other.Q)
                and np.array_equal(self.c, other.c) and np.array_equal(self.d, other.d)
                and self.e == other.e)


@dataclass(frozen=True, eq=False)
class BilinearObjective:
    terms: tuple[BilinearTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("bilinear objective needs at least one term")

    @property
    def m(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        return type(other) is type(self) and self.terms == other.terms


@dataclass(frozen=True, eq=False)
class ObjectiveWiseObjective(BilinearObjective):
    """Bilinear objective where ``f_j`` only reads the ``j``-th block of ``u``."""

    blocks: tuple[int, ...] = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))

    def block_slices(self) -> list[slice]:
        ends = np.cumsum(self.blocks)
        return [slice(int(e - b), int(e)) for b, e in zip(self.blocks, ends)]

    def __eq__(self, other):
        return super().__eq__(other) and self.blocks == other.blocks


ObjectiveSpec = Union[TableObjective, BilinearObjective, ObjectiveWiseObjective]


@dataclass(frozen=True, eq=False)
class UncertainInstance:
    name: str
    n: int
    m: int
    k: int
    omega: SpaceSpec
    uset: SpaceSpec
    objective: ObjectiveSpec

    def __post_init__(self):
        errors = validate_instance(self)
        if errors:
            raise InstanceError(errors)

    def __eq__(self, other):
        return (isinstance(other, UncertainInstance)
                and (self.name, self.n, self.m, self.k) == (other.name, other.n, other.m, other.k)
                and self.omega == other.omega and self.uset == other.uset
                and self.objective == other.objective)

    @cached_property
    def decisions(self) -> PointCloud:
        return self.omega.materialize()

    @cached_property
    def scenarios(self) -> PointCloud:
        return self.uset.materialize()

    @cached_property
    def images(self) -> NDArray[np.float64]:
        """All objective values, shape ``(|Omega|, |U|, m)``."""
        if isinstance(self.objective, TableObjective):
            return self.objective.values
        return evaluate_on(self.objective, self.decisions, self.scenarios)

    @property
    def is_objective_wise(self) -> bool:
        return isinstance(self.objective, ObjectiveWiseObjective)

    def index_of(self, x: ArrayLike | int) -> int:
        """Position of ``x`` in the materialized decision space."""
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < len(self.decisions):
                raise IndexError(f"decision index {x} out of range")
            return int(x)
        x = as_point(x, self.n)
        hits = np.flatnonzero(np.all(self.decisions == x, axis=1))
        if len(hits) == 0:
            raise IndexError(f"{x.tolist()} is not a point of the decision space")
        return int(hits[0])


class InstanceError(ValueError):
    """Instance data violates one or more invariants."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def validate_instance(inst: UncertainInstance) -> list[str]:
    errors = []
    if inst.m < 1:
        errors.append("m: must be >= 1")
    if inst.omega.dim != inst.n:
        errors.append(f"omega: dimension {inst.omega.dim} != n={inst.n}")
    if inst.uset.dim != inst.k:
        errors.append(f"uncertainty: dimension {inst.uset.dim} != k={inst.k}")
    obj = inst.objective
    if isinstance(obj, TableObjective):
        if not (isinstance(inst.omega, ExplicitSpace) and isinstance(inst.uset, ExplicitSpace)):
            errors.append("objective: table objective requires explicit omega and uncertainty")
        else:
            want = (len(inst.omega.points), len(inst.uset.points), inst.m)
            if obj.values.shape != want:
                errors.append(f"objective.values: shape {obj.values.shape} != {want}")
    else:
        if obj.m != inst.m:
            errors.append(f"objective.terms: {obj.m} terms for m={inst.m}")
        for j, t in enumerate(obj.terms):
            if t.Q.shape != (inst.n, inst.k):
                errors.append(f"objective.terms[{j}].Q: shape {t.Q.shape} != ({inst.n}, {inst.k})")
            if t.c.shape != (inst.n,):
                errors.append(f"objective.terms[{j}].c: length {t.c.shape[0]} != n={inst.n}")
            if t.d.shape != (inst.k,):
                errors.append(f"objective.terms[{j}].d: length {t.d.shape[0]} != k={inst.k}")
            for name, arr in (("Q", t.Q), ("c", t.c), ("d", t.d), ("e", np.array(t.e))):
                if not np.all(np.isfinite(arr)):
                    errors.append(f"objective.terms[{j}].{name}: non-finite entries")
        if isinstance(obj, ObjectiveWiseObjective):
            # a lattice is a product of its block projections
            if not isinstance(inst.uset, GridSpace):
                errors.append("uncertainty: objective_wise objective requires a grid uncertainty set")
            if len(obj.blocks) != inst.m or sum(obj.blocks) != inst.k or min(obj.blocks, default=0) < 1:
                errors.append(f"objective.blocks: {list(obj.blocks)} must be m={inst.m} "
                              f"positive sizes summing to k={inst.k}")
            else:
                for j, (t, sl) in enumerate(zip(obj.terms, obj.block_slices())):
                    mask = np.ones(inst.k, dtype=bool)
                    mask[sl] = False
                    if np.any(t.Q[:, mask] != 0) or np.any(t.d[mask] != 0):
                        errors.append(f"objective.terms[{j}]: Q and d must vanish outside block {j}")
    return errors


def evaluate_on(objective: BilinearObjective, X: PointCloud, U: PointCloud) -> NDArray[np.float64]:
    return np.stack([t.on_grid(X, U) for t in objective.terms], axis=-1)


def evaluate(inst: UncertainInstance, x: ArrayLike | int, u: ArrayLike | int) -> Point:
    """``f(x, u)``.  Table objectives need ``x``, ``u`` from the explicit spaces."""
    if isinstance(inst.objective, TableObjective):
        ix = inst.index_of(x)
        if isinstance(u, (int, np.integer)):
            iu = int(u)
            if not 0 <= iu < len(inst.scenarios):
                raise IndexError(f"scenario index {iu} out of range")
        else:
            u = as_point(u, inst.k)
            hits = np.flatnonzero(np.all(inst.scenarios == u, axis=1))
            if len(hits) == 0:
                raise IndexError(f"{u.tolist()} is not a point of the uncertainty set")
            iu = int(hits[0])
        return inst.objective.values[ix, iu].copy()
    xp = inst.decisions[x] if isinstance(x, (int, np.integer)) else as_point(x, inst.n)
    up = inst.scenarios[u] if isinstance(u, (int, np.integer)) else as_point(u, inst.k)
    return np.array([t(xp, up) for t in inst.objective.terms])


def image_set(inst: UncertainInstance, x: ArrayLike | int) -> PointCloud:
    """``F_U(x) = {f(x, u) : u in U}`` in the uncertainty set's order."""
    return inst.images[inst.index_of(x)]


def upper_bound_map(inst: UncertainInstance, x: ArrayLike | int) -> Point:
    """Componentwise worst case over ``U`` plus the all-one vector."""
    return image_set(inst, x).max(axis=0) + 1.0


def point_based_counterpart(inst: UncertainInstance, x: ArrayLike | int) -> Point:
    return image_set(inst, x).max(axis=0)


def auto_bounds(inst: UncertainInstance, delta: float = 1.0) -> Bounds:
    return fit_lower_bound(inst.images.reshape(-1, inst.m), delta)


def build_F(inst: UncertainInstance, x: ArrayLike | int, bounds: Bounds,
            tol: float = DEFAULT_TOL) -> Staircase:
    """Transformed set for decision ``x``.

    Only the maximal image points generate ``F_U(x) - R^m_+``, so they alone
    are inserted; the staircase keeps the full image set as its source.
    """
    images = image_set(inst, x)
    st = build_staircase(pareto_max(images), bounds, upper_bound_map(inst, x), tol=tol)
    return Staircase(lb=st.lb, ub=st.ub, cone=st.cone, minimal_points=st.minimal_points,
                     source=images, tol=st.tol)


def demo_instance() -> UncertainInstance:
    """Three decisions, two scenarios, two objectives (tabulated)."""
    values = [
        [[1.0, 3.0], [3.0, 1.0]],
        [[2.0, 2.0], [2.0, 2.0]],
        [[4.0, 4.0], [0.0, 0.0]],
    ]
    return UncertainInstance(
        name="demo", n=1, m=2, k=1,
        omega=ExplicitSpace([[1.0], [2.0], [3.0]]),
        uset=ExplicitSpace([[1.0], [2.0]]),
        objective=TableObjective(values),
    )
