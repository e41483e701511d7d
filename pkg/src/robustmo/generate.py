"""Seeded random instances for regression suites."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import (BilinearObjective, BilinearTerm, ExplicitSpace, GridSpace,
                      ObjectiveWiseObjective, TableObjective, UncertainInstance)

KINDS = ("table_random", "bilinear_random", "objective_wise_random")


@dataclass(frozen=True)
class InstanceSizes:
    """``decisions`` and ``scenarios`` count materialized points.

    For ``objective_wise_random`` the uncertainty set is a lattice with
    ``scenario_steps`` intervals per axis, and ``k`` is split into ``m``
    blocks as evenly as possible (``k >= m`` required).
    """

    decisions: int = 4
    scenarios: int = 3
    m: int = 2
    n: int = 1
    k: int = 1
    scenario_steps: int = 2

    def validate(self, kind: str) -> None:
        for name in ("decisions", "scenarios", "m", "n", "k", "scenario_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"sizes.{name} must be positive")
        if kind == "objective_wise_random" and self.k < self.m:
            raise ValueError("objective_wise_random needs k >= m")


def _blocks(k: int, m: int) -> list[int]:
    base, extra = divmod(k, m)
    return [base + (1 if j < extra else 0) for j in range(m)]


def generate_instance(kind: str, sizes: InstanceSizes, seed: int) -> UncertainInstance:
    """Deterministic random instance for ``(kind, sizes, seed)``."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    sizes.validate(kind)
    rng = np.random.default_rng(seed)
    s = sizes
    name = f"{kind}-{seed}"

    if kind == "table_random":
        return UncertainInstance(
            name=name, n=1, m=s.m, k=1,
            omega=ExplicitSpace(np.arange(1, s.decisions + 1, dtype=float)[:, None]),
            uset=ExplicitSpace(np.arange(1, s.scenarios + 1, dtype=float)[:, None]),
            objective=TableObjective(rng.uniform(0.0, 10.0, (s.decisions, s.scenarios, s.m))),
        )

    omega = ExplicitSpace(rng.uniform(-1.0, 1.0, (s.decisions, s.n)))

    def term(mask: np.ndarray | None = None) -> BilinearTerm:
        Q = rng.uniform(-1.0, 1.0, (s.n, s.k))
        c = rng.uniform(-1.0, 1.0, s.n)
        d = rng.uniform(-1.0, 1.0, s.k)
        e = float(rng.uniform(-1.0, 1.0))
        if mask is not None:
            Q[:, ~mask] = 0.0
            d[~mask] = 0.0
        return BilinearTerm(Q, c, d, e)

    if kind == "bilinear_random":
        return UncertainInstance(
            name=name, n=s.n, m=s.m, k=s.k, omega=omega,
            uset=ExplicitSpace(rng.uniform(-1.0, 1.0, (s.scenarios, s.k))),
            objective=BilinearObjective(tuple(term() for _ in range(s.m))),
        )

    blocks = _blocks(s.k, s.m)
    ends = np.cumsum(blocks)
    terms = []
    for b, end in zip(blocks, ends):
        mask = np.zeros(s.k, dtype=bool)
        mask[end - b:end] = True
        terms.append(term(mask))
    return UncertainInstance(
        name=name, n=s.n, m=s.m, k=s.k, omega=omega,
        uset=GridSpace(-np.ones(s.k), np.ones(s.k), (s.scenario_steps,) * s.k),
        objective=ObjectiveWiseObjective(tuple(terms), blocks=tuple(blocks)),
    )
