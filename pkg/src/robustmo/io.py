"""JSON instance documents and CSV export.

Instance document::

    {"name": ..., "n": 1, "m": 2, "k": 1,
     "omega": {"type": "explicit", "points": [[...], ...]},
     "uncertainty": {"type": "grid", "lower": [...], "upper": [...], "steps": [...]},
     "objective": {"type": "table", "values": [[[...], ...], ...]}}

Objectives may also be ``{"type": "bilinear", "terms": [{"Q", "c", "d", "e"}, ...]}``
or ``{"type": "objective_wise", "blocks": [k_1, ..., k_m], "terms": [...]}``.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .points import PointCloud, as_cloud
from .problem import (BilinearObjective, BilinearTerm, ExplicitSpace, GridSpace, InstanceError,
                      ObjectiveWiseObjective, TableObjective, UncertainInstance)

TOP_KEYS = ("name", "n", "m", "k", "omega", "uncertainty", "objective")


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _check_numbers(value: Any, path: str, errors: list[str]) -> None:
    if isinstance(value, list):
        for i, v in enumerate(value):
            _check_numbers(v, f"{path}[{i}]", errors)
    elif not _is_number(value):
        errors.append(f"{path}: expected a finite number, got {value!r}")


def _matrix(value: Any, path: str, errors: list[str], rank: int) -> np.ndarray | None:
    before = len(errors)
    if not isinstance(value, list):
        errors.append(f"{path}: expected a list")
        return None
    _check_numbers(value, path, errors)
    if len(errors) > before:
        return None
    try:
        arr = np.array(value, dtype=float)
    except ValueError:
        errors.append(f"{path}: ragged nested list")
        return None
    if arr.ndim != rank:
        errors.append(f"{path}: expected {rank}-d array, got shape {arr.shape}")
        return None
    return arr


def _space(doc: Any, path: str, dim: Any, errors: list[str]):
    if not isinstance(doc, dict) or doc.get("type") not in ("explicit", "grid"):
        errors.append(f"{path}.type: expected 'explicit' or 'grid'")
        return None
    if doc["type"] == "explicit":
        pts = _matrix(doc.get("points"), f"{path}.points", errors, 2)
        if pts is None:
            return None
        if pts.shape[0] == 0:
            errors.append(f"{path}.points: must be nonempty")
            return None
        if isinstance(dim, int) and pts.shape[1] != dim:
            errors.append(f"{path}.points: dimension {pts.shape[1]} != {dim}")
            return None
        return ExplicitSpace(pts)
    lower = _matrix(doc.get("lower"), f"{path}.lower", errors, 1)
    upper = _matrix(doc.get("upper"), f"{path}.upper", errors, 1)
    steps = doc.get("steps")
    if not isinstance(steps, list) or not all(isinstance(s, int) and not isinstance(s, bool)
                                               for s in steps):
        errors.append(f"{path}.steps: expected a list of integers")
        return None
    if lower is None or upper is None:
        return None
    if not (len(lower) == len(upper) == len(steps)):
        errors.append(f"{path}: lower, upper and steps must have equal length")
        return None
    if isinstance(dim, int) and len(lower) != dim:
        errors.append(f"{path}.lower: dimension {len(lower)} != {dim}")
        return None
    for i, s in enumerate(steps):
        if s < 1:
            errors.append(f"{path}.steps[{i}]: must be >= 1")
    for i, (lo, hi) in enumerate(zip(lower, upper)):
        if lo > hi:
            errors.append(f"{path}.lower[{i}]: exceeds upper corner")
    if any(e.startswith(path) for e in errors):
        return None
    return GridSpace(lower, upper, tuple(steps))


def _terms(doc: Any, path: str, errors: list[str], n: Any, k: Any) -> list[BilinearTerm] | None:
    if not isinstance(doc, list) or not doc:
        errors.append(f"{path}: expected a nonempty list of terms")
        return None
    out = []
    for j, t in enumerate(doc):
        tp = f"{path}[{j}]"
        if not isinstance(t, dict):
            errors.append(f"{tp}: expected an object")
            continue
        Q = _matrix(t.get("Q"), f"{tp}.Q", errors, 2)
        c = _matrix(t.get("c"), f"{tp}.c", errors, 1)
        d = _matrix(t.get("d"), f"{tp}.d", errors, 1)
        e = t.get("e", 0.0)
        if not _is_number(e):
            errors.append(f"{tp}.e: expected a finite number")
            continue
        if Q is None or c is None or d is None:
            continue
        if isinstance(n, int) and isinstance(k, int) and Q.shape != (n, k):
            errors.append(f"{tp}.Q: shape {Q.shape} != ({n}, {k})")
            continue
        if isinstance(n, int) and c.shape != (n,):
            errors.append(f"{tp}.c: length {len(c)} != n={n}")
            continue
        if isinstance(k, int) and d.shape != (k,):
            errors.append(f"{tp}.d: length {len(d)} != k={k}")
            continue
        out.append(BilinearTerm(Q, c, d, float(e)))
    return out if len(out) == len(doc) else None


def instance_from_dict(doc: Any) -> UncertainInstance:
    """Validate a parsed instance document; raise :class:`InstanceError` listing every problem."""
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise InstanceError(["<root>: expected a JSON object"])
    for key in TOP_KEYS:
        if key not in doc:
            errors.append(f"{key}: missing")
    for key in ("n", "m", "k"):
        v = doc.get(key)
        if key in doc and (not isinstance(v, int) or isinstance(v, bool) or v < 1):
            errors.append(f"{key}: expected a positive integer, got {v!r}")
    if "name" in doc and not isinstance(doc["name"], str):
        errors.append("name: expected a string")
    if errors:
        raise InstanceError(errors)
    n, m, k = doc["n"], doc["m"], doc["k"]
    omega = _space(doc["omega"], "omega", n, errors)
    uset = _space(doc["uncertainty"], "uncertainty", k, errors)

    obj_doc = doc["objective"]
    objective = None
    kind = obj_doc.get("type") if isinstance(obj_doc, dict) else None
    if kind == "table":
        vals = _matrix(obj_doc.get("values"), "objective.values", errors, 3)
        if vals is not None:
            if not (isinstance(omega, ExplicitSpace) and isinstance(uset, ExplicitSpace)):
                errors.append("objective: table objective requires explicit omega and uncertainty")
            else:
                want = (len(omega.points), len(uset.points), m)
                for ax, (got, exp, label) in enumerate(zip(vals.shape, want,
                                                           ("decisions", "scenarios", "objectives"))):
                    if got != exp:
                        errors.append(f"objective.values: axis {ax} has {got} {label}, expected {exp}")
                if vals.shape == want:
                    objective = TableObjective(vals)
        elif isinstance(obj_doc.get("values"), list):
            _locate_ragged(obj_doc["values"], m, errors)
    elif kind in ("bilinear", "objective_wise"):
        terms = _terms(obj_doc.get("terms"), "objective.terms", errors, n, k)
        if terms is not None and len(terms) != m:
            errors.append(f"objective.terms: {len(terms)} terms for m={m}")
        elif terms is not None:
            if kind == "bilinear":
                objective = BilinearObjective(tuple(terms))
            else:
                blocks = obj_doc.get("blocks")
                if not isinstance(blocks, list) or not all(isinstance(b, int) for b in blocks):
                    errors.append("objective.blocks: expected a list of integers")
                else:
                    objective = ObjectiveWiseObjective(tuple(terms), blocks=tuple(blocks))
    else:
        errors.append("objective.type: expected 'table', 'bilinear' or 'objective_wise'")

    if errors or omega is None or uset is None or objective is None:
        raise InstanceError(errors or ["instance could not be assembled"])
    return UncertainInstance(name=doc["name"], n=n, m=m, k=k, omega=omega, uset=uset,
                             objective=objective)


def _locate_ragged(values: list, m: int, errors: list[str]) -> None:
    for i, row in enumerate(values):
        if not isinstance(row, list):
            continue
        for j, y in enumerate(row):
            if isinstance(y, list) and len(y) != m:
                errors.append(f"objective.values[{i}][{j}]: length {len(y)} != m={m}")


def parse_instance(path: str | os.PathLike) -> UncertainInstance:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise InstanceError([f"<document>: malformed JSON ({exc})"]) from exc
    return instance_from_dict(doc)


def _reject_constant(name: str):
    raise InstanceError([f"<document>: non-finite constant {name} is not allowed"])


def _space_to_dict(space) -> dict:
    if isinstance(space, ExplicitSpace):
        return {"type": "explicit", "points": space.points.tolist()}
    return {"type": "grid", "lower": space.lower.tolist(), "upper": space.upper.tolist(),
            "steps": list(space.steps)}


def instance_to_dict(inst: UncertainInstance) -> dict:
    obj = inst.objective
    if isinstance(obj, TableObjective):
        objective = {"type": "table", "values": obj.values.tolist()}
    else:
        terms = [{"Q": t.Q.tolist(), "c": t.c.tolist(), "d": t.d.tolist(), "e": t.e}
                 for t in obj.terms]
        objective = {"type": "bilinear", "terms": terms}
        if isinstance(obj, ObjectiveWiseObjective):
            objective = {"type": "objective_wise", "blocks": list(obj.blocks), "terms": terms}
    return {"name": inst.name, "n": inst.n, "m": inst.m, "k": inst.k,
            "omega": _space_to_dict(inst.omega), "uncertainty": _space_to_dict(inst.uset),
            "objective": objective}


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temporary sibling file, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_instance(inst: UncertainInstance, path: str | os.PathLike) -> None:
    atomic_write(path, json.dumps(instance_to_dict(inst), indent=2) + "\n")


def fmt(v: float) -> str:
    """12 significant digits; ``-0`` is printed as ``0``."""
    s = f"{float(v):.12g}"
    return "0" if s == "-0" else s


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, (float, np.floating)) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    atomic_write(path, csv_text(header, rows))


def read_cloud_csv(path: str | os.PathLike) -> PointCloud:
    """Read a point cloud; a first row that is not numeric is treated as a header."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in line.split(",")]
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                if lineno == 0 and not rows:
                    continue
                raise ValueError(f"{path}:{lineno + 1}: non-numeric entry")
    return as_cloud(rows)
