"""Command-line interface.

    robustmo <command> --instance PATH [--p N] [--epsilon X] [--delta X]
             [--alpha X] [--refine K] [--seed S] [--out DIR]

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 discretization warning when ``--strict`` is given.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .cones import Bounds, check_bounds
from .generate import KINDS, InstanceSizes, generate_instance
from .io import fmt, parse_instance, read_cloud_csv, write_csv, write_instance
from .problem import InstanceError, UncertainInstance, auto_bounds, upper_bound_map
from .relations import RelationKind, certify_strict_upper, holds
from .solver import (build_all_staircases, compare_point_based, oracle_robust, solve_mp,
                     verify_approximation, verify_coverage, wfdvp_p)
from .staircase import DEFAULT_TOL, InfeasibleBoundsError

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_DISCRETIZATION = 0, 1, 2, 3

logger = logging.getLogger("robustmo")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    delta: float = 1.0
    alpha_override: float | None = None
    epsilon: float = 0.0
    p: int | None = None
    grid_refine_factor: int = 1
    tol_fixed_point: float = DEFAULT_TOL
    seed: int = 0
    output_dir: Path | None = None
    strict: bool = False

    def __post_init__(self):
        if not self.delta > 0:
            raise UsageError("--delta must be positive")
        if not self.epsilon >= 0:
            raise UsageError("--epsilon must be nonnegative")
        if self.p is not None and self.p < 1:
            raise UsageError("--p must be >= 1")
        if self.grid_refine_factor < 1:
            raise UsageError("--refine must be >= 1")
        if not self.tol_fixed_point > 0:
            raise UsageError("--tol must be positive")

    def bounds_for(self, inst: UncertainInstance) -> Bounds:
        fitted = auto_bounds(inst, self.delta)
        if self.alpha_override is None:
            return fitted
        try:
            bounds = Bounds(fitted.lb, self.alpha_override, fitted.delta)
        except ValueError as exc:
            raise UsageError(f"--alpha: {exc}") from exc
        if not check_bounds(bounds, inst.images.reshape(-1, inst.m)):
            raise UsageError(f"--alpha {self.alpha_override}: image points are not inside "
                             "lb + int C^alpha")
        return bounds

    def p_for(self, inst: UncertainInstance) -> int:
        if self.p is not None:
            return self.p
        return wfdvp_p(inst) or 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--instance", type=Path, help="instance JSON file")
    common.add_argument("--p", type=int, help="number of epigraph vectors (default: exactness threshold or 1)")
    common.add_argument("--epsilon", type=float, default=0.0)
    common.add_argument("--delta", type=float, default=1.0, help="margin for the fitted lower bound")
    common.add_argument("--alpha", type=float, help="override the fitted cone parameter")
    common.add_argument("--refine", type=int, default=1, help="re-check witnesses on a refined grid")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="fixed-point tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, help="directory for CSV/JSON artifacts")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 when refinement reports a discretization warning")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="robustmo", description="Set-based minmax robust multiobjective toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="robust weakly efficient decisions via the reformulation")
    sub.add_parser("oracle", parents=[common], help="robust weakly efficient decisions by definition")
    sub.add_parser("verify", parents=[common], help="check inclusion chain, exactness and coverage")
    sub.add_parser("bounds", parents=[common], help="fitted lower bound, cone parameter, upper bounds")
    rel = sub.add_parser("relations", parents=[common], help="set relations between two point clouds")
    rel.add_argument("a_csv", type=Path)
    rel.add_argument("b_csv", type=Path)
    sub.add_parser("compare", parents=[common], help="point-based vs set-based robustness")
    sub.add_parser("export-geometry", parents=[common], help="per-decision plot data")
    gen = sub.add_parser("generate", parents=[common], help="write a seeded random instance")
    gen.add_argument("--kind", choices=KINDS, default="table_random")
    gen.add_argument("--decisions", type=int, default=4)
    gen.add_argument("--scenarios", type=int, default=3)
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--n", type=int, default=1)
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--scenario-steps", type=int, default=2)
    return parser


def _indices(ix: Sequence[int]) -> str:
    return "{" + ", ".join(f"x{i + 1}" for i in ix) + "}"


def _vec(v) -> str:
    return "(" + ", ".join(fmt(t) for t in v) + ")"


def _load(args, cfg: RunConfig) -> UncertainInstance:
    if args.instance is None:
        raise UsageError(f"{args.command} requires --instance")
    try:
        return parse_instance(args.instance)
    except FileNotFoundError as exc:
        raise UsageError(f"cannot read {args.instance}: {exc.strerror}") from exc


def _require_out(cfg: RunConfig) -> Path:
    if cfg.output_dir is None:
        raise UsageError("this command requires --out")
    return cfg.output_dir


def cmd_solve(args, cfg: RunConfig) -> int:
    inst = _load(args, cfg)
    p = cfg.p_for(inst)
    rep = solve_mp(inst, p, cfg.epsilon, bounds=cfg.bounds_for(inst), tol=cfg.tol_fixed_point,
                   refine=cfg.grid_refine_factor)
    print(f"instance: {inst.name}")
    print(f"p: {p}  epsilon: {fmt(rep.epsilon)}")
    print(f"solutions: {_indices(rep.solution_indices)}")
    for i in rep.solution_indices:
        print(f"  x{i + 1} witness: " + " ".join(_vec(y) for y in rep.witnesses[i]))
    for w in rep.warnings:
        print(f"warning: {w}")
    if cfg.output_dir is not None:
        rows = []
        for i in rep.solution_indices:
            for slot, y in enumerate(rep.witnesses[i]):
                rows.append([i + 1, slot + 1, *map(float, inst.decisions[i]), *map(float, y)])
        header = (["decision", "slot"] + [f"x_{d + 1}" for d in range(inst.n)]
                  + [f"y_{j + 1}" for j in range(inst.m)])
        write_csv(cfg.output_dir / "solutions.csv", header, rows)
    if rep.warnings and cfg.strict:
        return EXIT_DISCRETIZATION
    return EXIT_OK


def cmd_oracle(args, cfg: RunConfig) -> int:
    inst = _load(args, cfg)
    sol = oracle_robust(inst)
    print(f"robust weakly efficient: {_indices(sol)}")
    if cfg.output_dir is not None:
        write_csv(cfg.output_dir / "oracle.csv", ["decision"] + [f"x_{d + 1}" for d in range(inst.n)],
                  [[i + 1, *map(float, inst.decisions[i])] for i in sol])
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    inst = _load(args, cfg)
    bounds = cfg.bounds_for(inst)
    p_max = cfg.p_for(inst)
    approx = verify_approximation(inst, p_max, cfg.epsilon, bounds=bounds)
    cover_p = max(approx.chain)
    cover = verify_coverage(inst, cover_p, bounds=bounds)
    for p in sorted(approx.chain):
        tag = "  (exactness threshold)" if p == approx.exact_p else ""
        print(f"p={p}: {_indices(approx.chain[p])}{tag}")
    print(f"oracle: {_indices(approx.oracle)}")
    if approx.exact_p is not None and cfg.epsilon == 0:
        same = approx.chain[approx.exact_p] == approx.oracle
        print(f"chain equals oracle at p={approx.exact_p}: {'yes' if same else 'no'}")
    print(f"approximation: {'pass' if approx.passed else 'FAIL: ' + str(approx.violation)}")
    if cover.passed:
        print(f"coverage (p={cover_p}): pass")
        for x, by in cover.covered_by.items():
            print(f"  x{x + 1} covered by {_indices(by)}")
    else:
        print(f"coverage (p={cover_p}): FAIL, x{cover.first_uncovered + 1} uncovered")
    if cfg.output_dir is not None:
        rows = [[p, " ".join(str(i + 1) for i in approx.chain[p])] for p in sorted(approx.chain)]
        rows.append(["oracle", " ".join(str(i + 1) for i in approx.oracle)])
        write_csv(cfg.output_dir / "verify.csv", ["p", "solutions"], rows)
    return EXIT_OK if approx.passed and cover.passed else EXIT_VERIFY


def cmd_bounds(args, cfg: RunConfig) -> int:
    inst = _load(args, cfg)
    b = cfg.bounds_for(inst)
    print(f"lb: {_vec(b.lb)}")
    print(f"alpha: {fmt(b.alpha)}")
    print(f"delta: {fmt(b.delta)}")
    rows = []
    for i in range(len(inst.decisions)):
        ub = upper_bound_map(inst, i)
        print(f"ub(x{i + 1}): {_vec(ub)}")
        rows.append([i + 1, *map(float, ub)])
    if cfg.output_dir is not None:
        m = inst.m
        write_csv(cfg.output_dir / "bounds.csv",
                  ["decision"] + [f"ub_{j + 1}" for j in range(m)] + [f"lb_{j + 1}" for j in range(m)]
                  + ["alpha"],
                  [r + [*map(float, b.lb), float(b.alpha)] for r in rows])
    return EXIT_OK


def cmd_relations(args, cfg: RunConfig) -> int:
    A, B = read_cloud_csv(args.a_csv), read_cloud_csv(args.b_csv)
    if A.shape[1] != B.shape[1]:
        raise UsageError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    results = [(k.value, holds(k, A, B)) for k in RelationKind]
    for name, val in results:
        print(f"{name}: {'true' if val else 'false'}")
    eps = certify_strict_upper(A, B)
    print(f"epsilon: {'none' if eps is None else fmt(eps)}")
    if cfg.output_dir is not None:
        rows = [[name, "true" if val else "false"] for name, val in results]
        rows.append(["epsilon", "none" if eps is None else fmt(eps)])
        write_csv(cfg.output_dir / "relations.csv", ["relation", "value"], rows)
    return EXIT_OK


def cmd_compare(args, cfg: RunConfig) -> int:
    inst = _load(args, cfg)
    cmp = compare_point_based(inst)
    print(f"point-based weakly efficient: {_indices(cmp.point_based)}")
    print(f"set-based robust weakly efficient: {_indices(cmp.set_based)}")
    print(f"classified differently: {_indices(cmp.differences)}")
    if cfg.output_dir is not None:
        pb, sb = set(cmp.point_based), set(cmp.set_based)
        rows = [[i + 1, *map(float, w), int(i in pb), int(i in sb)]
                for i, w in enumerate(cmp.worst_case)]
        write_csv(cfg.output_dir / "compare.csv",
                  ["decision"] + [f"worst_{j + 1}" for j in range(inst.m)]
                  + ["point_based", "set_based"], rows)
    return EXIT_OK


def cmd_export_geometry(args, cfg: RunConfig) -> int:
    inst = _load(args, cfg)
    out = _require_out(cfg)
    bounds = cfg.bounds_for(inst)
    stairs = build_all_staircases(inst, bounds, cfg.tol_fixed_point)
    m = inst.m
    ycols = [f"y_{j + 1}" for j in range(m)]
    for i, st in enumerate(stairs):
        write_csv(out / f"images_x{i + 1}.csv", ycols, [list(map(float, y)) for y in inst.images[i]])
        write_csv(out / f"staircase_x{i + 1}.csv", ycols,
                  [list(map(float, y)) for y in st.minimal_points])
    write_csv(out / "bounds.csv",
              ["decision"] + [f"lb_{j + 1}" for j in range(m)] + [f"ub_{j + 1}" for j in range(m)]
              + ["alpha"],
              [[i + 1, *map(float, st.lb), *map(float, st.ub), float(bounds.alpha)]
               for i, st in enumerate(stairs)])
    print(f"wrote geometry for {len(stairs)} decisions to {out}")
    return EXIT_OK


def cmd_generate(args, cfg: RunConfig) -> int:
    out = _require_out(cfg)
    sizes = InstanceSizes(decisions=args.decisions, scenarios=args.scenarios, m=args.m, n=args.n,
                          k=args.k, scenario_steps=args.scenario_steps)
    try:
        inst = generate_instance(args.kind, sizes, cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    path = out / f"{inst.name}.json"
    write_instance(inst, path)
    print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve, "oracle": cmd_oracle, "verify": cmd_verify, "bounds": cmd_bounds,
    "relations": cmd_relations, "compare": cmd_compare, "export-geometry": cmd_export_geometry,
    "generate": cmd_generate,
}


def run_command(command: str, args: argparse.Namespace, cfg: RunConfig) -> int:
    return COMMANDS[command](args, cfg)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = RunConfig(delta=args.delta, alpha_override=args.alpha, epsilon=args.epsilon, p=args.p,
                        grid_refine_factor=args.refine, tol_fixed_point=args.tol, seed=args.seed,
                        output_dir=args.out, strict=args.strict)
        return run_command(args.command, args, cfg)
    except UsageError as exc:
        print(f"robustmo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as exc:
        print("robustmo: invalid instance:", file=sys.stderr)
        for e in exc.errors:
            print(f"  {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleBoundsError, ValueError, OSError) as exc:
        print(f"robustmo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
