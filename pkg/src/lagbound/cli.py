"""Command-line interface.

Subcommands: patch, curvature, tameness, hausdorff, exactify, contract,
sasaki, classify, family, lemmas, figure.  All outputs are UTF-8 CSV with LF
line endings and a `# schema=1` header; figures are standalone SVG.

Exit codes: 0 success (classify: membership true), 1 failure / membership
false, 2 indeterminate membership, 3 runtime error, 4 configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .classify import FamilySpec, classify as classify_curve, generate_family
from . import sasaki as sas
from .config import (ExperimentConfig, build_patch_from_spec, load_config,
                     parse_curve_spec)
from .curves import geodesic_curvature, tameness
from .errors import ConfigError, LagboundError
from .exactness import area_functional, build_contraction, solve_c
from .hausdorff import hausdorff_distance
from .pipelines import run_figure, run_lemma_suite
from .report import write_csv
from .surface import (flat_cylinder, hyperbolic_band, plane_annulus,
                      sphere_band, unit_cylinder)

_PATCHES = {
    "cylinder": lambda grid: flat_cylinder(halfwidth=2.0, grid=grid),
    "flat_cylinder": lambda grid: flat_cylinder(halfwidth=1.5, grid=grid),
    "plane_circle": lambda grid: plane_annulus(grid=grid),
    "sphere_equator": lambda grid: sphere_band(grid=grid),
    "hyperbolic_band": lambda grid: hyperbolic_band(grid=grid),
    "unit_cylinder": lambda grid: unit_cylinder(grid=(grid[0], 257)),
}


def _parse_grid(text):
    try:
        ns, nt = text.lower().split("x")
        return int(ns), int(nt)
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}, want <n_s>x<n_t>") from exc


def _resolve_patch(name, config: ExperimentConfig, grid=None):
    grid = grid or config.grid
    if name in config.patches:
        spec = dict(config.patches[name])
        spec.setdefault("name", name)
        spec.setdefault("grid", grid)
        return build_patch_from_spec(spec)
    if name in _PATCHES:
        return _PATCHES[name](grid)
    raise ConfigError(f"unknown patch {name!r}; choices: "
                      f"{sorted(_PATCHES) + sorted(config.patches)}")


def _add_common(p, patch_default="cylinder"):
    p.add_argument("--config", default=None, help="JSON experiment config")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--tol", type=float, default=None,
                   help="override the check tolerance where applicable")
    p.add_argument("--grid", default=None, help="patch grid, e.g. 2048x513")
    p.add_argument("--patch", default=patch_default,
                   help=f"patch name (default {patch_default})")


def build_parser():
    ap = argparse.ArgumentParser(prog="lagbound",
                                 description="curvature/tameness laboratory "
                                             "for curves in surface bands")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("patch", help="build a patch and export its warp grid")
    _add_common(p)

    p = sub.add_parser("curvature", help="curvature report of a curve")
    _add_common(p)
    p.add_argument("--curve", required=True, help="curve spec, e.g. cos:1,2")

    p = sub.add_parser("tameness", help="tameness report of a curve")
    _add_common(p)
    p.add_argument("--curve", required=True)

    p = sub.add_parser("hausdorff", help="Hausdorff distance of two curves")
    _add_common(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--curve2", required=True)

    p = sub.add_parser("exactify", help="vertical shift making a*xi exact")
    _add_common(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser("contract", help="contraction path through exact graphs")
    _add_common(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--n-alpha", type=int, default=11)

    p = sub.add_parser("sasaki", help="integrate bundle geodesics and export")
    _add_common(p)
    p.add_argument("--base", default="flat_torus",
                   choices=["flat_torus", "round_sphere"])
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--sweep", type=float, default=None, metavar="EPS",
                   help="instead export the graph-norm sweep (t, sup|B|) for "
                        "the gradient graph of amplitude EPS")

    p = sub.add_parser("classify", help="level-k membership verdict")
    _add_common(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--k", type=float, required=True)

    p = sub.add_parser("family", help="generate a named family and report")
    _add_common(p)
    p.add_argument("family_id")
    p.add_argument("--pairwise", action="store_true",
                   help="also export the pairwise Hausdorff distance matrix")
    p.add_argument("--scan", default=None,
                   choices=["liouville_class", "enclosed_area"],
                   help="also export the separation scan table")

    p = sub.add_parser("lemmas", help="run the full check suite")
    _add_common(p)
    p.add_argument("--quick", action="store_true",
                   help="reduced suite (fast, same CSV schema)")

    p = sub.add_parser("figure", help="draw a family and its companion CSV")
    _add_common(p)
    p.add_argument("family_id")
    return ap


def _load(args) -> ExperimentConfig:
    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if getattr(args, "grid", None):
        config.grid = _parse_grid(args.grid)
    if getattr(args, "quick", False):
        config.quick = True
    config.out_dir = args.out
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 4
    except LagboundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _dispatch(args) -> int:
    config = _load(args)
    os.makedirs(config.out_dir, exist_ok=True)
    cmd = args.command

    if cmd == "lemmas":
        suite = run_lemma_suite(config)
        for res in suite.results:
            print(f"{'PASS' if res.passed else 'FAIL'} {res.name} "
                  f"({len(res.rows)} rows) -> {res.csv_path}")
        return 1 if suite.any_failed else 0

    if cmd == "figure":
        svg, csv = run_figure(args.family_id, config.out_dir, config)
        print(svg)
        print(csv)
        return 0

    if cmd == "family":
        curves = generate_family(FamilySpec(args.family_id))
        patch = curves[0].patch
        from .curves import Curve

        base = Curve.constant(patch, 0.0, n=curves[0].n)
        rows = []
        for cv in curves:
            rows.append((cv.name, geodesic_curvature(cv).sup,
                         tameness(cv).epsilon,
                         hausdorff_distance(cv, base).value,
                         area_functional(patch, cv)))
        path = write_csv(os.path.join(config.out_dir, f"{args.family_id}.csv"),
                         ["member", "sup_curvature", "epsilon",
                          "delta_h_to_base", "action_class"], rows,
                         {"family": args.family_id, "seed": config.seed})
        print(path)
        if args.pairwise:
            mat_rows = [(a.name, b.name, hausdorff_distance(a, b).value)
                        for i, a in enumerate(curves)
                        for b in curves[i + 1:]]
            print(write_csv(
                os.path.join(config.out_dir, f"{args.family_id}_pairwise.csv"),
                ["member_a", "member_b", "delta_h"], mat_rows,
                {"family": args.family_id}))
        if args.scan:
            from .classify import separation_scan

            scan = separation_scan(curves, args.scan)
            print(write_csv(
                os.path.join(config.out_dir, f"{args.family_id}_scan.csv"),
                ["member_a", "member_b", "delta_h", "invariant_gap"],
                scan.rows,
                {"family": args.family_id, "invariant": args.scan,
                 "a_emp": scan.a_emp if scan.a_emp is not None else "none"}))
        return 0

    if cmd == "sasaki":
        base = sas.base_manifold(args.base)
        if args.sweep is not None:
            gg = (sas.torus_gradient_graph(args.sweep)
                  if args.base == "flat_torus"
                  else sas.sphere_harmonic_graph(args.sweep))
            t_grid = np.linspace(0.0, 1.0, 11)
            vals = sas.curvature_sweep(base, gg, t_grid)
            path = write_csv(
                os.path.join(config.out_dir, f"sweep_{args.base}.csv"),
                ["t", "sup_norm"], list(zip(t_grid, vals)),
                {"base": args.base, "amplitude": args.sweep})
            print(path)
            return 0
        rng = np.random.default_rng(config.seed)
        states = sas.random_sasaki_states(base, args.states, rng)
        traj = sas.sasaki_geodesic(base, states, horizon=args.horizon,
                                   step=args.step)
        fit = sas.parabola_check(traj)
        rows = []
        for b in range(len(states)):
            for i, t in enumerate(traj.times):
                rows.append((b, t, *traj.x[i, b], *traj.y[i, b],
                             traj.y_norm2[i, b]))
        path = write_csv(os.path.join(config.out_dir, f"sasaki_{args.base}.csv"),
                         ["state", "t", "x1", "x2", "y1", "y2", "y_norm2"],
                         rows, {"base": args.base, "seed": config.seed,
                                "step": args.step})
        print(path)
        print(f"max parabola residual {np.max(fit.max_residual):.3e}, "
              f"max leading gap "
              f"{np.max(np.abs(fit.leading - fit.expected_leading)):.3e}")
        return 0

    patch = _resolve_patch(args.patch, config)

    if cmd == "patch":
        path = os.path.join(config.out_dir, f"warp_{args.patch}.csv")
        patch.export_warp_csv(path)
        print(path)
        return 0

    curve = parse_curve_spec(args.curve, patch)

    if cmd == "curvature":
        rep = geodesic_curvature(curve)
        path = write_csv(os.path.join(config.out_dir, "curvature.csv"),
                         ["curve", "sup", "arg_s", "error"],
                         [(curve.name, rep.sup, rep.arg_s, rep.error)],
                         {"patch": args.patch})
        print(f"sup|B| = {rep.sup:.12g} at s = {rep.arg_s:.6g} "
              f"(err {rep.error:.2e}) -> {path}")
        return 0

    if cmd == "tameness":
        rep = tameness(curve)
        path = write_csv(os.path.join(config.out_dir, "tameness.csv"),
                         ["curve", "epsilon", "long_range_min",
                          "short_range_bound", "delta_min", "pair_s",
                          "pair_s2", "error"],
                         [(curve.name, rep.epsilon, rep.long_range_min,
                           rep.short_range_bound, rep.delta_min, rep.pair[0],
                           rep.pair[1], rep.error)], {"patch": args.patch})
        print(f"epsilon = {rep.epsilon:.9g} (err {rep.error:.2e}) -> {path}")
        return 0

    if cmd == "hausdorff":
        other = parse_curve_spec(args.curve2, patch)
        res = hausdorff_distance(curve, other)
        path = write_csv(os.path.join(config.out_dir, "hausdorff.csv"),
                         ["curve_a", "curve_b", "delta_h", "directed_ab",
                          "directed_ba", "error"],
                         [(curve.name, other.name, res.value, res.directed_ab,
                           res.directed_ba, res.error)], {"patch": args.patch})
        print(f"delta_H = {res.value:.9g} (err {res.error:.2e}) -> {path}")
        return 0

    if cmd == "exactify":
        c = solve_c(patch, curve, args.alpha)
        print(f"c({args.alpha:g}) = {c:.15g}")
        write_csv(os.path.join(config.out_dir, "exactify.csv"),
                  ["curve", "alpha", "c"], [(curve.name, args.alpha, c)],
                  {"patch": args.patch})
        return 0

    if cmd == "contract":
        path_obj = build_contraction(patch, curve, n_alpha=args.n_alpha)
        base = type(curve).constant(patch, 0.0, n=curve.n)
        rows = []
        for a, c, cv in zip(path_obj.alphas, path_obj.c, path_obj.curves):
            rows.append((a, c, geodesic_curvature(cv).sup,
                         tameness(cv).epsilon,
                         hausdorff_distance(cv, base).value))
        path = write_csv(os.path.join(config.out_dir, "contract.csv"),
                         ["alpha", "c", "sup_curvature", "epsilon",
                          "delta_h_to_base"], rows, {"patch": args.patch,
                                                     "curve": curve.name})
        print(path)
        return 0

    if cmd == "classify":
        verdict = classify_curve(curve, args.k)
        label = {True: "member", False: "not_member", None: "indeterminate"}
        write_csv(os.path.join(config.out_dir, "classify.csv"),
                  ["curve", "k", "verdict", "curvature", "epsilon",
                   "curvature_margin", "tameness_margin",
                   "containment_margin"],
                  [(curve.name, args.k, label[verdict.verdict],
                    verdict.curvature, verdict.epsilon,
                    verdict.margins["curvature"][0],
                    verdict.margins["tameness"][0],
                    verdict.margins["containment"][0])],
                  {"patch": args.patch})
        print(f"{curve.name} at k={args.k:g}: {label[verdict.verdict]}")
        return {True: 0, False: 1, None: 2}[verdict.verdict]

    raise ConfigError(f"unhandled command {cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
