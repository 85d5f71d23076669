"""Experiment pipelines: the lemma-check suite, figure emission, and the
classification command.

Each suite check writes one CSV (pass/fail per row with margins and witness
data) into the output directory; the suite result carries the overall status
for the process exit code.  All randomness flows from the config seed, so a
fixed seed reproduces the CSV bundle byte for byte.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .classify import FamilySpec, generate_family
from . import sasaki as sas
from .config import ExperimentConfig
from .curves import Curve, geodesic_curvature, tameness, tameness_comparison_check, trig_curve
from .exactness import (area_functional, build_contraction,
                        contraction_bounds_check, isotopy_invariant,
                        solve_c_grid)
from .hausdorff import contraction_path_bound_check, hausdorff_distance, radial_path_check
from .report import write_csv, write_curves_svg
from .surface import (flat_cylinder, hyperbolic_band, plane_annulus,
                      sphere_band, warp_taylor_check)

__all__ = ["run_lemma_suite", "run_figure", "SuiteResult", "CheckResult"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    columns: list
    rows: list
    meta: dict
    csv_path: str | None = None


@dataclass
class SuiteResult:
    results: list
    any_failed: bool
    out_dir: str


def _suite_params(config: ExperimentConfig) -> dict:
    if config.quick:
        return dict(grid=(512, 129), n_xi=3, n_alpha=21, members=1,
                    alpha_steps=7, states=4, horizon=4.0, step=2e-3,
                    n_theta=240, t_steps=6, pairs=4, n_scan_flat=384,
                    samples=700)
    return dict(grid=config.grid, n_xi=10, n_alpha=101, members=3,
                alpha_steps=11, states=25, horizon=10.0, step=1e-3,
                n_theta=720, t_steps=11, pairs=10, n_scan_flat=512,
                samples=1600)


def _suite_patches(params) -> dict:
    grid = params["grid"]
    return {
        "flat_cylinder": flat_cylinder(halfwidth=1.5, grid=grid),
        "plane_circle": plane_annulus(circle_radius=2.0, halfwidth=1.0, grid=grid),
        "sphere_equator": sphere_band(halfwidth=0.6, grid=grid),
        "hyperbolic_band": hyperbolic_band(halfwidth=0.6, grid=grid),
    }


def _random_trig(patch, rng, sup_target, max_mode=8, n_modes=3, name="xi"):
    modes = rng.choice(np.arange(1, max_mode + 1), size=n_modes, replace=False)
    cos_amps, sin_amps = {}, {}
    for m in modes:
        cos_amps[int(m)] = rng.normal()
        sin_amps[int(m)] = rng.normal()
    # pre-normalize by the coefficient sum so the probe stays inside the band
    total = sum(abs(v) for v in cos_amps.values()) \
        + sum(abs(v) for v in sin_amps.values())
    cos_amps = {m: a * sup_target / total for m, a in cos_amps.items()}
    sin_amps = {m: a * sup_target / total for m, a in sin_amps.items()}
    probe = trig_curve(patch, cos_amps, sin_amps, n=512)
    scale = sup_target / probe.sup_norm()
    cos_amps = {m: a * scale for m, a in cos_amps.items()}
    sin_amps = {m: a * scale for m, a in sin_amps.items()}
    # sample on the patch grid so area evaluations skip resampling
    return trig_curve(patch, cos_amps, sin_amps, n=patch.n_s, name=name)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def _check_warp_taylor(config, params, patches, rng):
    rows = []
    ok = True
    tol = config.tolerances["taylor_order"]
    for name, patch in patches.items():
        for s in (0.0, 1.234, 3.7):
            fit = warp_taylor_check(patch, s)
            coeff_gap = float(np.max(np.abs(np.subtract(fit.coefficients,
                                                        fit.expected))))
            row_ok = fit.remainder_order >= tol and coeff_gap <= 1e-6
            ok = ok and row_ok
            rows.append((name, s, *fit.coefficients, *fit.expected,
                         fit.remainder_order, coeff_gap, row_ok))
    return CheckResult("warp_taylor", ok,
                       ["patch", "s", "c0", "c1", "c2", "e0", "e1", "e2",
                        "remainder_order", "coeff_gap", "pass"],
                       rows, {"tol_order": tol})


def _check_exact_shift(config, params, patches, rng):
    rows = []
    ok = True
    tol_area = config.tolerances["area_residual"]
    slack = config.tolerances["lipschitz_slack"]
    alphas = np.linspace(0.0, 1.0, params["n_alpha"])
    for pname in ("flat_cylinder", "sphere_equator"):
        patch = patches[pname]
        for i in range(params["n_xi"]):
            sup_target = (patch.halfwidth / 3.0) * rng.uniform(0.3, 0.95)
            offset = rng.uniform(-0.2, 0.2) * sup_target
            xi = _random_trig(patch, rng, sup_target, name=f"xi{i}")
            xi = Curve(patch, xi.xi + offset, xi.dxi, xi.d2xi, name=f"xi{i}")
            sup = xi.sup_norm()
            if sup >= patch.halfwidth / 3:
                xi = Curve(patch, xi.xi * 0.9, xi.dxi * 0.9, xi.d2xi * 0.9,
                           name=xi.name)
                sup = xi.sup_norm()
            c_vals = solve_c_grid(patch, xi, alphas)
            resid = np.array([
                area_functional(patch, Curve(patch, a * xi.xi + c, a * xi.dxi,
                                             a * xi.d2xi))
                for a, c in zip(alphas, c_vals)])
            bracket_gap = float(np.max(np.abs(c_vals) - alphas * sup))
            dc = np.abs(c_vals[:, None] - c_vals[None, :])
            da = np.abs(alphas[:, None] - alphas[None, :])
            lip_gap = float(np.max(dc - sup * da))
            row_ok = (np.max(np.abs(resid)) <= tol_area
                      and bracket_gap <= 1e-12 and lip_gap <= slack)
            ok = ok and row_ok
            rows.append((pname, xi.name, float(np.max(np.abs(resid))),
                         bracket_gap, lip_gap, row_ok))
    return CheckResult("exact_shift", ok,
                       ["patch", "xi", "max_area_residual", "bracket_gap",
                        "lipschitz_gap", "pass"],
                       rows, {"tol_area": tol_area, "lipschitz_slack": slack})


def _contraction_suite(config, params, patches, rng):
    """Shared runner behind the contraction curvature/tameness checks."""
    tol_b = config.tolerances["contraction_curvature"]
    tol_e = config.tolerances["contraction_tameness"]
    curv_rows, tame_rows = [], []
    curv_ok = tame_ok = True
    for pname in ("flat_cylinder", "plane_circle", "sphere_equator"):
        patch = patches[pname]
        k_base = geodesic_curvature(Curve.constant(patch, 0.0, n=512),
                                    _with_error=False).sup
        for i in range(params["members"]):
            xi = _random_trig(patch, rng, sup_target=0.05 * rng.uniform(0.5, 1.0),
                              name=f"{pname}_xi{i}")
            path = build_contraction(patch, xi, n_alpha=params["alpha_steps"])
            chk = contraction_bounds_check(path, k=k_base, k_prime=k_base + 0.1,
                                           tol_curv=tol_b, tol_eps=tol_e)
            curv_ok = curv_ok and chk.curvature_ok
            tame_ok = tame_ok and chk.tameness_ok
            curv_rows.append((pname, xi.name, chk.max_curvature,
                              chk.curvature_bound,
                              chk.curvature_bound + tol_b - chk.max_curvature,
                              chk.curvature_ok))
            tame_rows.append((pname, xi.name, chk.min_tameness,
                              chk.tameness_bound,
                              chk.min_tameness - chk.tameness_bound + tol_e,
                              chk.tameness_ok))
    cols_c = ["patch", "xi", "max_curvature", "bound", "margin", "pass"]
    cols_t = ["patch", "xi", "min_tameness", "bound", "margin", "pass"]
    return (CheckResult("contraction_curvature", curv_ok, cols_c, curv_rows,
                        {"tol": tol_b}),
            CheckResult("contraction_tameness", tame_ok, cols_t, tame_rows,
                        {"tol": tol_e}))


def _check_graph_sandwich(config, params, patches, rng):
    rows = []
    ok = True
    graphs = {"flat_torus": sas.torus_gradient_graph(1.0),
              "round_sphere": sas.sphere_harmonic_graph(1.0)}
    amps = (0.4, 0.2, 0.1, 0.05, 0.025)
    for bname, gg in graphs.items():
        base = gg.base
        eps_prev = 0.0
        for amp in amps:
            rep = sas.graph_tameness_bounds(base, gg.with_amplitude(amp),
                                            n_pairs=params["pairs"] * 10,
                                            seed=config.seed + 11)
            monotone = rep.eps_lower >= eps_prev - 1e-12
            eps_prev = rep.eps_lower
            row_ok = rep.ok and monotone
            ok = ok and row_ok
            rows.append((bname, amp, rep.eps_lower, rep.max_lower_violation,
                         rep.max_upper_violation, monotone, row_ok))
    return CheckResult("graph_sandwich", ok,
                       ["base", "amplitude", "eps_lower", "lower_violation",
                        "upper_violation", "monotone", "pass"],
                       rows, {})


def _check_monotone(config, params, patches, rng):
    tol = config.tolerances["monotonicity"]
    rows = []
    ok = True
    suite = [("flat_torus", sas.torus_gradient_graph(0.01)),
             ("flat_torus", sas.torus_gradient_graph(0.02, mode=2)),
             ("round_sphere", sas.sphere_harmonic_graph(0.01))]
    t_grid = np.linspace(0.0, 1.0, params["t_steps"])
    for bname, gg in suite:
        vals = sas.curvature_sweep(gg.base, gg, t_grid,
                                   n_theta=params["n_theta"],
                                   samples=params["samples"])
        worst = float(np.min(np.diff(vals)))
        row_ok = worst >= -tol
        ok = ok and row_ok
        rows.append((bname, gg.name, vals[0], vals[-1], worst, row_ok))
    return CheckResult("graph_curvature_monotone", ok,
                       ["base", "graph", "norm_at_0", "norm_at_1",
                        "min_step_increment", "pass"],
                       rows, {"tol": tol})


def _check_parabola(config, params, patches, rng):
    tol = config.tolerances["parabola_residual"]
    rows = []
    ok = True
    for bname in ("flat_torus", "round_sphere"):
        base = sas.base_manifold(bname)
        states = sas.random_sasaki_states(base, params["states"], rng)
        traj = sas.sasaki_geodesic(base, states, horizon=params["horizon"],
                                   step=params["step"])
        fit = sas.parabola_check(traj)
        z_const = float(np.max(np.abs(traj.z_norm2 - traj.z_norm2[:1])))
        for b in range(len(states)):
            lead_err = abs(fit.leading[b] - fit.expected_leading[b])
            row_ok = fit.max_residual[b] <= tol and lead_err <= tol
            ok = ok and row_ok
            rows.append((bname, b, fit.max_residual[b], fit.leading[b],
                         fit.expected_leading[b], lead_err, z_const, row_ok))
    return CheckResult("fiber_norm_parabola", ok,
                       ["base", "state", "fit_residual", "leading",
                        "expected_leading", "leading_gap", "z_norm_drift",
                        "pass"],
                       rows, {"tol": tol})


def _check_conformal(config, params, patches, rng):
    tol = config.tolerances["comparison"]
    patch = patches["flat_cylinder"]
    r = patch.halfwidth
    curve = trig_curve(patch, {2: 0.3}, name="cos2_0.3")
    cases = [
        ("identity", lambda s, t: 0.0 * s, 1.0),
        ("sin_bump", lambda s, t: 0.1 * np.sin(s) * np.sin(np.pi * t / r),
         float(np.exp(0.2))),
        ("scaling", lambda s, t: 0.0 * s + np.log(1.2), 1.44),
    ]
    rows = []
    ok = True
    for name, phi, c_dist in cases:
        chk = tameness_comparison_check(curve, phi, c_dist, tol=tol,
                                        n_scan=params["n_scan_flat"] // 2)
        ok = ok and chk.ok
        rows.append((name, c_dist, chk.epsilon, chk.epsilon_prime,
                     chk.lower_bound, chk.ok))
    return CheckResult("conformal_tameness", ok,
                       ["case", "C", "epsilon", "epsilon_prime", "bound",
                        "pass"],
                       rows, {"tol": tol})


def _check_radial(config, params, patches, rng):
    factor = config.tolerances["radial_factor"]
    rows = []
    ok = True
    sections = {
        "flat_cylinder": trig_curve(patches["flat_cylinder"], {1: 0.45},
                                    name="sec_cyl"),
        "sphere_equator": trig_curve(patches["sphere_equator"], {1: 0.2},
                                     {2: 0.1}, name="sec_sph"),
    }
    for pname, sec in sections.items():
        pairs = [(float(t), float(s))
                 for t, s in rng.uniform(0.0, 1.0, size=(params["pairs"], 2))]
        chk = radial_path_check(sec, pairs, tol_factor=factor)
        ok = ok and chk.ok
        for row in chk.rows:
            rows.append((pname, *row, row[4] <= row[5]))
    return CheckResult("radial_hausdorff", ok,
                       ["patch", "t", "s", "measured", "expected", "residual",
                        "tolerance", "pass"],
                       rows, {"tol_factor": factor})


def _check_contraction_hausdorff(config, params, patches, rng):
    patch = patches["flat_cylinder"]
    xi = _random_trig(patch, rng, sup_target=0.3, name="xi_h")
    path = build_contraction(patch, xi, n_alpha=params["alpha_steps"])
    ok, pair_rows = contraction_path_bound_check(path)
    rows = [(a, b, d, bound, gap, d <= bound + 1e-9 or gap <= 0)
            for a, b, d, bound, gap in pair_rows]
    return CheckResult("contraction_hausdorff", ok,
                       ["alpha", "alpha_prime", "delta_h", "bound", "gap",
                        "pass"],
                       rows, {})


_CHECK_FUNCS = {
    "warp_taylor": _check_warp_taylor,
    "exact_shift": _check_exact_shift,
    "graph_sandwich": _check_graph_sandwich,
    "graph_curvature_monotone": _check_monotone,
    "fiber_norm_parabola": _check_parabola,
    "conformal_tameness": _check_conformal,
    "radial_hausdorff": _check_radial,
    "contraction_hausdorff": _check_contraction_hausdorff,
}


def run_lemma_suite(config: ExperimentConfig) -> SuiteResult:
    """Run every enabled check and write one CSV per check."""
    params = _suite_params(config)
    patches = _suite_patches(params)
    results = []
    contraction_done = False
    for idx, name in enumerate(sorted(_CHECK_FUNCS) + ["contraction_curvature",
                                                       "contraction_tameness"]):
        if not config.checks.get(name, False):
            continue
        rng = np.random.default_rng([config.seed, idx])
        if name in ("contraction_curvature", "contraction_tameness"):
            if not contraction_done:
                rng = np.random.default_rng([config.seed, 99])
                pair = _contraction_suite(config, params, patches, rng)
                wanted = [r for r in pair if config.checks.get(r.name, False)]
                results.extend(wanted)
                contraction_done = True
            continue
        results.append(_CHECK_FUNCS[name](config, params, patches, rng))

    for res in results:
        res.meta = dict(res.meta)
        res.meta["seed"] = config.seed
        res.csv_path = write_csv(os.path.join(config.out_dir, f"{res.name}.csv"),
                                 res.columns, res.rows, res.meta)
    return SuiteResult(results=results, any_failed=any(not r.passed
                                                       for r in results),
                       out_dir=config.out_dir)


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def run_figure(family_id: str, out_dir: str,
               config: ExperimentConfig | None = None) -> tuple[str, str]:
    """Draw a family in band coordinates (SVG) and write its companion CSV
    with curvature, tameness, distance-to-base, and invariant columns."""
    config = config or ExperimentConfig()
    os.makedirs(out_dir, exist_ok=True)
    svg_path = os.path.join(out_dir, f"{family_id}.svg")
    csv_path = os.path.join(out_dir, f"{family_id}.csv")

    if family_id == "escape_cos":
        spec = FamilySpec("escape_cos", {"modes": list(range(1, 11))})
        curves = generate_family(spec)
        patch = curves[0].patch
        base = Curve.constant(patch, 0.0)
        rows = []
        for cv in curves:
            rows.append((cv.name, geodesic_curvature(cv).sup,
                         tameness(cv).epsilon,
                         hausdorff_distance(cv, base).value,
                         area_functional(patch, cv)))
        panels = []
        for m in (2, 10):
            cv = curves[m - 1]
            panels.append([("base", base.s[::8], base.xi[::8]),
                           (cv.name, cv.s[::4], cv.xi[::4])])
        write_curves_svg(svg_path, panels, patch.length, patch.halfwidth,
                         title="escape family in band coordinates")
        write_csv(csv_path, ["member", "sup_curvature", "epsilon",
                             "delta_h_to_base", "action_class"], rows,
                  {"family": family_id})
        return svg_path, csv_path

    if family_id in ("hs_family", "hs_variant_alpha"):
        curves = generate_family(FamilySpec(family_id))
        patch = curves[0].patch
        base = Curve.constant(patch, 0.0, n=curves[0].n)
        rows = []
        for cv, s_val in zip(curves, [2.0 ** (-j) for j in range(7, 15)]):
            rows.append((cv.name, s_val, geodesic_curvature(cv).sup,
                         hausdorff_distance(cv, base).value,
                         cv.sup_norm(), float(np.max(np.abs(cv.dxi)))))
        panels = [[(cv.name, cv.s[::max(1, cv.n // 1024)],
                    cv.xi[::max(1, cv.n // 1024)])] for cv in curves[:3]]
        write_curves_svg(svg_path, panels, patch.length, patch.halfwidth,
                         title=f"{family_id}: oscillation ladder")
        write_csv(csv_path, ["member", "s", "sup_curvature", "delta_h_to_base",
                             "sup_xi", "sup_dxi"], rows, {"family": family_id})
        return svg_path, csv_path

    if family_id == "parallels":
        curves = generate_family(FamilySpec("parallels"))
        patch = curves[0].patch
        base = Curve.constant(patch, 0.0)
        rows = [(cv.name, isotopy_invariant(cv, "cylinder").value,
                 geodesic_curvature(cv).sup,
                 hausdorff_distance(cv, base).value) for cv in curves]
        panels = [[(cv.name, cv.s[::16], cv.xi[::16]) for cv in curves]]
        write_curves_svg(svg_path, panels, patch.length, patch.halfwidth,
                         title="parallels")
        write_csv(csv_path, ["member", "action_class", "sup_curvature",
                             "delta_h_to_base"], rows, {"family": family_id})
        return svg_path, csv_path

    if family_id == "plane_circles":
        curves = generate_family(FamilySpec("plane_circles"))
        patch = curves[0].patch
        rows = []
        for cv in curves:
            inv = isotopy_invariant(cv, "plane")
            rows.append((cv.name, inv.value, inv.monotonicity_constant))
        panels = [[(cv.name, cv.s[::16], cv.xi[::16]) for cv in curves]]
        write_curves_svg(svg_path, panels, patch.length, patch.halfwidth,
                         title="circles in the plane (band coordinates)")
        write_csv(csv_path, ["member", "enclosed_area",
                             "monotonicity_constant"], rows,
                  {"family": family_id})
        return svg_path, csv_path

    raise ValueError(f"unknown family {family_id!r}")
