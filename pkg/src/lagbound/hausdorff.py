"""Hausdorff distance between sampled curves in a band, and the radial-path
distance identities satisfied by vertical scalings of a graph.

The distance between closed sets is the max of the two directed sup-min scans
over point samples; since the ambient distance is 1-Lipschitz in each argument
the sampling error is bounded by the largest metric point spacing, plus the
shortest-path field error on curved patches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .errors import PatchMismatch
from .numerics import wrap_difference

__all__ = [
    "HausdorffResult",
    "RadialCheck",
    "hausdorff_distance",
    "radial_path_check",
    "contraction_path_bound_check",
    "scaled_curve",
]


@dataclass
class HausdorffResult:
    value: float
    directed_ab: float
    directed_ba: float
    witness_ab: tuple[tuple[float, float], float]
    witness_ba: tuple[tuple[float, float], float]
    error: float


def scaled_curve(curve: Curve, factor: float) -> Curve:
    """The vertical scaling t -> factor * t of a graph (normal radial flow)."""
    return Curve(curve.patch, factor * curve.xi, factor * curve.dxi,
                 factor * curve.d2xi, name=f"{curve.name}*{factor:g}")


def _spacing(curve: Curve, n_scan: int) -> float:
    return curve.patch.length / n_scan * float(np.max(curve.speed()))


def _directed_flat(pts_a, pts_b, length):
    dq = wrap_difference(pts_a[:, 0][:, None], pts_b[:, 0][None, :], length)
    dmat = np.hypot(dq, pts_a[:, 1][:, None] - pts_b[:, 1][None, :])
    mins = dmat.min(axis=1)
    i = int(np.argmax(mins))
    j = int(np.argmin(dmat[i]))
    return float(mins[i]), (tuple(pts_a[i]), float(dmat[i, j]))


def hausdorff_distance(a: Curve, b: Curve, n_scan: int | None = None,
                       dist_grid=None, stencil: int = 16) -> HausdorffResult:
    """Hausdorff distance between two sampled curves on the same patch."""
    if a.patch is not b.patch:
        raise PatchMismatch("curves live on different patches")
    patch = a.patch
    flat = patch.is_flat_cylinder
    if n_scan is None:
        n_scan = min(1024, a.n, b.n) if flat else 256
    idx_a = np.linspace(0, a.n, n_scan, endpoint=False).astype(int)
    idx_b = np.linspace(0, b.n, n_scan, endpoint=False).astype(int)
    pts_a, pts_b = a.points(idx_a), b.points(idx_b)

    if flat:
        d_ab, wit_ab = _directed_flat(pts_a, pts_b, patch.length)
        d_ba, wit_ba = _directed_flat(pts_b, pts_a, patch.length)
        field_err = 0.0
    else:
        from .distances import set_to_points_distance

        to_a = set_to_points_distance(patch, pts_b, pts_a, dist_grid, stencil)
        to_b = set_to_points_distance(patch, pts_a, pts_b, dist_grid, stencil)
        ia, ib = int(np.argmax(to_a)), int(np.argmax(to_b))
        d_ab, wit_ab = float(to_a[ia]), (tuple(pts_a[ia]), float(to_a[ia]))
        d_ba, wit_ba = float(to_b[ib]), (tuple(pts_b[ib]), float(to_b[ib]))
        field_err = patch.stencil_error_ratio() * max(d_ab, d_ba)

    err = max(_spacing(a, n_scan), _spacing(b, n_scan)) + field_err
    return HausdorffResult(value=max(d_ab, d_ba), directed_ab=d_ab,
                           directed_ba=d_ba, witness_ab=wit_ab,
                           witness_ba=wit_ba, error=float(err))


@dataclass
class RadialCheck:
    rows: list
    ok: bool


def radial_path_check(section: Curve, scale_pairs, n_scan: int | None = None,
                      dist_grid=None, tol_factor: float = 2.0) -> RadialCheck:
    """Check that vertical scalings of a graph realize Hausdorff distance
    |t - s| * max|xi| for each requested (t, s) pair.

    Rows carry (t, s, measured, expected, residual, tolerance); tolerance is
    tol_factor * (metric sample spacing + distance-field error).
    """
    patch = section.patch
    sup = section.sup_norm()
    patch.require_inside(section.xi)
    rows = []
    ok = True
    for tv, sv in scale_pairs:
        ca, cb = scaled_curve(section, tv), scaled_curve(section, sv)
        res = hausdorff_distance(ca, cb, n_scan=n_scan, dist_grid=dist_grid)
        expected = abs(tv - sv) * sup
        residual = abs(res.value - expected)
        tol = tol_factor * res.error
        ok = ok and residual <= tol
        rows.append((float(tv), float(sv), res.value, expected, residual, tol))
    return RadialCheck(rows=rows, ok=ok)


def contraction_path_bound_check(path, tol: float | None = None,
                                 n_scan: int | None = None) -> tuple[bool, list]:
    """Check the Lipschitz bound delta_H(graph_a, graph_a') <= 2 |a - a'| max|xi|
    along a contraction path (duck-typed: needs .alphas, .curves, .xi).
    """
    sup = path.xi.sup_norm()
    rows = []
    ok = True
    m = len(path.alphas)
    for i in range(m):
        for j in range(i + 1, m):
            res = hausdorff_distance(path.curves[i], path.curves[j],
                                     n_scan=n_scan)
            bound = 2.0 * abs(path.alphas[i] - path.alphas[j]) * sup
            slack = res.error if tol is None else tol
            ok = ok and res.value <= bound + slack
            rows.append((float(path.alphas[i]), float(path.alphas[j]),
                         res.value, bound, res.value - bound))
    return ok, rows
