"""Area functional on a band, the exactness-restoring vertical shift, the
contraction path of a graph through exact graphs, and isotopy invariants.

A graph xi is exact when its signed band area

    A(xi) = integral_0^l integral_0^{xi(s)} w(s, t) dt ds

vanishes.  For every scale a in [0, 1] there is a unique shift c(a) making
a*xi + c(a) exact, because c -> A(a*xi + c) is strictly increasing (w > 0);
c is found by bisection inside the guaranteed bracket |c| <= a * max|xi|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve, geodesic_curvature, tameness
from .errors import NoBracket, SelfIntersection
from .numerics import eval_fourier_series, interp_uniform_rows
from .surface import SurfacePatch, plane_embed

__all__ = [
    "ContractionPath",
    "IsotopyInvariant",
    "BoundsCheck",
    "area_functional",
    "solve_c",
    "build_contraction",
    "contraction_bounds_check",
    "isotopy_invariant",
    "shifted_curve",
]

_C_TOL = 1e-13
_LIP_SLACK = 1e-11  # float slack; equality is attained for constant graphs


def _xi_on_patch_grid(patch: SurfacePatch, curve: Curve) -> np.ndarray:
    if curve.n == patch.n_s:
        return curve.xi
    if curve.fns is not None and curve.fns[0] is not None:
        return np.asarray(curve.fns[0](patch.s), dtype=float)
    return eval_fourier_series(curve.xi, patch.length, patch.s)


def _area_of_samples(patch: SurfacePatch, xi_grid: np.ndarray) -> float:
    h = patch.t[1] - patch.t[0]
    inner = interp_uniform_rows(patch.cum_w, patch.t[0], h,
                                np.arange(patch.n_s), xi_grid)
    return float(np.mean(inner) * patch.length)


def area_functional(patch: SurfacePatch, curve: Curve) -> float:
    """Signed area between the graph and the base curve, weighted by the warp."""
    xi_grid = _xi_on_patch_grid(patch, curve)
    if np.max(np.abs(xi_grid)) >= patch.halfwidth:
        raise ValueError("graph leaves the band")
    return _area_of_samples(patch, xi_grid)


def _area_batch(patch: SurfacePatch, xi_block: np.ndarray) -> np.ndarray:
    """A for a block of graphs sampled on the patch grid, shape (m, n_s)."""
    m, n_s = xi_block.shape
    h = patch.t[1] - patch.t[0]
    rows = np.tile(np.arange(n_s), m)
    inner = interp_uniform_rows(patch.cum_w, patch.t[0], h, rows,
                                xi_block.ravel())
    return inner.reshape(m, n_s).mean(axis=1) * patch.length


def solve_c_grid(patch: SurfacePatch, curve: Curve, alphas: np.ndarray,
                 tol: float = _C_TOL, max_iter: int = 200) -> np.ndarray:
    """Vertical shifts c(a) with A(a*xi + c(a)) = 0 for a whole grid of scales.

    Bisection inside the guaranteed bracket |c| <= a*max|xi| (the area is
    strictly increasing in the shift since the warp is positive), run on all
    scales simultaneously; each scale follows the same midpoint sequence as a
    scalar bisection would.
    """
    alphas = np.asarray(alphas, dtype=float)
    sup = curve.sup_norm()
    if sup >= patch.halfwidth / 2:
        raise ValueError("shift solve requires max|xi| < r/2")
    if sup == 0.0:
        return np.zeros_like(alphas)
    xi_grid = _xi_on_patch_grid(patch, curve)
    xi_block = alphas[:, None] * xi_grid[None, :]
    lo = -alphas * sup
    hi = alphas * sup
    f_lo = _area_batch(patch, xi_block + lo[:, None])
    f_hi = _area_batch(patch, xi_block + hi[:, None])
    if np.any(f_lo > tol) or np.any(f_hi < -tol):
        raise NoBracket(f"area does not bracket zero: max A(lo)="
                        f"{f_lo.max():.3e}, min A(hi)={f_hi.min():.3e}")
    out = np.where(alphas == 0.0, 0.0, 0.5 * (lo + hi))
    done = (alphas == 0.0) | (np.abs(f_lo) <= tol) | (np.abs(f_hi) <= tol)
    out[np.abs(f_hi) <= tol] = hi[np.abs(f_hi) <= tol]
    out[np.abs(f_lo) <= tol] = lo[np.abs(f_lo) <= tol]
    for _ in range(max_iter):
        if done.all():
            break
        mid = 0.5 * (lo + hi)
        f_mid = np.full_like(mid, np.nan)
        act = ~done
        f_mid[act] = _area_batch(patch, xi_block[act] + mid[act, None])
        hit = act & (np.abs(f_mid) <= tol)
        out[hit] = mid[hit]
        done |= hit
        low_side = act & ~hit & (f_mid < 0)
        high_side = act & ~hit & (f_mid >= 0)
        lo[low_side] = mid[low_side]
        hi[high_side] = mid[high_side]
    out[~done] = 0.5 * (lo[~done] + hi[~done])
    return out


def solve_c(patch: SurfacePatch, curve: Curve, alpha: float,
            tol: float = _C_TOL, max_iter: int = 200) -> float:
    """Unique vertical shift c with A(alpha*xi + c) = 0, |c| <= alpha*max|xi|."""
    return float(solve_c_grid(patch, curve, np.array([float(alpha)]), tol,
                              max_iter)[0])


def shifted_curve(curve: Curve, shift: float, scale: float = 1.0,
                  name: str | None = None) -> Curve:
    """The graph scale*xi + shift with derivatives scaled accordingly."""
    fns = None
    if scale == 1.0 and curve.fns is not None and curve.fns[0] is not None:
        f0, f1, f2 = curve.fns
        fns = ((lambda s, _f=f0: _f(s) + shift), f1, f2)
    return Curve(curve.patch, scale * curve.xi + shift, scale * curve.dxi,
                 scale * curve.d2xi,
                 name=name or f"{curve.name}{scale:+g}x{shift:+.3g}", fns=fns)


@dataclass
class ContractionPath:
    """Family alpha -> graph(alpha * xi + c(alpha)) of exact graphs.

    The input graph is first made exact by its own shift, so that both
    endpoints of the path carry no shift: c(0) = c(1) = 0.
    """

    patch: SurfacePatch
    xi: Curve
    alphas: np.ndarray
    c: np.ndarray
    curves: list


def build_contraction(patch: SurfacePatch, curve: Curve,
                      n_alpha: int = 101) -> ContractionPath:
    """Contraction path of a graph through exact graphs.

    Verifies the shift contract on the whole grid: vanishing endpoints, the
    bracket bound |c(a)| <= a*max|xi|, the Lipschitz bound
    |c(a)-c(a')| <= max|xi| |a-a'|, and containment in the band.
    """
    if curve.sup_norm() >= patch.halfwidth / 3:
        raise ValueError("build_contraction requires max|xi| < r/3")
    c_fix = solve_c(patch, curve, 1.0)
    xi_hat = shifted_curve(curve, c_fix, name=f"{curve.name}_exact") \
        if abs(c_fix) > 0 else curve
    sup = xi_hat.sup_norm()

    alphas = np.linspace(0.0, 1.0, n_alpha)
    c = solve_c_grid(patch, xi_hat, alphas)
    curves = [shifted_curve(xi_hat, c[k], scale=a,
                            name=f"{curve.name}_a{a:.3f}")
              for k, a in enumerate(alphas)]

    if abs(c[0]) > 1e-10 or abs(c[-1]) > 1e-10:
        raise NoBracket(f"endpoint shifts do not vanish: c(0)={c[0]:.2e}, "
                        f"c(1)={c[-1]:.2e}")
    if np.any(np.abs(c) > alphas * sup + 1e-12):
        raise NoBracket("shift exceeds the bracket bound a*max|xi|")
    dc = np.abs(c[:, None] - c[None, :])
    da = np.abs(alphas[:, None] - alphas[None, :])
    if np.any(dc > sup * da + _LIP_SLACK):
        raise NoBracket("shift violates the Lipschitz bound max|xi| |a-a'|")
    for cv in curves:
        if cv.sup_norm() >= patch.halfwidth:
            raise NoBracket("contraction leaves the band")
    return ContractionPath(patch=patch, xi=xi_hat, alphas=alphas, c=c,
                           curves=curves)


@dataclass
class BoundsCheck:
    ok: bool
    curvature_ok: bool
    tameness_ok: bool
    max_curvature: float
    curvature_bound: float
    min_tameness: float
    tameness_bound: float
    curvatures: np.ndarray
    tameness_values: np.ndarray


def contraction_bounds_check(path: ContractionPath, k: float, k_prime: float,
                             tol_curv: float = 1e-6, tol_eps: float = 5e-3,
                             n_scan: int | None = None,
                             dist_grid=None) -> BoundsCheck:
    """Along the contraction path, curvature stays below max(k', |B| at a=1)
    and tameness above min of the endpoint values, within tolerances.

    `k` is the curvature bound of the base curve and k' > k absorbs the
    warp corrections for small graphs.
    """
    if k_prime <= k:
        raise ValueError("k_prime must exceed k")
    curv = np.array([geodesic_curvature(cv, _with_error=False).sup
                     for cv in path.curves])
    eps = np.array([tameness(cv, n_scan=n_scan, dist_grid=dist_grid).epsilon
                    for cv in path.curves])
    curv_bound = max(k_prime, float(curv[-1]))
    eps_bound = min(float(eps[0]), float(eps[-1]))
    curv_ok = bool(np.max(curv) <= curv_bound + tol_curv)
    eps_ok = bool(np.min(eps) >= eps_bound - tol_eps)
    return BoundsCheck(ok=curv_ok and eps_ok, curvature_ok=curv_ok,
                       tameness_ok=eps_ok,
                       max_curvature=float(np.max(curv)),
                       curvature_bound=curv_bound,
                       min_tameness=float(np.min(eps)),
                       tameness_bound=eps_bound,
                       curvatures=curv, tameness_values=eps)


# ---------------------------------------------------------------------------
# isotopy invariants
# ---------------------------------------------------------------------------

@dataclass
class IsotopyInvariant:
    """Computable isotopy invariant: action class on the cylinder, enclosed
    area in the plane.  For plane circles the monotonicity constant is
    area / 2 (disk class convention)."""

    kind: str
    value: float
    monotonicity_constant: float | None = None


def _has_crossing(poly: np.ndarray) -> bool:
    """Segment crossing scan over a closed polygon (O(n^2), decimate first).

    Also flags distinct non-adjacent vertices that coincide (a self-touch),
    which a strict interior-crossing test would miss.
    """
    n = len(poly)
    scale = max(np.ptp(poly[:, 0]), np.ptp(poly[:, 1]), 1e-30)
    gap = np.linalg.norm(poly[:, None, :] - poly[None, :, :], axis=-1)
    offs = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    adjacent = np.minimum(offs, n - offs) <= 1
    if np.any(gap[~adjacent] < 1e-9 * scale):
        return True
    p = poly
    q = np.roll(poly, -1, axis=0)
    d = q - p
    for i in range(n - 2):
        js = np.arange(i + 2, n if i > 0 else n - 1)
        r = p[i]
        dr = d[i]
        pj, dj = p[js], d[js]
        denom = dr[0] * dj[:, 1] - dr[1] * dj[:, 0]
        rel = pj - r
        with np.errstate(divide="ignore", invalid="ignore"):
            tt = (rel[:, 0] * dj[:, 1] - rel[:, 1] * dj[:, 0]) / denom
            uu = (rel[:, 0] * dr[1] - rel[:, 1] * dr[0]) / -denom
        hit = (np.abs(denom) > 1e-15) & (tt > 1e-12) & (tt < 1 - 1e-12) \
            & (uu > 1e-12) & (uu < 1 - 1e-12)
        if hit.any():
            return True
    return False


def _green_area_curve(curve: Curve, circle_radius: float) -> float:
    """Spectrally accurate enclosed area of the planar embedding of a graph."""
    s, xi, dxi = curve.s, curve.xi, curve.dxi
    rho = circle_radius - xi
    if np.min(rho) <= 0:
        raise SelfIntersection("graph wraps through the circle center")
    ang = s / circle_radius
    x = rho * np.cos(ang)
    y = rho * np.sin(ang)
    dx = -dxi * np.cos(ang) - rho / circle_radius * np.sin(ang)
    dy = -dxi * np.sin(ang) + rho / circle_radius * np.cos(ang)
    integrand = 0.5 * (x * dy - y * dx)
    return abs(float(np.mean(integrand) * curve.patch.length))


def isotopy_invariant(obj, ambient: str,
                      circle_radius: float | None = None) -> IsotopyInvariant:
    """Isotopy invariant of a closed embedded curve.

    ambient="cylinder": the action integral of a graph (zero iff exact).
    ambient="plane": enclosed area of the planar embedding; accepts either a
    graph on a circle band or a raw closed polygon of shape (n, 2).
    """
    if ambient == "cylinder":
        if not isinstance(obj, Curve):
            raise TypeError("cylinder invariant needs a graph curve")
        return IsotopyInvariant(kind="liouville_class",
                                value=area_functional(obj.patch, obj))
    if ambient != "plane":
        raise ValueError(f"unknown ambient {ambient!r}")

    if isinstance(obj, Curve):
        rr = circle_radius
        if rr is None:
            rr = 1.0 / float(np.asarray(obj.patch.base.kappa(np.array([0.0]))).ravel()[0])
        step = max(1, obj.n // 512)
        if _has_crossing(plane_embed(rr, obj.s[::step], obj.xi[::step])):
            raise SelfIntersection("embedded curve crosses itself")
        area = _green_area_curve(obj, rr)
    else:
        poly = np.asarray(obj, dtype=float)
        if poly.ndim != 2 or poly.shape[1] != 2 or len(poly) < 3:
            raise TypeError("polygon input must have shape (n, 2), n >= 3")
        step = max(1, len(poly) // 512)
        if _has_crossing(poly[::step]):
            raise SelfIntersection("polygon crosses itself")
        x, y = poly[:, 0], poly[:, 1]
        x2, y2 = np.roll(x, -1), np.roll(y, -1)
        area = abs(float(0.5 * np.sum(x * y2 - x2 * y)))
    return IsotopyInvariant(kind="enclosed_area", value=area,
                            monotonicity_constant=area / 2.0)
