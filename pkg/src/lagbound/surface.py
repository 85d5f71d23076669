"""Normal-coordinate bands around a closed curve on a surface.

A patch is the band (s, t) in [0, l) x (-r, r) around a closed unit-speed base
curve, where t is arclength along the normal geodesics.  The induced metric is

    g = w(s,t)^2 ds^2 + dt^2,

and the warp field w solves, along each normal ray,

    w_tt + K(s,t) w = 0,     w(s,0) = 1,   w_t(s,0) = -kappa(s),

with kappa the signed geodesic curvature of the base curve and K the Gaussian
curvature of the ambient surface.  Everything downstream (graph curvature,
intrinsic lengths, the area functional, shortest-path distances) is driven by
this field and its first partials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ChartDegenerate, OutOfPatch
from .numerics import fourier_derivative, loglog_slope, wrap_difference

__all__ = [
    "BaseCurve",
    "SurfacePatch",
    "TaylorFit",
    "solve_warp",
    "warp_taylor_check",
    "area_form",
    "ambient_distance",
    "flat_cylinder",
    "unit_cylinder",
    "plane_annulus",
    "sphere_band",
    "hyperbolic_band",
    "cylinder_distance",
    "plane_embed",
    "sphere_embed",
]

_PERIOD_TOL = 1e-12


def _eval2(f: Callable, s: np.ndarray, t) -> np.ndarray:
    out = np.asarray(f(s, t), dtype=float)
    if out.shape != np.shape(s):
        out = np.broadcast_to(out, np.shape(s)).copy()
    return out


def _eval1(f: Callable, s: np.ndarray) -> np.ndarray:
    out = np.asarray(f(s), dtype=float)
    if out.shape != np.shape(s):
        out = np.broadcast_to(out, np.shape(s)).copy()
    return out


@dataclass(frozen=True)
class BaseCurve:
    """Closed unit-speed base curve of a band.

    Parameters
    ----------
    length : float
        Arclength period l > 0.
    kappa : callable s -> float
        Signed geodesic curvature, periodic with period l.
    gauss : callable (s, t) -> float
        Gaussian curvature of the ambient surface at band coordinates (s, t).
    kappa_prime, gauss_s : callables, optional
        Analytic s-derivatives; finite differences of the callables are used
        when omitted.
    """

    length: float
    kappa: Callable
    gauss: Callable
    kappa_prime: Callable | None = None
    gauss_s: Callable | None = None
    name: str = "custom"

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("base curve length must be positive")
        probe = np.linspace(0.0, self.length, 7, endpoint=False) + 0.1234
        k0 = _eval2(lambda s, t: self.kappa(s), probe, 0.0)
        k1 = _eval2(lambda s, t: self.kappa(s), probe + self.length, 0.0)
        if not np.all(np.isfinite(k0)):
            raise ValueError("kappa must be bounded on [0, l)")
        if np.max(np.abs(k0 - k1)) > _PERIOD_TOL:
            raise ValueError("kappa is not periodic with the declared period")
        g0 = _eval2(self.gauss, probe, 0.05)
        g1 = _eval2(self.gauss, probe + self.length, 0.05)
        if np.max(np.abs(g0 - g1)) > _PERIOD_TOL:
            raise ValueError("gauss is not periodic in s with the declared period")

    def kappa_s(self, s: np.ndarray) -> np.ndarray:
        if self.kappa_prime is not None:
            return _eval1(self.kappa_prime, s)
        h = 1e-4 * self.length
        f = self.kappa
        return (_eval1(f, s - 2 * h) - 8 * _eval1(f, s - h)
                + 8 * _eval1(f, s + h) - _eval1(f, s + 2 * h)) / (12 * h)

    def gauss_ds(self, s: np.ndarray, t) -> np.ndarray:
        if self.gauss_s is not None:
            return _eval2(self.gauss_s, s, t)
        h = 1e-4 * self.length
        f = self.gauss
        return (_eval2(f, s - 2 * h, t) - 8 * _eval2(f, s - h, t)
                + 8 * _eval2(f, s + h, t) - _eval2(f, s + 2 * h, t)) / (12 * h)


def _warp_rhs(base: BaseCurve, s: np.ndarray, t, state: np.ndarray) -> np.ndarray:
    """Time derivative of (w, w_t, w_s, w_st, int_0^t w)."""
    w, u, v, y, _ = state
    kk = _eval2(base.gauss, s, t)
    kks = base.gauss_ds(s, t)
    return np.stack([u, -kk * w, y, -kk * v - kks * w, w])


def _integrate_warp(base: BaseCurve, s: np.ndarray, t_target: np.ndarray,
                    n_steps: int) -> np.ndarray:
    """March the warp system from t=0 to per-sample targets with fixed-step RK4."""
    s = np.asarray(s, dtype=float)
    t_target = np.broadcast_to(np.asarray(t_target, dtype=float), s.shape)
    h = t_target / n_steps
    state = np.zeros((5, s.size))
    state[0] = 1.0
    state[1] = -_eval1(base.kappa, s)
    state[3] = -base.kappa_s(s)
    t = np.zeros_like(s)
    for _ in range(n_steps):
        k1 = _warp_rhs(base, s, t, state)
        k2 = _warp_rhs(base, s, t + h / 2, state + (h / 2) * k1)
        k3 = _warp_rhs(base, s, t + h / 2, state + (h / 2) * k2)
        k4 = _warp_rhs(base, s, t + h, state + h * k3)
        state = state + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
    return state


@dataclass
class TaylorFit:
    """Quadratic fit of w^2 near t=0 with the observed remainder order."""

    coefficients: tuple[float, float, float]
    expected: tuple[float, float, float]
    remainder_order: float
    max_remainder: float


class SurfacePatch:
    """Band around a base curve carrying the sampled warp field.

    Grids are uniform: s over [0, l) with wraparound indexing, t over [-r, r]
    with an odd point count so the base curve is the middle row.
    """

    def __init__(self, base: BaseCurve, halfwidth: float, n_s: int, n_t: int,
                 n_substeps: int = 2):
        if n_t % 2 == 0 or n_t < 9:
            raise ValueError("n_t must be odd and at least 9")
        if n_s < 16:
            raise ValueError("n_s must be at least 16")
        if not halfwidth > 0:
            raise ValueError("halfwidth must be positive")
        self.base = base
        self.halfwidth = float(halfwidth)
        self.n_s = int(n_s)
        self.n_t = int(n_t)
        self.s = np.arange(n_s) * (base.length / n_s)
        self.t = np.linspace(-halfwidth, halfwidth, n_t)
        self._march(n_substeps)
        if np.min(self.w) <= 0.0:
            raise ChartDegenerate(
                f"warp field reaches {np.min(self.w):.3e} inside the band; "
                f"halfwidth {halfwidth} exceeds the focal radius of {base.name}")
        self.w2_s = np.stack([fourier_derivative(self.w[:, j] ** 2, base.length)
                              for j in range(n_t)], axis=1)
        self._dist_graphs: dict = {}
        self._dist_fields: dict = {}
        self._stencil_error: float | None = None

    def _march(self, n_substeps: int):
        mid = (self.n_t - 1) // 2
        h_row = self.t[1] - self.t[0]
        w = np.empty((self.n_s, self.n_t))
        w_t = np.empty_like(w)
        cum = np.empty_like(w)
        for direction in (+1, -1):
            state = np.zeros((5, self.n_s))
            state[0] = 1.0
            state[1] = -_eval1(self.base.kappa, self.s)
            state[3] = -self.base.kappa_s(self.s)
            t = 0.0
            w[:, mid], w_t[:, mid], cum[:, mid] = state[0], state[1], state[4]
            h = direction * h_row / n_substeps
            rows = range(mid + 1, self.n_t) if direction > 0 else range(mid - 1, -1, -1)
            for j in rows:
                for _ in range(n_substeps):
                    k1 = _warp_rhs(self.base, self.s, t, state)
                    k2 = _warp_rhs(self.base, self.s, t + h / 2, state + (h / 2) * k1)
                    k3 = _warp_rhs(self.base, self.s, t + h / 2, state + (h / 2) * k2)
                    k4 = _warp_rhs(self.base, self.s, t + h, state + h * k3)
                    state = state + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
                    t = t + h
                w[:, j], w_t[:, j], cum[:, j] = state[0], state[1], state[4]
        self.w = w
        self.w_t = w_t
        self.w2_t = 2.0 * w * w_t
        self.cum_w = cum

    # -- basic queries ------------------------------------------------------

    @property
    def length(self) -> float:
        return self.base.length

    @property
    def is_flat_cylinder(self) -> bool:
        """True when kappa and K vanish identically on the sampled band."""
        if not hasattr(self, "_flat"):
            kap = _eval1(self.base.kappa, self.s)
            kk = _eval2(self.base.gauss, self.s, 0.3 * self.halfwidth)
            kk0 = _eval2(self.base.gauss, self.s, 0.0)
            self._flat = (np.max(np.abs(kap)) < 1e-14
                          and np.max(np.abs(kk)) < 1e-14
                          and np.max(np.abs(kk0)) < 1e-14)
        return self._flat

    def contains(self, t_values, margin: float = 0.0) -> bool:
        return bool(np.max(np.abs(t_values)) < self.halfwidth - margin)

    def require_inside(self, t_values, margin: float | None = None):
        if margin is None:
            margin = self.t[1] - self.t[0]
        if not self.contains(t_values, margin):
            raise OutOfPatch(
                f"points reach |t|={np.max(np.abs(t_values)):.4f}, "
                f"margin requires |t| < {self.halfwidth - margin:.4f}")

    # -- warp evaluation off the grid ----------------------------------------

    def warp_on_curve(self, s_vals: np.ndarray, t_vals: np.ndarray,
                      n_steps: int = 96) -> dict[str, np.ndarray]:
        """Warp data along arbitrary points (s_i, t_i), by direct integration
        of the normal ODE system from the base row.  Returns w, the partials
        of w^2, and the fiber area integral int_0^t w.
        """
        state = _integrate_warp(self.base, np.asarray(s_vals, dtype=float),
                                np.asarray(t_vals, dtype=float), n_steps)
        w, u, v, _, q = state
        return {"w": w, "w_t": u, "w2_t": 2 * w * u, "w2_s": 2 * w * v, "area": q}

    def warp_at(self, s: float, t: float) -> float:
        return float(self.warp_on_curve(np.array([s]), np.array([t]))["w"][0])

    def grid_w(self, s_query: np.ndarray, t_query: np.ndarray) -> np.ndarray:
        """Bilinear warp lookup on the stored grid (wraps in s)."""
        s_query = np.asarray(s_query, dtype=float) % self.length
        t_query = np.clip(np.asarray(t_query, dtype=float), self.t[0], self.t[-1])
        ds = self.length / self.n_s
        dt = self.t[1] - self.t[0]
        i = np.floor(s_query / ds).astype(int) % self.n_s
        fx = s_query / ds - np.floor(s_query / ds)
        j = np.clip(np.floor((t_query - self.t[0]) / dt).astype(int), 0, self.n_t - 2)
        fy = (t_query - self.t[0]) / dt - j
        i1 = (i + 1) % self.n_s
        return ((1 - fx) * (1 - fy) * self.w[i, j] + fx * (1 - fy) * self.w[i1, j]
                + (1 - fx) * fy * self.w[i, j + 1] + fx * fy * self.w[i1, j + 1])

    # -- area ----------------------------------------------------------------

    def band_area(self) -> float:
        """Total area of the band under the induced area density w ds dt."""
        inner = self.cum_w[:, -1] - self.cum_w[:, 0]
        return float(np.mean(inner) * self.length)

    # -- distances ------------------------------------------------------------

    def distance_field(self, source: tuple[float, float], dist_grid=None,
                       stencil: int = 16):
        from .distances import build_distance_field

        key = (round(source[0], 12), round(source[1], 12), dist_grid, stencil)
        if key not in self._dist_fields:
            self._dist_fields[key] = build_distance_field(self, source, dist_grid,
                                                          stencil)
        return self._dist_fields[key]

    def stencil_error_ratio(self) -> float:
        """Relative gap between the 8- and 16-neighbor shortest paths, measured
        once per patch from a central source; quantifies the stencil anisotropy.
        """
        if self._stencil_error is None:
            from .distances import estimate_stencil_error

            self._stencil_error = estimate_stencil_error(self)
        return self._stencil_error

    def export_warp_csv(self, path):
        from .report import format_float

        header = (f"# schema=1,l={format_float(self.length)},"
                  f"r={format_float(self.halfwidth)},n_s={self.n_s},n_t={self.n_t}\n")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header)
            for i in range(self.n_s):
                fh.write(",".join(format_float(x) for x in self.w[i]) + "\n")

    def __repr__(self):
        return (f"SurfacePatch({self.base.name}, l={self.length:.6g}, "
                f"r={self.halfwidth:.6g}, grid={self.n_s}x{self.n_t})")


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def solve_warp(base: BaseCurve, halfwidth: float, grid=(2048, 513)) -> SurfacePatch:
    """Build a patch by integrating the normal ODE over the requested grid.

    Raises ChartDegenerate when the warp field loses positivity inside the
    band, which signals that `halfwidth` exceeds the focal radius.
    """
    n_s, n_t = grid
    return SurfacePatch(base, halfwidth, n_s, n_t)


def warp_taylor_check(patch: SurfacePatch, s: float,
                      t_lo: float = 1e-3, t_hi: float = 1e-1,
                      num: int = 24) -> TaylorFit:
    """Fit w(s,.)^2 near t=0 and measure the order of its cubic remainder.

    The quadratic coefficients must reproduce (1, -2 kappa, kappa^2 - K); the
    remainder against that exact quadratic has order >= 3 in t.
    """
    t_hi = min(t_hi, 0.9 * patch.halfwidth)
    kap = float(_eval1(patch.base.kappa, np.array([s]))[0])
    kk0 = float(_eval2(patch.base.gauss, np.array([s]), 0.0)[0])
    expected = (1.0, -2.0 * kap, kap * kap - kk0)

    # Degree-4 fit so the quartic tail does not contaminate the quadratic jet.
    t_fit = np.linspace(-min(0.01, t_hi), min(0.01, t_hi), 17)
    w2 = patch.warp_on_curve(np.full(t_fit.shape, s), t_fit)["w"] ** 2
    coeffs = tuple(np.polyfit(t_fit, w2, 4)[::-1][:3])

    t_rem = np.geomspace(t_lo, t_hi, num)
    w2r = patch.warp_on_curve(np.full(t_rem.shape, s), t_rem)["w"] ** 2
    model = expected[0] + expected[1] * t_rem + expected[2] * t_rem ** 2
    rem = w2r - model
    max_rem = float(np.max(np.abs(rem)))
    order = np.inf if max_rem < 5e-13 else loglog_slope(t_rem, rem)
    return TaylorFit(coefficients=coeffs, expected=expected,
                     remainder_order=order, max_remainder=max_rem)


def area_form(patch: SurfacePatch) -> Callable:
    """Area density of the band in (s, t) coordinates: (s, t) -> w(s, t)."""
    return patch.grid_w


def ambient_distance(patch: SurfacePatch, x: tuple[float, float],
                     y: tuple[float, float]) -> float:
    """Shortest-path distance between two band points in the metric w^2 ds^2 + dt^2.

    Flat cylinders use the exact unrolled formula; otherwise a wide-stencil
    shortest path on the band grid is queried (see `distances`).  Points must
    keep a one-cell margin from the band edge.
    """
    x = (float(x[0]), float(x[1]))
    y = (float(y[0]), float(y[1]))
    patch.require_inside(np.array([x[1], y[1]]))
    if patch.is_flat_cylinder:
        return cylinder_distance(patch.length, x, y)
    field = patch.distance_field(x)
    return field.value_at(y[0], y[1])


# ---------------------------------------------------------------------------
# closed-form distances / embeddings for the model bands
# ---------------------------------------------------------------------------

def cylinder_distance(length: float, x, y) -> float:
    """Exact distance on the flat cylinder: straight line in the unrolled plane."""
    dq = wrap_difference(np.asarray(x[0]), np.asarray(y[0]), length)
    return float(np.hypot(dq, np.asarray(x[1]) - np.asarray(y[1])))


def plane_embed(circle_radius: float, s, t):
    """Planar embedding of the band around a circle (normal pointing inward)."""
    ang = np.asarray(s, dtype=float) / circle_radius
    rho = circle_radius - np.asarray(t, dtype=float)
    return np.stack([rho * np.cos(ang), rho * np.sin(ang)], axis=-1)


def sphere_embed(s, t):
    """Embedding of the equatorial band of the unit sphere."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.stack([np.cos(t) * np.cos(s), np.cos(t) * np.sin(s), np.sin(t)],
                    axis=-1)


# ---------------------------------------------------------------------------
# predefined patches
# ---------------------------------------------------------------------------

def flat_cylinder(length: float = 2 * np.pi, halfwidth: float = 1.5,
                  grid=(2048, 513)) -> SurfacePatch:
    base = BaseCurve(length, lambda s: 0.0 * s, lambda s, t: 0.0 * s,
                     kappa_prime=lambda s: 0.0 * s, gauss_s=lambda s, t: 0.0 * s,
                     name="flat_cylinder")
    return solve_warp(base, halfwidth, grid)


def unit_cylinder(halfwidth: float = 1.25, grid=(2048, 257)) -> SurfacePatch:
    """Flat cylinder with unit circumference (base circle R/Z)."""
    return flat_cylinder(length=1.0, halfwidth=halfwidth, grid=grid)


def plane_annulus(circle_radius: float = 2.0, halfwidth: float = 1.0,
                  grid=(2048, 513)) -> SurfacePatch:
    """Band in the flat plane around a circle; warp is 1 - t/R."""
    rr = float(circle_radius)
    base = BaseCurve(2 * np.pi * rr, lambda s: 0.0 * s + 1.0 / rr,
                     lambda s, t: 0.0 * s,
                     kappa_prime=lambda s: 0.0 * s, gauss_s=lambda s, t: 0.0 * s,
                     name=f"plane_circle_R{rr:g}")
    return solve_warp(base, halfwidth, grid)


def sphere_band(halfwidth: float = 0.6, grid=(2048, 513)) -> SurfacePatch:
    """Band around the equator of the unit sphere; warp is cos t."""
    base = BaseCurve(2 * np.pi, lambda s: 0.0 * s, lambda s, t: 0.0 * s + 1.0,
                     kappa_prime=lambda s: 0.0 * s, gauss_s=lambda s, t: 0.0 * s,
                     name="sphere_equator")
    return solve_warp(base, halfwidth, grid)


def hyperbolic_band(halfwidth: float = 0.6, grid=(2048, 513)) -> SurfacePatch:
    """Band around a closed geodesic in a hyperbolic surface; warp is cosh t."""
    base = BaseCurve(2 * np.pi, lambda s: 0.0 * s, lambda s, t: 0.0 * s - 1.0,
                     kappa_prime=lambda s: 0.0 * s, gauss_s=lambda s, t: 0.0 * s,
                     name="hyperbolic_band")
    return solve_warp(base, halfwidth, grid)
