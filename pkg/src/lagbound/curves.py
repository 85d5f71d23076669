"""Graph curves over a band's base curve and their bound-defining invariants.

A curve is a periodic graph t = xi(s) inside a patch.  The module computes

* the pointwise geodesic curvature via the warped-metric formula

      |B| = w / (w^2 + xi'^2)^{3/2}
            * | xi'' + (1/2) d_t w^2 - (xi'/w^2)((1/2) d_s w^2 + xi' d_t w^2) |

  with every warp quantity evaluated at (s, xi(s)),

* the intrinsic distance d_xi from the length element sqrt(w^2 + xi'^2) ds,

* the tameness constant: the infimum over point pairs of
  d_ambient / min(1, d_intrinsic), split into a sampled long-range scan and an
  analytic chord-arc bound covering the excluded short range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateCurve, DistortionExceeded
from .numerics import (eval_fourier_primitive, eval_fourier_series,
                       fourier_derivative, fourier_primitive_grid,
                       wrap_difference)
from .surface import SurfacePatch, _eval1, _eval2

__all__ = [
    "Curve",
    "CurvatureReport",
    "TamenessReport",
    "ComparisonCheck",
    "geodesic_curvature",
    "intrinsic_distance",
    "tameness",
    "tameness_comparison_check",
    "trig_curve",
]

_PERIOD_TOL = 1e-10


class Curve:
    """Periodic graph t = xi(s) over the base curve of a patch.

    Samples are stored on a uniform s-grid; analytic callables for xi and its
    first two derivatives are kept when available, otherwise the derivatives
    come from spectral differentiation of the samples.
    """

    def __init__(self, patch: SurfacePatch, xi: np.ndarray, dxi: np.ndarray,
                 d2xi: np.ndarray, name: str = "curve",
                 fns: tuple[Callable, Callable, Callable] | None = None):
        n = len(xi)
        self.patch = patch
        self.n = n
        self.s = np.arange(n) * (patch.length / n)
        self.xi = np.asarray(xi, dtype=float)
        self.dxi = np.asarray(dxi, dtype=float)
        self.d2xi = np.asarray(d2xi, dtype=float)
        self.name = name
        self.fns = fns
        if np.max(np.abs(self.xi)) >= patch.halfwidth:
            raise ValueError(
                f"curve {name!r} leaves the band: max|xi|="
                f"{np.max(np.abs(self.xi)):.4f} >= r={patch.halfwidth:.4f}")
        if fns is not None:
            probe = self.s[:: max(1, n // 7)]
            for f in fns:
                if f is None:
                    continue
                gap = np.max(np.abs(_eval1(f, probe) - _eval1(f, probe + patch.length)))
                if gap > _PERIOD_TOL:
                    raise ValueError(f"curve {name!r}: callable not periodic "
                                     f"(gap {gap:.2e})")
        self._cache: dict = {}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_callables(cls, patch: SurfacePatch, xi: Callable,
                       dxi: Callable | None = None, d2xi: Callable | None = None,
                       n: int = 2048, name: str = "curve") -> "Curve":
        s = np.arange(n) * (patch.length / n)
        xs = _eval1(xi, s)
        if dxi is not None and d2xi is not None:
            dxs, d2xs = _eval1(dxi, s), _eval1(d2xi, s)
        else:
            dxs = fourier_derivative(xs, patch.length)
            d2xs = fourier_derivative(dxs, patch.length)
        return cls(patch, xs, dxs, d2xs, name=name, fns=(xi, dxi, d2xi))

    @classmethod
    def from_samples(cls, patch: SurfacePatch, xi_samples: np.ndarray,
                     name: str = "sampled") -> "Curve":
        xs = np.asarray(xi_samples, dtype=float)
        dxs = fourier_derivative(xs, patch.length)
        d2xs = fourier_derivative(dxs, patch.length)
        return cls(patch, xs, dxs, d2xs, name=name)

    @classmethod
    def constant(cls, patch: SurfacePatch, c: float, n: int = 2048,
                 name: str | None = None) -> "Curve":
        return cls.from_callables(patch, lambda s: c + 0.0 * s,
                                  lambda s: 0.0 * s, lambda s: 0.0 * s, n=n,
                                  name=name or f"parallel_{c:g}")

    # -- derived data ----------------------------------------------------------

    def resampled(self, n2: int) -> "Curve":
        if self.fns is not None and all(f is not None for f in self.fns):
            return Curve.from_callables(self.patch, *self.fns, n=n2, name=self.name)
        s2 = np.arange(n2) * (self.patch.length / n2)
        return Curve.from_samples(self.patch, eval_fourier_series(
            self.xi, self.patch.length, s2), name=self.name)

    def warp_data(self) -> dict[str, np.ndarray]:
        if "warp" not in self._cache:
            self._cache["warp"] = self.patch.warp_on_curve(self.s, self.xi)
        return self._cache["warp"]

    def speed(self) -> np.ndarray:
        if "speed" not in self._cache:
            w = self.warp_data()["w"]
            self._cache["speed"] = np.sqrt(w * w + self.dxi * self.dxi)
        return self._cache["speed"]

    def cum_length(self) -> np.ndarray:
        if "cum" not in self._cache:
            self._cache["cum"] = fourier_primitive_grid(self.speed(),
                                                        self.patch.length)
        return self._cache["cum"]

    def total_length(self) -> float:
        return float(np.mean(self.speed()) * self.patch.length)

    def points(self, idx=None) -> np.ndarray:
        if idx is None:
            return np.stack([self.s, self.xi], axis=1)
        return np.stack([self.s[idx], self.xi[idx]], axis=1)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.xi)))

    def __repr__(self):
        return f"Curve({self.name!r}, n={self.n}, max|xi|={self.sup_norm():.4g})"


def trig_curve(patch: SurfacePatch, cos_amps: dict[int, float] | None = None,
               sin_amps: dict[int, float] | None = None, offset: float = 0.0,
               n: int = 2048, name: str = "trig") -> Curve:
    """Closed-form trigonometric graph with analytic derivatives."""
    cos_amps = dict(cos_amps or {})
    sin_amps = dict(sin_amps or {})
    om = 2 * np.pi / patch.length

    def xi(s):
        out = offset + 0.0 * np.asarray(s, dtype=float)
        for m, a in cos_amps.items():
            out = out + a * np.cos(om * m * s)
        for m, a in sin_amps.items():
            out = out + a * np.sin(om * m * s)
        return out

    def dxi(s):
        out = 0.0 * np.asarray(s, dtype=float)
        for m, a in cos_amps.items():
            out = out - a * om * m * np.sin(om * m * s)
        for m, a in sin_amps.items():
            out = out + a * om * m * np.cos(om * m * s)
        return out

    def d2xi(s):
        out = 0.0 * np.asarray(s, dtype=float)
        for m, a in cos_amps.items():
            out = out - a * (om * m) ** 2 * np.cos(om * m * s)
        for m, a in sin_amps.items():
            out = out - a * (om * m) ** 2 * np.sin(om * m * s)
        return out

    return Curve.from_callables(patch, xi, dxi, d2xi, n=n, name=name)


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

@dataclass
class CurvatureReport:
    """Pointwise |B| samples with sup norm, its location, and a grid-doubling
    error estimate."""

    s: np.ndarray
    values: np.ndarray
    sup: float
    arg_s: float
    error: float


def _curvature_signed(curve: Curve) -> np.ndarray:
    wd = curve.warp_data()
    w, w2_t, w2_s = wd["w"], wd["w2_t"], wd["w2_s"]
    xp, xpp = curve.dxi, curve.d2xi
    inner = xpp + 0.5 * w2_t - (xp / (w * w)) * (0.5 * w2_s + xp * w2_t)
    return w / np.power(w * w + xp * xp, 1.5) * inner


def geodesic_curvature(curve: Curve, _with_error: bool = True) -> CurvatureReport:
    """Pointwise geodesic curvature of the graph in the band metric."""
    values = np.abs(_curvature_signed(curve))
    k = int(np.argmax(values))
    sup = float(values[k])
    err = 1e-12
    if _with_error and curve.n >= 64:
        half = geodesic_curvature(curve.resampled(curve.n // 2), _with_error=False)
        err = abs(sup - half.sup) + 1e-12
    return CurvatureReport(s=curve.s, values=values, sup=sup,
                           arg_s=float(curve.s[k]), error=err)


# ---------------------------------------------------------------------------
# intrinsic distance
# ---------------------------------------------------------------------------

def intrinsic_distance(curve: Curve, s0: float, s1: float) -> float:
    """Length of the shorter of the two graph arcs between parameters s0, s1.

    The arclength primitive is evaluated through the trigonometric interpolant
    of the sampled length element, which is quadrature-exact for band-limited
    speeds and spectrally accurate otherwise.
    """
    speed = curve.speed()
    total = curve.total_length()
    vals = eval_fourier_primitive(speed, curve.patch.length, np.array([s0, s1]))
    arc = abs(vals[1] - vals[0]) % total
    return float(min(arc, total - arc))


def _pairwise_intrinsic(curve: Curve, idx: np.ndarray) -> np.ndarray:
    cum = curve.cum_length()[idx]
    total = curve.total_length()
    diff = np.abs(cum[:, None] - cum[None, :])
    return np.minimum(diff, total - diff)


def _pairwise_ambient(curve: Curve, idx: np.ndarray, dist_grid=None,
                      stencil: int = 16, scale=None) -> np.ndarray:
    pts = curve.points(idx)
    if scale is None and curve.patch.is_flat_cylinder:
        dq = wrap_difference(pts[:, 0][:, None], pts[:, 0][None, :],
                             curve.patch.length)
        return np.hypot(dq, pts[:, 1][:, None] - pts[:, 1][None, :])
    from .distances import pairwise_point_distances

    return pairwise_point_distances(curve.patch, pts, dist_grid, stencil, scale)


# ---------------------------------------------------------------------------
# tameness
# ---------------------------------------------------------------------------

@dataclass
class TamenessReport:
    """Estimated tameness constant of a graph curve.

    epsilon is the minimum of the sampled long-range infimum of
    d_ambient / min(1, d_intrinsic) over pairs with d_intrinsic >= delta_min,
    and the analytic chord-arc lower bound covering the excluded short range.
    """

    epsilon: float
    pair: tuple[float, float]
    delta_min: float
    long_range_min: float
    short_range_bound: float
    error: float
    n_scan: int


def _gauss_bound(patch: SurfacePatch) -> float:
    if not hasattr(patch, "_gauss_bound"):
        tt = np.linspace(patch.t[0], patch.t[-1], 9)
        vals = [np.max(np.abs(_eval2(patch.base.gauss, patch.s[::16], t)))
                for t in tt]
        patch._gauss_bound = float(max(vals))
    return patch._gauss_bound


def tameness(curve: Curve, n_scan: int | None = None,
             delta_min: float | None = None, dist_grid=None,
             stencil: int = 16) -> TamenessReport:
    """Tameness constant of a graph curve (see TamenessReport).

    The exclusion radius keeps the sampled infimum away from the removable
    short-range singularity; pairs inside it are covered by the chord-arc
    bound 1 - |B|^2 delta^2 / 24 minus an ambient-curvature distortion term.
    """
    curv = geodesic_curvature(curve)
    bnorm = curv.sup
    if delta_min is None:
        delta_min = min(0.05, 1.0 / (4.0 * bnorm + 1.0))
    if bnorm * delta_min >= 1.0:
        raise DegenerateCurve(
            f"|B| delta = {bnorm * delta_min:.3f} >= 1; shrink delta_min")

    flat = curve.patch.is_flat_cylinder
    if n_scan is None:
        n_scan = min(512, curve.n) if flat else min(128, curve.n)
    idx = np.linspace(0, curve.n, n_scan, endpoint=False).astype(int)

    d_xi = _pairwise_intrinsic(curve, idx)
    d_m = _pairwise_ambient(curve, idx, dist_grid, stencil)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d_m / np.minimum(1.0, d_xi)
    ratio[d_xi < delta_min] = np.inf
    k = int(np.argmin(ratio))
    i, j = divmod(k, n_scan)
    long_min = float(ratio[i, j])

    kmax = _gauss_bound(curve.patch)
    short_bound = 1.0 - bnorm ** 2 * delta_min ** 2 / 24.0 \
        - kmax * delta_min ** 2 / 8.0

    eps = min(long_min, short_bound)
    spacing = curve.patch.length / n_scan * float(np.max(curve.speed()))
    err = 2.0 * spacing
    if not flat:
        err += curve.patch.stencil_error_ratio() * min(1.0, eps)
    return TamenessReport(epsilon=float(eps),
                          pair=(float(curve.s[idx[i]]), float(curve.s[idx[j]])),
                          delta_min=float(delta_min),
                          long_range_min=long_min,
                          short_range_bound=float(short_bound),
                          error=float(err), n_scan=n_scan)


# ---------------------------------------------------------------------------
# conformal comparison
# ---------------------------------------------------------------------------

@dataclass
class ComparisonCheck:
    ok: bool
    epsilon: float
    epsilon_prime: float
    lower_bound: float
    tolerance: float


def tameness_comparison_check(curve: Curve, conformal_phi: Callable, C: float,
                              tol: float = 5e-3, n_scan: int | None = None,
                              dist_grid=None) -> ComparisonCheck:
    """Verify that conformal rescaling g' = e^{2 phi} g with e^{2 phi} in
    [1/C, C] degrades the tameness constant by at most C^{-2}.

    The primed constant is the sampled long-range infimum recomputed with all
    lengths scaled by e^{phi}; since it upper-bounds the true primed constant
    only through quadrature noise, `epsilon_prime >= C^{-2} epsilon - tol` is
    the honest check.
    """
    patch = curve.patch
    tgrid = np.linspace(patch.t[0], patch.t[-1], 9)
    factors = np.concatenate([np.exp(2 * _eval2(conformal_phi, patch.s[::16], t))
                              for t in tgrid])
    if factors.max() > C * (1 + 1e-12) or factors.min() < 1 / C * (1 - 1e-12):
        raise DistortionExceeded(
            f"e^(2 phi) spans [{factors.min():.4f}, {factors.max():.4f}], "
            f"outside [1/C, C] = [{1 / C:.4f}, {C:.4f}]")

    base_report = tameness(curve, n_scan=n_scan, dist_grid=dist_grid)
    delta_min = base_report.delta_min
    n_pairs = base_report.n_scan
    idx = np.linspace(0, curve.n, n_pairs, endpoint=False).astype(int)

    phi_on_curve = _eval2(conformal_phi, curve.s, curve.xi)
    speed_prime = np.exp(phi_on_curve) * curve.speed()
    cum = fourier_primitive_grid(speed_prime, patch.length)[idx]
    total = float(np.mean(speed_prime) * patch.length)
    diff = np.abs(cum[:, None] - cum[None, :])
    d_xi_p = np.minimum(diff, total - diff)

    span = float(factors.max() - factors.min())
    if span < 1e-13:
        lam = float(np.sqrt(factors.max()))
        d_m_p = lam * _pairwise_ambient(curve, idx, dist_grid)
    else:
        scale = lambda s, t: np.exp(_eval2(conformal_phi, s, t))  # noqa: E731
        d_m_p = _pairwise_ambient(curve, idx, dist_grid, scale=scale)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d_m_p / np.minimum(1.0, d_xi_p)
    ratio[d_xi_p < delta_min] = np.inf
    eps_prime = float(np.min(ratio))

    bound = base_report.epsilon / (C * C)
    return ComparisonCheck(ok=bool(eps_prime >= bound - tol),
                           epsilon=base_report.epsilon,
                           epsilon_prime=eps_prime,
                           lower_bound=bound, tolerance=tol)
