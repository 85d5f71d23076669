"""Shared numerical helpers: periodic spectral calculus, uniform-grid interpolation,
log-log slope fits, and the smoothstep bump used by the oscillating families.

All routines operate on plain numpy arrays and are deterministic.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# periodic spectral calculus
# ---------------------------------------------------------------------------

def fourier_derivative(values: np.ndarray, period: float) -> np.ndarray:
    """Spectral derivative of uniformly sampled periodic data."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    c = np.fft.rfft(values)
    k = np.arange(c.shape[-1])
    c = c * (2j * np.pi / period) * k
    if n % 2 == 0:
        # The Nyquist mode is pure cosine; its derivative is not representable
        # on the grid and is dropped (standard convention).
        c[..., -1] = 0.0
    return np.fft.irfft(c, n)


def fourier_primitive_grid(values: np.ndarray, period: float) -> np.ndarray:
    """Primitive F with F(0)=0 of periodic data, evaluated on the sample grid.

    F(s) = mean * s + periodic part; exact for band-limited data.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    c = np.fft.rfft(values)
    mean = c[..., 0].real / n
    k = np.arange(c.shape[-1])
    omega = 2j * np.pi * k / period
    cp = np.zeros_like(c)
    cp[..., 1:] = c[..., 1:] / omega[1:]
    if n % 2 == 0:
        cp[..., -1] = 0.0
    periodic = np.fft.irfft(cp, n)
    s = np.arange(n) * (period / n)
    return mean * s + (periodic - periodic[..., :1])


def eval_fourier_series(values: np.ndarray, period: float, s: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of sampled periodic data at points s."""
    values = np.asarray(values, dtype=float)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    n = values.shape[-1]
    c = np.fft.rfft(values)
    k = np.arange(c.shape[-1])
    phase = np.exp(2j * np.pi / period * np.outer(s, k))
    scale = np.full(c.shape[-1], 2.0)
    scale[0] = 1.0
    if n % 2 == 0:
        scale[-1] = 1.0
    return (phase * (scale * c)).real.sum(axis=-1) / n


def eval_fourier_primitive(values: np.ndarray, period: float, s: np.ndarray) -> np.ndarray:
    """Evaluate the primitive F (F(0)=0) of sampled periodic data at arbitrary points.

    The mean drives a linear term, every other mode is integrated analytically,
    so the result is exact for trigonometric polynomials below the Nyquist mode.
    """
    values = np.asarray(values, dtype=float)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    n = values.shape[-1]
    c = np.fft.rfft(values)
    mean = c[0].real / n
    k = np.arange(c.shape[-1])
    omega = 2j * np.pi * k / period
    cp = np.zeros_like(c)
    cp[1:] = c[1:] / omega[1:]
    if n % 2 == 0:
        cp[-1] = 0.0
    scale = np.full(c.shape[-1], 2.0)
    scale[0] = 1.0
    if n % 2 == 0:
        scale[-1] = 1.0
    phase = np.exp(2j * np.pi / period * np.outer(s, k))
    periodic = (phase * (scale * cp)).real.sum(axis=-1) / n
    at_zero = (scale * cp).real.sum() / n
    return mean * s + periodic - at_zero


# ---------------------------------------------------------------------------
# uniform-grid barycentric interpolation
# ---------------------------------------------------------------------------

def _bary_weights(order: int) -> np.ndarray:
    from math import comb

    return np.array([(-1.0) ** j * comb(order - 1, j) for j in range(order)])


def interp_uniform_rows(table: np.ndarray, x0: float, h: float,
                        rows: np.ndarray, xq: np.ndarray, order: int = 8) -> np.ndarray:
    """Interpolate table[rows[i], :] at abscissa xq[i], columns on the uniform
    grid x0 + j*h.  Barycentric Lagrange on a sliding stencil of `order` nodes.
    """
    table = np.asarray(table, dtype=float)
    xq = np.asarray(xq, dtype=float)
    rows = np.asarray(rows)
    n = table.shape[1]
    wts = _bary_weights(order)

    pos = (xq - x0) / h
    base = np.floor(pos).astype(int) - (order // 2 - 1)
    base = np.clip(base, 0, n - order)
    offs = np.arange(order)
    idx = base[:, None] + offs[None, :]
    ynode = table[rows[:, None], idx]
    xnode = base[:, None] + offs[None, :]
    diff = pos[:, None] - xnode
    exact = np.isclose(diff, 0.0, atol=1e-14)
    any_exact = exact.any(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = wts[None, :] / diff
        num = (terms * ynode).sum(axis=1)
        den = terms.sum(axis=1)
        out = num / den
    if any_exact.any():
        hit_rows, hit_cols = np.nonzero(exact)
        out[hit_rows] = ynode[hit_rows, hit_cols]
    return out


# ---------------------------------------------------------------------------
# fits
# ---------------------------------------------------------------------------

def loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log|y| against log x, ignoring zero entries."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    mask = (y > 0) & (x > 0)
    if mask.sum() < 2:
        return np.inf
    lx, ly = np.log(x[mask]), np.log(y[mask])
    return float(np.polyfit(lx, ly, 1)[0])


def fit_quadratic(t: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares quadratic fit; returns (c0, c1, c2) and the max residual."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    coeffs = np.polyfit(t, y, 2)[::-1]
    resid = float(np.max(np.abs(y - (coeffs[0] + coeffs[1] * t + coeffs[2] * t * t))))
    return coeffs, resid


# ---------------------------------------------------------------------------
# smoothstep bump
# ---------------------------------------------------------------------------

_RAMP = 0.125  # bump ramps live on [1/8, 1/4] and [3/4, 7/8]


def _smoothstep(x):
    return x ** 3 * (10.0 + x * (-15.0 + 6.0 * x))


def _smoothstep_d1(x):
    return 30.0 * x ** 2 * (1.0 + x * (-2.0 + x))


def _smoothstep_d2(x):
    return 60.0 * x * (1.0 + x * (-3.0 + 2.0 * x))


def _smoothstep_d3(x):
    return 60.0 + x * (-360.0 + 360.0 * x)


def bump(q: np.ndarray) -> np.ndarray:
    """C^2 plateau bump on [0,1]: zero outside [1/8, 7/8], one on [1/4, 3/4]."""
    q = np.asarray(q, dtype=float)
    up = (q - _RAMP) / _RAMP
    dn = (0.875 - q) / _RAMP
    return np.select(
        [q < _RAMP, q < 0.25, q <= 0.75, q < 0.875],
        [0.0, _smoothstep(up), 1.0, _smoothstep(dn)],
        default=0.0,
    )


def bump_d1(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    up = (q - _RAMP) / _RAMP
    dn = (0.875 - q) / _RAMP
    return np.select(
        [q < _RAMP, q < 0.25, q <= 0.75, q < 0.875],
        [0.0, _smoothstep_d1(up) / _RAMP, 0.0, -_smoothstep_d1(dn) / _RAMP],
        default=0.0,
    )


def bump_d2(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    up = (q - _RAMP) / _RAMP
    dn = (0.875 - q) / _RAMP
    return np.select(
        [q < _RAMP, q < 0.25, q <= 0.75, q < 0.875],
        [0.0, _smoothstep_d2(up) / _RAMP ** 2, 0.0, _smoothstep_d2(dn) / _RAMP ** 2],
        default=0.0,
    )


def bump_d3(q: np.ndarray) -> np.ndarray:
    # The plateau bump is only C^2: this third derivative is piecewise
    # continuous with jumps at the four ramp joints.
    q = np.asarray(q, dtype=float)
    up = (q - _RAMP) / _RAMP
    dn = (0.875 - q) / _RAMP
    return np.select(
        [q < _RAMP, q < 0.25, q <= 0.75, q < 0.875],
        [0.0, _smoothstep_d3(up) / _RAMP ** 3, 0.0,
         -_smoothstep_d3(dn) / _RAMP ** 3],
        default=0.0,
    )


def wrap_difference(a: np.ndarray, b: np.ndarray, period: float) -> np.ndarray:
    """Shortest signed difference a-b on a circle of the given period."""
    d = (np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % period
    return np.where(d > period / 2, d - period, d)
