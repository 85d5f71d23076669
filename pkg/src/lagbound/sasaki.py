"""Tangent-bundle geometry over 2D base manifolds with the metric that splits
into horizontal and vertical lifts.

Supported bases are conformally flat in their charts (g = e^{2 phi} delta):
the flat torus (phi = 0, single periodic chart) and the round unit sphere
(two stereographic charts, phi = log(2 / (1 + |u|^2))).

Implements:

* geodesic integration of the bundle equations written on the base,

      cov_acc(x) + R(Y, cov_Y') x' = 0,      cov^2 Y = 0,

  for the state (x, x', Y, cov_{x'} Y), with chart hand-off on the sphere;

* the squared fiber norm law along such geodesics: |Y(t)|^2 is constant or a
  strictly convex parabola with leading coefficient |cov_{x'} Y(0)|^2;

* the second fundamental form of the graph of a rescaled gradient field
  t*grad(H), evaluated on unit frames

      X~ = X^h + (cov_X xi)^v,        Z~ = Z^v - ((cov xi)* Z)^h,

  via exact symbolic covariant derivatives of closed-form H;

* the length sandwich d_base <= d_graph <= sqrt(1 + |cov xi|^2) d_base
  checked by quadrature along lifted base geodesics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .errors import FrameDegenerate, StepTooLarge

__all__ = [
    "FlatTorus",
    "RoundSphere",
    "base_manifold",
    "SasakiState",
    "Trajectory",
    "ParabolaFit",
    "GradientGraph",
    "torus_gradient_graph",
    "sphere_harmonic_graph",
    "random_sasaki_states",
    "sasaki_geodesic",
    "parabola_check",
    "graph_second_fundamental_form",
    "curvature_sweep",
    "graph_tameness_bounds",
    "SandwichReport",
]

_U1, _U2 = sp.symbols("u1 u2", real=True)


# ---------------------------------------------------------------------------
# base manifolds
# ---------------------------------------------------------------------------

class _ConformalBase:
    """Shared machinery for conformally flat 2D bases, g = e^{2 phi} delta."""

    gauss_curvature: float = 0.0
    n_charts: int = 1

    def phi_grad(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def lam2(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def lam(self, u: np.ndarray) -> np.ndarray:
        return np.sqrt(self.lam2(u))

    def metric(self, u: np.ndarray) -> np.ndarray:
        """Closed-form metric components g_ij(u), shape (..., 2, 2)."""
        lam2 = self.lam2(u)
        out = np.zeros(u.shape[:-1] + (2, 2))
        out[..., 0, 0] = lam2
        out[..., 1, 1] = lam2
        return out

    def christoffel(self, u: np.ndarray) -> np.ndarray:
        """Closed-form symbols Gamma^i_{jk}(u), shape (..., 2, 2, 2)."""
        dphi = self.phi_grad(u)
        eye = np.eye(2)
        out = (eye[:, :, None] * dphi[..., None, None, :]
               + eye[:, None, :] * dphi[..., None, :, None]
               - eye[None, :, :] * dphi[..., :, None, None])
        return out

    def gamma_vw(self, u, v, w):
        """Gamma(v, w)^i contracted form used by the integrator."""
        dphi = self.phi_grad(u)
        return ((dphi * w).sum(-1, keepdims=True) * v
                + (dphi * v).sum(-1, keepdims=True) * w
                - (v * w).sum(-1, keepdims=True) * dphi)

    def riemann(self, u, x_vec, y_vec, z_vec):
        """R(X, Y)Z for constant curvature: K (<Y,Z> X - <X,Z> Y)."""
        k = self.gauss_curvature
        if k == 0.0:
            return np.zeros_like(x_vec)
        lam2 = self.lam2(u)[..., None]
        yz = (y_vec * z_vec).sum(-1, keepdims=True)
        xz = (x_vec * z_vec).sum(-1, keepdims=True)
        return k * lam2 * (yz * x_vec - xz * y_vec)

    def needs_rechart(self, u: np.ndarray) -> np.ndarray:
        return np.zeros(u.shape[:-1], dtype=bool)

    def rechart(self, u, charts, *vectors):
        return (u, charts) + tuple(vectors)


class FlatTorus(_ConformalBase):
    """Square torus of side 2 pi: flat, single periodic chart."""

    name = "flat_torus"
    gauss_curvature = 0.0
    period = 2.0 * np.pi
    phi_exprs = (sp.Integer(0),)

    def phi_grad(self, u):
        return np.zeros_like(u)

    def lam2(self, u):
        return np.ones(u.shape[:-1])

    def sample_points(self, n: int = 1600):
        k = int(np.sqrt(n))
        g = np.arange(k) * (self.period / k)
        uu = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        return uu, np.zeros(len(uu), dtype=int)

    def random_points(self, n: int, rng: np.random.Generator):
        return rng.uniform(0.0, self.period, size=(n, 2)), np.zeros(n, dtype=int)

    def pair_geodesics(self, pa, ca, pb, cb, n_quad: int = 33):
        delta = (pb - pa + np.pi) % self.period - np.pi
        d = np.linalg.norm(delta, axis=-1)
        tau = np.linspace(0.0, 1.0, n_quad)
        nodes = pa[:, None, :] + tau[None, :, None] * delta[:, None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            tang = delta / np.where(d[:, None] > 0, d[:, None], 1.0)
        tang = np.broadcast_to(tang[:, None, :], nodes.shape).copy()
        charts = np.zeros(nodes.shape[:-1], dtype=int)
        return d, nodes, charts, tang


class RoundSphere(_ConformalBase):
    """Unit round sphere in two stereographic charts.

    Chart 0 projects from the north pole (covers z <= 0 comfortably), chart 1
    from the south pole; the transition is the inversion u -> u / |u|^2.
    """

    name = "round_sphere"
    gauss_curvature = 1.0
    rechart_radius = 1.4
    phi_exprs = (sp.log(2 / (1 + _U1 ** 2 + _U2 ** 2)),) * 2

    def phi_grad(self, u):
        return -2.0 * u / (1.0 + (u * u).sum(-1, keepdims=True))

    def lam2(self, u):
        return (2.0 / (1.0 + (u * u).sum(-1))) ** 2

    def needs_rechart(self, u):
        return (u * u).sum(-1) > self.rechart_radius ** 2

    def rechart(self, u, charts, *vectors):
        mask = self.needs_rechart(u)
        if not mask.any():
            return (u, charts) + tuple(vectors)
        u = u.copy()
        charts = charts.copy()
        um = u[mask]
        r2 = (um * um).sum(-1, keepdims=True)
        jac = (np.eye(2) * r2[..., None]
               - 2.0 * um[..., :, None] * um[..., None, :]) / (r2[..., None] ** 2)
        out_vecs = []
        for vec in vectors:
            vec = vec.copy()
            vec[mask] = np.einsum("bij,bj->bi", jac, vec[mask])
            out_vecs.append(vec)
        u[mask] = um / r2
        charts[mask] = 1 - charts[mask]
        return (u, charts) + tuple(out_vecs)

    # -- embedded representation ---------------------------------------------

    @staticmethod
    def embed(u: np.ndarray, charts: np.ndarray) -> np.ndarray:
        r2 = (u * u).sum(-1)
        sign = np.where(charts == 0, 1.0, -1.0)
        z = sign * (r2 - 1.0) / (r2 + 1.0)
        xy = 2.0 * u / (r2 + 1.0)[..., None]
        return np.concatenate([xy, z[..., None]], axis=-1)

    @staticmethod
    def to_chart(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = p[..., 2]
        charts = (z > 0).astype(int)
        denom = np.where(charts == 0, 1.0 - z, 1.0 + z)
        u = p[..., :2] / denom[..., None]
        return u, charts

    @staticmethod
    def _chart_velocity(p, t3, charts):
        z, tz = p[..., 2], t3[..., 2]
        denom = np.where(charts == 0, 1.0 - z, 1.0 + z)
        sign = np.where(charts == 0, 1.0, -1.0)
        return (t3[..., :2] / denom[..., None]
                + sign[..., None] * p[..., :2] * tz[..., None]
                / (denom ** 2)[..., None])

    def sample_points(self, n: int = 1600):
        i = np.arange(n)
        z = 1.0 - 2.0 * (i + 0.5) / n
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        ang = np.pi * (3.0 - np.sqrt(5.0)) * i
        p = np.stack([rho * np.cos(ang), rho * np.sin(ang), z], axis=-1)
        return self.to_chart(p)

    def random_points(self, n: int, rng: np.random.Generator):
        p = rng.normal(size=(n, 3))
        p /= np.linalg.norm(p, axis=-1, keepdims=True)
        return self.to_chart(p)

    def pair_geodesics(self, pa, ca, pb, cb, n_quad: int = 33):
        p0 = self.embed(pa, ca)
        p1 = self.embed(pb, cb)
        cosd = np.clip((p0 * p1).sum(-1), -1.0, 1.0)
        d = np.arccos(cosd)
        sind = np.sqrt(np.maximum(1e-300, 1.0 - cosd ** 2))
        e = (p1 - cosd[:, None] * p0) / sind[:, None]
        tau = np.linspace(0.0, 1.0, n_quad)[None, :, None] * d[:, None, None]
        pts3 = np.cos(tau) * p0[:, None, :] + np.sin(tau) * e[:, None, :]
        t3 = -np.sin(tau) * p0[:, None, :] + np.cos(tau) * e[:, None, :]
        u, charts = self.to_chart(pts3)
        udots = self._chart_velocity(pts3, t3, charts)
        tang = self.lam(u)[..., None] * udots
        return d, u, charts, tang


def base_manifold(name: str):
    if name == "flat_torus":
        return FlatTorus()
    if name == "round_sphere":
        return RoundSphere()
    raise ValueError(f"unknown base manifold {name!r}")


# ---------------------------------------------------------------------------
# bundle geodesics
# ---------------------------------------------------------------------------

@dataclass
class SasakiState:
    """Bundle geodesic state on the base: position, velocity, fiber point Y,
    covariant fiber velocity Z = cov_{x'} Y."""

    x: np.ndarray
    v: np.ndarray
    y: np.ndarray
    z: np.ndarray
    chart: int = 0


@dataclass
class Trajectory:
    base: object
    times: np.ndarray
    x: np.ndarray        # (n_rec, B, 2)
    v: np.ndarray
    y: np.ndarray
    z: np.ndarray
    charts: np.ndarray   # (n_rec, B)
    y_norm2: np.ndarray  # (n_rec, B)
    z_norm2: np.ndarray
    step: float
    halving_error: float


def _rhs(base, x, v, y, z):
    k = base.gauss_curvature
    dv = -base.gamma_vw(x, v, v)
    if k != 0.0:
        lam2 = base.lam2(x)[..., None]
        zv = (z * v).sum(-1, keepdims=True)
        yv = (y * v).sum(-1, keepdims=True)
        dv = dv - k * lam2 * (zv * y - yv * z)
    dy = z - base.gamma_vw(x, v, y)
    dz = -base.gamma_vw(x, v, z)
    return v, dv, dy, dz


def _integrate(base, x, v, y, z, charts, horizon, h, record_every):
    n_steps = int(np.ceil(horizon / h))
    rec_t, rec = [], []
    for step_i in range(n_steps + 1):
        if step_i % record_every == 0 or step_i == n_steps:
            rec_t.append(step_i * h)
            rec.append((x.copy(), v.copy(), y.copy(), z.copy(), charts.copy()))
        if step_i == n_steps:
            break
        k1 = _rhs(base, x, v, y, z)
        k2 = _rhs(base, x + h / 2 * k1[0], v + h / 2 * k1[1],
                  y + h / 2 * k1[2], z + h / 2 * k1[3])
        k3 = _rhs(base, x + h / 2 * k2[0], v + h / 2 * k2[1],
                  y + h / 2 * k2[2], z + h / 2 * k2[3])
        k4 = _rhs(base, x + h * k3[0], v + h * k3[1],
                  y + h * k3[2], z + h * k3[3])
        x = x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v = v + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        y = y + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        z = z + h / 6 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
        x, charts, v, y, z = base.rechart(x, charts, v, y, z)
    return rec_t, rec


def sasaki_geodesic(base, initial, horizon: float = 10.0, step: float = 1e-3,
                    tol: float = 1e-6, record_every: int = 10) -> Trajectory:
    """Integrate bundle geodesics with fixed-step RK4.

    `initial` is a SasakiState or a list of them (batched).  A coarse run at
    twice the step provides the step-halving error estimate; StepTooLarge is
    raised when the Richardson estimate exceeds `tol`.
    """
    states = initial if isinstance(initial, (list, tuple)) else [initial]
    x = np.stack([np.asarray(s.x, dtype=float) for s in states])
    v = np.stack([np.asarray(s.v, dtype=float) for s in states])
    y = np.stack([np.asarray(s.y, dtype=float) for s in states])
    z = np.stack([np.asarray(s.z, dtype=float) for s in states])
    charts = np.array([s.chart for s in states], dtype=int)

    rec_t, rec = _integrate(base, x, v, y, z, charts, horizon, step, record_every)
    _, rec2 = _integrate(base, x, v, y, z, charts, horizon, 2 * step,
                         record_every=max(1, int(np.ceil(horizon / (2 * step)))))
    lam2_f = base.lam2(rec[-1][0])
    lam2_c = base.lam2(rec2[-1][0])
    y2_f = lam2_f * (rec[-1][2] ** 2).sum(-1)
    y2_c = lam2_c * (rec2[-1][2] ** 2).sum(-1)
    halving = float(np.max(np.abs(y2_f - y2_c))) / 15.0
    if halving > tol:
        raise StepTooLarge(f"step-halving estimate {halving:.2e} exceeds "
                           f"tolerance {tol:.2e}; reduce the step")

    times = np.array(rec_t)
    xs = np.stack([r[0] for r in rec])
    vs = np.stack([r[1] for r in rec])
    ys = np.stack([r[2] for r in rec])
    zs = np.stack([r[3] for r in rec])
    ch = np.stack([r[4] for r in rec])
    lam2 = base.lam2(xs.reshape(-1, 2)).reshape(xs.shape[:2])
    y_norm2 = lam2 * (ys ** 2).sum(-1)
    z_norm2 = lam2 * (zs ** 2).sum(-1)
    return Trajectory(base=base, times=times, x=xs, v=vs, y=ys, z=zs, charts=ch,
                      y_norm2=y_norm2, z_norm2=z_norm2, step=step,
                      halving_error=halving)


@dataclass
class ParabolaFit:
    coefficients: np.ndarray   # (B, 3): c0 + c1 t + c2 t^2
    max_residual: np.ndarray   # (B,)
    leading: np.ndarray        # (B,)
    expected_leading: np.ndarray


def parabola_check(traj: Trajectory) -> ParabolaFit:
    """Least-squares quadratic fit of |Y(t)|^2 along each trajectory.

    The law: the squared fiber norm is constant or a strictly convex parabola
    whose leading coefficient equals |Z(0)|^2.
    """
    n_b = traj.y_norm2.shape[1]
    coeffs = np.empty((n_b, 3))
    resid = np.empty(n_b)
    for b in range(n_b):
        cs = np.polyfit(traj.times, traj.y_norm2[:, b], 2)[::-1]
        coeffs[b] = cs
        model = cs[0] + cs[1] * traj.times + cs[2] * traj.times ** 2
        resid[b] = np.max(np.abs(traj.y_norm2[:, b] - model))
    return ParabolaFit(coefficients=coeffs, max_residual=resid,
                       leading=coeffs[:, 2], expected_leading=traj.z_norm2[0])


def random_sasaki_states(base, n: int, rng: np.random.Generator,
                         fiber_norm: float = 0.5) -> list[SasakiState]:
    """Unit-speed random initial states with |Y|, |Z| of order fiber_norm."""
    pts, charts = base.random_points(n, rng)
    lam = base.lam(pts)
    states = []
    for i in range(n):
        v = rng.normal(size=2)
        v = v / (lam[i] * np.linalg.norm(v))
        y = rng.normal(size=2) * (fiber_norm / lam[i])
        z = rng.normal(size=2) * (fiber_norm / lam[i])
        states.append(SasakiState(x=pts[i], v=v, y=y, z=z, chart=int(charts[i])))
    return states


# ---------------------------------------------------------------------------
# gradient graphs and their second fundamental form
# ---------------------------------------------------------------------------

def _lambdify_stack(exprs: list, shape: tuple) -> callable:
    fn = sp.lambdify((_U1, _U2), exprs, modules="numpy")

    def wrapped(u: np.ndarray) -> np.ndarray:
        vals = fn(u[..., 0], u[..., 1])
        out = np.empty(u.shape[:-1] + (len(exprs),))
        for j, v in enumerate(vals):
            out[..., j] = v
        return out.reshape(u.shape[:-1] + shape)

    return wrapped


def _chart_tensor_functions(h_expr, phi_expr):
    """Exact frame tensors of xi = grad(H) on a conformal chart.

    Returns callables for (in the orthonormal frame): the field xi, its
    covariant derivative T (symmetric), and the covariant derivative of T.
    """
    u = (_U1, _U2)
    lam2 = sp.exp(2 * phi_expr)
    lam = sp.exp(phi_expr)
    dphi = [sp.diff(phi_expr, ui) for ui in u]
    dh = [sp.diff(h_expr, ui) for ui in u]
    xi = [dh[i] / lam2 for i in range(2)]

    def gamma(i, j, k):
        out = sp.Integer(0)
        if i == j:
            out += dphi[k]
        if i == k:
            out += dphi[j]
        if j == k:
            out -= dphi[i]
        return out

    t_mat = [[sp.diff(xi[i], u[k]) + sum(gamma(i, k, m) * xi[m] for m in range(2))
              for k in range(2)] for i in range(2)]
    grad_t = [[[sp.diff(t_mat[i][k], u[j])
                + sum(gamma(i, j, l) * t_mat[l][k] for l in range(2))
                - sum(gamma(l, j, k) * t_mat[i][l] for l in range(2))
                for k in range(2)] for j in range(2)] for i in range(2)]

    xi_frame = [lam * xi[i] for i in range(2)]
    a_frame = [[[grad_t[i][j][k] / lam for k in range(2)] for j in range(2)]
               for i in range(2)]
    flat_t = [t_mat[i][k] for i in range(2) for k in range(2)]
    flat_a = [a_frame[i][j][k] for i in range(2) for j in range(2)
              for k in range(2)]
    return (_lambdify_stack(xi_frame, (2,)),
            _lambdify_stack(flat_t, (2, 2)),
            _lambdify_stack(flat_a, (2, 2, 2)))


class GradientGraph:
    """Graph of amplitude * grad(H) in the tangent bundle of a base manifold.

    H is given as one sympy expression per chart in the symbols (u1, u2); all
    covariant derivatives are generated symbolically, so the tiny monotonicity
    margins are not polluted by numerical differentiation.
    """

    def __init__(self, base, h_exprs, amplitude: float = 1.0, name: str = "graph"):
        self.base = base
        self.h_exprs = tuple(h_exprs)
        self.amplitude = float(amplitude)
        self.name = name
        if len(self.h_exprs) != len(base.phi_exprs):
            raise ValueError("one H expression per chart is required")
        self._fns = [_chart_tensor_functions(h, p)
                     for h, p in zip(self.h_exprs, base.phi_exprs)]
        self._samples = None

    def with_amplitude(self, amplitude: float) -> "GradientGraph":
        g = GradientGraph.__new__(GradientGraph)
        g.base, g.h_exprs, g.name = self.base, self.h_exprs, self.name
        g.amplitude = float(amplitude)
        g._fns = self._fns
        g._samples = None
        return g

    def default_samples(self, n: int = 1600):
        if self._samples is None or len(self._samples[1]) != n:
            self._samples = self.base.sample_points(n)
        return self._samples

    def frame_data(self, coords: np.ndarray, charts: np.ndarray) -> dict:
        """Frame tensors at the given points: xi (.,2), T (.,2,2), A (.,2,2,2)."""
        xi = np.empty(coords.shape[:-1] + (2,))
        t_mat = np.empty(coords.shape[:-1] + (2, 2))
        a_ten = np.empty(coords.shape[:-1] + (2, 2, 2))
        for cid, (fxi, ft, fa) in enumerate(self._fns):
            mask = charts == cid
            if not np.any(mask):
                continue
            xi[mask] = fxi(coords[mask])
            t_mat[mask] = ft(coords[mask])
            a_ten[mask] = fa(coords[mask])
        a = self.amplitude
        return {"xi": a * xi, "T": a * t_mat, "A": a * a_ten}

    def grad_op_norms(self, coords=None, charts=None) -> np.ndarray:
        if coords is None:
            coords, charts = self.default_samples()
        t_mat = self.frame_data(coords, charts)["T"]
        mean = 0.5 * (t_mat[..., 0, 0] + t_mat[..., 1, 1])
        rad = np.sqrt(0.25 * (t_mat[..., 0, 0] - t_mat[..., 1, 1]) ** 2
                      + t_mat[..., 0, 1] * t_mat[..., 1, 0])
        return np.abs(mean) + rad

    def grad_bound(self) -> float:
        return float(np.max(self.grad_op_norms()))

    def hessian_symmetry_gap(self) -> float:
        coords, charts = self.default_samples()
        t_mat = self.frame_data(coords, charts)["T"]
        return float(np.max(np.abs(t_mat[..., 0, 1] - t_mat[..., 1, 0])))


def torus_gradient_graph(eps: float, mode: int = 1) -> GradientGraph:
    return GradientGraph(FlatTorus(), (eps * sp.cos(mode * _U1),),
                         name=f"torus_cos{mode}_{eps:g}")


def sphere_harmonic_graph(eps: float) -> GradientGraph:
    r2 = _U1 ** 2 + _U2 ** 2
    north = eps * (r2 - 1) / (r2 + 1)
    south = eps * (1 - r2) / (r2 + 1)
    return GradientGraph(RoundSphere(), (north, south),
                         name=f"sphere_harmonic_{eps:g}")


def _sup_over_frames(data: dict, k_curv: float, t: float,
                     n_theta: int, theta_block: int = 180) -> float:
    """sup over base samples and unit tangent frames of the normalized
    trilinear form at scale t, with the normal frame maximized in closed form.
    """
    xi, t_mat, a_ten = data["xi"], data["T"], data["A"]
    t2 = t * t
    tsq = np.einsum("bij,bjk->bik", t_mat, t_mat)
    m = np.eye(2)[None] + t2 * tsq
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    minv = np.empty_like(m)
    minv[:, 0, 0] = m[:, 1, 1] / det
    minv[:, 1, 1] = m[:, 0, 0] / det
    minv[:, 0, 1] = -m[:, 0, 1] / det
    minv[:, 1, 0] = -m[:, 1, 0] / det

    best = 0.0
    theta = np.arange(n_theta) * (np.pi / n_theta)
    for k0 in range(0, n_theta, theta_block):
        th = theta[k0:k0 + theta_block]
        xhat = np.stack([np.cos(th), np.sin(th)], axis=-1)      # (m, 2)
        tx = np.einsum("bij,mj->bmi", t_mat, xhat)
        norm = np.sqrt(1.0 + t2 * (tx * tx).sum(-1))            # (b, m)
        xt = xhat[None] / norm[..., None]
        txt = tx / norm[..., None]
        v_vec = np.einsum("bijk,bmj,bmk->bmi", a_ten, xt, xt)
        if k_curv != 0.0:
            txx = (txt * xt).sum(-1, keepdims=True)
            xix = (xi[:, None, :] * xt).sum(-1, keepdims=True)
            rv = k_curv * (txx * xi[:, None, :] - xix * txt)
            v_vec = v_vec - t2 * np.einsum("bij,bmj->bmi", t_mat, rv)
        quad = np.einsum("bmi,bij,bmj->bm", v_vec, minv, v_vec)
        best = max(best, float(np.sqrt(np.max(quad))))
    return abs(t) * best


@dataclass
class SupReport:
    value: float
    t: float
    n_theta: int
    grad_bound: float


def graph_second_fundamental_form(base, graph: GradientGraph, t_scale: float,
                                  n_theta: int = 720,
                                  samples: int = 1600) -> SupReport:
    """Sup norm of the second fundamental form of the graph of t*grad(H)."""
    coords, charts = graph.default_samples(samples)
    gb = float(np.max(graph.grad_op_norms(coords, charts)))
    if gb >= 1.0:
        raise FrameDegenerate(f"|grad xi| reaches {gb:.3f} >= 1; "
                              "frame normalization undefined")
    data = graph.frame_data(coords, charts)
    val = _sup_over_frames(data, base.gauss_curvature, t_scale, n_theta)
    return SupReport(value=val, t=t_scale, n_theta=n_theta, grad_bound=gb)


def curvature_sweep(base, graph: GradientGraph, t_grid: np.ndarray,
                    n_theta: int = 720, samples: int = 1600) -> np.ndarray:
    """Sup norms over a shared frame grid for every scale in t_grid.

    The sample and direction grids are fixed across scales, so each indexed
    frame value inherits the pointwise monotonicity of the rescaling law and
    the returned sups are directly comparable.
    """
    coords, charts = graph.default_samples(samples)
    if float(np.max(graph.grad_op_norms(coords, charts))) >= 1.0:
        raise FrameDegenerate("|grad xi| >= 1 somewhere on the sample set")
    data = graph.frame_data(coords, charts)
    return np.array([_sup_over_frames(data, base.gauss_curvature, t, n_theta)
                     for t in np.asarray(t_grid, dtype=float)])


# ---------------------------------------------------------------------------
# length sandwich on gradient graphs
# ---------------------------------------------------------------------------

@dataclass
class SandwichReport:
    ok: bool
    eps_lower: float
    max_upper_violation: float
    max_lower_violation: float
    n_pairs: int
    grad_bound: float


def graph_tameness_bounds(base, graph: GradientGraph, n_pairs: int = 120,
                          n_quad: int = 33, seed: int = 7,
                          tol: float = 1e-9) -> SandwichReport:
    """Check d_base <= lifted length <= sqrt(1 + max|grad xi|^2) d_base over
    random point pairs, integrating the lift of the base minimal geodesic.

    Also reports the resulting tameness lower bound
    min over pairs of d_base / min(1, lifted length).
    """
    rng = np.random.default_rng(seed)
    pa, ca = base.random_points(n_pairs, rng)
    pb, cb = base.random_points(n_pairs, rng)
    d, nodes, charts, tang = base.pair_geodesics(pa, ca, pb, cb, n_quad)
    keep = d > 1e-6
    d, nodes, charts, tang = d[keep], nodes[keep], charts[keep], tang[keep]

    t_mat = graph.frame_data(nodes, charts)["T"]
    tdot = np.einsum("bqij,bqj->bqi", t_mat, tang)
    speed = np.sqrt(1.0 + (tdot * tdot).sum(-1))
    # composite Simpson weights over [0, 1] (n_quad odd)
    wq = np.ones(n_quad)
    wq[1:-1:2] = 4.0
    wq[2:-1:2] = 2.0
    wq = wq / (3.0 * (n_quad - 1))
    lifted = d * (speed * wq[None, :]).sum(-1)

    gb = graph.grad_bound()
    upper = np.sqrt(1.0 + gb * gb) * d
    viol_low = float(np.max(d - lifted))
    viol_up = float(np.max(lifted - upper))
    ok = bool(viol_low <= tol and viol_up <= tol)
    ratios = d / np.minimum(1.0, lifted)
    return SandwichReport(ok=ok, eps_lower=float(np.min(ratios)),
                          max_upper_violation=viol_up,
                          max_lower_violation=viol_low,
                          n_pairs=int(keep.sum()), grad_bound=gb)
