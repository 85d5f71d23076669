import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from lagbound.curves import (Curve, geodesic_curvature, intrinsic_distance,
                             tameness, tameness_comparison_check, trig_curve)
from lagbound.errors import DistortionExceeded
from lagbound.numerics import wrap_difference


def euclidean_graph_curvature(dxi, d2xi):
    """Independent oracle: curvature of a graph in the flat plane."""
    return np.abs(d2xi) / np.power(1.0 + dxi ** 2, 1.5)


class TestCurve:
    def test_leaves_band_rejected(self, cyl):
        with pytest.raises(ValueError):
            trig_curve(cyl, {1: 1.6})

    def test_spectral_derivatives_match_closed_form(self, cyl):
        analytic = trig_curve(cyl, {3: 0.2}, {1: 0.1}, n=256)
        sampled = Curve.from_samples(cyl, analytic.xi, name="resampled")
        assert np.max(np.abs(sampled.dxi - analytic.dxi)) < 1e-10
        assert np.max(np.abs(sampled.d2xi - analytic.d2xi)) < 1e-8

    def test_total_length_straight(self, cyl):
        c = Curve.constant(cyl, 0.3, n=256)
        assert c.total_length() == pytest.approx(2 * np.pi, abs=1e-12)


class TestGeodesicCurvature:
    def test_constant_graph_flat(self, cyl):
        rep = geodesic_curvature(Curve.constant(cyl, 0.7, n=256))
        assert rep.sup < 1e-13

    @pytest.mark.parametrize("a,m", [(0.3, 1), (1.0, 2), (0.1, 7)])
    def test_cos_graph_closed_form(self, cyl, a, m):
        rep = geodesic_curvature(trig_curve(cyl, {m: a}))
        assert rep.sup == pytest.approx(a * m * m, rel=1e-12)
        assert rep.arg_s == pytest.approx(0.0)

    def test_circle_in_plane(self, plane):
        # base circle of the band has Euclidean curvature 1/R
        rep = geodesic_curvature(Curve.constant(plane, 0.0, n=512))
        assert rep.sup == pytest.approx(0.5, abs=1e-12)

    def test_offset_circle_in_plane(self, plane):
        # graph t = c is the circle of radius R - c: curvature 1/(R - c)
        rep = geodesic_curvature(Curve.constant(plane, 0.4, n=512))
        assert rep.sup == pytest.approx(1.0 / 1.6, abs=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(a1=st.floats(-0.4, 0.4), a2=st.floats(-0.3, 0.3),
           m1=st.integers(1, 4), m2=st.integers(1, 6))
    def test_flat_reduction_matches_euclidean_oracle(self, cyl, a1, a2, m1, m2):
        curve = trig_curve(cyl, {m1: a1}, {m2: a2}, n=512)
        rep = geodesic_curvature(curve, _with_error=False)
        oracle = euclidean_graph_curvature(curve.dxi, curve.d2xi)
        assert np.max(np.abs(rep.values - oracle)) < 1e-10

    def test_resolution_stability(self, cyl):
        c1 = trig_curve(cyl, {3: 0.4}, n=1024)
        c2 = trig_curve(cyl, {3: 0.4}, n=2048)
        r1, r2 = geodesic_curvature(c1), geodesic_curvature(c2)
        assert abs(r2.sup - r1.sup) <= r1.error


class TestIntrinsicDistance:
    def test_straight_arcs(self, cyl):
        c = Curve.constant(cyl, 0.0, n=512)
        assert intrinsic_distance(c, 0.0, np.pi) == pytest.approx(np.pi)
        assert intrinsic_distance(c, 0.0, 3 * np.pi / 2) == pytest.approx(np.pi / 2)

    def test_against_adaptive_quadrature_oracle(self, cyl):
        curve = trig_curve(cyl, {1: 0.1})
        oracle, _ = quad(lambda s: np.sqrt(1 + 0.01 * np.sin(s) ** 2), 0, np.pi,
                         epsabs=1e-13)
        assert intrinsic_distance(curve, 0.0, np.pi) == pytest.approx(oracle,
                                                                      abs=1e-10)

    def test_oracle_on_sphere_band(self, sphere):
        curve = Curve.constant(sphere, 0.25, n=512)
        # latitude circle: speed is cos(0.25)
        oracle, _ = quad(lambda s: np.cos(0.25) + 0 * s, 0, 1.3, epsabs=1e-13)
        assert intrinsic_distance(curve, 0.2, 1.5) == pytest.approx(oracle,
                                                                    abs=1e-9)

    @settings(max_examples=20, deadline=None)
    @given(s0=st.floats(0, 2 * np.pi), s1=st.floats(0, 2 * np.pi))
    def test_symmetry_and_positivity(self, cyl, s0, s1):
        curve = trig_curve(cyl, {2: 0.3}, n=512)
        d01 = intrinsic_distance(curve, s0, s1)
        d10 = intrinsic_distance(curve, s1, s0)
        assert d01 == pytest.approx(d10, abs=1e-10)
        assert d01 >= 0

    def test_sandwich_property(self, cyl):
        curve = trig_curve(cyl, {2: 0.35}, n=512)
        idx = np.arange(0, 512, 16)
        cum = curve.cum_length()[idx]
        total = curve.total_length()
        diff = np.abs(cum[:, None] - cum[None, :])
        d_xi = np.minimum(diff, total - diff)
        darc = np.abs(curve.s[idx][:, None] - curve.s[idx][None, :])
        d_l = np.minimum(darc, 2 * np.pi - darc)
        bound = np.sqrt(1 + np.max(curve.dxi) ** 2)
        assert np.all(d_l <= d_xi + 1e-10)
        assert np.all(d_xi <= bound * d_l + 1e-10)


class TestTameness:
    def test_parallel_is_one_tame(self, cyl):
        rep = tameness(Curve.constant(cyl, 0.0, n=512))
        assert rep.epsilon == pytest.approx(1.0, abs=1e-12)

    def test_epsilon_at_most_one(self, cyl):
        for spec in ({1: 0.4}, {3: 0.2}, {5: 0.1}):
            rep = tameness(trig_curve(cyl, spec, n=512))
            assert 0 < rep.epsilon <= 1.0

    def test_small_amplitude_limit(self, cyl):
        eps = [tameness(trig_curve(cyl, {1: a}, n=512)).epsilon
               for a in (0.4, 0.2, 0.1, 0.05, 0.025)]
        assert all(e2 >= e1 - 5e-3 for e1, e2 in zip(eps, eps[1:]))
        assert eps[-1] > 0.995

    def test_report_fields(self, cyl):
        rep = tameness(trig_curve(cyl, {2: 0.3}, n=512))
        assert rep.epsilon == min(rep.long_range_min, rep.short_range_bound)
        assert 0 < rep.delta_min <= 0.05
        assert rep.error > 0

    def test_resolution_stability(self, cyl):
        c1 = trig_curve(cyl, {2: 0.3}, n=512)
        c2 = trig_curve(cyl, {2: 0.3}, n=1024)
        r1 = tameness(c1, n_scan=256)
        r2 = tameness(c2, n_scan=512)
        assert abs(r2.epsilon - r1.epsilon) <= r1.error

    def test_equator_on_sphere(self, sphere):
        rep = tameness(Curve.constant(sphere, 0.0, n=512))
        assert rep.epsilon > 0.999


class TestComparison:
    def test_identity_factor(self, cyl):
        curve = trig_curve(cyl, {2: 0.3}, n=512)
        chk = tameness_comparison_check(curve, lambda s, t: 0.0 * s, 1.0)
        assert chk.ok
        assert chk.epsilon_prime == pytest.approx(chk.epsilon, abs=1e-9)

    def test_sin_bump_factor(self, cyl):
        curve = trig_curve(cyl, {2: 0.3}, n=512)
        phi = lambda s, t: 0.1 * np.sin(s) * np.sin(np.pi * t / cyl.halfwidth)
        chk = tameness_comparison_check(curve, phi, float(np.exp(0.2)),
                                        n_scan=192)
        assert chk.ok
        assert chk.epsilon_prime >= chk.lower_bound - chk.tolerance

    def test_constant_scaling(self, cyl):
        curve = trig_curve(cyl, {2: 0.3}, n=512)
        lam = 1.3
        chk = tameness_comparison_check(curve, lambda s, t: 0.0 * s + np.log(lam),
                                        lam * lam)
        assert chk.ok

    def test_distortion_exceeded(self, cyl):
        curve = trig_curve(cyl, {2: 0.3}, n=512)
        with pytest.raises(DistortionExceeded):
            tameness_comparison_check(curve, lambda s, t: 0.0 * s + 1.0, 2.0)


class TestWrapDifference:
    @settings(max_examples=30, deadline=None)
    @given(a=st.floats(-20, 20), b=st.floats(-20, 20))
    def test_shortest_signed_difference(self, a, b):
        d = wrap_difference(a, b, 2 * np.pi)
        assert abs(d) <= np.pi + 1e-12
        assert (a - b - d) % (2 * np.pi) == pytest.approx(0.0, abs=1e-9) or \
            (a - b - d) % (2 * np.pi) == pytest.approx(2 * np.pi, abs=1e-9)
