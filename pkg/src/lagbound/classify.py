"""Membership decisions for curvature/tameness-bounded curve classes, the
named counterexample families, and family-level separation statistics.

A curve belongs to level k when its curvature sup stays strictly below k, its
tameness constant strictly above 1/(k+1), and it is contained in the level's
compact sub-band |xi| <= r (1 - 1/(k+1)).  Strict inequalities are decided
only outside the numerical error bars; a clause inside its error bar makes
the verdict indeterminate rather than true or false.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .curves import Curve, geodesic_curvature, tameness, trig_curve
from .errors import ParamOutOfRange
from .exactness import area_functional, isotopy_invariant
from .hausdorff import hausdorff_distance
from .numerics import bump, bump_d1, bump_d2, bump_d3
from .surface import SurfacePatch, flat_cylinder, plane_annulus, unit_cylinder

__all__ = [
    "MembershipVerdict",
    "FamilySpec",
    "classify",
    "generate_family",
    "separation_scan",
    "default_cylinder",
    "default_plane",
    "default_unit_cylinder",
]


@lru_cache(maxsize=None)
def default_cylinder() -> SurfacePatch:
    return flat_cylinder(length=2 * np.pi, halfwidth=2.0)


@lru_cache(maxsize=None)
def default_plane() -> SurfacePatch:
    return plane_annulus(circle_radius=2.0, halfwidth=1.5)


@lru_cache(maxsize=None)
def default_unit_cylinder() -> SurfacePatch:
    return unit_cylinder(halfwidth=1.25)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def _clause(margin: float, err: float):
    if margin > err:
        return True
    if margin < -err:
        return False
    return None


@dataclass
class MembershipVerdict:
    """Level-k decision with per-clause margins.

    Clause values are True / False / None (indeterminate: the strict
    inequality sits inside its numerical error bar).  The verdict is the
    three-valued conjunction.
    """

    k: float
    curvature_ok: bool | None
    tame_ok: bool | None
    containment_ok: bool | None
    verdict: bool | None
    margins: dict = field(default_factory=dict)
    exactness_value: float = 0.0
    is_exact: bool = False
    curvature: float = 0.0
    epsilon: float = 0.0


def classify(curve: Curve, k: float, n_scan: int | None = None,
             exact_tol: float = 1e-9) -> MembershipVerdict:
    """Decide level-k membership of a graph curve."""
    if k <= 0:
        raise ValueError("level k must be positive")
    curv = geodesic_curvature(curve)
    trep = tameness(curve, n_scan=n_scan)
    r = curve.patch.halfwidth

    m_curv = k - curv.sup
    m_tame = trep.epsilon - 1.0 / (k + 1.0)
    m_cont = r * (1.0 - 1.0 / (k + 1.0)) - curve.sup_norm()

    c_curv = _clause(m_curv, curv.error)
    c_tame = _clause(m_tame, trep.error)
    c_cont = _clause(m_cont, 1e-12)

    clauses = (c_curv, c_tame, c_cont)
    if all(c is True for c in clauses):
        verdict = True
    elif any(c is False for c in clauses):
        verdict = False
    else:
        verdict = None

    a_val = area_functional(curve.patch, curve)
    return MembershipVerdict(
        k=float(k), curvature_ok=c_curv, tame_ok=c_tame, containment_ok=c_cont,
        verdict=verdict,
        margins={"curvature": (m_curv, curv.error),
                 "tameness": (m_tame, trep.error),
                 "containment": (m_cont, 1e-12)},
        exactness_value=a_val, is_exact=bool(abs(a_val) <= exact_tol),
        curvature=curv.sup, epsilon=trep.epsilon)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    """Named curve family with parameters.

    family one of: escape_cos, parallels, plane_circles, hs_family,
    hs_variant_alpha.
    """

    family: str
    params: dict = field(default_factory=dict)


def _oscillation_curve(patch: SurfacePatch, s_param: float, p: float,
                       n: int | None = None) -> Curve:
    """Graph of minus the q-derivative of s^p * bump(q) * sin(q/s) on the unit
    cylinder, with closed-form first and second derivatives."""
    if n is None:
        # at least ~25 samples per oscillation cycle
        n = int(2 ** np.ceil(np.log2(max(2048, 4.0 / s_param))))
        n = min(n, 65536)
    sp_, p_ = float(s_param), float(p)

    def xi(q):
        q = np.asarray(q, dtype=float) % 1.0
        return (-sp_ ** p_ * bump_d1(q) * np.sin(q / sp_)
                - sp_ ** (p_ - 1) * bump(q) * np.cos(q / sp_))

    def dxi(q):
        q = np.asarray(q, dtype=float) % 1.0
        return (-sp_ ** p_ * bump_d2(q) * np.sin(q / sp_)
                - 2 * sp_ ** (p_ - 1) * bump_d1(q) * np.cos(q / sp_)
                + sp_ ** (p_ - 2) * bump(q) * np.sin(q / sp_))

    def d2xi(q):
        q = np.asarray(q, dtype=float) % 1.0
        return (-sp_ ** p_ * bump_d3(q) * np.sin(q / sp_)
                - 3 * sp_ ** (p_ - 1) * bump_d2(q) * np.cos(q / sp_)
                + 3 * sp_ ** (p_ - 2) * bump_d1(q) * np.sin(q / sp_)
                + sp_ ** (p_ - 3) * bump(q) * np.cos(q / sp_))

    return Curve.from_callables(patch, xi, dxi, d2xi, n=n,
                                name=f"osc_p{p_:g}_s{sp_:g}")


def generate_family(spec: FamilySpec, patch: SurfacePatch | None = None) -> list[Curve]:
    """Instantiate a named family as curves with closed-form derivatives."""
    fam, p = spec.family, dict(spec.params)

    if fam == "escape_cos":
        patch = patch or default_cylinder()
        a = float(p.pop("a", 1.0))
        modes = [int(m) for m in p.pop("modes", range(1, 11))]
        if p:
            raise ParamOutOfRange(f"unknown escape_cos params {sorted(p)}")
        if not 0 < a < patch.halfwidth:
            raise ParamOutOfRange(f"amplitude {a} outside (0, r)")
        if any(m < 1 for m in modes):
            raise ParamOutOfRange("modes must be positive integers")
        return [trig_curve(patch, {m: a}, name=f"cos_m{m}_a{a:g}")
                for m in modes]

    if fam == "parallels":
        patch = patch or default_cylinder()
        levels = [float(c) for c in p.pop("levels",
                                          np.arange(-0.4, 0.41, 0.2).round(10))]
        if p:
            raise ParamOutOfRange(f"unknown parallels params {sorted(p)}")
        if any(abs(c) >= patch.halfwidth for c in levels):
            raise ParamOutOfRange("parallel level outside the band")
        return [Curve.constant(patch, c) for c in levels]

    if fam == "plane_circles":
        patch = patch or default_plane()
        rr = 1.0 / float(np.asarray(patch.base.kappa(np.array([0.0]))).ravel()[0])
        radii = [float(x) for x in p.pop("radii", (1.0, 1.1))]
        if p:
            raise ParamOutOfRange(f"unknown plane_circles params {sorted(p)}")
        if any(not 0 < rr - rad < patch.halfwidth and rad != rr for rad in radii):
            raise ParamOutOfRange("circle radius outside the band")
        return [Curve.constant(patch, rr - rad, name=f"circle_r{rad:g}")
                for rad in radii]

    if fam in ("hs_family", "hs_variant_alpha"):
        patch = patch or default_unit_cylinder()
        exponent = 1.5 if fam == "hs_family" else 2.0 + float(p.pop("alpha", 0.5))
        # The default ladder starts at 2^-7: for larger scales the bump-ramp
        # derivative terms dominate the curvature sup and mask the asymptotic
        # blow-up rate that the ladder is meant to exhibit.
        s_values = [float(x) for x in p.pop("s_values",
                                            [2.0 ** (-j) for j in range(7, 15)])]
        if p:
            raise ParamOutOfRange(f"unknown {fam} params {sorted(p)}")
        if any(not 0 < sv <= 0.25 for sv in s_values):
            raise ParamOutOfRange("scale parameter must lie in (0, 1/4]")
        return [_oscillation_curve(patch, sv, exponent) for sv in s_values]

    raise ParamOutOfRange(f"unknown family {fam!r}")


# ---------------------------------------------------------------------------
# separation statistics
# ---------------------------------------------------------------------------

@dataclass
class ScanResult:
    rows: list          # (name_i, name_j, delta_h, invariant_gap)
    a_emp: float | None
    invariant_kind: str


def separation_scan(curves: list[Curve], invariant_kind: str,
                    gap_tol: float = 1e-9) -> ScanResult:
    """Pairwise Hausdorff distances against invariant gaps over a family.

    a_emp is the smallest Hausdorff distance among pairs whose invariant
    values genuinely differ; None when every pair shares its invariant.
    """
    ambient = {"liouville_class": "cylinder", "enclosed_area": "plane"}
    if invariant_kind not in ambient:
        raise ValueError(f"unknown invariant kind {invariant_kind!r}")
    values = [isotopy_invariant(c, ambient[invariant_kind]).value
              for c in curves]
    rows = []
    a_emp = None
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            dh = hausdorff_distance(curves[i], curves[j]).value
            gap = abs(values[i] - values[j])
            rows.append((curves[i].name, curves[j].name, dh, gap))
            if gap > gap_tol:
                a_emp = dh if a_emp is None else min(a_emp, dh)
    return ScanResult(rows=rows, a_emp=a_emp, invariant_kind=invariant_kind)
