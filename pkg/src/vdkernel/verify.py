"""Verification harness tying the kernels to their integral identities.

Each check returns a CheckReport. Quadrature checks (normalization,
Chapman-Kolmogorov, the first-passage convolution, origin continuity) compare
two independently computed numbers. The Monte Carlo check bins simulated
endpoints and runs a chi-square test against bin masses of the analytic
kernel. All checks are deterministic given their inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.integrate import quad

from .errors import InsufficientSamples, InvalidInput, UnsupportedPattern
from .geometry import Component, EPoint, KernelParams, signed_radial
from .kernel3d import killed_kernel3d
from .kernels1d import (
    first_passage_density,
    hitting_part,
    killed_halfline_kernel,
    reflected_kernel,
    signed_kernel,
)
from .kernelvd import kernel, origin_kernel
from .quadrature import QuadConfig, _adaptive, integrate_E_rotreduced
from .simulate import Scheme, SimPlan, simulate_full, simulate_reflected, simulate_signed

__all__ = [
    "CheckReport",
    "check_normalization",
    "check_chapman_kolmogorov",
    "check_killed_semigroup",
    "check_convolution_identity",
    "check_origin_continuity",
    "check_mc_agreement",
]

MIN_EXPECTED_PER_BIN = 20.0
MC_PVALUE_FLOOR = 0.001
CONTINUITY_RADIUS = 2.0 ** -12


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification check; passed iff abs_error <= tolerance."""

    name: str
    computed: float
    reference: float
    abs_error: float
    tolerance: float
    details: str = ""
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.abs_error <= self.tolerance))

    def to_json_dict(self) -> dict:
        return {"name": self.name, "computed": self.computed,
                "reference": self.reference, "abs_error": self.abs_error,
                "tolerance": self.tolerance, "passed": self.passed,
                "details": self.details}

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _require_time(t):
    if not (t > 0.0):
        raise InvalidInput("time must be positive")


# ---------------------------------------------------------------------------
# normalization


def _radial_density_pair(t, x, params, cfg):
    """Radial integrands (3D component, half-line) of y -> kernel(t, x, y).

    Valid because every term of the kernel with the 3D blob integrated over
    spheres reduces to half-line integrals: the ballistic part via the killed
    half-line kernel, the hitting part because it only sees |y|.
    """
    g = params.gamma

    def guard(f):
        return lambda u: f(u) if u > 0.0 else 0.0

    if x.component is Component.COMP3D:
        rx = x.radius()

        def g1(r):
            return (killed_halfline_kernel(t, rx, r, params).value
                    + hitting_part(t, rx, r, params, cfg).value)

        def g2(u):
            return hitting_part(t, rx, u, params, cfg).value

        return guard(g1), guard(g2)
    if x.component is Component.COMP1D:
        ux = x.coord1

        def g1(r):
            return hitting_part(t, ux, r, params, cfg).value

        def g2(u):
            return 0.5 * (reflected_kernel(t, ux, u, params, cfg).value
                          + killed_halfline_kernel(t, ux, u, params).value)

        return guard(g1), guard(g2)

    def g0(u):
        return 0.5 * reflected_kernel(t, 0.0, u, params, cfg).value

    return guard(g0), guard(g0)


def check_normalization(t, x: EPoint, params: KernelParams, cfg=None,
                        tolerance=1e-6, measure_params=None) -> CheckReport:
    """Total mass of kernel(t, x, .) against the reference measure is 1.

    measure_params integrates against a deliberately different weight; the
    negative-control tests use it to show the tolerance discriminates.
    """
    _require_time(t)
    cfg = cfg or QuadConfig()
    mp = measure_params or params
    g1, g2 = _radial_density_pair(t, x, params, cfg)
    res = integrate_E_rotreduced(g1, g2, mp.gamma, cfg)
    return CheckReport(
        name="normalization[t=%g,x=%s,gamma=%g]" % (t, x.component.value, params.gamma),
        computed=res.value, reference=1.0, abs_error=abs(res.value - 1.0),
        tolerance=tolerance,
        details="quad_err=%.3e panels=%d trunc=%.3g" % (
            res.error_estimate, res.panels_used, res.truncation_point))


# ---------------------------------------------------------------------------
# Chapman-Kolmogorov


def _point3(r):
    return EPoint.point3d(r, 0.0, 0.0)


def _point1(u):
    return EPoint.point1d(u)


def _q_product_radial(t, s, rx, ry, axis_sign, params, inner_cfg):
    """rho -> int_0^pi q(t,x,z) q(s,z,y) sin(theta)/2 dtheta for colinear x,y.

    Vectorized in theta; the polar reduction of the 3D reference measure is
    (2 gamma e^{-2 gamma rho} drho) x (sin(theta)/2 dtheta).
    """
    g = params.gamma
    lc_t = math.log(2.0 * math.pi * t) * -1.5 + math.log(2.0 * math.pi / g)
    lc_s = math.log(2.0 * math.pi * s) * -1.5 + math.log(2.0 * math.pi / g)

    def q_pair(rho, mu):
        d2t = rx * rx + rho * rho - 2.0 * rx * rho * mu
        d2s = ry * ry + rho * rho - 2.0 * axis_sign * ry * rho * mu
        logt = lc_t + g * (rx + rho) - 0.5 * g * g * t - 0.5 * d2t / t
        logs = lc_s + g * (ry + rho) - 0.5 * g * g * s - 0.5 * d2s / s
        return rx * rho * ry * rho * np.exp(logt + logs)

    def profile(rho):
        # scalar only: an array argument would broadcast elementwise against
        # the theta nodes and silently corrupt the integrand
        rho = float(rho)

        def integrand(theta):
            return q_pair(rho, np.cos(theta)) * 0.5 * np.sin(theta)

        pts = np.linspace(0.0, math.pi, 17)
        v, _, _ = _adaptive(integrand, pts, inner_cfg)
        return v

    return profile


def check_killed_semigroup(t, s, x: EPoint, y: EPoint, params: KernelParams,
                           cfg=None, tolerance=1e-6) -> CheckReport:
    """Semigroup law of the ballistic 3D kernel via a literal 2D quadrature.

    The killed process never leaves the 3D component, so the identity closes
    over it alone. x and y must be colinear so that the angular integral is
    one-dimensional.
    """
    _require_time(t)
    _require_time(s)
    if x.component is not Component.COMP3D or y.component is not Component.COMP3D:
        raise UnsupportedPattern("killed semigroup lives on the 3D component")
    axis_sign = _colinear_sign(x, y)
    cfg = cfg or QuadConfig()
    # the inner layer must sit far below the outer tolerance, otherwise its
    # residual error looks like noise the outer refinement cannot shrink
    inner = QuadConfig(abs_tol=1e-13, rel_tol=1e-12, max_panels=cfg.max_panels)
    profile = _q_product_radial(t, s, x.radius(), y.radius(), axis_sign, params, inner)
    res = integrate_E_rotreduced(profile, lambda u: 0.0, params.gamma, cfg)
    ref = killed_kernel3d(t + s, x, y, params).value
    return CheckReport(
        name="killed-semigroup[t=%g,s=%g]" % (t, s),
        computed=res.value, reference=ref, abs_error=abs(res.value - ref),
        tolerance=tolerance,
        details="quad_err=%.3e panels=%d" % (res.error_estimate, res.panels_used))


def _colinear_sign(x, y):
    cx, cy = np.array(x.coords3), np.array(y.coords3)
    dot = float(cx @ cy)
    nrm = x.radius() * y.radius()
    if abs(abs(dot) - nrm) > 1e-9 * nrm:
        raise UnsupportedPattern(
            "3D pair must be colinear for the 2D-reduced semigroup check")
    return 1.0 if dot >= 0.0 else -1.0


def check_chapman_kolmogorov(t, s, x: EPoint, y: EPoint, params: KernelParams,
                             cfg=None, tolerance=1e-4) -> CheckReport:
    """int p(t,x,z) p(s,z,y) dm(z) = p(t+s,x,y) for the reducible patterns.

    Patterns: x and y each 1D or origin (both factors are radial in z), or
    x and y both 3D and colinear (angular integral done literally in 2D).
    Mixed pairs raise UnsupportedPattern.
    """
    _require_time(t)
    _require_time(s)
    cfg = cfg or QuadConfig()
    small = (Component.COMP1D, Component.ORIGIN)
    if x.component in small and y.component in small:
        # kernel factors are themselves quadratures; keep them well below
        # the outer tolerance so the outer refinement sees a smooth integrand
        zcfg = QuadConfig(abs_tol=min(cfg.abs_tol * 1e-3, 1e-12),
                          rel_tol=min(cfg.rel_tol * 1e-2, 1e-11),
                          max_panels=cfg.max_panels)

        def g1(r):
            if r <= 0.0:
                return 0.0
            z = _point3(r)
            return (kernel(t, x, z, params, zcfg).value
                    * kernel(s, z, y, params, zcfg).value)

        def g2(u):
            if u <= 0.0:
                return 0.0
            z = _point1(u)
            return (kernel(t, x, z, params, zcfg).value
                    * kernel(s, z, y, params, zcfg).value)

        res = integrate_E_rotreduced(g1, g2, params.gamma, cfg)
    elif x.component is Component.COMP3D and y.component is Component.COMP3D:
        axis_sign = _colinear_sign(x, y)
        rx, ry = x.radius(), y.radius()
        inner = QuadConfig(abs_tol=1e-13, rel_tol=1e-12, max_panels=cfg.max_panels)
        q_prof = _q_product_radial(t, s, rx, ry, axis_sign, params, inner)

        def g1(r):
            if r <= 0.0:
                return 0.0
            # expand (q_t + h_t)(q_s + h_s); only q x q needs the angle, the
            # angular average of a lone q is the killed half-line kernel
            ht = hitting_part(t, rx, r, params, inner).value
            hs = hitting_part(s, r, ry, params, inner).value
            qt = killed_halfline_kernel(t, rx, r, params).value
            qs = killed_halfline_kernel(s, r, ry, params).value
            return q_prof(r) + ht * hs + ht * qs + hs * qt

        def g2(u):
            if u <= 0.0:
                return 0.0
            return (hitting_part(t, rx, u, params, cfg).value
                    * hitting_part(s, u, ry, params, cfg).value)

        res = integrate_E_rotreduced(g1, g2, params.gamma, cfg)
    else:
        raise UnsupportedPattern("no reduction for pattern %s-%s"
                                 % (x.component.value, y.component.value))
    ref = kernel(t + s, x, y, params, cfg).value
    return CheckReport(
        name="chapman-kolmogorov[t=%g,s=%g,%s-%s]" % (
            t, s, x.component.value, y.component.value),
        computed=res.value, reference=ref, abs_error=abs(res.value - ref),
        tolerance=tolerance,
        details="quad_err=%.3e panels=%d" % (res.error_estimate, res.panels_used))


# ---------------------------------------------------------------------------
# first passage convolution


def check_convolution_identity(t, x, y, params: KernelParams, cfg=None,
                               tolerance=1e-4) -> CheckReport:
    """First-passage decomposition of the crossing density.

    int_0^t f(s, x) phat(t-s, 0, -y) ds = phat(t, x, -y): a path from x > 0
    to -y < 0 must pass the origin; split at the first passage time. The
    substitution s = x^2/(2w) turns the inverse-Gaussian spike at s -> 0 into
    an exp(-w) tail.
    """
    _require_time(t)
    if not (x > 0.0 and y > 0.0):
        raise InvalidInput("x and y must be positive")
    cfg = cfg or QuadConfig()

    def integrand(w):
        s = x * x / (2.0 * w)
        ts = t - s
        if ts <= 0.0:
            return 0.0
        half = 0.5 * reflected_kernel(ts, 0.0, y, params, cfg).value
        return first_passage_density(s, x, params) * half * x * x / (2.0 * w * w)

    w_lo = x * x / (2.0 * t)
    computed, quad_err = quad(integrand, w_lo, np.inf,
                              epsabs=1e-11, epsrel=1e-9, limit=400)
    ref = hitting_part(t, x, y, params, cfg).value
    return CheckReport(
        name="convolution[t=%g,x=%g,y=%g]" % (t, x, y),
        computed=computed, reference=ref, abs_error=abs(computed - ref),
        tolerance=tolerance, details="time_quad_err=%.3e" % quad_err)


# ---------------------------------------------------------------------------
# origin continuity


def check_origin_continuity(t, y: EPoint, params: KernelParams, cfg=None,
                            tolerance=1e-3) -> CheckReport:
    """kernel(t, x_n, y) at tiny |x_n| approaches the origin formula.

    Probes from both components at radius 2^-12; the reported deviation is
    the worse of the two.
    """
    _require_time(t)
    cfg = cfg or QuadConfig()
    ref = origin_kernel(t, y, params, cfg).value
    h = CONTINUITY_RADIUS
    from_3d = kernel(t, _point3(h), y, params, cfg).value
    from_1d = kernel(t, _point1(h), y, params, cfg).value
    dev = max(abs(from_3d - ref), abs(from_1d - ref))
    return CheckReport(
        name="origin-continuity[t=%g,y=%s]" % (t, y.component.value),
        computed=from_3d, reference=ref, abs_error=dev, tolerance=tolerance,
        details="dev_3d=%.3e dev_1d=%.3e radius=%g" % (
            abs(from_3d - ref), abs(from_1d - ref), h))


# ---------------------------------------------------------------------------
# Monte Carlo agreement


def _merge_bins(counts, expected, min_expected):
    counts = list(counts)
    expected = list(expected)
    while len(expected) > 2 and min(expected) < min_expected:
        i = int(np.argmin(expected))
        if i == 0:
            j = 1
        elif i == len(expected) - 1:
            j = i - 1
        else:
            j = i - 1 if expected[i - 1] <= expected[i + 1] else i + 1
        lo, hi = min(i, j), max(i, j)
        counts[lo] += counts[hi]
        expected[lo] += expected[hi]
        del counts[hi], expected[hi]
    return np.array(counts, dtype=float), np.array(expected, dtype=float)


def _signed_line_density(t, x0s, params, cfg):
    """y -> endpoint density of the signed scheme times the measure weight."""
    g = params.gamma

    def f(y):
        return (signed_kernel(t, x0s, y, params, cfg).value
                * 2.0 * g * math.exp(-2.0 * g * abs(y)))

    return f


def _reflected_line_density(t, x0, params, cfg):
    g = params.gamma

    def f(u):
        if u <= 0.0:
            return 0.0
        return (reflected_kernel(t, x0, u, params, cfg).value
                * 2.0 * g * math.exp(-2.0 * g * u))

    return f


def _chi2_report(name, samples, f_weighted, edges, left_open, right_open):
    """Chi-square of binned samples against integrals of a weighted density.

    Tail bins beyond the finite edges are included so the partition has full
    mass; expected counts below the validity floor are merged inward.
    """
    n = samples.size
    counts = np.histogram(samples, bins=edges)[0].astype(float)
    expected = np.array([quad(f_weighted, a, b, epsabs=1e-11, epsrel=1e-8,
                              limit=200)[0]
                         for a, b in zip(edges[:-1], edges[1:])])
    span = edges[-1] - edges[0]
    if left_open:
        e_left = quad(f_weighted, edges[0] - 3.0 * span, edges[0],
                      epsabs=1e-11, epsrel=1e-8, limit=200)[0]
        counts = np.concatenate([[float((samples < edges[0]).sum())], counts])
        expected = np.concatenate([[e_left], expected])
    if right_open:
        e_right = quad(f_weighted, edges[-1], edges[-1] + 3.0 * span,
                       epsabs=1e-11, epsrel=1e-8, limit=200)[0]
        counts = np.concatenate([counts, [float((samples > edges[-1]).sum())]])
        expected = np.concatenate([expected, [e_right]])
    expected = expected * n
    counts, expected = _merge_bins(counts, expected, MIN_EXPECTED_PER_BIN)
    stat = float(((counts - expected) ** 2 / expected).sum())
    dof = len(counts) - 1
    pvalue = float(stats.chi2.sf(stat, dof))
    return CheckReport(
        name=name, computed=pvalue, reference=MC_PVALUE_FLOOR,
        abs_error=max(0.0, MC_PVALUE_FLOOR - pvalue), tolerance=0.0,
        details="chi2=%.2f dof=%d bins=%d n=%d" % (stat, dof, len(counts), n))


def check_mc_agreement(plan: SimPlan, t, x: EPoint, params: KernelParams,
                       cfg=None, analytic_params=None) -> CheckReport:
    """Endpoint law of a simulation plan against the analytic kernel.

    The signed and full schemes are binned on the signed radial axis against
    the signed line kernel (the radial projection of the glued process); the
    reflected scheme on the half-line against the reflected kernel.
    analytic_params perturbs only the analytic side (negative controls).

    Raises InsufficientSamples below 10^4 paths and InvalidInput when (t, x)
    do not describe the plan.
    """
    _require_time(t)
    if plan.n_paths < 10_000:
        raise InsufficientSamples("need at least 1e4 paths, got %d" % plan.n_paths)
    if abs(plan.horizon - t) > 1e-12:
        raise InvalidInput("t must equal the plan horizon")
    x0s = signed_radial(x) if isinstance(x, EPoint) else float(x)
    if abs(x0s - plan.signed_x0()) > 1e-12 and plan.scheme is not Scheme.REFLECTED:
        raise InvalidInput("x must match the plan start")
    cfg = cfg or QuadConfig(abs_tol=1e-10, rel_tol=1e-9)
    ap = analytic_params or params
    g = ap.gamma
    width = 4.0 * math.sqrt(t) + 2.0 / g
    if plan.scheme is Scheme.SIGNED:
        res = simulate_signed(plan, params)
        samples = res.endpoints
        f = _signed_line_density(t, x0s, ap, cfg)
        edges = np.linspace(min(x0s, 0.0) - width, max(x0s, 0.0) + width, 33)
        report = _chi2_report("mc-signed[t=%g,x0=%g]" % (t, x0s), samples, f,
                              edges, True, True)
    elif plan.scheme is Scheme.REFLECTED:
        res = simulate_reflected(plan, params)
        samples = res.endpoints
        x0 = abs(plan.signed_x0())
        f = _reflected_line_density(t, x0, ap, cfg)
        edges = np.linspace(0.0, x0 + width, 25)
        report = _chi2_report("mc-reflected[t=%g,x0=%g]" % (t, x0), samples, f,
                              edges, False, True)
    else:
        res = simulate_full(plan, params)
        samples = res.endpoints
        f = _signed_line_density(t, x0s, ap, cfg)
        edges = np.linspace(min(x0s, 0.0) - width, max(x0s, 0.0) + width, 33)
        report = _chi2_report("mc-full-radial[t=%g,x0=%g]" % (t, x0s), samples,
                              f, edges, True, True)
    return report
