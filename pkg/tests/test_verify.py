"""Verification harness tests, including the negative controls."""

import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from vdkernel.errors import (
    InsufficientSamples,
    InvalidInput,
    UnsupportedPattern,
)
from vdkernel.geometry import EPoint, KernelParams
from vdkernel.kernels1d import killed_halfline_kernel, reflected_kernel
from vdkernel.quadrature import QuadConfig, integrate_E_rotreduced
from vdkernel.simulate import Scheme, SimPlan
from vdkernel.verify import (
    CheckReport,
    _q_product_radial,
    check_chapman_kolmogorov,
    check_convolution_identity,
    check_killed_semigroup,
    check_mc_agreement,
    check_normalization,
    check_origin_continuity,
)

PAR = KernelParams(gamma=1.0)
FAST = QuadConfig(abs_tol=1e-9, rel_tol=1e-8)


# ---------------------------------------------------------------------------
# CheckReport plumbing


def test_report_pass_flag():
    r = CheckReport("a", 1.0, 1.0, 0.0, 0.0)
    assert r.passed
    r = CheckReport("b", 1.1, 1.0, 0.1, 0.05)
    assert not r.passed
    r = CheckReport("c", float("nan"), 1.0, float("nan"), 1.0)
    assert not r.passed


def test_report_json_line():
    r = CheckReport("demo", 0.5, 1.0, 0.5, 1.0, details="d")
    d = json.loads(r.to_json_line())
    assert d["name"] == "demo"
    assert d["passed"] is True
    assert set(d) == {"name", "computed", "reference", "abs_error",
                      "tolerance", "passed", "details"}


# ---------------------------------------------------------------------------
# normalization


def test_normalization_examples():
    r = check_normalization(1.0, EPoint.point1d(1.0), PAR, FAST)
    assert r.passed and r.abs_error < 1e-6
    r = check_normalization(10.0, EPoint.origin(), PAR, FAST)
    assert r.passed
    r = check_normalization(1.0, EPoint.point3d(0, 0, 1.0), PAR, FAST)
    assert r.passed


def test_normalization_impossible_tolerance():
    r = check_normalization(1.0, EPoint.point1d(1.0), PAR, FAST, tolerance=0.0)
    assert not r.passed
    assert r.abs_error > 0.0


def test_normalization_rejects_bad_time():
    with pytest.raises(InvalidInput):
        check_normalization(0.0, EPoint.origin(), PAR, FAST)


def test_normalization_negative_control_gamma():
    # integrating against a 10% perturbed weight must blow past 1e-6
    r = check_normalization(1.0, EPoint.point1d(1.0), PAR, FAST,
                            measure_params=KernelParams(gamma=1.1))
    assert not r.passed
    assert r.abs_error > 1e-3


def test_normalization_negative_control_half_factor():
    # dropping the 1/2 in the origin formula doubles the total mass
    bad = integrate_E_rotreduced(
        lambda r: reflected_kernel(1.0, 0.0, r, PAR, FAST).value if r > 0 else 0.0,
        lambda u: reflected_kernel(1.0, 0.0, u, PAR, FAST).value if u > 0 else 0.0,
        PAR.gamma, FAST)
    assert abs(bad.value - 2.0) < 1e-6
    assert abs(bad.value - 1.0) > 0.9


# ---------------------------------------------------------------------------
# Chapman-Kolmogorov


def test_ck_origin_pair():
    r = check_chapman_kolmogorov(0.5, 0.5, EPoint.origin(), EPoint.origin(),
                                 PAR, FAST)
    assert r.passed and r.abs_error < 1e-4


def test_ck_1d_pair():
    r = check_chapman_kolmogorov(0.2, 1.0, EPoint.point1d(0.5),
                                 EPoint.point1d(1.2), PAR, FAST)
    assert r.passed and r.abs_error < 1e-4
    r = check_chapman_kolmogorov(0.5, 0.5, EPoint.point1d(1.0),
                                 EPoint.origin(), PAR, FAST)
    assert r.passed


def test_ck_3d_colinear_pair():
    r = check_chapman_kolmogorov(0.5, 0.5, EPoint.point3d(0, 0, 1.0),
                                 EPoint.point3d(0, 0, 0.6), PAR, FAST)
    assert r.passed and r.abs_error < 1e-4


def test_ck_rejects_bad_time():
    with pytest.raises(InvalidInput):
        check_chapman_kolmogorov(0.0, 1.0, EPoint.origin(), EPoint.origin(),
                                 PAR, FAST)
    with pytest.raises(InvalidInput):
        check_chapman_kolmogorov(1.0, -0.5, EPoint.origin(), EPoint.origin(),
                                 PAR, FAST)


def test_ck_unsupported_patterns():
    with pytest.raises(UnsupportedPattern):
        check_chapman_kolmogorov(0.5, 0.5, EPoint.point3d(0, 0, 1.0),
                                 EPoint.point1d(1.0), PAR, FAST)
    with pytest.raises(UnsupportedPattern):
        check_chapman_kolmogorov(0.5, 0.5, EPoint.point3d(1.0, 0, 0),
                                 EPoint.point3d(0, 1.0, 0), PAR, FAST)


# ---------------------------------------------------------------------------
# killed-kernel semigroup via the 2D reduction


def test_killed_semigroup_parallel_and_antipodal():
    x = EPoint.point3d(0, 0, 1.0)
    r = check_killed_semigroup(0.5, 0.7, x, EPoint.point3d(0, 0, 0.8), PAR, FAST)
    assert r.passed and r.abs_error < 1e-6
    r = check_killed_semigroup(0.5, 0.7, x, EPoint.point3d(0, 0, -0.8), PAR, FAST)
    assert r.passed


def test_killed_semigroup_requires_3d():
    with pytest.raises(UnsupportedPattern):
        check_killed_semigroup(0.5, 0.5, EPoint.point1d(1.0),
                               EPoint.point3d(0, 0, 1.0), PAR, FAST)


def test_q_profile_matches_sinh_identity():
    # the angular integral of the Gaussian pair has the closed form
    # C(rho) sinh(a)/a with a = rho (rx/t + ry/s); cross-check the literal
    # quadrature route against it at a few radii
    t, s, rx, ry, g = 0.5, 0.7, 1.0, 0.8, 1.0
    inner = QuadConfig(abs_tol=1e-13, rel_tol=1e-11)
    prof = _q_product_radial(t, s, rx, ry, 1.0, PAR, inner)
    for rho in (0.3, 1.0, 2.5):
        a = rho * (rx / t + ry / s)
        pref = ((2 * math.pi * t) ** -1.5 * (2 * math.pi / g)
                * (2 * math.pi * s) ** -1.5 * (2 * math.pi / g)
                * rx * rho * ry * rho
                * math.exp(g * (rx + rho) - 0.5 * g * g * t
                           - (rx * rx + rho * rho) / (2 * t)
                           + g * (ry + rho) - 0.5 * g * g * s
                           - (ry * ry + rho * rho) / (2 * s)))
        closed = pref * math.sinh(a) / a
        assert prof(rho) == pytest.approx(closed, rel=1e-9)


# ---------------------------------------------------------------------------
# convolution identity


def test_convolution_examples():
    r = check_convolution_identity(1.0, 1.0, 1.0, PAR, FAST)
    assert r.passed and r.abs_error < 1e-4
    r = check_convolution_identity(2.0, 0.5, 1.5, PAR, FAST)
    assert r.passed
    r = check_convolution_identity(1.0, 20.0, 1.0, PAR, FAST)
    assert r.passed
    # both sides vanish: the exact LHS is ~ e^{-200}; the reference side is
    # a difference of two quadratures, so it only vanishes to quad accuracy
    assert abs(r.computed) < 1e-12
    assert abs(r.reference) < 1e-6


def test_convolution_validation():
    with pytest.raises(InvalidInput):
        check_convolution_identity(0.0, 1.0, 1.0, PAR, FAST)
    with pytest.raises(InvalidInput):
        check_convolution_identity(1.0, -1.0, 1.0, PAR, FAST)
    with pytest.raises(InvalidInput):
        check_convolution_identity(1.0, 1.0, 0.0, PAR, FAST)


# ---------------------------------------------------------------------------
# origin continuity


def test_origin_continuity_examples():
    r = check_origin_continuity(1.0, EPoint.point1d(1.0), PAR, FAST)
    assert r.passed and r.abs_error < 1e-3
    r = check_origin_continuity(1.0, EPoint.origin(), PAR, FAST)
    assert r.passed
    r = check_origin_continuity(0.5, EPoint.point3d(0, 0.8, 0), PAR, FAST)
    assert r.passed
    with pytest.raises(InvalidInput):
        check_origin_continuity(-1.0, EPoint.origin(), PAR, FAST)


# ---------------------------------------------------------------------------
# Monte Carlo agreement


def test_mc_signed_agreement():
    plan = SimPlan(Scheme.SIGNED, 0.0, 1.0, 1e-3, 50_000, seed=5)
    r = check_mc_agreement(plan, 1.0, 0.0, PAR)
    assert r.passed
    assert r.computed > 0.001


def test_mc_reflected_agreement():
    plan = SimPlan(Scheme.REFLECTED, 1.0, 1.0, 1e-3, 50_000, seed=6)
    r = check_mc_agreement(plan, 1.0, 1.0, PAR)
    assert r.passed


def test_mc_full_agreement():
    plan = SimPlan(Scheme.FULL_SKEW, EPoint.point1d(1.0), 1.0, 1e-3, 20_000, seed=8)
    r = check_mc_agreement(plan, 1.0, EPoint.point1d(1.0), PAR)
    assert r.passed


def test_mc_determinism():
    plan = SimPlan(Scheme.SIGNED, 0.0, 1.0, 2e-3, 20_000, seed=9)
    a = check_mc_agreement(plan, 1.0, 0.0, PAR)
    b = check_mc_agreement(plan, 1.0, 0.0, PAR)
    assert a.to_json_line() == b.to_json_line()


def test_mc_validation():
    plan = SimPlan(Scheme.SIGNED, 0.0, 1.0, 1e-2, 5_000, seed=1)
    with pytest.raises(InsufficientSamples):
        check_mc_agreement(plan, 1.0, 0.0, PAR)
    plan = SimPlan(Scheme.SIGNED, 0.0, 1.0, 1e-2, 20_000, seed=1)
    with pytest.raises(InvalidInput):
        check_mc_agreement(plan, 2.0, 0.0, PAR)
    with pytest.raises(InvalidInput):
        check_mc_agreement(plan, 1.0, 0.7, PAR)


def test_mc_negative_control_gamma():
    plan = SimPlan(Scheme.SIGNED, 0.0, 1.0, 1e-3, 50_000, seed=5)
    r = check_mc_agreement(plan, 1.0, 0.0, PAR,
                           analytic_params=KernelParams(gamma=1.1))
    assert not r.passed
    assert r.computed < 1e-6
