"""Transition densities for distorted Brownian motion on a glued space.

A 3D component and a half-line are joined at the origin; the process behaves
like Brownian motion with a ground-state drift on each piece and crosses the
gluing point. The package evaluates the transition density in closed form,
simulates the process directly, and cross-checks the two.
"""

from .geometry import Component, EPoint, KernelParams, MeasureTag
from .kernel3d import killed_kernel3d, survival_probability_3d
from .kernels1d import (
    Kernel1DValue,
    first_passage_cdf,
    first_passage_density,
    hitting_part,
    killed_halfline_kernel,
    reflected_kernel,
    signed_kernel,
)
from .kernelvd import KernelCase, KernelVDValue, kernel, origin_kernel
from .quadrature import (
    QuadConfig,
    QuadResult,
    integrate_E_rotreduced,
    integrate_halfline_weighted,
)
from .simulate import (
    EmpiricalDensity,
    PathSample,
    RecordMode,
    Scheme,
    SimPlan,
    SimResult,
    empirical_density,
    sample_first_passage,
    simulate_full,
    simulate_reflected,
    simulate_signed,
)
from .verify import (
    CheckReport,
    check_chapman_kolmogorov,
    check_convolution_identity,
    check_killed_semigroup,
    check_mc_agreement,
    check_normalization,
    check_origin_continuity,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "Component",
    "EPoint",
    "EmpiricalDensity",
    "Kernel1DValue",
    "KernelCase",
    "KernelParams",
    "KernelVDValue",
    "MeasureTag",
    "PathSample",
    "QuadConfig",
    "QuadResult",
    "RecordMode",
    "Scheme",
    "SimPlan",
    "SimResult",
    "check_chapman_kolmogorov",
    "check_convolution_identity",
    "check_killed_semigroup",
    "check_mc_agreement",
    "check_normalization",
    "check_origin_continuity",
    "empirical_density",
    "first_passage_cdf",
    "first_passage_density",
    "hitting_part",
    "integrate_E_rotreduced",
    "integrate_halfline_weighted",
    "kernel",
    "killed_halfline_kernel",
    "killed_kernel3d",
    "origin_kernel",
    "reflected_kernel",
    "sample_first_passage",
    "signed_kernel",
    "simulate_full",
    "simulate_reflected",
    "simulate_signed",
    "survival_probability_3d",
    "__version__",
]
