"""One-dimensional kernel family on the line and half-line.

The signed line process moves as Brownian motion with drift gamma pointed at
the origin. Four densities cover its behavior: the reflected kernel for the
absolute value, the killed half-line kernel, the hitting-part that carries
mass across the origin, and the signed-line kernel assembled from those. The
first-passage law to the origin closes the set; it feeds the convolution and
survival identities used by the verification layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.special import log_ndtr, ndtr

from .errors import InvalidInput
from .geometry import KernelParams, MeasureTag
from .quadrature import QuadConfig, damped_oscillatory_integral

__all__ = [
    "Kernel1DValue",
    "reflected_kernel",
    "killed_halfline_kernel",
    "hitting_part",
    "signed_kernel",
    "first_passage_density",
    "first_passage_cdf",
]

_SQRT_8PI = math.sqrt(8.0 * math.pi)
_LOG_GUARD = 600.0  # switch to log-space products above this exponent


@dataclass(frozen=True)
class Kernel1DValue:
    """A kernel evaluation: density value against the tagged measure."""

    value: float
    measure: MeasureTag
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise InvalidInput("error_estimate must be nonnegative")
        if not (self.value >= -self.error_estimate):
            raise InvalidInput(
                "density %r below the nonnegativity slack %r"
                % (self.value, self.error_estimate))


def _check_time(t):
    if not (t > 0.0):
        raise InvalidInput("t must be positive")


def reflected_kernel(t, x, y, params: KernelParams, cfg: QuadConfig | None = None) -> Kernel1DValue:
    """Transition density of the reflected drift process |Y| against MPlus.

    Args:
        t: time, > 0.
        x, y: nonnegative positions on the half-line.
        params: carries gamma.
        cfg: quadrature configuration for the oscillatory integral; its
            abs_tol is interpreted as the target for the returned kernel
            value and rescaled internally by the exponential prefactor.

    Returns:
        Kernel1DValue with measure MPlus. The value is
        1 + (1/(pi gamma)) e^{gamma(x+y) - gamma^2 t/2} I(t,x,y) and tends to
        1 as t grows, MPlus being the stationary law.
    """
    _check_time(t)
    if x < 0.0 or y < 0.0:
        raise InvalidInput("x and y must be nonnegative")
    cfg = cfg or QuadConfig()
    g = params.gamma
    log_c = g * (x + y) - 0.5 * g * g * t - math.log(math.pi * g)
    # keep the final kernel error near cfg.abs_tol even when the prefactor is large
    scaled = replace(cfg, abs_tol=max(cfg.abs_tol * math.exp(-max(log_c, 0.0)), 1e-300))
    res = damped_oscillatory_integral(t, x, y, g, scaled)
    if log_c < _LOG_GUARD:
        c = math.exp(log_c)
        term = c * res.value
        err = c * res.error_estimate
    else:
        term = math.copysign(math.exp(log_c + math.log(abs(res.value))), res.value) \
            if res.value != 0.0 else 0.0
        err = math.exp(log_c + math.log(res.error_estimate)) \
            if res.error_estimate > 0.0 else 0.0
    return Kernel1DValue(1.0 + term, MeasureTag.MPLUS, err)


def killed_halfline_kernel(t, x, y, params: KernelParams) -> Kernel1DValue:
    """Transition density against MPlus of the drift process killed at 0.

    Closed form, no quadrature. The Gaussian difference is computed through
    expm1 so near-cancellation at small x*y/t costs no precision.
    """
    _check_time(t)
    if not (x > 0.0) or not (y > 0.0):
        raise InvalidInput("x and y must be strictly positive")
    g = params.gamma
    expo = -0.5 * g * g * t + g * (x + y) - (x - y) * (x - y) / (2.0 * t)
    val = -math.exp(expo) * math.expm1(-2.0 * x * y / t) / (g * _SQRT_8PI * math.sqrt(t))
    return Kernel1DValue(val, MeasureTag.MPLUS, 0.0)


def hitting_part(t, x, y, params: KernelParams, cfg: QuadConfig | None = None) -> Kernel1DValue:
    """Density contribution of paths that visit the origin before t.

    Half the gap between the reflected and killed kernels; also the signed
    kernel evaluated across the origin at (x, -y).
    """
    refl = reflected_kernel(t, x, y, params, cfg)
    killed = killed_halfline_kernel(t, x, y, params)
    val = 0.5 * (refl.value - killed.value)
    err = 0.5 * refl.error_estimate
    return Kernel1DValue(val, MeasureTag.MPLUS, err)


def signed_kernel(t, x, y, params: KernelParams, cfg: QuadConfig | None = None) -> Kernel1DValue:
    """Transition density of the signed line process against MTilde.

    Same-sign arguments add the killed kernel to the reflected one, opposite
    signs subtract it, and a zero argument takes the continuous limit, half
    the reflected kernel. Symmetric under simultaneous sign flip.
    """
    _check_time(t)
    ax, ay = abs(x), abs(y)
    refl = reflected_kernel(t, ax, ay, params, cfg)
    if x == 0.0 or y == 0.0:
        return Kernel1DValue(0.5 * refl.value, MeasureTag.MTILDE, 0.5 * refl.error_estimate)
    killed = killed_halfline_kernel(t, ax, ay, params)
    sign = 1.0 if (x > 0.0) == (y > 0.0) else -1.0
    val = 0.5 * (refl.value + sign * killed.value)
    return Kernel1DValue(val, MeasureTag.MTILDE, 0.5 * refl.error_estimate)


def first_passage_density(s, x, params: KernelParams) -> float:
    """Density of the first hitting time of 0 from x > 0, drift at the origin.

    Inverse-Gaussian law with mean x/gamma and shape x^2; integrates to one
    since the hit is almost sure.
    """
    if not (s > 0.0):
        raise InvalidInput("s must be positive")
    if not (x > 0.0):
        raise InvalidInput("x must be positive")
    g = params.gamma
    return x / math.sqrt(2.0 * math.pi * s ** 3) * math.exp(-(x - g * s) ** 2 / (2.0 * s))


def first_passage_cdf(t, x, params: KernelParams) -> float:
    """P(hit 0 by time t) from x > 0; complements survival of the killed kernels.

    The e^{2 gamma x} factor is folded into log_ndtr so large x cannot
    overflow before the tiny normal tail cancels it.
    """
    if not (t > 0.0):
        return 0.0
    if not (x > 0.0):
        raise InvalidInput("x must be positive")
    g = params.gamma
    rt = math.sqrt(t)
    a = (g * t - x) / rt
    b = -(g * t + x) / rt
    return float(ndtr(a) + math.exp(2.0 * g * x + log_ndtr(b)))
