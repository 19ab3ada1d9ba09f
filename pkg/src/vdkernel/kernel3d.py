"""Killed 3D kernel and its survival probability.

On the 3D component punctured at the origin, the process is a Doob transform
of Brownian motion killed at rate gamma^2/2, so its transition density
against the weighted reference measure is an explicit Gaussian over the
weight product. Everything radial about it reduces to the killed half-line
kernel, which is how the survival probability is computed.
"""

from __future__ import annotations

import math

from .errors import InvalidInput
from .geometry import Component, EPoint, KernelParams, MeasureTag, distance
from .kernels1d import Kernel1DValue, killed_halfline_kernel
from .quadrature import QuadConfig, integrate_halfline_weighted

__all__ = ["killed_kernel3d", "survival_probability_3d"]


def _require_comp3d(p: EPoint, name: str):
    if p.component is not Component.COMP3D:
        raise InvalidInput("%s must lie strictly in the 3D component" % name)


def killed_kernel3d(t, x: EPoint, y: EPoint, params: KernelParams) -> Kernel1DValue:
    """Transition density against m_gamma of the 3D process killed at 0.

    Args:
        t: time, > 0.
        x, y: points strictly inside the 3D component.
        params: carries gamma.

    Returns:
        Kernel1DValue with measure MGamma and zero error estimate; the value
        is (2 pi t)^{-3/2} e^{-gamma^2 t/2 - |x-y|^2/(2t)} / (psi(x) psi(y)),
        symmetric in (x, y).
    """
    if not (t > 0.0):
        raise InvalidInput("t must be positive")
    _require_comp3d(x, "x")
    _require_comp3d(y, "y")
    g = params.gamma
    rx, ry = x.radius(), y.radius()
    d = distance(x, y)
    # 1/(psi(x) psi(y)) = (2 pi / gamma) rx ry e^{gamma(rx+ry)}; one exp call
    # on the combined exponent avoids intermediate overflow
    expo = g * (rx + ry) - 0.5 * g * g * t - d * d / (2.0 * t)
    val = (2.0 * math.pi * t) ** -1.5 * (2.0 * math.pi / g) * rx * ry * math.exp(expo)
    return Kernel1DValue(val, MeasureTag.MGAMMA, 0.0)


def survival_probability_3d(t, x: EPoint, params: KernelParams,
                            cfg: QuadConfig | None = None) -> float:
    """Probability that the 3D process avoids the origin up to time t.

    Integrates the killed kernel over the 3D component. The rotational
    reduction collapses that to the killed half-line kernel against the
    radial weight, one 1D quadrature.
    """
    if not (t > 0.0):
        raise InvalidInput("t must be positive")
    _require_comp3d(x, "x")
    r = x.radius()
    res = integrate_halfline_weighted(
        lambda u: killed_halfline_kernel(t, r, u, params).value if u > 0.0 else 0.0,
        params.gamma, cfg or QuadConfig())
    return res.value
