"""Transition density of the distorted Brownian motion with varying dimension.

The process lives on the glued space: a 3D piece where it moves as the
ground-state transform of killed Brownian motion, a half-line piece, and the
origin where the two meet. Its density against the reference measure splits
by component pattern: within the 3D piece the killed Gaussian kernel plus an
origin-crossing correction, within the half-line the reflected and killed
line kernels averaged, across components pure crossing mass, and from the
origin half the reflected kernel started at zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidInput
from .geometry import Component, EPoint, KernelParams
from .kernel3d import killed_kernel3d
from .kernels1d import hitting_part, killed_halfline_kernel, reflected_kernel
from .quadrature import QuadConfig

__all__ = ["KernelCase", "KernelVDValue", "kernel", "origin_kernel"]


class KernelCase(enum.Enum):
    BOTH_3D = "3d-3d"
    BOTH_1D = "1d-1d"
    CROSS = "cross"
    ORIGIN = "origin"


@dataclass(frozen=True)
class KernelVDValue:
    """Density value against m_gamma with the dispatch pattern that made it."""

    value: float
    case_tag: KernelCase
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise InvalidInput("error_estimate must be nonnegative")
        if not (self.value >= -self.error_estimate):
            raise InvalidInput(
                "density %r below the nonnegativity slack %r"
                % (self.value, self.error_estimate))


_COMPONENT_RANK = {Component.ORIGIN: 0, Component.COMP1D: 1, Component.COMP3D: 2}


def _canonical_order(x: EPoint, y: EPoint):
    """Fixed argument order so both orientations run the same float program."""
    kx = (_COMPONENT_RANK[x.component], x.radius(), x.coords3 or ())
    ky = (_COMPONENT_RANK[y.component], y.radius(), y.coords3 or ())
    return (x, y) if kx <= ky else (y, x)


def kernel(t, x: EPoint, y: EPoint, params: KernelParams,
           cfg: QuadConfig | None = None) -> KernelVDValue:
    """Transition density p(t, x, y) against the reference measure m_gamma.

    Args:
        t: time, > 0.
        x, y: points of the glued space.
        params: carries gamma.
        cfg: quadrature configuration for the reflected-kernel integral.

    Returns:
        KernelVDValue. Symmetric bit for bit in (x, y): the arguments are
        put into a canonical order before any arithmetic happens.
    """
    if not (t > 0.0):
        raise InvalidInput("t must be positive")
    x, y = _canonical_order(x, y)
    cx, cy = x.component, y.component
    if cx is Component.ORIGIN:
        return origin_kernel(t, y, params, cfg)
    rx, ry = x.radius(), y.radius()
    if cx is Component.COMP3D and cy is Component.COMP3D:
        q = killed_kernel3d(t, x, y, params)
        h = hitting_part(t, rx, ry, params, cfg)
        return KernelVDValue(q.value + h.value, KernelCase.BOTH_3D, h.error_estimate)
    if cx is Component.COMP1D and cy is Component.COMP1D:
        refl = reflected_kernel(t, rx, ry, params, cfg)
        killed = killed_halfline_kernel(t, rx, ry, params)
        return KernelVDValue(0.5 * (refl.value + killed.value), KernelCase.BOTH_1D,
                             0.5 * refl.error_estimate)
    # mixed components: only paths through the origin connect them
    h = hitting_part(t, rx, ry, params, cfg)
    return KernelVDValue(h.value, KernelCase.CROSS, h.error_estimate)


def origin_kernel(t, y: EPoint, params: KernelParams,
                  cfg: QuadConfig | None = None) -> KernelVDValue:
    """Density p(t, 0, y) from the gluing point, against m_gamma.

    Half the reflected kernel started at zero. This is the continuous limit
    of both the half-line and the cross cases as the moving argument reaches
    the origin, which pins the formula uniquely; it does not depend on which
    component y lies in, only on its radius.
    """
    if not (t > 0.0):
        raise InvalidInput("t must be positive")
    refl = reflected_kernel(t, 0.0, y.radius(), params, cfg)
    return KernelVDValue(0.5 * refl.value, KernelCase.ORIGIN, 0.5 * refl.error_estimate)
