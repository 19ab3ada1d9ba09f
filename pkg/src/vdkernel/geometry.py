"""State space, reference measures, and density conversions.

The state space E glues a 3D component E1 and a half-line component E2 at a
single origin point. Points carry an explicit component tag; the origin is
its own tag, never a zero coordinate inside a component. The symmetrizing
measure puts weight psi_gamma(x)^2 dx on E1 and phi_gamma(u)^2 du on E2, one
unit of mass on each component.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

from .errors import InvalidInput, SingularWeight, UnsupportedPair

# Radii below this are rejected outright: the 3D weight 1/psi^2 ~ r^2 e^{2 gamma r}
# underflows/overflows and a silent coercion to the origin would be wrong.
MIN_RADIUS = 1e-300


class Component(enum.Enum):
    COMP3D = "E1"
    COMP1D = "E2"
    ORIGIN = "O"


class MeasureTag(enum.Enum):
    MGAMMA = "m_gamma"      # on E, mass 2
    MTILDE = "m_tilde"      # on R, density 2*gamma*exp(-2*gamma*|x|), mass 2
    MPLUS = "m_plus"        # on [0, inf), density 2*gamma*exp(-2*gamma*u), mass 1
    LEBESGUE = "lebesgue"


@dataclass(frozen=True)
class EPoint:
    """A point of the glued space E in canonical form.

    component COMP3D carries a nonzero 3-vector, COMP1D a strictly positive
    scalar, ORIGIN nothing. Construct through the factory helpers below so
    the canonical-form invariants hold.
    """

    component: Component
    coords3: tuple[float, float, float] | None = None
    coord1: float | None = None

    def __post_init__(self):
        if self.component is Component.COMP3D:
            if self.coords3 is None or self.coord1 is not None:
                raise InvalidInput("3D point needs coords3 and no coord1")
            if radius_of_coords(self.coords3) < MIN_RADIUS:
                raise InvalidInput(
                    "3D radius below %g; the origin must use the ORIGIN tag" % MIN_RADIUS
                )
        elif self.component is Component.COMP1D:
            if self.coord1 is None or self.coords3 is not None:
                raise InvalidInput("1D point needs coord1 and no coords3")
            if not (self.coord1 >= MIN_RADIUS):
                raise InvalidInput(
                    "1D coordinate must be >= %g; the origin must use the ORIGIN tag" % MIN_RADIUS
                )
        else:
            if self.coords3 is not None or self.coord1 is not None:
                raise InvalidInput("origin point carries no coordinates")

    @staticmethod
    def point3d(x, y, z) -> "EPoint":
        return EPoint(Component.COMP3D, coords3=(float(x), float(y), float(z)))

    @staticmethod
    def point1d(u) -> "EPoint":
        return EPoint(Component.COMP1D, coord1=float(u))

    @staticmethod
    def origin() -> "EPoint":
        return EPoint(Component.ORIGIN)

    def radius(self) -> float:
        if self.component is Component.COMP3D:
            return radius_of_coords(self.coords3)
        if self.component is Component.COMP1D:
            return self.coord1
        return 0.0

    def to_json_dict(self) -> dict:
        if self.component is Component.COMP3D:
            return {"component": "E1", "coords": list(self.coords3)}
        if self.component is Component.COMP1D:
            return {"component": "E2", "coords": [self.coord1]}
        return {"component": "O", "coords": []}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @staticmethod
    def from_json(text_or_dict) -> "EPoint":
        d = json.loads(text_or_dict) if isinstance(text_or_dict, str) else text_or_dict
        comp = d.get("component")
        coords = d.get("coords", [])
        if comp == "E1":
            if len(coords) != 3:
                raise InvalidInput("component E1 needs 3 coordinates")
            return EPoint.point3d(*coords)
        if comp == "E2":
            if len(coords) != 1:
                raise InvalidInput("component E2 needs 1 coordinate")
            return EPoint.point1d(coords[0])
        if comp == "O":
            return EPoint.origin()
        raise InvalidInput("unknown component tag %r" % comp)


def radius_of_coords(c) -> float:
    return math.sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2])


@dataclass(frozen=True)
class KernelParams:
    """Distortion parameter gamma with the derived weights.

    psi is the 3D ground-state weight sqrt(gamma/2pi) e^{-gamma r}/r, phi the
    half-line weight sqrt(2 gamma) e^{-gamma u}. Both square-integrate to one,
    which is what makes the reference measure mass one per component.
    """

    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0.0) or not math.isfinite(self.gamma):
            raise InvalidInput("gamma must be a finite positive number")

    def psi(self, r: float) -> float:
        """3D weight at radius r > 0."""
        if r <= 0.0:
            raise SingularWeight("psi is singular at the origin")
        return math.sqrt(self.gamma / (2.0 * math.pi)) * math.exp(-self.gamma * r) / r

    def phi(self, u: float) -> float:
        """Half-line weight at u >= 0."""
        if u < 0.0:
            raise InvalidInput("phi is defined on the half-line")
        return math.sqrt(2.0 * self.gamma) * math.exp(-self.gamma * u)

    def scale(self, u: float) -> float:
        """Scale function of the radial diffusion, e^{2 gamma u} / (4 gamma^2)."""
        return math.exp(2.0 * self.gamma * u) / (4.0 * self.gamma * self.gamma)

    def speed_density(self, u: float) -> float:
        """Speed-measure density of the radial diffusion, 2 gamma e^{-2 gamma u}."""
        return 2.0 * self.gamma * math.exp(-2.0 * self.gamma * u)

    def radial_weight(self, r: float) -> float:
        """Density of the radial reference measure, 2 gamma e^{-2 gamma r}.

        Integrating any radial function against the 3D component of the
        reference measure reduces to this weight on (0, inf); the half-line
        component carries the identical weight.
        """
        return 2.0 * self.gamma * math.exp(-2.0 * self.gamma * r)


def distance(a: EPoint, b: EPoint) -> float:
    """Metric on E: Euclidean inside a component, sum of radii across.

    The origin belongs to both components, so its distance to any point is
    that point's radius, consistent with both rules.
    """
    ca, cb = a.component, b.component
    if ca is Component.ORIGIN or cb is Component.ORIGIN:
        return a.radius() + b.radius()
    if ca is cb:
        if ca is Component.COMP3D:
            dx = a.coords3[0] - b.coords3[0]
            dy = a.coords3[1] - b.coords3[1]
            dz = a.coords3[2] - b.coords3[2]
            return math.sqrt(dx * dx + dy * dy + dz * dz)
        return abs(a.coord1 - b.coord1)
    return a.radius() + b.radius()


def signed_radial(a: EPoint) -> float:
    """Signed radius: +|a| on the 3D component, -|a| on the half-line, 0 at the origin."""
    if a.component is Component.COMP3D:
        return a.radius()
    if a.component is Component.COMP1D:
        return -a.coord1
    return 0.0


def _line_weight(tag: MeasureTag, y: float, params: KernelParams) -> float:
    if tag is MeasureTag.MTILDE:
        return 2.0 * params.gamma * math.exp(-2.0 * params.gamma * abs(y))
    if tag is MeasureTag.MPLUS:
        if y < 0.0:
            raise InvalidInput("MPlus lives on the half-line")
        return 2.0 * params.gamma * math.exp(-2.0 * params.gamma * y)
    raise UnsupportedPair("not a line measure: %s" % tag)


def _e_weight(y: EPoint, params: KernelParams) -> float:
    # Radon-Nikodym density of m_gamma against Lebesgue measure on E
    if y.component is Component.COMP3D:
        return params.psi(y.radius()) ** 2
    if y.component is Component.COMP1D:
        return params.phi(y.coord1) ** 2
    raise SingularWeight("density conversion is ambiguous at the origin")


def convert_density(value: float, y, from_tag: MeasureTag, to_tag: MeasureTag,
                    params: KernelParams) -> float:
    """Convert a pointwise density value between reference measures.

    Supported pairs: LEBESGUE <-> MGAMMA with y an EPoint, and
    LEBESGUE <-> MTILDE / MPLUS with y a scalar (or an EPoint, reduced to its
    signed radius / radius). A density against measure mu becomes a density
    against nu by dividing by d(nu)/d(mu) at y.
    """
    if from_tag is to_tag:
        return value
    pair = {from_tag, to_tag}
    if MeasureTag.LEBESGUE not in pair:
        raise UnsupportedPair("conversions route through Lebesgue: %s -> %s" % (from_tag, to_tag))
    other = (pair - {MeasureTag.LEBESGUE}).pop()

    if other is MeasureTag.MGAMMA:
        if not isinstance(y, EPoint):
            raise InvalidInput("MGamma conversion needs an EPoint")
        w = _e_weight(y, params)
    else:
        if isinstance(y, EPoint):
            yv = signed_radial(y) if other is MeasureTag.MTILDE else y.radius()
        else:
            yv = float(y)
        w = _line_weight(other, yv, params)

    if to_tag is MeasureTag.LEBESGUE:
        return value * w
    return value / w
