"""Monte Carlo engine for the glued-space diffusion.

Three discretization schemes: the signed line process (Euler with a
sign-dependent drift), its reflection (absolute value after each step, with
a local-time proxy from the overshoot), and the full process on the glued
space via a skew product: the signed scheme drives the radius, and while the
path is in the 3D component a sphere-valued Brownian motion runs on the
clock integral of 1/radius^2.

Randomness is counter-based: every path owns a Philox stream keyed by
(seed, path index), so results are bit-identical no matter how many threads
run and re-running a plan reproduces every sample. Normals come from a
256-layer ziggurat consuming one 32-bit word in the common case.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass

import numpy as np
from numba import float64, njit, prange, uint64
from scipy.optimize import brentq
from scipy.special import erfc

from .errors import (
    ClockOverflow,
    EmptySample,
    InvalidInput,
    InvalidPlan,
    ResourceGuard,
    UnsortedEdges,
)
from .geometry import Component, EPoint, KernelParams, MeasureTag, signed_radial

__all__ = [
    "Scheme",
    "RecordMode",
    "SimPlan",
    "PathSample",
    "SimResult",
    "EmpiricalDensity",
    "simulate_signed",
    "simulate_reflected",
    "simulate_full",
    "sample_first_passage",
    "empirical_density",
]

MAX_STEPS = 10 ** 9            # horizon/dt guard
MAX_PATH_FLOATS = 2 ** 24      # full-trajectory storage guard
ANGULAR_CLOCK_CAP = 100.0      # per-step cap on the angular clock increment
ANGULAR_CLOCK_GUARD = 1e12     # total clock budget per path


class Scheme(enum.Enum):
    SIGNED = "signed"
    REFLECTED = "reflected"
    FULL_SKEW = "full"


class RecordMode(enum.Enum):
    ENDPOINT_ONLY = "endpoint"
    FULL_PATH = "path"
    FIRST_PASSAGE = "first-passage"


# ---------------------------------------------------------------------------
# ziggurat tables for the standard normal, 256 layers

_N_LAYERS = 256


def _zig_tables():
    def f(x):
        return np.exp(-0.5 * x * x)

    def tail(r):
        return np.sqrt(np.pi / 2.0) * erfc(r / np.sqrt(2.0))

    def closure(r):
        # residual of the equal-area recursion after all layers are stacked
        v = r * f(r) + tail(r)
        x = r
        fx = f(r)
        for _ in range(_N_LAYERS - 1):
            fx = fx + v / x
            if fx >= 1.0:
                return 1.0 - fx - 1e-12
            x = np.sqrt(-2.0 * np.log(fx))
        return 1.0 - fx

    r = brentq(closure, 3.0, 4.0, xtol=1e-15, rtol=8.9e-16)
    v = r * f(r) + tail(r)
    xs = np.empty(_N_LAYERS + 1)
    fs = np.empty(_N_LAYERS + 1)
    xs[0] = v / f(r)          # pseudo-base width so layer 0 has area v too
    xs[1] = r
    fs[1] = f(r)
    for i in range(1, _N_LAYERS):
        fs[i + 1] = fs[i] + v / xs[i]
        xs[i + 1] = np.sqrt(-2.0 * np.log(fs[i + 1])) if fs[i + 1] < 1.0 else 0.0
    xs[_N_LAYERS] = 0.0
    fs[_N_LAYERS] = 1.0
    fs[0] = f(xs[0])
    return r, xs, fs


_ZIG_TAIL, _ZX, _ZF = _zig_tables()
_ZIG_X = _ZX[:_N_LAYERS].copy()
_ZIG_RATIO = (_ZX[1:] / _ZX[:-1]).copy()
_ZIG_FLO = _ZF[:_N_LAYERS].copy()
_ZIG_FHI = _ZF[1:].copy()

# ---------------------------------------------------------------------------
# counter-based generator: Philox4x32-10 keyed per path

_M0 = uint64(0xD2511F53)
_M1 = uint64(0xCD9E8D57)
_W0 = uint64(0x9E3779B9)
_W1 = uint64(0xBB67AE85)
_MASK = uint64(0xFFFFFFFF)
_INV24 = 5.9604644775390625e-08   # 2^-24
_INV32 = 2.3283064365386963e-10   # 2^-32


@njit(inline="always", fastmath=True)
def _philox(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = ((p1 >> uint64(32)) ^ c1 ^ k0) & _MASK
        n1 = p1 & _MASK
        n2 = ((p0 >> uint64(32)) ^ c3 ^ k1) & _MASK
        n3 = p0 & _MASK
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


@njit(inline="always", fastmath=True)
def _draw_word(ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1):
    """One 32-bit word from the path's stream; refills the 4-word block lazily."""
    if nbuf == 0:
        b0, b1, b2, b3 = _philox(ctr & _MASK, (ctr >> uint64(32)) & _MASK, plo, phi, k0, k1)
        ctr += uint64(1)
        nbuf = 4
    if nbuf == 4:
        w = b0
    elif nbuf == 3:
        w = b1
    elif nbuf == 2:
        w = b2
    else:
        w = b3
    return w, ctr, b0, b1, b2, b3, nbuf - 1


@njit(inline="always", fastmath=True)
def _draw_uniform(ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1):
    w, ctr, b0, b1, b2, b3, nbuf = _draw_word(ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
    return (float64(w) + 0.5) * _INV32, ctr, b0, b1, b2, b3, nbuf


@njit(inline="always", fastmath=True)
def _draw_normal(ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1):
    """Ziggurat normal: layer index, sign and abscissa all from one word."""
    while True:
        w, ctr, b0, b1, b2, b3, nbuf = _draw_word(ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
        i = w & uint64(0xFF)
        u = float64(w >> uint64(9)) * _INV24 * 2.0
        x = u * _ZIG_X[i]
        neg = (w >> uint64(8)) & uint64(1)
        if u < _ZIG_RATIO[i]:
            return (-x if neg else x), ctr, b0, b1, b2, b3, nbuf
        if i == uint64(0):
            # Marsaglia tail beyond the base layer; exact, retries internally
            while True:
                ua, ctr, b0, b1, b2, b3, nbuf = _draw_uniform(
                    ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                ub, ctr, b0, b1, b2, b3, nbuf = _draw_uniform(
                    ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                xt = -np.log(ua) / _ZIG_TAIL
                yt = -np.log(ub)
                if 2.0 * yt > xt * xt:
                    val = _ZIG_TAIL + xt
                    return (-val if neg else val), ctr, b0, b1, b2, b3, nbuf
        else:
            # wedge: reuse u as the abscissa, one fresh word for the height
            ub, ctr, b0, b1, b2, b3, nbuf = _draw_uniform(
                ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
            if _ZIG_FLO[i] + ub * (_ZIG_FHI[i] - _ZIG_FLO[i]) < np.exp(-0.5 * x * x):
                return (-x if neg else x), ctr, b0, b1, b2, b3, nbuf
            # rejected: restart from a fresh layer so per-attempt acceptance
            # stays proportional to the density


# ---------------------------------------------------------------------------
# scheme kernels


@njit(parallel=True, fastmath=True, cache=True)
def _run_signed(n_paths, n_steps, dt, gamma, y0, k0, k1,
                endpoints, hits, fpts, paths, want_paths):
    sqdt = np.sqrt(dt)
    gdt = gamma * dt
    for p in prange(n_paths):
        plo = uint64(p) & _MASK
        phi = (uint64(p) >> uint64(32)) & _MASK
        ctr = uint64(0)
        b0 = uint64(0); b1 = uint64(0); b2 = uint64(0); b3 = uint64(0)
        nbuf = 0
        y = y0
        hit = False
        fpt = np.nan
        if want_paths:
            paths[p, 0] = y
        for k in range(n_steps):
            z, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
            drift = gdt if y < 0.0 else (-gdt if y > 0.0 else 0.0)
            ynew = y + sqdt * z + drift
            if (not hit) and (ynew == 0.0 or (y > 0.0 and ynew < 0.0)
                              or (y < 0.0 and ynew > 0.0)):
                hit = True
                fpt = (k + 1) * dt
            y = ynew
            if want_paths:
                paths[p, k + 1] = y
        endpoints[p] = y
        hits[p] = hit
        fpts[p] = fpt


@njit(parallel=True, fastmath=True, cache=True)
def _run_reflected(n_paths, n_steps, dt, gamma, y0, k0, k1,
                   endpoints, hits, fpts, ltimes, paths, want_paths):
    sqdt = np.sqrt(dt)
    gdt = gamma * dt
    for p in prange(n_paths):
        plo = uint64(p) & _MASK
        phi = (uint64(p) >> uint64(32)) & _MASK
        ctr = uint64(0)
        b0 = uint64(0); b1 = uint64(0); b2 = uint64(0); b3 = uint64(0)
        nbuf = 0
        y = y0
        hit = False
        fpt = np.nan
        lt = 0.0
        if want_paths:
            paths[p, 0] = y
        for k in range(n_steps):
            z, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
            v = y + sqdt * z - gdt
            if v <= 0.0:
                # reflect and bank the overshoot as the local-time proxy
                lt += -v
                y = -v
                if not hit:
                    hit = True
                    fpt = (k + 1) * dt
            else:
                y = v
            if want_paths:
                paths[p, k + 1] = y
        endpoints[p] = y
        hits[p] = hit
        fpts[p] = fpt
        ltimes[p] = lt


@njit(parallel=True, fastmath=True, cache=True)
def _run_full(n_paths, n_steps, dt, gamma, y0, d0x, d0y, d0z, clock_cap,
              clock_guard, k0, k1,
              endpoints, dirs, hits, fpts, overflow, paths, want_paths):
    sqdt = np.sqrt(dt)
    gdt = gamma * dt
    for p in prange(n_paths):
        plo = uint64(p) & _MASK
        phi = (uint64(p) >> uint64(32)) & _MASK
        ctr = uint64(0)
        b0 = uint64(0); b1 = uint64(0); b2 = uint64(0); b3 = uint64(0)
        nbuf = 0
        y = y0
        dx, dy, dz = d0x, d0y, d0z
        hit = False
        fpt = np.nan
        clock = 0.0
        if want_paths:
            paths[p, 0] = y
        for k in range(n_steps):
            z, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
            drift = gdt if y < 0.0 else (-gdt if y > 0.0 else 0.0)
            ynew = y + sqdt * z + drift
            if (not hit) and (ynew == 0.0 or (y > 0.0 and ynew < 0.0)
                              or (y < 0.0 and ynew > 0.0)):
                hit = True
                fpt = (k + 1) * dt
            if ynew > 0.0:
                if y <= 0.0:
                    # fresh excursion into the 3D component: the angular
                    # state decorrelates at the origin, resample uniformly
                    while True:
                        g1, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                            ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                        g2, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                            ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                        g3, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                            ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                        nrm = np.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
                        if nrm > 1e-8:
                            dx, dy, dz = g1 / nrm, g2 / nrm, g3 / nrm
                            break
                da = dt / (ynew * ynew)
                if da > clock_cap:
                    da = clock_cap
                clock += da
                if clock > clock_guard:
                    overflow[p] = True
                    break
                # sphere step: tangent Gaussian of variance da, renormalized
                g1, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                    ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                g2, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                    ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                g3, ctr, b0, b1, b2, b3, nbuf = _draw_normal(
                    ctr, b0, b1, b2, b3, nbuf, plo, phi, k0, k1)
                dot = g1 * dx + g2 * dy + g3 * dz
                sa = np.sqrt(da)
                nx = dx + sa * (g1 - dot * dx)
                ny = dy + sa * (g2 - dot * dy)
                nz = dz + sa * (g3 - dot * dz)
                nrm = np.sqrt(nx * nx + ny * ny + nz * nz)
                dx, dy, dz = nx / nrm, ny / nrm, nz / nrm
            y = ynew
            if want_paths:
                paths[p, k + 1] = y
        endpoints[p] = y
        dirs[p, 0] = dx
        dirs[p, 1] = dy
        dirs[p, 2] = dz
        hits[p] = hit
        fpts[p] = fpt


# ---------------------------------------------------------------------------
# plan / result plumbing


@dataclass(frozen=True)
class SimPlan:
    """Everything a simulation run depends on, seed included."""

    scheme: Scheme
    x0: object             # EPoint, or a signed scalar for the line schemes
    horizon: float
    dt: float
    n_paths: int
    seed: int
    record: RecordMode = RecordMode.ENDPOINT_ONLY

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise InvalidPlan("dt must be positive")
        if self.dt > self.horizon:
            raise InvalidPlan("dt must not exceed the horizon")
        if self.n_paths < 1:
            raise InvalidPlan("n_paths must be at least 1")
        if self.horizon / self.dt > MAX_STEPS:
            raise ResourceGuard("time grid exceeds %d steps" % MAX_STEPS)
        if not isinstance(self.x0, EPoint) and not isinstance(self.x0, (int, float)):
            raise InvalidPlan("x0 must be an EPoint or a scalar")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.horizon / self.dt)))

    def signed_x0(self) -> float:
        if isinstance(self.x0, EPoint):
            return signed_radial(self.x0)
        return float(self.x0)

    def to_json_dict(self) -> dict:
        x0 = self.x0.to_json_dict() if isinstance(self.x0, EPoint) else float(self.x0)
        return {"scheme": self.scheme.value, "x0": x0, "horizon": self.horizon,
                "dt": self.dt, "n_paths": self.n_paths, "seed": self.seed,
                "record": self.record.value}

    @staticmethod
    def from_json_dict(d: dict) -> "SimPlan":
        try:
            scheme = Scheme(d["scheme"])
            record = RecordMode(d.get("record", "endpoint"))
            x0 = d["x0"]
            if isinstance(x0, dict):
                x0 = EPoint.from_json(x0)
            return SimPlan(scheme, x0, float(d["horizon"]), float(d["dt"]),
                           int(d["n_paths"]), int(d["seed"]), record)
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, (InvalidPlan, ResourceGuard)):
                raise
            raise InvalidPlan("malformed plan: %s" % exc) from exc


@dataclass(frozen=True)
class PathSample:
    endpoint: object                  # EPoint (full scheme) or signed scalar
    hit_origin: bool
    first_passage_time: float | None
    local_time_accum: float = 0.0


class SimResult:
    """Columnar view of all paths; indexes and iterates as PathSamples."""

    def __init__(self, plan, endpoints, hit_origin, first_passage, local_time=None,
                 directions=None, paths=None):
        self.plan = plan
        self.endpoints = endpoints            # signed radial, all schemes
        self.hit_origin = hit_origin
        self.first_passage = first_passage    # NaN where the origin was not hit
        self.local_time = local_time
        self.directions = directions
        self.paths = paths

    def __len__(self):
        return len(self.endpoints)

    def endpoint_point(self, i: int) -> EPoint:
        y = float(self.endpoints[i])
        if y > 0.0:
            if self.directions is None:
                raise InvalidInput("scheme records no angular state")
            d = self.directions[i]
            return EPoint.point3d(y * d[0], y * d[1], y * d[2])
        if y < 0.0:
            return EPoint.point1d(-y)
        return EPoint.origin()

    def __getitem__(self, i: int) -> PathSample:
        if self.plan.scheme is Scheme.FULL_SKEW:
            endpoint = self.endpoint_point(i)
        else:
            endpoint = float(self.endpoints[i])
        fpt = float(self.first_passage[i])
        return PathSample(
            endpoint,
            bool(self.hit_origin[i]),
            None if math.isnan(fpt) else fpt,
            float(self.local_time[i]) if self.local_time is not None else 0.0,
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def _thread_cap():
    """Honor the VDKERNEL_THREADS cap before any parallel kernel runs."""
    cap = os.environ.get("VDKERNEL_THREADS")
    if cap:
        import numba
        n = max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS))
        numba.set_num_threads(n)


def _key_words(seed: int):
    ss = np.random.SeedSequence(seed)
    k0, k1 = ss.generate_state(2, np.uint32)
    return uint64(int(k0)), uint64(int(k1))


def _alloc_paths(plan):
    if plan.record is not RecordMode.FULL_PATH:
        return np.zeros((1, 1)), False
    need = plan.n_paths * (plan.n_steps + 1)
    if need > MAX_PATH_FLOATS:
        raise ResourceGuard("full-path record needs %d floats" % need)
    return np.zeros((plan.n_paths, plan.n_steps + 1)), True


def simulate_signed(plan: SimPlan, params: KernelParams) -> SimResult:
    """Euler scheme for the signed line process, drift gamma toward 0.

    Deterministic per (plan, params): every path consumes its own keyed
    stream. The endpoint law converges weakly, first order in dt, to the
    signed kernel times its reference measure.
    """
    if plan.scheme is not Scheme.SIGNED:
        raise InvalidPlan("plan.scheme must be SIGNED")
    _thread_cap()
    k0, k1 = _key_words(plan.seed)
    n = plan.n_paths
    endpoints = np.empty(n)
    hits = np.zeros(n, np.bool_)
    fpts = np.empty(n)
    paths, want = _alloc_paths(plan)
    _run_signed(n, plan.n_steps, plan.dt, params.gamma, plan.signed_x0(),
                k0, k1, endpoints, hits, fpts, paths, want)
    return SimResult(plan, endpoints, hits, fpts, paths=paths if want else None)


def simulate_reflected(plan: SimPlan, params: KernelParams) -> SimResult:
    """Euler scheme reflected by absolute value, local time from overshoots."""
    if plan.scheme is not Scheme.REFLECTED:
        raise InvalidPlan("plan.scheme must be REFLECTED")
    x0 = plan.signed_x0()
    if isinstance(plan.x0, EPoint):
        x0 = abs(x0)
    if x0 < 0.0:
        raise InvalidPlan("reflected scheme needs a nonnegative start")
    _thread_cap()
    k0, k1 = _key_words(plan.seed)
    n = plan.n_paths
    endpoints = np.empty(n)
    hits = np.zeros(n, np.bool_)
    fpts = np.empty(n)
    ltimes = np.empty(n)
    paths, want = _alloc_paths(plan)
    _run_reflected(n, plan.n_steps, plan.dt, params.gamma, x0,
                   k0, k1, endpoints, hits, fpts, ltimes, paths, want)
    return SimResult(plan, endpoints, hits, fpts, local_time=ltimes,
                     paths=paths if want else None)


def simulate_full(plan: SimPlan, params: KernelParams) -> SimResult:
    """Skew-product scheme on the glued space.

    The signed scheme drives the radius; positive means the 3D component.
    While there, a sphere Brownian motion advances on the capped clock
    dt/radius^2, and the direction is redrawn uniformly at every entry into
    the 3D component, where the true angular position decorrelates.
    """
    if plan.scheme is not Scheme.FULL_SKEW:
        raise InvalidPlan("plan.scheme must be FULL_SKEW")
    if not isinstance(plan.x0, EPoint):
        raise InvalidPlan("full scheme needs an EPoint start")
    y0 = signed_radial(plan.x0)
    if plan.x0.component is Component.COMP3D:
        c = plan.x0.coords3
        r = plan.x0.radius()
        d0 = (c[0] / r, c[1] / r, c[2] / r)
    else:
        d0 = (1.0, 0.0, 0.0)  # replaced on first entry into the 3D component
    _thread_cap()
    k0, k1 = _key_words(plan.seed)
    n = plan.n_paths
    endpoints = np.empty(n)
    dirs = np.empty((n, 3))
    hits = np.zeros(n, np.bool_)
    fpts = np.empty(n)
    overflow = np.zeros(n, np.bool_)
    paths, want = _alloc_paths(plan)
    _run_full(n, plan.n_steps, plan.dt, params.gamma, y0, d0[0], d0[1], d0[2],
              ANGULAR_CLOCK_CAP, ANGULAR_CLOCK_GUARD, k0, k1,
              endpoints, dirs, hits, fpts, overflow, paths, want)
    if overflow.any():
        raise ClockOverflow("angular clock exceeded %g on %d paths"
                            % (ANGULAR_CLOCK_GUARD, int(overflow.sum())))
    return SimResult(plan, endpoints, hits, fpts, directions=dirs,
                     paths=paths if want else None)


def sample_first_passage(x: float, params: KernelParams, n: int, seed: int) -> np.ndarray:
    """Exact inverse-Gaussian samples of the first hitting time of 0 from x."""
    if not (x > 0.0):
        raise InvalidInput("x must be positive")
    if n < 1:
        raise InvalidInput("n must be at least 1")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return rng.wald(x / params.gamma, x * x, size=n)


@dataclass(frozen=True)
class EmpiricalDensity:
    """Binned endpoint masses against a named reference measure."""

    bin_edges: np.ndarray
    masses: np.ndarray
    measure: MeasureTag
    n_samples: int

    def bin_measures(self, params: KernelParams) -> np.ndarray:
        """Reference-measure content of each bin."""
        return np.array([
            _interval_measure(self.measure, a, b, params)
            for a, b in zip(self.bin_edges[:-1], self.bin_edges[1:])])

    def densities(self, params: KernelParams) -> np.ndarray:
        """Per-bin density values, directly comparable to analytic kernels."""
        return self.masses / self.bin_measures(params)


def _interval_measure(tag: MeasureTag, a: float, b: float, params: KernelParams) -> float:
    g = params.gamma
    if tag is MeasureTag.LEBESGUE:
        return b - a

    def cum(x):
        # distribution function of the weight 2 gamma e^{-2 gamma |x|} dx
        if x < 0.0:
            return math.exp(2.0 * g * x)
        return 2.0 - math.exp(-2.0 * g * x)

    if tag in (MeasureTag.MTILDE, MeasureTag.MGAMMA):
        # MGamma bins live on the signed-radial axis, where its radial
        # reduction has exactly the two-sided exponential weight
        return cum(b) - cum(a)
    if tag is MeasureTag.MPLUS:
        if a < 0.0:
            raise InvalidInput("MPlus bins live on the half-line")
        return math.exp(-2.0 * g * a) - math.exp(-2.0 * g * b)
    raise InvalidInput("unsupported measure tag %s" % tag)


def empirical_density(samples, bin_edges, measure: MeasureTag,
                      params: KernelParams) -> EmpiricalDensity:
    """Histogram samples into per-bin probability masses.

    Args:
        samples: 1D array of endpoint coordinates (signed radial for line
            and glued-space laws, nonnegative for half-line laws).
        bin_edges: strictly increasing, at least two entries.
        measure: the reference measure the density values are taken against.
        params: carries gamma for the bin measures.

    Returns:
        EmpiricalDensity; masses sum to one when no sample escapes the range.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise EmptySample("no samples to bin")
    edges = np.asarray(bin_edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0.0):
        raise UnsortedEdges("bin edges must be strictly increasing, >= 2 of them")
    counts, _ = np.histogram(samples, bins=edges)
    return EmpiricalDensity(edges, counts / samples.size, measure, int(samples.size))
