"""Command-line front end.

Subcommands: eval (pointwise kernel values), table (CSV sweeps for plotting),
verify (the check suite as JSON lines), simulate (endpoint CSV from a plan).
Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 numerical failure. All output is deterministic given inputs and seed; CSV
floats use fixed 17-digit scientific notation, JSON uses the shortest
round-trip form.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from dataclasses import dataclass

from .errors import (
    ClockOverflow,
    InsufficientSamples,
    InvalidInput,
    InvalidPlan,
    NoConvergence,
    NonFiniteF,
    ResourceGuard,
    SingularWeight,
    UnsupportedPair,
    UnsupportedPattern,
)
from .geometry import Component, EPoint, KernelParams
from .kernelvd import KernelCase, kernel
from .quadrature import QuadConfig
from .simulate import Scheme, SimPlan, simulate_full, simulate_reflected, simulate_signed
from .verify import (
    check_chapman_kolmogorov,
    check_convolution_identity,
    check_killed_semigroup,
    check_mc_agreement,
    check_normalization,
    check_origin_continuity,
)

USAGE_ERRORS = (InvalidInput, InvalidPlan, UnsupportedPair, SingularWeight,
                UnsupportedPattern, InsufficientSamples)
NUMERICAL_ERRORS = (NoConvergence, NonFiniteF, ClockOverflow, ResourceGuard)

# stable single-letter tags for the four argument patterns
CASE_TAGS = {KernelCase.BOTH_3D: "i", KernelCase.BOTH_1D: "ii",
             KernelCase.CROSS: "iii", KernelCase.ORIGIN: "iv"}
TAG_TO_CASE = {v: k for k, v in CASE_TAGS.items()}
TAG_TO_CASE.update({k.value: k for k in KernelCase})


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class CliConfig:
    gamma: float
    quad: QuadConfig
    output_format: OutputFormat
    out_path: str | None

    def __post_init__(self):
        if not (self.gamma > 0.0):
            raise InvalidInput("gamma must be positive")

    @property
    def params(self) -> KernelParams:
        return KernelParams(gamma=self.gamma)


def _add_common(p, defaults: bool):
    # SUPPRESS on the subcommand copies keeps them from clobbering values
    # parsed at the top level; real defaults live only on the main parser
    miss = argparse.SUPPRESS
    p.add_argument("--gamma", type=float, default=1.0 if defaults else miss,
                   help="drift rate, > 0")
    p.add_argument("--abs-tol", type=float, default=1e-10 if defaults else miss)
    p.add_argument("--rel-tol", type=float, default=1e-9 if defaults else miss)
    p.add_argument("--format", choices=[f.value for f in OutputFormat],
                   default="csv" if defaults else miss, dest="output_format")
    p.add_argument("--out", default=None if defaults else miss,
                   help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vdkernel",
        description="transition densities on the glued 3D/half-line space")
    _add_common(p, defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, defaults=False)
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", parents=[common],
                        help="evaluate the kernel at one point pair")
    pe.add_argument("--t", type=float, required=True)
    pe.add_argument("--x", required=True, help='EPoint JSON, e.g. {"component":"O"}')
    pe.add_argument("--y", required=True)

    pt = sub.add_parser("table", parents=[common],
                        help="CSV sweep over times, radii and cases")
    pt.add_argument("--t-list", required=True, help="comma-separated times")
    pt.add_argument("--radius-grid", required=True, help="comma-separated radii")
    pt.add_argument("--cases", default="i,ii,iii,iv",
                    help="comma-separated subset of i,ii,iii,iv")

    pv = sub.add_parser("verify", parents=[common],
                        help="run the verification suite")
    pv.add_argument("--suite", choices=("fast", "full"), default="fast")
    pv.add_argument("--seed", type=int, default=0)

    ps = sub.add_parser("simulate", parents=[common],
                        help="run a simulation plan")
    ps.add_argument("--plan", required=True,
                    help="SimPlan JSON, or @path to a JSON file")
    return p


def _parse_epoint(text: str) -> EPoint:
    try:
        return EPoint.from_json(text)
    except (json.JSONDecodeError, AttributeError, KeyError, TypeError) as exc:
        raise InvalidInput("bad EPoint JSON %r: %s" % (text, exc)) from exc


def _floats(text: str):
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise InvalidInput("bad number list %r" % text) from exc


def _open_out(cfg):
    if cfg.out_path is None:
        return sys.stdout, False
    return open(cfg.out_path, "w", encoding="utf-8", newline=""), True


def _emit(cfg, lines):
    handle, owned = _open_out(cfg)
    try:
        for line in lines:
            handle.write(line + "\n")
    finally:
        if owned:
            handle.close()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_eval(args, cfg: CliConfig) -> int:
    if not (args.t > 0.0):
        raise InvalidInput("--t must be positive")
    x = _parse_epoint(args.x)
    y = _parse_epoint(args.y)
    v = kernel(args.t, x, y, cfg.params, cfg.quad)
    tag = CASE_TAGS[v.case_tag]
    if cfg.output_format is OutputFormat.JSON:
        line = json.dumps({"case": tag, "error_estimate": v.error_estimate,
                           "value": v.value}, sort_keys=True)
    else:
        line = "value=%.17e error=%.17e case=%s" % (v.value, v.error_estimate, tag)
    _emit(cfg, [line])
    return 0


def _case_points(case: KernelCase, rx: float, ry: float):
    if case is KernelCase.BOTH_3D:
        return EPoint.point3d(rx, 0.0, 0.0), EPoint.point3d(ry, 0.0, 0.0)
    if case is KernelCase.BOTH_1D:
        return EPoint.point1d(rx), EPoint.point1d(ry)
    if case is KernelCase.CROSS:
        return EPoint.point3d(rx, 0.0, 0.0), EPoint.point1d(ry)
    return EPoint.origin(), EPoint.point1d(ry)


def _cmd_table(args, cfg: CliConfig) -> int:
    ts = _floats(args.t_list)
    radii = _floats(args.radius_grid)
    if not ts or not radii:
        raise InvalidInput("need at least one time and one radius")
    if any(t <= 0 for t in ts):
        raise InvalidInput("times must be positive")
    if any(r <= 0 for r in radii):
        raise InvalidInput("radii must be positive")
    try:
        cases = [TAG_TO_CASE[c.strip()] for c in args.cases.split(",") if c.strip()]
    except KeyError as exc:
        raise InvalidInput("unknown case tag %s" % exc) from exc
    lines = ["t,case,rx,ry,value,err"]
    for t in ts:
        for case in cases:
            # the origin case has no free x radius, one row per ry
            radii_x = [0.0] if case is KernelCase.ORIGIN else radii
            for rx in radii_x:
                for ry in radii:
                    x, y = _case_points(case, rx, ry)
                    v = kernel(t, x, y, cfg.params, cfg.quad)
                    lines.append("%.17e,%s,%.17e,%.17e,%.17e,%.17e" % (
                        t, CASE_TAGS[case], rx, ry, v.value, v.error_estimate))
    _emit(cfg, lines)
    return 0


def _verify_suite(suite: str, seed: int, cfg: CliConfig):
    par = cfg.params
    q = cfg.quad
    checks = [
        check_normalization(1.0, EPoint.origin(), par, q),
        check_normalization(1.0, EPoint.point1d(1.0), par, q),
        check_normalization(1.0, EPoint.point3d(0.0, 0.0, 1.0), par, q),
        check_chapman_kolmogorov(0.5, 0.5, EPoint.origin(), EPoint.origin(), par, q),
        check_chapman_kolmogorov(0.2, 1.0, EPoint.point1d(0.5),
                                 EPoint.point1d(1.2), par, q),
        check_killed_semigroup(0.5, 0.7, EPoint.point3d(0, 0, 1.0),
                               EPoint.point3d(0, 0, 0.8), par, q),
        check_convolution_identity(1.0, 1.0, 1.0, par, q),
        check_origin_continuity(1.0, EPoint.point1d(1.0), par, q),
    ]
    if suite == "full":
        g = par.gamma
        checks.append(check_mc_agreement(
            SimPlan(Scheme.SIGNED, 0.0, 1.0, 1e-3, 200_000, seed=seed),
            1.0, 0.0, par))
        checks.append(check_mc_agreement(
            SimPlan(Scheme.REFLECTED, 1.0 / g, 1.0, 1e-3, 200_000, seed=seed + 1),
            1.0, 1.0 / g, par))
        checks.append(check_mc_agreement(
            SimPlan(Scheme.FULL_SKEW, EPoint.point1d(1.0 / g), 1.0, 1e-3,
                    100_000, seed=seed + 2),
            1.0, EPoint.point1d(1.0 / g), par))
    return checks


def _cmd_verify(args, cfg: CliConfig) -> int:
    checks = _verify_suite(args.suite, args.seed, cfg)
    lines = [c.to_json_line() for c in checks]
    n_pass = sum(1 for c in checks if c.passed)
    lines.append("passed %d/%d" % (n_pass, len(checks)))
    _emit(cfg, lines)
    return 0 if n_pass == len(checks) else 1


def _component_tag(endpoint, scheme: Scheme) -> str:
    if isinstance(endpoint, EPoint):
        return endpoint.component.value
    if endpoint == 0.0:
        return Component.ORIGIN.value
    if scheme is Scheme.REFLECTED:
        # magnitude process: its state space is the half-line itself
        return Component.COMP1D.value
    return (Component.COMP3D if endpoint > 0.0 else Component.COMP1D).value


def _coords_field(sample) -> str:
    e = sample.endpoint
    if isinstance(e, EPoint):
        if e.component is Component.COMP3D:
            return ";".join("%.17e" % c for c in e.coords3)
        if e.component is Component.COMP1D:
            return "%.17e" % e.coord1
        return "0"
    return "%.17e" % e


def _cmd_simulate(args, cfg: CliConfig) -> int:
    text = args.plan
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidPlan("cannot read plan file: %s" % exc) from exc
    try:
        plan = SimPlan.from_json_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidPlan("bad plan JSON: %s" % exc) from exc
    runner = {Scheme.SIGNED: simulate_signed,
              Scheme.REFLECTED: simulate_reflected,
              Scheme.FULL_SKEW: simulate_full}[plan.scheme]
    result = runner(plan, cfg.params)
    lines = ["path_id,component,r_or_coords,hit_origin,first_passage_time"]
    for i, sample in enumerate(result):
        fpt = "" if sample.first_passage_time is None else (
            "%.17e" % sample.first_passage_time)
        lines.append("%d,%s,%s,%d,%s" % (
            i, _component_tag(sample.endpoint, plan.scheme), _coords_field(sample),
            1 if sample.hit_origin else 0, fpt))
    _emit(cfg, lines)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = CliConfig(
            gamma=args.gamma,
            quad=QuadConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol),
            output_format=OutputFormat(args.output_format),
            out_path=args.out)
        if args.command == "eval":
            return _cmd_eval(args, cfg)
        if args.command == "table":
            return _cmd_table(args, cfg)
        if args.command == "verify":
            return _cmd_verify(args, cfg)
        return _cmd_simulate(args, cfg)
    except USAGE_ERRORS as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
