"""Command-line front end.

Subcommands: analyze, trajectory, region, recommend, validate, convert,
optimize. Numbers are printed with 17 significant digits unless ``--brief``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import advisor, analysis, export, formulations
from .objectives import EvaluationError, SubprocessObjective, get_objective
from .swarm import SwarmConfig, run

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_EVALUATION = 3


class UsageError(Exception):
    pass


def _parse_axis(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, count = text.split(":")
        return float(lo), float(hi), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:count, got {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _num(args, value) -> str:
    return export.fmt(value, 6 if args.brief else 17)


def _complex(args, z: complex) -> str:
    if z.imag == 0:
        return _num(args, z.real)
    sign = "+" if z.imag > 0 else "-"
    return f"{_num(args, z.real)}{sign}{_num(args, abs(z.imag))}j"


def cmd_analyze(args) -> int:
    c = analysis.CoefficientPoint(args.phi, args.w)
    ra = analysis.roots(c)
    behavior = analysis.classify_behavior(c)
    ok = analysis.converges(c)
    if args.format == "json":
        payload = {
            "phi": c.phi,
            "w": c.w,
            "gamma_sq": ra.gamma_sq,
            "root_kind": ra.root_kind.value,
            "r1": [ra.r1.real, ra.r1.imag],
            "r2": [ra.r2.real, ra.r2.imag],
            "spectral_radius": ra.spectral_radius,
            "behavior": behavior.value,
            "converges": ok,
            "flags": list(c.flags),
        }
        _emit(json.dumps(payload) + "\n", args.out)
        return EXIT_OK
    lines = [
        f"phi = {_num(args, c.phi)}, w = {_num(args, c.w)}",
        f"gamma^2 = {_num(args, ra.gamma_sq)}    [discriminant: phi^2 - (2w+2) phi + (w-1)^2]",
        f"r1 = {_complex(args, ra.r1)}, r2 = {_complex(args, ra.r2)}    [roots of z^2 - (1+w-phi) z + w]",
        f"root kind: {ra.root_kind.value}",
        f"spectral radius: {_num(args, ra.spectral_radius)}",
        f"behavior: {behavior.value}",
        "verdict: " + ("convergent" if ok else "divergent" if behavior.divergent else "not convergent")
        + "    [|w| < 1 and 0 < phi < 2(w+1)]",
    ]
    if c.flags:
        lines.append("flags: " + ", ".join(c.flags))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_trajectory(args) -> int:
    c = analysis.CoefficientPoint(args.phi, args.w)
    if (args.x1 is None) == (args.v0 is None):
        raise UsageError("give exactly one of --x1 or --v0")
    if args.x1 is not None:
        spec = analysis.TrajectorySpec(c, args.p, args.x0, args.x1, args.steps)
    else:
        spec = analysis.TrajectorySpec.from_velocity(c, args.p, args.x0, args.v0, args.steps)
    if args.method == "closed":
        xs = analysis.trajectory_closed_form(spec)
    else:
        xs = analysis.trajectory_recurrence(spec)
    if args.format == "json":
        _emit(export.trajectory_json(xs) + "\n", args.out)
    else:
        _emit(export.trajectory_csv(xs, 6 if args.brief else 17), args.out)
    return EXIT_OK


def cmd_region(args) -> int:
    phi_lo, phi_hi, n_phi = args.phi
    w_lo, w_hi, n_w = args.w
    cells = analysis.region_raster((phi_lo, phi_hi), (w_lo, w_hi), (n_phi, n_w))
    if args.format == "json":
        _emit(export.raster_json(cells) + "\n", args.out)
    else:
        _emit(export.raster_csv(cells, 6 if args.brief else 17), args.out)
    return EXIT_OK


def cmd_recommend(args) -> int:
    params = advisor.recommend(args.profile, args.w)
    if args.format == "json":
        _emit(json.dumps(formulations.formulation_to_dict(params)) + "\n", args.out)
    else:
        _emit(
            f"w = {_num(args, params.w)}\nphi_min = {_num(args, params.phi_min)}\n"
            f"phi_max = {_num(args, params.phi_max)}\nip = {_num(args, params.ip)}\nsp = {_num(args, params.sp)}\n",
            args.out,
        )
    return EXIT_OK


def _params_from_args(args, kind: str):
    if getattr(args, "config", None):
        params, _ = formulations.formulation_from_dict(json.loads(Path(args.config).read_text()))
        return params
    fields = {
        "classical": ("w", "iw", "sw"),
        "general": ("w", "phi_min", "phi_max", "ip"),
        "constricted": ("aw", "kappa", "ip"),
    }[kind]
    data = {"formulation": kind}
    for name in fields:
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    return formulations.formulation_from_dict(data)[0]


def cmd_validate(args) -> int:
    params = _params_from_args(args, "general")
    report = advisor.validate(formulations.as_general(params))
    text = report.dumps() if args.format == "json" else report.render()
    _emit(text + "\n", args.out)
    if args.strict and report.status == advisor.FAIL:
        return EXIT_ERROR
    return EXIT_OK


def cmd_convert(args) -> int:
    source = _params_from_args(args, args.source)
    target = formulations.convert(source, args.to)
    d = formulations.formulation_to_dict(target)
    if args.format == "json":
        _emit(json.dumps(d) + "\n", args.out)
    else:
        lines = [f"formulation = {d.pop('formulation')}"]
        lines += [f"{k} = {_num(args, v)}" for k, v in d.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    data = json.loads(Path(args.config).read_text())
    objective_name = args.objective or data.pop("objective", None)
    data.pop("objective", None)
    if args.seed is not None:
        data["seed"] = args.seed
        if isinstance(data.get("formulation"), dict):
            data["formulation"].pop("seed", None)
    if objective_name is None and args.objective_cmd is None:
        raise UsageError("give --objective NAME or --objective-cmd COMMAND")
    if args.objective_cmd is not None:
        objective = SubprocessObjective(args.objective_cmd)
    else:
        spec = get_objective(objective_name, int(data.get("dimensions", 0) or 1))
        data.setdefault("bounds", [list(b) for b in spec.bounds])
        objective = spec
    config = SwarmConfig.from_dict(data)

    out = open(args.out, "w") if args.out else sys.stdout
    try:
        record = run(config, objective, workers=args.workers, on_iteration=lambda h: out.write(h.to_json() + "\n"))
    finally:
        if args.out:
            out.close()
        if isinstance(objective, SubprocessObjective):
            objective.close()
    final = json.dumps(record.to_dict())
    if args.record:
        Path(args.record).write_text(final + "\n")
    elif args.out:
        sys.stdout.write(final + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (optimize overrides the config)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--brief", action="store_true", help="print 6 significant digits")

    parser = argparse.ArgumentParser(prog="psocoeff", description="Particle swarm coefficient analysis and optimisation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="roots and behaviour of a (phi, w) point")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--w", type=float, required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trajectory", parents=[common], help="deterministic particle trajectory")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--p", type=float, default=0.0, help="overall attractor")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--x1", type=float)
    p.add_argument("--v0", type=float)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--method", choices=("closed", "recurrence"), default="closed")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("region", parents=[common], help="classify a grid of the (phi, w) plane")
    p.add_argument("--phi", type=_parse_axis, required=True, metavar="LO:HI:COUNT")
    p.add_argument("--w", type=_parse_axis, required=True, metavar="LO:HI:COUNT")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("recommend", parents=[common], help="suggested coefficients for a profile")
    p.add_argument("--profile", choices=[b.value for b in advisor.BehaviorProfile], default="general-purpose")
    p.add_argument("--w", type=float, default=None, help="override the inertia weight")
    p.set_defaults(func=cmd_recommend)

    def add_param_flags(q):
        q.add_argument("--config", help="formulation JSON file")
        for flag in ("--w", "--iw", "--sw", "--phi-min", "--phi-max", "--ip", "--aw", "--kappa"):
            q.add_argument(flag, type=float, default=None)

    p = sub.add_parser("validate", parents=[common], help="check settings against the guidelines")
    add_param_flags(p)
    p.add_argument("--strict", action="store_true", help="exit 1 when a rule fails")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", parents=[common], help="convert between formulations")
    p.add_argument("--from", dest="source", choices=("classical", "general", "constricted"), default="general")
    p.add_argument("--to", choices=("classical", "general", "constricted"), required=True)
    add_param_flags(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("optimize", parents=[common], help="run the swarm; writes a JSON-lines log")
    p.add_argument("--config", required=True, help="swarm config JSON file")
    p.add_argument("--objective", default=None, help="built-in objective name")
    p.add_argument("--objective-cmd", default=None, help="external objective command")
    p.add_argument("--workers", type=int, default=1, help="parallel objective evaluations")
    p.add_argument("--record", default=None, help="write the final run record here")
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EvaluationError as exc:
        diagnostic = getattr(exc, "diagnostic", None)
        print(f"error: {exc}", file=sys.stderr)
        if diagnostic:
            print(json.dumps({"status": "evaluation-failed", **diagnostic}), file=sys.stderr)
        return EXIT_EVALUATION
    except (ValueError, OSError, analysis.DivergenceDetected) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
