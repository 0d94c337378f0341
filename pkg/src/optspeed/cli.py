"""Command-line front end.

Exit codes: 0 ok, 2 malformed input, 3 invalid metric, 4 geometric
degeneracy (coincident rays and the like), 5 failed verification.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import formats
from .brachistochrone import EnergyScale, construct_spectral
from .config import Tolerances, profile_from_env, with_overrides
from .errors import OptSpeedError, SchemaError
from .evolution import sample_trajectory
from .geometry import cos_distance, geodesic_distance
from .metric import params_from_2x2
from .states import Ray, same_dimension
from .verify import SWEEP_HEADER, metric_sweep, quick_residuals, run_battery, run_random_suite


@dataclass
class RunConfig:
    hbar: float = 1.0
    energy: float = 1.0
    steps: int | None = None
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)

    def scale(self) -> EnergyScale:
        return EnergyScale(self.energy, self.hbar)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Built-in defaults < environment tolerance profile < config file < explicit flags."""
    file_cfg = {}
    if args.config:
        file_cfg = formats.read_json(args.config)
        if not isinstance(file_cfg, dict):
            raise SchemaError("config file must hold a JSON object")
    try:
        tol = profile_from_env()
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    tol_over = dict(file_cfg.get("tolerances", {}))
    for item in args.tol or []:
        name, _, value = item.partition("=")
        tol_over[name] = value
    try:
        tol = with_overrides(tol, **tol_over)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad tolerance override: {exc}") from exc

    def pick(name, default):
        flag = getattr(args, name, None)
        return flag if flag is not None else file_cfg.get(name, default)

    cfg = RunConfig(hbar=float(pick("hbar", 1.0)), energy=float(pick("energy", 1.0)),
                    steps=pick("steps", None), seed=int(pick("seed", 0)), tolerances=tol)
    if not (cfg.hbar > 0 and cfg.energy > 0):
        raise SchemaError("hbar and energy must be positive")
    if cfg.steps is not None:
        cfg.steps = int(cfg.steps)
        if cfg.steps < 2:
            raise SchemaError("steps must be at least 2")
    return cfg


def emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_pair(args):
    psi_i = formats.load_state(args.state_i)
    psi_f = formats.load_state(args.state_f)
    same_dimension(psi_i, psi_f)
    metric = formats.load_metric(args.metric) if args.metric else None
    return psi_i, psi_f, metric


def cmd_distance(args, cfg: RunConfig) -> int:
    psi_i, psi_f, metric = _load_pair(args)
    s = geodesic_distance(metric, psi_i, psi_f)
    out = {"s": s, "cos_s": cos_distance(metric, psi_i, psi_f)}
    if metric is not None and metric.dim == 2:
        out["metric_params"] = params_from_2x2(metric).as_dict()
    emit(formats.dumps(out) + "\n", args.output)
    return 0


def cmd_construct(args, cfg: RunConfig) -> int:
    psi_i, psi_f, metric = _load_pair(args)
    result = construct_spectral(metric, psi_i, psi_f, cfg.scale())
    report = quick_residuals(metric, psi_i, psi_f, result, cfg.tolerances)
    emit(formats.dumps(formats.result_to_json(result, report.as_dict())) + "\n", args.output)
    return 0 if report.passed else 5


def cmd_evolve(args, cfg: RunConfig) -> int:
    raw = formats.read_json(args.hamiltonian)
    H = formats.parse_hamiltonian(raw)
    psi_i = formats.load_state(args.state_i)
    same_dimension(H[0], psi_i)
    metric = formats.load_metric(args.metric) if args.metric else None
    t_final = args.t_final
    if t_final is None and isinstance(raw, dict) and "tau_min" in raw:
        t_final = float(raw["tau_min"])
    if t_final is None:
        raise SchemaError("--t-final is required unless the Hamiltonian file carries tau_min")
    if not (t_final > 0 and math.isfinite(t_final)):
        raise SchemaError("--t-final must be positive")
    target = None
    if args.target:
        phi = formats.load_state(args.target)
        same_dimension(phi, psi_i)
        target = Ray(phi)
    traj = sample_trajectory(metric, H, psi_i, t_final, cfg.steps or 1000, cfg.hbar, target)
    emit(formats.trajectory_to_csv(traj), args.output)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    psi_i, psi_f, metric = _load_pair(args)
    H = formats.load_hamiltonian(args.hamiltonian) if args.hamiltonian else None
    result, report = run_battery(metric, psi_i, psi_f, cfg.scale(), cfg.steps or 10_000,
                                 cfg.tolerances, hamiltonian=H)
    out = {"result": formats.result_to_json(result), **report.as_dict()}
    if args.random_cases:
        suite = run_random_suite(cfg.seed, args.random_cases, dim=len(psi_i),
                                 tol=cfg.tolerances)
        out["random_suite"] = suite.as_dict()
        report.checks.extend(suite.checks)
        out["passed"] = report.passed
        first = report.first_failure
        out["first_failure"] = first.name if first else None
    emit(formats.dumps(out) + "\n", args.output)
    first = report.first_failure
    if first is not None:
        print(f"verification failed: {first.name} ({first.value} vs {first.tolerance}) {first.detail}",
              file=sys.stderr)
        return 5
    return 0


def _parse_complex_flag(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise SchemaError(f"cannot parse complex value {text!r}") from exc
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise SchemaError(f"complex value must be 're' or 're,im', got {text!r}")


def parse_c_range(text: str, log: bool = False) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise SchemaError(f"--c-range must be lo:hi:n, got {text!r}") from exc
    if lo <= 0 or hi <= 0:
        raise SchemaError("c values must be positive")
    if n < 1:
        raise SchemaError("--c-range needs n >= 1")
    if n == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)


def cmd_sweep(args, cfg: RunConfig) -> int:
    if args.c_values:
        cs = np.array(args.c_values, dtype=float)
        if np.any(cs <= 0):
            raise SchemaError("c values must be positive")
    elif args.c_range:
        cs = parse_c_range(args.c_range, args.log)
    else:
        raise SchemaError("give --c-range lo:hi:n or --c-values")
    zeta = _parse_complex_flag(args.zeta)
    b = _parse_complex_flag(args.b)
    rows = metric_sweep(zeta, args.a, b, cs, cfg.scale(), cfg.steps or 1000)
    emit(formats.rows_to_csv(SWEEP_HEADER, rows), args.output)
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; explicit flags win over it")
    common.add_argument("--hbar", type=float)
    common.add_argument("--energy", type=float, help="energy scale E (eigenvalues +-E)")
    common.add_argument("--steps", type=int)
    common.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help="tolerance override, e.g. arrival=1e-9 (repeatable)")
    common.add_argument("-o", "--output", help="write here instead of stdout")

    p = argparse.ArgumentParser(prog="optspeed",
                                description="Optimal-speed Hamiltonians between quantum states.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("distance", parents=[common], help="geodesic distance between two rays")
    d.add_argument("state_i")
    d.add_argument("state_f")
    d.add_argument("--metric")
    d.set_defaults(func=cmd_distance)

    c = sub.add_parser("construct", parents=[common], help="optimal Hamiltonian and minimum travel time")
    c.add_argument("state_i")
    c.add_argument("state_f")
    c.add_argument("--metric")
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("evolve", parents=[common], help="sample a trajectory to CSV")
    e.add_argument("hamiltonian", help="matrix JSON, or construct output")
    e.add_argument("state_i")
    e.add_argument("--t-final", type=float)
    e.add_argument("--metric")
    e.add_argument("--target")
    e.set_defaults(func=cmd_evolve)

    v = sub.add_parser("verify", parents=[common], help="run the residual battery")
    v.add_argument("state_i")
    v.add_argument("state_f")
    v.add_argument("--metric")
    v.add_argument("--hamiltonian", help="check this Hamiltonian instead of the constructed one")
    v.add_argument("--seed", type=int)
    v.add_argument("--random-cases", type=int, default=0,
                   help="also run this many seeded random cases")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="travel time against the metric entry c")
    s.add_argument("--zeta", default="1", help="psi_F = (zeta, 1); 're' or 're,im'")
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--b", default="0", help="'re' or 're,im'")
    s.add_argument("--c-range", help="lo:hi:n")
    s.add_argument("--log", action="store_true", help="geometric spacing for --c-range")
    s.add_argument("--c-values", type=float, nargs="+")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except OptSpeedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
