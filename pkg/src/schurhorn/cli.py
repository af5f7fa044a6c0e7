"""``mj`` command line front end.

Exit codes: 0 success, 1 mathematical negative (not majorized, bound
missed), 2 I/O or validation error, 3 epsilon below the resolution floor.
"""

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .dyadic import dyadic_average
from .exceptions import LevelExhausted, NotMajorized, SchurHornError
from .horn import horn_construct
from .majorization import Mode, check_operator_majorization
from .pipeline import arveson_kadison_probe, reconstruct
from .sampling import InstanceMode, generate_instance
from .tolerances import from_environment
from .tracial import load_operator, save_operator, spectral_scale

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR, EXIT_FLOOR = 0, 1, 2, 3

SWEEP_COLUMNS = ["seed", "N", "mode", "epsilon", "n", "err_a", "err_b", "horn_residual",
                 "achieved", "bound", "wall_time_ms", "status"]
PLOT_COLUMNS = ["seed", "t", "lambda_a", "lambda_b", "En_lambda_a"]
PLOT_POINTS = 64


def fmt(x):
    """12 significant digits, '.' separator, independent of locale."""
    if x is None or x == "":
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    a: str | None = None
    b: str | None = None
    alpha: str | None = None
    beta: str | None = None
    epsilon: float | None = None
    level: int | None = None
    seed: int = 0
    size: int = 1
    dim: int = 64
    mode: str = "pinch"
    format: str = "json"
    emit_u: bool = False
    margins: bool = False
    submajorize: bool = False
    timing: bool = False
    out: str | None = None
    plot_out: str | None = None

    @classmethod
    def from_args(cls, ns):
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        return cls(**fields)


def _parse_csv_floats(text, name):
    try:
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise ValueError(f"--{name} must be comma separated numbers") from None


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ValueError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def cmd_check(cfg, tol):
    _require(cfg, "a", "b")
    a = load_operator(cfg.a, tol)
    b = load_operator(cfg.b, tol)
    mode = Mode.SUBMAJORIZE if cfg.submajorize else Mode.MAJORIZE
    verdict = check_operator_majorization(a, b, mode, tol)
    report = verdict.to_dict(include_margins=cfg.margins)
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        keys = ["holds", "status", "mode", "worst_margin", "trace_gap"]
        writer.writerow(keys)
        writer.writerow([str(report["holds"]).lower(), report["status"], report["mode"],
                         fmt(report["worst_margin"]), fmt(report["trace_gap"])])
        _emit(buf.getvalue(), cfg.out)
    else:
        _emit(json.dumps(report, indent=2) + "\n", cfg.out)
    return EXIT_OK if verdict.holds else EXIT_NEGATIVE


def cmd_scale(cfg, tol):
    _require(cfg, "a")
    scale = spectral_scale(load_operator(cfg.a, tol), tol)
    if cfg.level is not None:
        payload = dyadic_average(scale, cfg.level).to_json()
    else:
        payload = {"n": None, "values": [float(v) for v in scale.values]}
    _emit(json.dumps(payload) + "\n", cfg.out)
    return EXIT_OK


def cmd_horn(cfg, tol):
    _require(cfg, "alpha", "beta")
    alpha = _parse_csv_floats(cfg.alpha, "alpha")
    beta = _parse_csv_floats(cfg.beta, "beta")
    try:
        sol = horn_construct(alpha, beta, tol)
    except NotMajorized as exc:
        print(f"not majorized: worst margin {exc.verdict.worst_margin:.12g}", file=sys.stderr)
        return EXIT_NEGATIVE
    _emit(json.dumps(sol.to_dict()) + "\n", cfg.out)
    return EXIT_OK if sol.residual <= sol.tol else EXIT_NEGATIVE


def cmd_reconstruct(cfg, tol):
    _require(cfg, "a", "b", "epsilon")
    a = load_operator(cfg.a, tol)
    b = load_operator(cfg.b, tol)
    try:
        cert = reconstruct(a, b, cfg.epsilon, level=cfg.level, tol=tol)
    except NotMajorized as exc:
        print(f"not majorized: worst margin {exc.verdict.worst_margin:.12g}, "
              f"trace gap {exc.verdict.trace_gap:.12g}", file=sys.stderr)
        return EXIT_NEGATIVE
    except LevelExhausted as exc:
        print(f"epsilon below resolution floor {exc.floor:.12g}", file=sys.stderr)
        return EXIT_FLOOR
    _emit(json.dumps(cert.to_dict(include_u=cfg.emit_u)) + "\n", cfg.out)
    return EXIT_OK if cert.ok else EXIT_NEGATIVE


def cmd_gen(cfg, tol):
    a, b = generate_instance(cfg.dim, cfg.seed, InstanceMode(cfg.mode))
    if cfg.out:
        save_operator(a, f"{cfg.out}_a.json")
        save_operator(b, f"{cfg.out}_b.json")
    else:
        sys.stdout.write(json.dumps({"a": a.to_json(), "b": b.to_json()}) + "\n")
    return EXIT_OK


def _sweep_row(cfg, seed, tol):
    a, b = generate_instance(cfg.dim, seed, InstanceMode(cfg.mode))
    row = {"seed": seed, "N": cfg.dim, "mode": cfg.mode, "epsilon": cfg.epsilon}
    start = time.perf_counter()
    try:
        cert = reconstruct(a, b, cfg.epsilon, level=cfg.level, tol=tol)
    except SchurHornError as exc:
        row["status"] = type(exc).__name__
        return row, None, (a, b)
    elapsed = (time.perf_counter() - start) * 1e3
    row.update(n=cert.level, err_a=cert.err_a, err_b=cert.err_b, horn_residual=cert.horn_residual,
               achieved=cert.achieved, bound=cert.bound, status="ok" if cert.ok else "bound_missed")
    if cfg.timing:
        row["wall_time_ms"] = elapsed
    return row, cert, (a, b)


def _plot_rows(seed, a, b, cert):
    t = (np.arange(PLOT_POINTS) + 0.5) / PLOT_POINTS
    lam_a = spectral_scale(a)
    lam_b = spectral_scale(b)
    en = dyadic_average(lam_a, cert.level)
    for ti, la, lb, e in zip(t, lam_a(t), lam_b(t), en(t)):
        yield [fmt(seed), fmt(ti), fmt(la), fmt(lb), fmt(e)]


def cmd_sweep(cfg, tol):
    _require(cfg, "epsilon")
    if cfg.size < 1:
        raise ValueError("--size must be at least 1")
    out = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    plot = open(cfg.plot_out, "w", newline="") if cfg.plot_out else None
    failures = 0
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        plot_writer = csv.writer(plot, lineterminator="\n") if plot else None
        if plot_writer:
            plot_writer.writerow(PLOT_COLUMNS)
        for i in range(cfg.size):
            seed = cfg.seed + i
            row, cert, (a, b) = _sweep_row(cfg, seed, tol)
            failures += row["status"] != "ok"
            writer.writerow([fmt(row.get(c, "")) for c in SWEEP_COLUMNS])
            out.flush()
            if plot_writer and cert is not None:
                plot_writer.writerows(_plot_rows(seed, a, b, cert))
                plot.flush()
    finally:
        if cfg.out:
            out.close()
        if plot:
            plot.close()
    return EXIT_OK if failures == 0 else EXIT_NEGATIVE


def cmd_probe(cfg, tol):
    _require(cfg, "a", "b")
    a = load_operator(cfg.a, tol)
    b = load_operator(cfg.b, tol)
    try:
        report = arveson_kadison_probe(b, a, trials=cfg.size, epsilon=cfg.epsilon or 0.1, seed=cfg.seed, tol=tol)
    except NotMajorized as exc:
        print(f"not majorized: worst margin {exc.verdict.worst_margin:.12g}", file=sys.stderr)
        return EXIT_NEGATIVE
    _emit(json.dumps(report) + "\n", cfg.out)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "scale": cmd_scale,
    "horn": cmd_horn,
    "reconstruct": cmd_reconstruct,
    "gen": cmd_gen,
    "sweep": cmd_sweep,
    "probe": cmd_probe,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="mj", description="Majorization and Schur-Horn constructions at matrix scale.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--a", help="operator JSON file for a")
        p.add_argument("--b", help="operator JSON file for b")
        p.add_argument("--alpha", help="comma separated target diagonal")
        p.add_argument("--beta", help="comma separated spectrum")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--level", type=int)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--size", type=int, default=1, help="ensemble size (probe: trials)")
        p.add_argument("--dim", type=int, default=64)
        p.add_argument("--mode", choices=[m.value for m in InstanceMode], default="pinch")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--emit-u", action="store_true")
        p.add_argument("--margins", action="store_true", help="include all margins in check output")
        p.add_argument("--submajorize", action="store_true", help="check submajorization instead")
        p.add_argument("--timing", action="store_true", help="fill wall_time_ms in sweep output")
        p.add_argument("--out")
        p.add_argument("--plot-out", help="sweep: CSV of spectral-scale sample points")
    if "probe" in sub.choices:
        sub.choices["probe"].set_defaults(size=200)
    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig.from_args(ns)
    try:
        tol = from_environment()
        return COMMANDS[cfg.command](cfg, tol)
    except (SchurHornError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"mj {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
