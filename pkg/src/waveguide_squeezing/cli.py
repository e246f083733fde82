"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 some sweep points failed
(unstable, tolerance not met); the flagged rows are still written.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .config import load_config, physical_overrides
from .errors import ParameterError, SimulationError
from .noise_spectra import baths_from_params
from .params import derive_params, experimental_params
from .steady_state import solve_steady_state
from .sweep import (
    AXES,
    QUANTITIES,
    SweepSpec,
    find_minimum,
    rows_to_csv,
    rows_to_json,
    run_sweep,
)
from .variance import QuadratureConfig, momentum_variance, position_variance

EXIT_OK, EXIT_INVALID, EXIT_POINT_FAILURES = 0, 1, 2

FIGURE1_TEMPERATURES_MK = (1.0, 10.0, 50.0, 100.0)
FIGURE2_TEMPERATURES_MK = (1.0, 20.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common_flags(suppress: bool = False) -> argparse.ArgumentParser:
    # the subcommand copy uses SUPPRESS so it only overrides values actually given
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=dflt(None),
                        help="key = value file with [physical], [quadrature], [sweep]")
    common.add_argument("--format", choices=("csv", "json"), default=dflt("csv"))
    common.add_argument("--out", type=Path, default=dflt(None), help="output file (directory for figure1/figure2)")
    common.add_argument("--cutoff", type=float, default=dflt(None), help="omega-integral cutoff in units of omega_m")
    common.add_argument("--rel-tol", type=float, default=dflt(None), help="relative quadrature tolerance")
    common.add_argument("--threads", type=int, default=dflt(1), help="worker processes for sweeps")
    common.add_argument("--set", action="append", default=dflt([]), metavar="KEY=VALUE",
                        help="override a [physical] key, e.g. temperature_mk=20")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags(suppress=True)
    parser = _Parser(prog="waveguide-squeezing", description=__doc__.splitlines()[0],
                     parents=[_common_flags()])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("steady", parents=[common], help="steady state for one configuration")

    p_var = sub.add_parser("variance", parents=[common], help="variance breakdown for one configuration")
    p_var.add_argument("--position", action="store_true", help="position instead of momentum")

    for name, helptext in (("sweep", "1-D parameter sweep"), ("minimize", "locate the variance minimum")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--axis", choices=sorted(AXES))
        p.add_argument("--start", type=float)
        p.add_argument("--stop", type=float)
        p.add_argument("--points", type=int)
        if name == "sweep":
            p.add_argument("--quantity", choices=QUANTITIES)

    p1 = sub.add_parser("figure1", parents=[common], help="variance vs detuning for T = 1, 10, 50, 100 mK")
    p1.add_argument("--points", type=int, default=400)
    p2 = sub.add_parser("figure2", parents=[common], help="variance vs pump power for T = 1, 20 mK")
    p2.add_argument("--points", type=int, default=301)
    return parser


def _setup(args):
    if args.config is not None:
        try:
            params, cfg, sweep = load_config(args.config)
        except OSError as exc:
            raise ParameterError(f"cannot read config {args.config}: {exc}") from exc
    else:
        params, cfg, sweep = experimental_params(), QuadratureConfig(), {}
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ParameterError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    if overrides:
        params = params.replace(**physical_overrides(overrides))
    quad = asdict(cfg)
    if args.cutoff is not None:
        quad["cutoff_factor"] = args.cutoff
    if args.rel_tol is not None:
        quad["rel_tol"] = args.rel_tol
    if args.threads < 1:
        raise ParameterError("--threads must be >= 1")
    return params, QuadratureConfig(**quad), sweep


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _record_text(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=1)
    lines = ["key,value"]
    for key, value in record.items():
        lines.append(f"{key},{format(value, '.17g') if isinstance(value, float) else value}")
    return "\n".join(lines)


def _sweep_spec(args, params, sweep, quantity=None) -> SweepSpec:
    merged = dict(sweep)
    for key in ("axis", "start", "stop", "points", "quantity"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if quantity is not None:
        merged["quantity"] = quantity
    missing = [k for k in ("axis", "start", "stop", "points") if k not in merged]
    if missing:
        raise ParameterError(f"sweep needs {', '.join(missing)} (flags or [sweep] section)")
    return SweepSpec(
        axis=merged["axis"], start=merged["start"], stop=merged["stop"], points=merged["points"],
        fixed=params, quantity=merged.get("quantity", "momentum_variance"),
    )


def _rows_text(rows, fmt):
    return rows_to_json(rows) if fmt == "json" else rows_to_csv(rows)


def _cmd_steady(args, params, cfg, sweep):
    d = derive_params(params)
    ss = solve_steady_state(d, params.detuning)
    record = {
        "q_s": ss.q_s,
        "p_s": ss.p_s,
        "c_s_real": ss.c_s.real,
        "c_s_imag": ss.c_s.imag,
        "abs_c_s": abs(ss.c_s),
        "multistable": ss.multistable,
        "linearization_valid": ss.linearization_valid,
        "all_real_roots": list(ss.all_real_roots),
    }
    if args.format == "csv":
        record["all_real_roots"] = " ".join(format(r, ".17g") for r in ss.all_real_roots)
    _emit(_record_text(record, args.format), args.out)
    return EXIT_OK


def _cmd_variance(args, params, cfg, sweep):
    d = derive_params(params)
    ss = solve_steady_state(d, params.detuning)
    func = position_variance if args.position else momentum_variance
    v = func(d, ss, params.detuning, baths_from_params(d), cfg)
    _emit(_record_text(asdict(v), args.format), args.out)
    return EXIT_OK if v.tolerance_met else EXIT_POINT_FAILURES


def _cmd_sweep(args, params, cfg, sweep):
    spec = _sweep_spec(args, params, sweep)
    rows = run_sweep(spec, cfg, workers=args.threads)
    _emit(_rows_text(rows, args.format), args.out)
    return EXIT_POINT_FAILURES if any(r.failed for r in rows) else EXIT_OK


def _cmd_minimize(args, params, cfg, sweep):
    spec = _sweep_spec(args, params, sweep, quantity="momentum_variance")
    x, v = find_minimum(spec, cfg, workers=args.threads)
    record = {"axis": spec.axis, "axis_value": x, **asdict(v)}
    _emit(_record_text(record, args.format), args.out)
    return EXIT_OK


def _write_curves(args, prefix, runs):
    out_dir = args.out or Path("figures")
    out_dir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    suffix = "json" if args.format == "json" else "csv"
    for label, spec, cfg in runs:
        rows = run_sweep(spec, cfg, workers=args.threads)
        path = out_dir / f"{prefix}_{label}.{suffix}"
        path.write_text(_rows_text(rows, args.format), encoding="utf-8")
        print(path)
        if any(r.failed for r in rows):
            status = EXIT_POINT_FAILURES
    return status


def _mk_label(t_mk: float) -> str:
    return f"T{t_mk:g}mK"


def _cmd_figure1(args, params, cfg, sweep):
    # Delta in [0, 2 omega_m], pump 20 uW, r = 1
    base = params.replace(pump_power=20e-6, squeeze_r=1.0)
    stop = 2.0 * base.mech_freq / AXES["detuning"][1]
    runs = [
        (_mk_label(t), SweepSpec("detuning", 0.0, stop, args.points, base.replace(temperature=t * 1e-3)), cfg)
        for t in FIGURE1_TEMPERATURES_MK
    ]
    return _write_curves(args, "figure1", runs)


def _cmd_figure2(args, params, cfg, sweep):
    # pump in [0, 300] uW at Delta = omega_m, r = 1
    base = params.replace(detuning=params.mech_freq, squeeze_r=1.0)
    runs = [
        (_mk_label(t), SweepSpec("power", 0.0, 300.0, args.points, base.replace(temperature=t * 1e-3)), cfg)
        for t in FIGURE2_TEMPERATURES_MK
    ]
    return _write_curves(args, "figure2", runs)


COMMANDS = {
    "steady": _cmd_steady,
    "variance": _cmd_variance,
    "sweep": _cmd_sweep,
    "minimize": _cmd_minimize,
    "figure1": _cmd_figure1,
    "figure2": _cmd_figure2,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params, cfg, sweep = _setup(args)
        return COMMANDS[args.command](args, params, cfg, sweep)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POINT_FAILURES


if __name__ == "__main__":
    sys.exit(main())
