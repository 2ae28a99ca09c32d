"""Command-line interface: ``ekzft <subcommand> [flags]``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric/domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import io
from .errors import DataError, DomainError, EKZFTError, SeriesTooShortError
from .filtering import apply_direct, apply_iterated, make_spec, reconstruct_band
from .simulation import DEFAULT_SEED, ExperimentConfig, attenuation_audit, run_band_experiment
from .spectral import (
    default_shift_grid,
    half_power_shift,
    periodogram,
    transfer_closed,
    transfer_exact,
)
from .window import coefficient_table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DOMAIN = 4


def parse_window(text: str) -> float:
    """Accept decimal literals and the token ``pi``."""
    token = text.strip().lower()
    if token in ("pi", "π"):
        return math.pi
    try:
        value = float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window length {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"invalid window length {text!r}")
    return value


def _emit(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        io.atomic_write(args.output, text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _spec(args):
    return make_spec(args.window, args.iterations, getattr(args, "frequency", 0.0))


def cmd_coeffs(args) -> int:
    table = coefficient_table(args.window, args.iterations)
    if args.format == "json":
        text = _dumps(table.to_dict())
    else:
        text = io.format_csv(["s", "weight"], zip(table.steps, table.weights))
    _emit(args, text)
    return EXIT_OK


def cmd_filter(args) -> int:
    spec = _spec(args)
    t, x = io.read_series_csv(args.input)
    apply = apply_iterated if args.form == "iterated" else apply_direct
    z = apply(x, spec, edges=args.edges)
    times = t[0] + z.times
    if args.reconstruct:
        r = reconstruct_band(z, spec.nu)
        rows = (
            (ti, "" if m else io.fmt(v), int(m))
            for ti, v, m in zip(times, r.values, r.missing)
        )
        text = io.format_csv(["t", "value", "missing"], rows)
    else:
        rows = (
            (ti, "" if m else io.fmt(v.real), "" if m else io.fmt(v.imag), int(m))
            for ti, v, m in zip(times, z.values.astype(complex), z.missing)
        )
        text = io.format_csv(["t", "re", "im", "missing"], rows)
    _emit(args, text)
    return EXIT_OK


def cmd_transfer(args) -> int:
    spec = _spec(args)
    grid = default_shift_grid(args.grid)
    curves = []
    if args.both or args.kind == "exact":
        curves.append(transfer_exact(spec, grid))
    if args.both or args.kind == "closed":
        curves.append(transfer_closed(spec, grid))
    if args.format == "json":
        doc = {
            "curves": [
                {
                    **c.metadata(),
                    "shifts": c.shifts.tolist(),
                    "gains": c.gains.tolist(),
                    **({"log_gains": c.log_gains.tolist()} if args.log else {}),
                }
                for c in curves
            ]
        }
        if len(curves) == 2:
            doc["max_discrepancy"] = float(np.max(np.abs(curves[0].gains - curves[1].gains)))
        text = _dumps(doc)
    else:
        header = ["shift"]
        cols = [grid]
        for c in curves:
            name = "exact" if c.kind == "exact" else "closed"
            prefix = f"{name}_" if len(curves) == 2 else ""
            header.append(f"{prefix}gain")
            cols.append(c.gains)
            if args.log:
                header.append(f"{prefix}log_gain")
                cols.append(c.log_gains)
        text = io.format_csv(header, zip(*cols))
    _emit(args, text)
    return EXIT_OK


def cmd_cutoff(args) -> int:
    spec = _spec(args)
    value = half_power_shift(spec)
    if args.format == "json":
        text = _dumps({"spec": spec.to_dict(), "half_power_shift": value})
    else:
        text = io.fmt(value) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_periodogram(args) -> int:
    _, x = io.read_series_csv(args.input)
    curve = periodogram(x)
    if args.format == "json":
        text = _dumps(
            {"n": curve.n, "frequencies": curve.frequencies.tolist(), "power": curve.power.tolist()}
        )
    else:
        text = io.format_csv(["frequency", "power"], zip(curve.frequencies, curve.power))
    _emit(args, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = ExperimentConfig(
        n=args.length,
        sigma=args.sigma,
        seed=args.seed,
        replicates=args.replicates,
        spec=_spec(args),
        comparison_windows=tuple(args.neighbors),
    )
    report = run_band_experiment(cfg)
    if args.output_dir:
        report.write(args.output_dir)
    _emit(args, _dumps(report.to_dict()))
    return EXIT_OK


def cmd_audit(args) -> int:
    spec = _spec(args)
    rows = attenuation_audit(spec, args.neighbors)
    if args.format == "json":
        text = _dumps({"spec": spec.to_dict(), "rows": rows})
    else:
        text = io.format_csv(
            ["label", "m_r", "k", "nu", "shift", "gain", "half_power_shift", "gain_at_target"],
            (
                (r["label"], r["m_r"], r["k"], r["nu"], s, g, r["half_power_shift"], r["gain_at_target"])
                for r in rows
                for s, g in zip(r["shifts"], r["gains"])
            ),
        )
    _emit(args, text)
    return EXIT_OK


def _int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ekzft", description="KZFT / EKZFT band-pass filtering toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def filter_args(p, frequency=True, defaults=None):
        defaults = defaults or {}
        p.add_argument("--window", "-m", type=parse_window, required="window" not in defaults,
                       default=defaults.get("window"),
                       help="window length m_r > 1 (decimal or 'pi')")
        p.add_argument("--iterations", "-k", type=_int,
                       default=defaults.get("iterations", 1))
        if frequency:
            p.add_argument("--frequency", "-v", type=float, default=defaults.get("frequency", 0.0),
                           help="center frequency in [0, 0.5)")

    def out_args(p, fmt=True):
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("coeffs", help="emit a coefficient table")
    filter_args(p, frequency=False)
    out_args(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("filter", help="filter a CSV series")
    filter_args(p)
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--form", choices=("direct", "iterated"), default="direct")
    p.add_argument("--edges", choices=("missing", "drop"), default="missing")
    p.add_argument("--reconstruct", action="store_true",
                   help="write the real band component instead of complex output")
    out_args(p, fmt=False)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("transfer", help="emit energy transfer curves")
    filter_args(p)
    p.add_argument("--grid", type=_int, default=2001)
    p.add_argument("--kind", choices=("exact", "closed"), default="exact")
    p.add_argument("--both", action="store_true", help="emit exact and closed-form curves")
    p.add_argument("--log", action="store_true", help="add natural-log gain columns")
    out_args(p)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("cutoff", help="half-power frequency shift")
    filter_args(p)
    out_args(p)
    p.set_defaults(func=cmd_cutoff)

    p = sub.add_parser("periodogram", help="periodogram of a CSV series")
    p.add_argument("--input", "-i", required=True)
    out_args(p)
    p.set_defaults(func=cmd_periodogram)

    p = sub.add_parser("simulate", help="white-noise band-pass experiment")
    filter_args(p, defaults={"window": 8.0, "iterations": 1, "frequency": 0.25})
    p.add_argument("--replicates", "-R", type=_int, default=200)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--length", "-n", type=_int, default=1000)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--neighbors", type=_int, nargs="*", default=[7, 9])
    p.add_argument("--output-dir", default=None, help="directory for report JSON and CSV curves")
    out_args(p, fmt=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("audit", help="compare a filter with neighbouring odd windows")
    filter_args(p)
    p.add_argument("--neighbors", type=_int, nargs="*", default=[])
    out_args(p)
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (SeriesTooShortError, DataError) as exc:
        print(f"ekzft: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DomainError, EKZFTError) as exc:
        print(f"ekzft: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"ekzft: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
