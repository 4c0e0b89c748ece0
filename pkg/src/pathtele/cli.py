"""Command-line front end: sweeps, figure datasets, and the verify suite.

Every command writes delimited text (CSV or JSON) whose bytes depend only
on the flags and seed, never on the clock. With ``--output`` the data
commands also render a PNG next to the data file unless ``--no-plot``.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

import argparse
import json
import sys
from math import pi
from pathlib import Path

import numpy as np

from . import figures
from .states import ControlSpec, PureQubit, Werner
from .protocol import ProtocolConfig
from .analysis import (
    SweepPoint,
    avg_fidelity_werner,
    classify_advantage,
    coherence_advantage_surface,
    control_for_x,
    grid_axis,
    simulated_avg_fidelity,
    xy_sweep,
)
from .verify import (
    CRITERION_NAMES,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    SUITE_VERSION,
    run_all,
)


# ---------------------------------------------------------------------------
# deterministic serialization

def format_value(value) -> str:
    """One CSV cell; floats always carry 17 significant digits."""
    if isinstance(value, (list, tuple)):
        return ";".join(format_value(v) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_fragment(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {_json_fragment(v, indent + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{inner}{_json_fragment(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if f != f or f in (float("inf"), float("-inf")):
            return "null"
        return format(f, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(config: dict, rows: list) -> str:
    document = {"config": config, "rows": rows, "suite_version": SUITE_VERSION}
    return _json_fragment(document, 0) + "\n"


def render_csv(config: dict, columns: list, rows: list) -> str:
    echo = " ".join(f"{k}={format_value(v)}" for k, v in config.items())
    lines = [f"# {echo} suite_version={SUITE_VERSION}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def emit(args, config: dict, columns: list, rows: list, renderer=None) -> int:
    fmt = getattr(args, "format", "json")
    text = render_csv(config, columns, rows) if fmt == "csv" else render_json(config, rows)
    if args.output:
        path = Path(args.output)
        path.write_text(text, encoding="utf-8")
        if renderer is not None and not args.no_plot:
            renderer(rows, path.with_suffix(".png"))
    else:
        sys.stdout.write(text)
    return 0


def _branches(choice: str):
    return ("plus", "minus") if choice == "both" else (choice,)


# ---------------------------------------------------------------------------
# commands

def cmd_sweep_xy(args) -> int:
    channel = {"K": "path-K", "L": "path-L"}[args.channel]
    branches = _branches(args.branch)
    rows = []
    for r in xy_sweep(channel, args.resolution):
        row = {"x": r.x, "y": r.y}
        for b in branches:
            row[f"closed_{b}"] = getattr(r, f"closed_{b}")
        for b in branches:
            row[f"sim_{b}"] = getattr(r, f"sim_{b}")
        row["verdict"] = r.verdict
        for b in branches:
            row[f"dev_{b}"] = abs(row[f"sim_{b}"] - row[f"closed_{b}"])
        rows.append(row)
    config = {
        "command": "sweep-xy",
        "channel": args.channel,
        "resolution": args.resolution,
        "branch": args.branch,
    }
    columns = list(rows[0].keys())
    renderer = lambda rs, p: figures.render_sweep_xy(rs, p, args.channel, branches)
    return emit(args, config, columns, rows, renderer)


def cmd_regions(args) -> int:
    xs = grid_axis(-1.0, 1.0, args.resolution)
    ys = grid_axis(0.0, 1.0, args.resolution)
    rows = []
    for x in xs:
        for y in ys:
            best = classify_advantage(SweepPoint(x, y))
            protocol = "none" if best.verdict == "none" else best.verdict.split("-")[0]
            rows.append(
                {"x": x, "y": y, "protocol": protocol, "branch": best.branch,
                 "margin": best.margin}
            )
    config = {"command": "regions", "resolution": args.resolution}
    columns = ["x", "y", "protocol", "branch", "margin"]
    return emit(args, config, columns, rows, figures.render_regions)


def cmd_werner(args) -> int:
    branches = _branches(args.branch)
    ps = sorted(set(grid_axis(0.0, 1.0, args.resolution)) | {0.2, 1.0 / 3.0})

    def marker(p: float) -> str:
        if abs(p - 0.2) < 1e-12:
            return "advantage-threshold"
        if abs(p - 1.0 / 3.0) < 1e-12:
            return "separability-limit"
        return ""

    rows = []
    for p in ps:
        for x in args.x_values:
            cfg = ProtocolConfig(
                shared=Werner(p),
                input=PureQubit(1.0),
                control=control_for_x(x),
                channel="path-K",
            )
            row = {"p": p, "x": x}
            for b in branches:
                row[f"closed_{b}"] = avg_fidelity_werner(p, x, b)
            for b in branches:
                row[f"sim_{b}"] = simulated_avg_fidelity(cfg, b)
            row["marker"] = marker(p)
            for b in branches:
                row[f"dev_{b}"] = abs(row[f"sim_{b}"] - row[f"closed_{b}"])
            rows.append(row)
    config = {
        "command": "werner",
        "resolution": args.resolution,
        "x_values": list(args.x_values),
        "branch": args.branch,
    }
    columns = list(rows[0].keys())
    renderer = lambda rs, p: figures.render_werner(rs, p, branches)
    return emit(args, config, columns, rows, renderer)


def cmd_coherence(args) -> int:
    coherences = grid_axis(0.0, 1.0, args.resolution)
    if args.phi_values is not None:
        phis = list(args.phi_values)
    elif args.unitary == "hadamard":
        phis = [i * pi / 16.0 for i in range(33)]
    else:
        phis = [0.0]
    rows = []
    for point in coherence_advantage_surface(coherences, phis, unitary=args.unitary):
        rows.append(
            {
                "coherence": point.coherence,
                "phi_c": point.phi_c,
                "f_max_closed": point.f_max_closed,
                "f_max_sim": point.f_max_sim,
                "f_adv_closed": point.f_adv_closed,
                "f_adv_sim": point.f_adv_sim,
                "dev": abs(point.f_max_sim - point.f_max_closed),
            }
        )
    config = {
        "command": "coherence",
        "resolution": args.resolution,
        "unitary": args.unitary,
        "phi_values": phis,
    }
    columns = list(rows[0].keys())
    renderer = lambda rs, p: figures.render_coherence(rs, p, args.unitary)
    return emit(args, config, columns, rows, renderer)


def cmd_verify(args) -> int:
    overrides = {}
    for item in args.tolerance or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--tolerance expects NAME=VALUE, got {item!r}")
        overrides[name] = float(value)
    report = run_all(
        seed=args.seed, samples=args.samples, trials=args.trials, overrides=overrides
    )
    for result in report.results:
        status = "PASS" if result.passed else "FAIL"
        binding = max(
            result.checks,
            key=lambda c: c.measured / c.tolerance if c.tolerance > 0 else float("inf"),
        )
        print(
            f"{status} {result.name}: {binding.label} = "
            f"{format_value(binding.measured)} (tolerance {format_value(binding.tolerance)})"
        )
    total = len(report.results)
    passed = sum(r.passed for r in report.results)
    print(f"{passed}/{total} criteria passed")
    if not report.passed:
        print(f"FAILED: {', '.join(report.failing())}")

    if args.output:
        rows = [
            {
                "name": r.name,
                "description": r.description,
                "passed": r.passed,
                "checks": [
                    {
                        "label": c.label,
                        "measured": c.measured,
                        "tolerance": c.tolerance,
                        "passed": c.passed,
                    }
                    for c in r.checks
                ],
            }
            for r in report.results
        ]
        config = {
            "command": "verify",
            "seed": report.seed,
            "samples": report.samples,
            "trials": report.trials,
            "overrides": {k: overrides[k] for k in sorted(overrides)},
        }
        Path(args.output).write_text(render_json(config, rows), encoding="utf-8")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathtele",
        description="teleportation with superposed channel orderings and paths: "
        "sweeps, figure datasets, verification",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_output(p):
        p.add_argument("--output", help="write data here instead of stdout")
        p.add_argument(
            "--format", choices=("csv", "json"), default="csv", help="data format"
        )
        p.add_argument(
            "--no-plot", action="store_true", help="skip the PNG next to --output"
        )

    p = sub.add_parser("sweep-xy", help="branch averages over the (X, y) grid")
    p.add_argument("--channel", choices=("K", "L"), default="K")
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--branch", choices=("both", "plus", "minus"), default="both")
    add_output(p)
    p.set_defaults(handler=cmd_sweep_xy)

    p = sub.add_parser("regions", help="which protocol wins where, with margins")
    p.add_argument("--resolution", type=float, default=0.05)
    add_output(p)
    p.set_defaults(handler=cmd_regions)

    p = sub.add_parser("werner", help="averages for isotropic-noise resources")
    p.add_argument("--resolution", type=float, default=0.05, help="step in p")
    p.add_argument(
        "--x-values", nargs="+", type=float, default=[-1.0, -0.5, 0.0, 0.5, 1.0],
        dest="x_values",
    )
    p.add_argument("--branch", choices=("both", "plus", "minus"), default="both")
    add_output(p)
    p.set_defaults(handler=cmd_werner)

    p = sub.add_parser("coherence", help="control-coherence advantage surface")
    p.add_argument("--resolution", type=float, default=0.05, help="step in coherence")
    p.add_argument("--unitary", choices=("hadamard", "matched"), default="hadamard")
    p.add_argument(
        "--phi-values", nargs="+", type=float, default=None, dest="phi_values",
        help="control azimuths (default: full turn for hadamard, 0 for matched)",
    )
    add_output(p)
    p.set_defaults(handler=cmd_coherence)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument(
        "--tolerance", action="append", metavar="NAME=VALUE",
        help=f"override a criterion's primary tolerance; names: {', '.join(CRITERION_NAMES)}",
    )
    p.add_argument("--output", help="write the JSON report here")
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
