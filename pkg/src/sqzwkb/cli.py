"""Command-line interface: ``sqzwkb dist | compare | sweep``.

Exit codes: 0 success, 1 computation failure, 2 usage error.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .compare import compare
from .compute import CLI_NAMES, compute_distribution
from .errors import SqzWkbError
from .output import (MANIFEST_SCHEMA, distribution_csv, distribution_json, report_json)

OUTPUT_DIR_ENV = "SQZWKB_OUTPUT_DIR"
FIGURE_PRESET = {"n": [5], "r": [2.0], "methods": list(CLI_NAMES)}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _stem(n, r, method):
    return f"n{n}_r{r:g}_{method}"


def _render(dist, fmt, path, timestamp):
    if fmt == "svg":
        from .plotting import plot_distribution
        plot_distribution(dist, path)
        return
    text = distribution_csv(dist, timestamp) if fmt == "csv" else distribution_json(dist, timestamp)
    Path(path).write_text(text)


def _default_dir():
    d = os.environ.get(OUTPUT_DIR_ENV)
    return Path(d) if d else None


def cmd_dist(args):
    dist = compute_distribution(args.method, args.n, args.r, args.m_max)
    out = args.out
    if out is None:
        base = _default_dir()
        if base is not None:
            base.mkdir(parents=True, exist_ok=True)
            out = base / f"{_stem(args.n, args.r, args.method)}.{args.format}"
        elif args.format == "svg":
            out = Path(f"{_stem(args.n, args.r, args.method)}.svg")
    if out is None:
        text = distribution_csv(dist, not args.no_timestamp) if args.format == "csv" \
            else distribution_json(dist, not args.no_timestamp)
        sys.stdout.write(text)
    else:
        _render(dist, args.format, out, not args.no_timestamp)
    return EXIT_OK


def cmd_compare(args):
    a = compute_distribution(args.method_a, args.n, args.r, args.m_max)
    b = compute_distribution(args.method_b, args.n, args.r, args.m_max)
    report = compare(a, b)
    text = report_json(report, not args.no_timestamp)
    out = args.out
    if out is None and _default_dir() is not None:
        _default_dir().mkdir(parents=True, exist_ok=True)
        out = _default_dir() / f"compare_n{args.n}_r{args.r:g}_{args.method_a}_vs_{args.method_b}.json"
    if out is None:
        sys.stdout.write(text)
        figure = args.figure
    else:
        out = Path(out)
        out.write_text(text)
        figure = args.figure or out.with_suffix(".svg")
    if figure is not None:
        from .plotting import plot_overlay
        plot_overlay(a, b, figure)
    return EXIT_OK


def _sweep_task(task):
    n, r, method, m_max, out_dir, fmt, timestamp, figures = task
    entry = {"n": n, "r": r, "method": method}
    try:
        dist = compute_distribution(method, n, r, m_max)
        path = Path(out_dir) / f"{_stem(n, r, method)}.{fmt}"
        _render(dist, fmt, path, timestamp)
        entry.update(status="ok", file=path.name, m_max=dist.m_max)
        if figures and fmt != "svg":
            fig = path.with_suffix(".svg")
            _render(dist, "svg", fig, timestamp)
            entry["figure"] = fig.name
    except (SqzWkbError, ValueError, ArithmeticError) as exc:
        entry.update(status="error", error=type(exc).__name__, message=str(exc))
    return entry


def cmd_sweep(args):
    ns, rs, methods, figures = args.n, args.r, args.method, args.figures
    if args.preset == "figures":
        ns, rs, methods, figures = FIGURE_PRESET["n"], FIGURE_PRESET["r"], FIGURE_PRESET["methods"], True
    if not ns or not rs or not methods:
        raise SystemExit(EXIT_USAGE)
    out_dir = Path(args.out or _default_dir() or "sweep_output")
    out_dir.mkdir(parents=True, exist_ok=True)
    timestamp = not args.no_timestamp
    tasks = [(n, r, meth, args.m_max, str(out_dir), args.format, timestamp, figures)
             for n in ns for r in rs for meth in methods]
    jobs = args.jobs or os.cpu_count() or 1
    if jobs == 1 or len(tasks) == 1:
        entries = [_sweep_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            entries = list(pool.map(_sweep_task, tasks))

    if args.preset == "figures":
        from .plotting import plot_overlay
        for n in ns:
            for r in rs:
                exact = compute_distribution("exact", n, r, args.m_max)
                for other in ("wkb", "cohen"):
                    dist = compute_distribution(other, n, r, args.m_max)
                    stem = f"compare_n{n}_r{r:g}_exact_vs_{other}"
                    (out_dir / f"{stem}.json").write_text(report_json(compare(exact, dist), timestamp))
                    plot_overlay(exact, dist, out_dir / f"{stem}.svg")

    failures = sum(e["status"] != "ok" for e in entries)
    manifest = {"schema": MANIFEST_SCHEMA, "entries": entries, "failures": failures}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return EXIT_FAIL if failures else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sqzwkb",
        description="Photon-number distributions of squeezed number states.")
    sub = parser.add_subparsers(dest="command", required=True)
    methods = list(CLI_NAMES)

    def common(p, multi=False):
        nargs = "+" if multi else None
        p.add_argument("--n", type=int, nargs=nargs, required=not multi, help="Fock number of the squeezed state")
        p.add_argument("--r", type=float, nargs=nargs, required=not multi, help="squeezing parameter")
        p.add_argument("--m-max", type=int, default=None, help="largest photon number (default: classical support + 50)")
        p.add_argument("--no-timestamp", action="store_true", help="omit generation timestamps")

    p = sub.add_parser("dist", help="compute one distribution")
    common(p)
    p.add_argument("--method", choices=methods, default="exact")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("compare", help="compare two methods")
    common(p)
    p.add_argument("--method-a", choices=methods, default="exact")
    p.add_argument("--method-b", choices=methods, default="cohen")
    p.add_argument("--out", type=Path, default=None, help="report JSON path (overlay SVG written next to it)")
    p.add_argument("--figure", type=Path, default=None, help="overlay SVG path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="grid of (n, r, method) runs")
    common(p, multi=True)
    p.add_argument("--method", choices=methods, nargs="+", default=["exact"])
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: logical cores)")
    p.add_argument("--figures", action="store_true", help="also render an SVG per run")
    p.add_argument("--preset", choices=["figures"], default=None,
                   help="figures: n=5, r=2, every method, with figures and comparisons")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.preset is None and (not args.n or not args.r):
        parser.error("sweep needs --n and --r (or --preset figures)")
    try:
        return args.func(args)
    except (SqzWkbError, ValueError, ArithmeticError) as exc:
        print(f"sqzwkb: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
