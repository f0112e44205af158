"""Command-line interface.

Exit codes: 0 success, 2 spec or parse error, 3 f not strictly monotone on
its domain, 4 support mismatch, 5 numerical failure (including a failed
verification).
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from .errors import DomainError, HypothesisViolation, NumericalError, ParseError, SpecError, SupportMismatch
from .numerics import RngState
from .problem import FIGURE_GRIDS, PRESETS, Grid, GridSeries, ProblemSpec, load_spec, parse_grid
from .verify import run_full_verification

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_NOT_MONOTONE = 3
EXIT_SUPPORT = 4
EXIT_NUMERICAL = 5

DEFAULT_GRID_INTERVALS = 200


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _grid_for(args, spec: ProblemSpec) -> Grid:
    if args.grid is not None:
        return parse_grid(args.grid)
    if spec.grid is not None:
        return spec.grid
    return Grid(spec.domain.lo, spec.domain.hi, DEFAULT_GRID_INTERVALS)


def density_series(spec: ProblemSpec, grid: Grid) -> GridSeries:
    d = spec.build()
    return GridSeries("pdf", tuple((t, d.pdf(t)) for t in grid.points()))


def cdf_series(spec: ProblemSpec, grid: Grid) -> GridSeries:
    d = spec.build()
    return GridSeries("cdf", tuple((t, d.cdf(t)) for t in grid.points()))


def cmd_density(args) -> int:
    spec = load_spec(args.spec)
    series = density_series(spec, _grid_for(args, spec))
    with _output(args.out) as fh:
        fh.write(series.to_csv())
    return EXIT_OK


def cmd_cdf(args) -> int:
    spec = load_spec(args.spec)
    series = cdf_series(spec, _grid_for(args, spec))
    with _output(args.out) as fh:
        fh.write(series.to_csv())
    return EXIT_OK


def cmd_quantile(args) -> int:
    d = load_spec(args.spec).build()
    print(f"{d.quantile(args.p):.17g}")
    return EXIT_OK


def cmd_sample(args) -> int:
    d = load_spec(args.spec).build()
    xs = d.samples(args.n, RngState(args.seed))
    with _output(args.out) as fh:
        fh.write("x\n")
        fh.writelines(f"{x:.17g}\n" for x in xs)
    return EXIT_OK


def format_report(report) -> str:
    lines = []
    for key, value in report.as_dict().items():
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = f"{value:.17g}"
        else:
            text = str(value)
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    d = load_spec(args.spec).build()
    report = run_full_verification(d, args.n, args.seed)
    sys.stdout.write(format_report(report))
    return EXIT_OK if report.all_pass else EXIT_NUMERICAL


def cmd_figure(args) -> int:
    if args.example not in PRESETS:
        raise SpecError(f"unknown example {args.example}; choose one of {sorted(PRESETS)}")
    series = density_series(PRESETS[args.example], FIGURE_GRIDS[args.example])
    with _output(args.out) as fh:
        fh.write(series.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="implicitlaw",
        description="Density, CDF, quantiles and samples of X defined by f(X) = A.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_spec(p):
        p.add_argument("--spec", required=True, metavar="PATH", help="problem spec (JSON)")
        return p

    p = with_spec(sub.add_parser("density", help="density of X on a grid (CSV t,pdf)"))
    p.add_argument("--grid", metavar="LO:HI:N")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_density)

    p = with_spec(sub.add_parser("cdf", help="CDF of X on a grid (CSV t,cdf)"))
    p.add_argument("--grid", metavar="LO:HI:N")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_cdf)

    p = with_spec(sub.add_parser("quantile", help="quantile of X"))
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_quantile)

    p = with_spec(sub.add_parser("sample", help="seeded samples of X (CSV x)"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sample)

    p = with_spec(sub.add_parser("verify", help="normalization, KS and cdf/pdf checks"))
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", help="density series of a built-in worked example")
    p.add_argument("--example", type=int, required=True, metavar="K")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_figure)
    return parser


def _fail(code: int, exc: Exception) -> int:
    print(f"implicitlaw: error: {exc}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ParseError, DomainError, ValueError) as exc:
        return _fail(EXIT_SPEC, exc)
    except HypothesisViolation as exc:
        return _fail(EXIT_NOT_MONOTONE, exc)
    except SupportMismatch as exc:
        return _fail(EXIT_SUPPORT, exc)
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, exc)


if __name__ == "__main__":
    sys.exit(main())
