"""Command line front end.

Subcommands:

* ``sweep <config> -o <csv>``     run a sweep described by a config file
* ``preset <name> -o <csv>``      run a built-in parameter sweep (fig3..fig10)
* ``validate -o <csv>``           cross-validate closed forms; nonzero exit on FAIL
* ``asymptotic <config> -o <csv>`` exact vs high-SNR forms over the config's grid

Common flags ``--seed/--samples/--workers`` override the [mc] section,
``--modes`` overrides the mode list and ``--emit-gnuplot`` writes a plot
script next to the CSV.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .montecarlo import McConfig
from .sweep import gnuplot_sidecar, run_sweep, write_csv
from .sweepcfg import MODES, PRESETS, ConfigError, SweepSpec, parse_config, preset_spec
from .validation import run_validation


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=None, help="RNG seed override (u64)")
    p.add_argument("--samples", type=int, default=None, help="Monte-Carlo sample override")
    p.add_argument("--workers", type=int, default=None, help="worker thread override")
    p.add_argument("--modes", default=None, help="comma list drawn from " + ",".join(MODES))
    p.add_argument("--emit-gnuplot", action="store_true", help="write a .gp sidecar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swiptrelay", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a sweep from a config file")
    p_sweep.add_argument("config", help="path to a key=value config file")
    _add_common(p_sweep)

    p_preset = sub.add_parser("preset", help="run a built-in sweep")
    p_preset.add_argument("name", choices=PRESETS, help="preset name")
    _add_common(p_preset)

    p_val = sub.add_parser("validate", help="cross-validate closed forms")
    _add_common(p_val)
    p_val.add_argument("--grid-points", type=int, default=60,
                       help="threshold grid size for the CDF sup-norm check")
    p_val.add_argument("--m", default="1,2,3", help="comma list of shapes")
    p_val.add_argument("--theta", default="-1,-0.5,0,0.5,1", help="comma list of dependence values")
    p_val.add_argument("--inject-coefficient-error", action="store_true",
                       help=argparse.SUPPRESS)

    p_asym = sub.add_parser("asymptotic", help="exact vs high-SNR forms over a config grid")
    p_asym.add_argument("config", help="path to a key=value config file")
    _add_common(p_asym)
    return parser


def _apply_overrides(spec: SweepSpec, args: argparse.Namespace) -> SweepSpec:
    mc = spec.mc
    if args.samples is not None:
        mc = McConfig(samples=args.samples,
                      seed=mc.seed if args.seed is None else args.seed,
                      workers=mc.workers if args.workers is None else args.workers,
                      batch_size=min(mc.batch_size, args.samples))
    elif args.seed is not None or args.workers is not None:
        mc = McConfig(samples=mc.samples,
                      seed=mc.seed if args.seed is None else args.seed,
                      workers=mc.workers if args.workers is None else args.workers,
                      batch_size=mc.batch_size)
    spec = replace(spec, mc=mc)
    if args.modes is not None:
        spec = replace(spec, modes=tuple(v.strip() for v in args.modes.split(",")))
    return spec


def _load_spec(path: str) -> SweepSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _finish(args: argparse.Namespace, spec: SweepSpec, rows) -> None:
    write_csv(args.output, rows)
    if args.emit_gnuplot:
        gp_path = args.output + ".gp"
        with open(gp_path, "w") as fh:
            fh.write(gnuplot_sidecar(args.output, spec))
        print(f"wrote {gp_path}")
    print(f"wrote {args.output} ({len(rows)} rows)")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("sweep", "preset", "asymptotic"):
            if args.command == "preset":
                spec = preset_spec(args.name)
            else:
                spec = _load_spec(args.config)
            if args.command == "asymptotic":
                modes = ("quadrature", "asymptotic") if args.modes is None else tuple(
                    v.strip() for v in args.modes.split(","))
                spec = replace(spec, modes=modes)
            spec = _apply_overrides(spec, args)
            _finish(args, spec, run_sweep(spec))
            return 0

        # validate
        ms = tuple(int(v) for v in args.m.split(","))
        thetas = tuple(float(v) for v in args.theta.split(","))
        report = run_validation(
            ms=ms,
            thetas=thetas,
            samples=args.samples if args.samples is not None else 1_000_000,
            seed=args.seed if args.seed is not None else 12345,
            grid_points=args.grid_points,
            inject_coefficient_error=args.inject_coefficient_error,
        )
        for check in report.checks:
            print(check.line())
        write_csv(args.output, report.csv_rows())
        print(f"wrote {args.output} ({len(report.checks)} checks)")
        if not report.passed:
            print("validation FAILED", file=sys.stderr)
            return 1
        print("validation passed")
        return 0
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
