#!/usr/bin/env python3
"""Regenerate every built-in sweep CSV (and gnuplot sidecars) into an output directory.

Usage: python3 scripts/reproduce_figures.py [outdir] [--samples N] [--workers N]

Full Monte-Carlo settings take a while; pass --samples 100000 for a quick look.
"""

import argparse
import os
import sys

from swiptrelay.cli import main as cli_main
from swiptrelay.sweepcfg import PRESETS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("outdir", nargs="?", default="figures")
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    for name in PRESETS:
        out = os.path.join(args.outdir, f"{name}.csv")
        rc = cli_main([
            "preset", name, "-o", out,
            "--samples", str(args.samples),
            "--workers", str(args.workers),
            "--emit-gnuplot",
        ])
        if rc != 0:
            print(f"preset {name} failed with exit code {rc}", file=sys.stderr)
            return rc
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
