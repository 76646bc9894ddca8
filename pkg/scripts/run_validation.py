#!/usr/bin/env python3
"""Full cross-validation run: closed forms vs quadrature vs Monte Carlo.

Usage: python3 scripts/run_validation.py [csv_path]

Equivalent to ``swiptrelay validate -o <csv>`` at default settings; exits
nonzero if any check fails.
"""

import sys

from swiptrelay.cli import main as cli_main


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "validation.csv"
    raise SystemExit(cli_main(["validate", "-o", out]))
