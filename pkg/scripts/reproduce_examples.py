"""Run the three worked examples end to end and print their reports.

Usage: python3 scripts/reproduce_examples.py [--json]

Example 1 (the c = 0 branch) only runs ``check``: its construction step
searches the whole default window without success and takes half a minute.
"""

import argparse
import sys
from pathlib import Path

from geolin3.cli import Options, cmd_check, cmd_linearize

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

RUNS = [
    ("Example 2: quintic form of y'' + x*y'^3 + (2/x)*y' = 0", "eq44_quintic.ode", cmd_linearize),
    ("Example 3: quintic form with the point map (xy, x/y)", "eq45_quintic.ode", cmd_linearize),
    ("Example 3 from its geodesic system", "example3_geodesic.ode", cmd_linearize),
    ("Example 1: degenerate branch with the hint g = 2/y, h = k, d = l*y",
     "example1_degenerate.ode", cmd_check),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    worst = 0
    for title, name, command in RUNS:
        report = command((FIXTURES / name).read_text(), Options(json=args.json))
        print(f"# ==== {title}")
        sys.stdout.write(report.to_json() if args.json else report.to_text())
        print()
        worst = max(worst, report.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
