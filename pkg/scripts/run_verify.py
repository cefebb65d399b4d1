#!/usr/bin/env python3
"""Run every property suite and print the human-readable reports."""

import sys

from qeuclid.verify import run_suite

SUITES = ("qarith", "ncalgebra", "starcalc", "qcalculus", "qexp", "schrodinger")


def main() -> int:
    failures = 0
    for name in SUITES:
        report = run_suite(name)
        print(report.render())
        print()
        failures += len(report.failures)
    print(f"total failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
