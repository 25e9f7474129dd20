#!/usr/bin/env python3
"""Run an acceptance suite and print one line per criterion."""

import argparse
import sys

from logbath.acceptance import CRITERIA, SUITES, run_criterion

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--suite", choices=sorted(SUITES), default="full")
    p.add_argument("--with-gate", action="store_true", help="also run the validation-gate criterion")
    args = p.parse_args()
    numbers = list(SUITES[args.suite]) + ([10] if args.with_gate else [])
    results = [run_criterion(k) for k in numbers]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 4)
