#!/usr/bin/env python3
"""Write the data behind Figures 1-6 as CSV files (plus .meta sidecars)."""

import argparse
from pathlib import Path

from logbath.cli import main


def parse_args():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--outdir", default="figures", type=Path)
    p.add_argument("--points", default=101, type=int)
    p.add_argument("figs", nargs="*", type=int, default=[1, 2, 3, 4, 5, 6])
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for fig in args.figs:
        out = args.outdir / f"fig{fig}.csv"
        code = main(["figures", str(fig), "--points", str(args.points), "--out", str(out)])
        print(f"fig {fig}: {out} (exit {code})")
