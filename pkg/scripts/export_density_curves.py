#!/usr/bin/env python3
"""Dump density-evolution curves as CSV files for plotting.

Writes, into --out:
  levels.csv          x, mass columns per (level, X/Y) pair
  laplace_curves.csv  ln E exp(-t X_s) over t for a family of levels
  c_of_sigma.csv      contraction constant c(sigma) at a fixed level

Example:
    python scripts/export_density_curves.py --sigma 0.7 --out curves/
"""

import argparse
import csv
import pathlib

import numpy as np

from lpdecode.bounds import nonuniform_condition
from lpdecode.channel import BiAwgn, llr_density
from lpdecode.density import evolve, log_laplace
from lpdecode.deviation import WeightVector


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dl", type=int, default=3)
    ap.add_argument("--dr", type=int, default=6)
    ap.add_argument("--sigma", type=float, default=0.7)
    ap.add_argument("--max-s", type=int, default=4)
    ap.add_argument("--laplace-levels", type=int, nargs="*", default=[4, 6, 8, 10, 12])
    ap.add_argument("--t-max", type=float, default=0.5)
    ap.add_argument("--c-level", type=int, default=4)
    ap.add_argument("--out", default="curves")
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = llr_density(BiAwgn(args.sigma))

    omegas = WeightVector.geometric(args.max_s + 1, args.dl).omegas()
    levels = evolve(base, omegas, args.dl, args.dr, args.max_s, return_levels=True)
    with open(out / "levels.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["level", "kind", "x", "mass"])
        for level, f_x, f_y in levels:
            for kind, f in (("Y", f_y), ("X", f_x)):
                for x, p in zip(f.x, f.pdf):
                    if p > 0:
                        w.writerow([level, kind, f"{x:.9g}", f"{p:.9g}"])

    with open(out / "laplace_curves.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["s", "t", "ln_laplace"])
        for s in args.laplace_levels:
            om = WeightVector.geometric(s + 1, args.dl).omegas()
            f_x = evolve(base, om, args.dl, args.dr, s)
            for t in np.linspace(0.0, args.t_max, 200):
                w.writerow([s, f"{t:.6g}", f"{log_laplace(f_x, float(t)):.9g}"])

    with open(out / "c_of_sigma.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sigma", "c"])
        for sigma in np.linspace(0.45, 0.75, 31):
            rep = nonuniform_condition(BiAwgn(float(sigma)), args.dl, args.dr,
                                       args.c_level)
            w.writerow([f"{sigma:.3f}", f"{rep.c:.6g}"])

    print(f"wrote {out}/levels.csv, laplace_curves.csv, c_of_sigma.csv")


if __name__ == "__main__":
    main()
