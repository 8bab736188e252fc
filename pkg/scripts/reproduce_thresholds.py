#!/usr/bin/env python3
"""Recompute the (d_L, d_R) BI-AWGN thresholds level by level.

Prints one row per evolution level: computed sigma0, the matching Eb/N0,
and, for (3,6), the previously reported value for comparison.

Example:
    python scripts/reproduce_thresholds.py --max-s 8
"""

import argparse
import time

from lpdecode.bounds import REFERENCE_SIGMA0_36, eb_n0_db, sigma0_search

LEVELS = (0, 1, 2, 3, 4, 6, 8, 10, 12, 14, 18, 22)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dl", type=int, default=3)
    ap.add_argument("--dr", type=int, default=6)
    ap.add_argument("--max-s", type=int, default=8)
    args = ap.parse_args()

    rate = 1.0 - args.dl / args.dr
    print(f"{'s':>3} {'sigma0':>8} {'Eb/N0[dB]':>10} {'reference':>10} {'secs':>6}")
    for s in [x for x in LEVELS if x <= args.max_s]:
        t0 = time.time()
        sigma0, _ = sigma0_search(args.dl, args.dr, s)
        ref = REFERENCE_SIGMA0_36.get(s) if (args.dl, args.dr) == (3, 6) else None
        ref_txt = f"{ref:.3f}" if ref is not None else "-"
        print(f"{s:>3} {sigma0:>8.4f} {eb_n0_db(sigma0, rate):>10.2f} "
              f"{ref_txt:>10} {time.time() - t0:>6.1f}")


if __name__ == "__main__":
    main()
