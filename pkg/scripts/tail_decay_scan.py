#!/usr/bin/env python3
"""Scan the aliasing tail h_tail and the certified bounds against q.

Writes a CSV table to stdout: one row per (window, q), columns for the
diagonal extrema, the tail, and the resulting bound sandwich.  The tail
should fall roughly like exp(-c q^2) for the Gaussian and hit exact zero
once the painless threshold is crossed.
"""

import argparse
import sys

from stockframe.frame1d import make_frame_spec, walnut_bounds
from stockframe.window import gaussian_window, truncated_gaussian

WINDOWS = {
    "gaussian": gaussian_window,
    "tgauss": lambda: truncated_gaussian(0.1),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", default="1")
    ap.add_argument("--mu", type=float, default=0.5)
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--qs", default="2,4,8,16,32")
    args = ap.parse_args()

    qs = [int(tok) for tok in args.qs.split(",")]
    from fractions import Fraction
    alpha = Fraction(args.alpha)

    print("window,q,h0_inf,h0_sup,h_tail,lower,upper")
    for name, factory in WINDOWS.items():
        for q in qs:
            spec = make_frame_spec(factory(), args.mu, q, alpha, args.n)
            rep = walnut_bounds(spec)
            row = (name, q, rep.h0_inf, rep.h0_sup, rep.h_tail, rep.lower, rep.upper)
            print(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
