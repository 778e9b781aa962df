"""Compute the constant M in ||D^n|| <= M (1 + log n) over the probe families.

Prints the per-n ratios and the value to freeze in ``funcalc.DN_LOG_CONSTANT``
(the maximum ratio rounded up to two decimals).
"""

import argparse
import math
import time

from hilbmod.funcalc import dn_norm_lower_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=256)
    ap.add_argument("--size", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--all-n", action="store_true", help="every n, not just powers of two")
    args = ap.parse_args()

    ns = range(1, args.n_max + 1) if args.all_n else [2 ** j for j in range(int(math.log2(args.n_max)) + 1)]
    t0 = time.perf_counter()
    worst, arg = 0.0, 1
    for n in ns:
        b = dn_norm_lower_bound(n, "all", size=args.size, seed=args.seed, n_ref=args.n_max)
        r = b / (1 + math.log(n))
        if r > worst:
            worst, arg = r, n
        print(f"{n:4d} bound={b:.6f} ratio={r:.6f}")
    print(f"max ratio {worst:.6f} at n={arg}; M = {math.ceil(worst * 100) / 100:.2f}"
          f" ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
