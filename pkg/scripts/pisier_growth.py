"""pb-constant estimates of R(X_alpha) for three alpha sequences along one ladder.

Writes a CSV to stdout.  alpha = 0 and alpha = (1) should stay flat; the
power law (k+1)^(-3/2) shows the criterion columns diverging apart.
"""

import argparse
import csv
import sys
from dataclasses import asdict

from hilbmod.pisier import AlphaSequence, growth_experiment

LADDER = [(4, 2, 8), (6, 3, 8), (8, 4, 8), (8, 5, 8)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=16)
    args = ap.parse_args()
    cases = {"zero": AlphaSequence.zero(), "delta": AlphaSequence.finite([1.0]),
             "power1.5": AlphaSequence.power_law(1.5)}
    w = None
    for name, alpha in cases.items():
        for row in growth_experiment(alpha, LADDER, seed=args.seed, samples=args.samples):
            d = {"alpha": name, **asdict(row)}
            if w is None:
                w = csv.DictWriter(sys.stdout, fieldnames=list(d), lineterminator="\n")
                w.writeheader()
            w.writerow(d)


if __name__ == "__main__":
    main()
