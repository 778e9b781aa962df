"""Partial-sum growth for xi(t) = |t|^(-1/3): quadrature against the exact coefficients.

The exact Fourier coefficients of xi^2 = |t|^(-2/3) come from an incomplete
gamma function (mpmath); the quadrature values are what the library uses.
"""

import argparse

import mpmath
import numpy as np

from hilbmod.zspaces import counterexample_xi


def exact_xi_sq_coefficient(n: int, s: float = 1.0 / 3.0) -> float:
    """``(1/2pi) int_{-pi}^{pi} |t|^(s-1) e^{-int} dt``."""
    if n == 0:
        return float(mpmath.pi ** s / (s * mpmath.pi))
    n = abs(n)
    g = mpmath.gammainc(s, 0, -1j * n * mpmath.pi)
    return float(mpmath.re(mpmath.exp(1j * mpmath.pi * s / 2) * g) / mpmath.pi * n ** (-s))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=32768)
    ap.add_argument("--modes", type=int, default=4096)
    ap.add_argument("--lo", type=int, default=128)
    args = ap.parse_args()
    rep = counterexample_xi(args.grid, args.modes)
    exact = np.cumsum([exact_xi_sq_coefficient(n) ** 2 for n in range(args.modes + 1)])
    print(f"quadrature: P({args.lo})={rep.profile[args.lo]:.4f} P({args.modes})={rep.profile[-1]:.4f}"
          f" ratio={rep.ratio(args.modes, args.lo):.4f} increasing={rep.strictly_increasing}")
    print(f"exact:      P({args.lo})={exact[args.lo]:.4f} P({args.modes})={exact[-1]:.4f}"
          f" ratio={exact[-1] / exact[args.lo]:.4f}")


if __name__ == "__main__":
    main()
