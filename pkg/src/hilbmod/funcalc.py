"""Polynomials in the disc algebra and their action on matrices.

The sup norm over the disc is estimated by sampling the unit circle, which
gives a lower bound that converges as the grid is refined.  Inequalities that
need ``||phi||_inf`` on the larger side multiply the sample by
:data:`SAFETY_FACTOR`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import scipy.fft

from .errors import ShapeError
from .spaces import OpMatrix, as_matrix, op_norm

__all__ = [
    "Polynomial",
    "PBEstimate",
    "SAFETY_FACTOR",
    "DEFAULT_OVERSAMPLE",
    "DN_LOG_CONSTANT",
    "sup_norm_estimate",
    "circle_values",
    "eval_on_operator",
    "d_operator",
    "d_power",
    "fejer",
    "probe_family",
    "dn_norm_lower_bound",
    "pb_constant_estimate",
]

DEFAULT_OVERSAMPLE = 64
SAFETY_FACTOR = 1.05

# max over the full probe families of bound(n) / (1 + log n), n = 1..256 (attained at n = 1),
# rounded up; produced by scripts/dlog_constant.py
DN_LOG_CONSTANT = 1.16

FAMILIES = ("Fejer", "RandomUnimodular", "Lacunary", "ConjugateDirichlet")


class Polynomial:
    """``phi(z) = sum_k a_k z^k`` with trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex]):
        c = np.atleast_1d(np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                                     dtype=complex))
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Polynomial":
        a = np.zeros(k + 1, dtype=complex)
        a[k] = c
        return cls(a)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return Polynomial(a)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({np.array2string(self.coeffs, precision=4)})"

    def shifted(self, k: int) -> "Polynomial":
        """``z^k * phi``."""
        return Polynomial(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]))


@dataclass(frozen=True)
class PBEstimate:
    constant_lower_bound: float
    witness_polynomial: Polynomial
    degrees_swept: range
    samples: int
    seed: int


def circle_values(phi: Polynomial, n_points: int) -> np.ndarray:
    """Values of ``phi`` at the ``n_points`` roots of unity, via one FFT."""
    a = phi.coeffs
    if n_points >= len(a):
        return n_points * scipy.fft.ifft(a, n_points)
    # fold coefficients modulo n_points (aliasing is exact for roots of unity)
    folded = np.zeros(n_points, dtype=complex)
    np.add.at(folded, np.arange(len(a)) % n_points, a)
    return n_points * scipy.fft.ifft(folded)


def sup_norm_estimate(phi: Polynomial, oversample: int = DEFAULT_OVERSAMPLE,
                      n_points: int | None = None) -> float:
    """Max of ``|phi|`` over ``oversample * (deg + 1)`` equispaced circle points.

    ``n_points`` overrides the grid size; sweeps that compare several
    polynomials pass a common grid so their estimates are taken on the same
    points.
    """
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    if n_points is None:
        n_points = oversample * (phi.degree + 1)
    return float(np.abs(circle_values(phi, n_points)).max())


def eval_on_operator(phi: Polynomial, T) -> OpMatrix:
    """Horner evaluation of ``phi(T)``."""
    t = as_matrix(T)
    if t.shape[0] != t.shape[1]:
        raise ShapeError("phi(T) needs a square T")
    out = phi.coeffs[-1] * np.eye(t.shape[0], dtype=complex)
    for a in phi.coeffs[-2::-1]:
        out = out @ t
        out[np.diag_indices_from(out)] += a
    if isinstance(T, OpMatrix):
        return OpMatrix(T.domain, T.codomain, out)
    return OpMatrix.wrap(out)


def d_operator(phi: Polynomial) -> Polynomial:
    """``(D f)(z) = (f(z) - f(0)) / z``."""
    return Polynomial(phi.coeffs[1:]) if phi.degree >= 1 else Polynomial([0])


def d_power(phi: Polynomial, n: int) -> Polynomial:
    return Polynomial(phi.coeffs[n:]) if phi.degree >= n else Polynomial([0])


def fejer(m: int) -> Polynomial:
    """``F_m(z) = sum_{k=0}^m (1 - k/(m+1)) z^k``."""
    k = np.arange(m + 1)
    return Polynomial(1 - k / (m + 1))


def _conjugate_dirichlet(n: int, m: int) -> Polynomial:
    # z^m * sum_{k=1}^m (zbar^k - z^k)/k: uniformly bounded on the circle,
    # while D^n keeps only the tail -sum z^k/k once m == n
    a = np.zeros(2 * m + 1, dtype=complex)
    k = np.arange(1, m + 1)
    a[m - k] = 1.0 / k
    a[m + k] = -1.0 / k
    return Polynomial(a)


def _lacunary_base(m: int, size: int, rng: np.random.Generator) -> list[Polynomial]:
    out = []
    for _ in range(size):
        # coefficients on m + {0, 1, 2, 4, 8, ...} plus a random low part
        freqs = [0] + [2 ** j for j in range(int(np.log2(4 * m)) + 1)]
        a = np.zeros(m + max(freqs) + 1, dtype=complex)
        a[:m] = np.exp(2j * np.pi * rng.random(m)) / np.sqrt(m)
        a[[m + f for f in freqs]] = np.exp(2j * np.pi * rng.random(len(freqs)))
        out.append(Polynomial(a))
    return out


def probe_family(family: str, n: int, size: int = 16, seed: int = 0) -> list[Polynomial]:
    """The seeded polynomial family used to probe ``||D^n||``.

    Every family contains ``z^n``.  The lacunary family for ``n`` contains
    ``z^(n-m) psi`` for each ``psi`` of the base family at every power of two
    ``m <= n``; since ``D^n (z^(n-m) psi) = D^m psi`` the families are nested
    in the sense relevant to ``D^n``.
    """
    if size < 1:
        raise ValueError("empty test family")
    rng = np.random.default_rng([seed, n, FAMILIES.index(family) if family in FAMILIES else 99])
    fam = [Polynomial.monomial(n)]
    if family == "Fejer":
        ms = np.unique(np.geomspace(1, 2 * n + 2, size).astype(int))
        for m in ms:
            F = fejer(int(m))
            fam.append(F)
            fam.append(F.shifted(n))
    elif family == "RandomUnimodular":
        for _ in range(size):
            d = int(rng.integers(n, 3 * n + 2))
            fam.append(Polynomial(np.exp(2j * np.pi * rng.random(d + 1))))
    elif family == "Lacunary":
        m = 1
        while m <= n:
            base = _lacunary_base(m, size, np.random.default_rng([seed, m, 2]))
            fam.extend(p.shifted(n - m) for p in base)
            m *= 2
    elif family == "ConjugateDirichlet":
        for m in np.unique(np.linspace(max(1, n // 2), 2 * n, size).astype(int)):
            fam.append(_conjugate_dirichlet(n, int(m)))
    else:
        raise ValueError(f"unknown family {family!r}")
    return fam


def _family_grid(n_max: int, oversample: int) -> int:
    # one grid for every n <= n_max so the lacunary nesting carries over exactly
    deg_cap = 5 * n_max + 16
    return oversample * int(2 ** np.ceil(np.log2(deg_cap + 1)))


def dn_norm_lower_bound(n: int, family: str | Sequence[str] = "Fejer", size: int = 16,
                        seed: int = 0, oversample: int = DEFAULT_OVERSAMPLE,
                        n_ref: int = 256) -> float:
    """Largest ``||D^n phi|| / ||phi||`` over a test family (lower bound on ``||D^n||``).

    ``family`` may be a single name or a list of names; ``"all"`` means every
    family.  Sup norms are sampled on a common grid sized for degrees up to
    ``n_ref`` (raised if ``n`` is larger).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if family == "all":
        family = FAMILIES
    names = [family] if isinstance(family, str) else list(family)
    polys = [p for name in names for p in probe_family(name, n, size, seed)]
    if not polys:
        raise ValueError("empty test family")
    grid = _family_grid(max(n, n_ref), oversample)
    best = 0.0
    for p in polys:
        den = _modulus_sup(p, grid)
        if den == 0:
            continue
        best = max(best, _modulus_sup(d_power(p, n), grid) / den)
    return best


def _modulus_sup(p: Polynomial, grid: int) -> float:
    # |z^k p| = |p| on the circle, so leading zeros are dropped before caching
    nz = np.flatnonzero(p.coeffs)
    if nz.size == 0:
        return 0.0
    return _sup_cached(p.coeffs[nz[0]:].tobytes(), grid)


@lru_cache(maxsize=4096)
def _sup_cached(key: bytes, grid: int) -> float:
    return float(np.abs(circle_values(Polynomial(np.frombuffer(key, dtype=complex)), grid)).max())


def pb_constant_estimate(T, d_max: int, samples: int = 64, seed: int = 0,
                         oversample: int = 256) -> PBEstimate:
    """Largest ``||phi(T)|| / ||phi||_inf`` over a sweep of test polynomials.

    The sweep covers ``z^k`` for ``k <= d_max``, ``samples`` random polynomials
    with unimodular coefficients and degree ``<= d_max``, and the Fejér
    polynomials ``F_m``, ``m <= d_max``.
    """
    t = as_matrix(T)
    if t.shape[0] != t.shape[1]:
        raise ShapeError("T must be square")
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    rng = np.random.default_rng(seed)
    cands = [Polynomial.monomial(k) for k in range(1, d_max + 1)]
    for _ in range(samples):
        d = int(rng.integers(1, d_max + 1))
        cands.append(Polynomial(np.exp(2j * np.pi * rng.random(d + 1))))
    cands.extend(fejer(m) for m in range(1, d_max + 1))

    powers = [np.eye(t.shape[0], dtype=complex)]
    for _ in range(d_max):
        powers.append(powers[-1] @ t)
    best, witness = -1.0, cands[0]
    for p in cands:
        val = sum(a * powers[k] for k, a in enumerate(p.coeffs))
        r = op_norm(val) / sup_norm_estimate(p, oversample)
        if r > best:
            best, witness = r, p
    return PBEstimate(best, witness, range(1, d_max + 1), samples, seed)
