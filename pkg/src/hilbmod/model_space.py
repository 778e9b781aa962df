"""Truncated Sz.-Nagy--Foias model spaces for scalar symbols.

The symbol is ``Theta = r * B`` with ``B`` a finite Blaschke product, so
``Delta = sqrt(1 - |Theta|^2)`` is either identically zero (``r = 1``) or a
positive constant.  The ambient space is ``H^2 (+) closure(Delta L^2)``
truncated to modes ``<= N`` (Hardy) and ``|n| <= N`` (Lebesgue); the
Lebesgue coordinates are always present and the closure of ``Delta L^2`` is
taken numerically as the range of multiplication by ``Delta``.

``M(Theta)`` is spanned by ``Theta z^k (+) Delta z^k`` for ``k <= N - B``
where ``B`` is a buffer that absorbs the tails of ``Theta``.  The complement
of these columns contains genuine elements of ``H(Theta)`` plus spurious
vectors living on the top ``B`` modes; :class:`ModelSpace` keeps only the
part of the complement that vanishes on those edge modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import ShapeError
from .extensions import ZProfile, z_profile
from .spaces import direct_sum, hardy, lebesgue, op_norm, shift

__all__ = [
    "ScalarSymbol",
    "ModelSpace",
    "build_model_space",
    "projection_formula_check",
    "range_check",
    "star_power_check",
    "decompose_X",
]

QR_RANK_TOL = 1e-10
EDGE_TOL = 1e-6
TAIL_TOL = 1e-11
DEFECT_FLOOR = 1e-12
INTERIOR_TOL = 1e-8


@dataclass(frozen=True)
class ScalarSymbol:
    """``Theta(z) = r * prod_a (|a|/a) (a - z) / (1 - conj(a) z)``; a zero at 0 contributes ``z``."""

    blaschke_zeros: tuple[complex, ...] = ()
    r: float = 1.0

    def __init__(self, blaschke_zeros: Sequence[complex] = (), r: float = 1.0):
        zs = tuple(complex(a) for a in blaschke_zeros)
        if any(abs(a) >= 1 for a in zs):
            raise ValueError("Blaschke zeros must lie in the open unit disc")
        if not 0 < r <= 1:
            raise ValueError("scale r must lie in (0, 1]")
        object.__setattr__(self, "blaschke_zeros", zs)
        object.__setattr__(self, "r", float(r))

    @property
    def degree(self) -> int:
        return len(self.blaschke_zeros)

    @property
    def is_inner(self) -> bool:
        return self.r == 1.0

    @property
    def decay_rate(self) -> float:
        """Geometric decay rate of the Taylor coefficients (0 for polynomials)."""
        return max((abs(a) for a in self.blaschke_zeros if a != 0), default=0.0)

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.r, dtype=complex)
        for a in self.blaschke_zeros:
            if a == 0:
                out = out * z
            else:
                out = out * (abs(a) / a) * (a - z) / (1 - np.conj(a) * z)
        return out

    def taylor(self, N: int) -> np.ndarray:
        """Taylor coefficients ``Theta^(0) .. Theta^(N)`` by exact series products."""
        c = np.zeros(N + 1, dtype=complex)
        c[0] = self.r
        for a in self.blaschke_zeros:
            if a == 0:
                c = np.concatenate([[0], c[:-1]])
                continue
            geo = np.conj(a) ** np.arange(N + 1)
            fac = (abs(a) / a) * (a * geo - np.concatenate([[0], geo[:-1]]))
            c = np.convolve(c, fac)[: N + 1]
        return c

    def delta_on_grid(self, M: int) -> np.ndarray:
        t = 2 * np.pi * np.arange(M) / M
        d2 = 1 - np.abs(self.value(np.exp(1j * t))) ** 2
        # rounding leaves |Theta| = 1 +- 1e-16 for inner symbols; sqrt would blow that to 1e-8
        d2[d2 < DEFECT_FLOOR] = 0.0
        return np.sqrt(d2)

    def delta_fourier(self, N: int, M: int | None = None) -> np.ndarray:
        """Coefficients of ``Delta`` on modes ``-N..N`` by FFT quadrature."""
        M = M or max(8 * (N + 1), 256)
        c = np.fft.fft(self.delta_on_grid(M)) / M
        return np.array([c[n % M] for n in range(-N, N + 1)])


def default_buffer(symbol: ScalarSymbol) -> int:
    B = max(8, 2 * symbol.degree)
    rho = symbol.decay_rate
    if rho > 0:
        B = max(B, math.ceil(math.log(TAIL_TOL) / math.log(rho)))
    return B


def _orth_columns(a: np.ndarray, tol: float = QR_RANK_TOL) -> np.ndarray:
    if a.shape[1] == 0:
        return a
    q, r, _ = scipy.linalg.qr(a, mode="economic", pivoting=True)
    d = np.abs(np.diag(r))
    rank = int(np.sum(d > tol * d[0])) if d.size and d[0] > 0 else 0
    return q[:, :rank]


@dataclass(frozen=True, eq=False)
class ModelSpace:
    symbol: ScalarSymbol
    N: int
    buffer: int
    basis_M: np.ndarray = field(repr=False)
    basis_H: np.ndarray = field(repr=False)
    basis_H_full: np.ndarray = field(repr=False)
    S_theta: np.ndarray = field(repr=False)
    delta_rank: int

    @property
    def ambient(self):
        return direct_sum(hardy(self.N), lebesgue(self.N))

    @property
    def K(self) -> int:
        """Index of the last ``M(Theta)`` column; modes above it are edge."""
        return self.N - self.buffer

    @property
    def dim(self) -> int:
        return self.basis_H.shape[1]

    @property
    def theta0(self) -> complex:
        return complex(self.symbol.value(0.0))

    @property
    def ambient_shift(self) -> np.ndarray:
        return scipy.linalg.block_diag(shift(hardy(self.N)).entries,
                                       shift(lebesgue(self.N)).entries)

    def hardy_part(self, v: np.ndarray) -> np.ndarray:
        return v[: self.N + 1]

    def lebesgue_part(self, v: np.ndarray) -> np.ndarray:
        """Lebesgue coefficients in storage order (mode ``-N`` first)."""
        return v[self.N + 1:]

    def to_ambient(self, coords) -> np.ndarray:
        return self.basis_H @ np.asarray(coords, dtype=complex)

    def from_ambient(self, v) -> np.ndarray:
        return self.basis_H.conj().T @ np.asarray(v, dtype=complex)

    def interior_mask(self, margin: int = 0) -> np.ndarray:
        """Ambient coordinates with ``|mode| <= K - margin``."""
        k = self.K - margin
        hm = np.arange(self.N + 1) <= k
        lm = np.abs(np.arange(-self.N, self.N + 1)) <= k
        if self.delta_rank == 0:
            lm[:] = False
        return np.concatenate([hm, lm])

    def random_h(self, rng: np.random.Generator, margin: int = 4) -> np.ndarray:
        """Unit vector of ``H(Theta)`` (coordinates) from a random vector on interior modes."""
        mask = self.interior_mask(margin)
        v = np.zeros(len(mask), dtype=complex)
        v[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
        c = self.from_ambient(v)
        return c / np.linalg.norm(c)


def build_model_space(symbol: ScalarSymbol, N: int, buffer: int | None = None) -> ModelSpace:
    """Orthonormal bases of the truncated ``M(Theta)`` and ``H(Theta)`` and the compressed shift."""
    if N < 2 * symbol.degree + 8:
        raise ValueError(f"N={N} too small for a symbol with {symbol.degree} zeros")
    B = default_buffer(symbol) if buffer is None else buffer
    K = N - B
    if K < symbol.degree + 1:
        raise ValueError(f"N={N} leaves no interior after a buffer of {B} modes")
    if symbol.decay_rate ** (K + 1) > INTERIOR_TOL:
        # kernel functions 1/(1 - conj(a) z) would still be visible at the edge
        raise ValueError(f"N={N} too small: interior of {K + 1} modes does not resolve "
                         f"decay rate {symbol.decay_rate:.3g}")

    grid = symbol.delta_on_grid(max(8 * (N + 1), 256))
    if grid.max() > 0 and grid.min() == 0:
        raise ValueError("Delta vanishes on part of the circle only; closure of Delta L^2 "
                         "is not modelled")

    th = symbol.taylor(N)
    dh = symbol.delta_fourier(2 * N)  # modes -2N..2N
    nL = 2 * N + 1
    modes = np.arange(-N, N + 1)
    # multiplication by Delta on the Lebesgue truncation; its range stands in for
    # closure(Delta L^2)
    mult = dh[(modes[:, None] - modes[None, :]) + 2 * N]
    q_delta = _orth_columns(mult)
    dr = q_delta.shape[1]

    cols = np.zeros((N + 1 + nL, K + 1), dtype=complex)
    for k in range(K + 1):
        cols[k:N + 1, k] = th[: N + 1 - k]
        cols[N + 1:, k] = dh[modes - k + 2 * N]
    basis_M = _orth_columns(cols)

    amb = scipy.linalg.block_diag(np.eye(N + 1), q_delta)
    resid = amb - basis_M @ (basis_M.conj().T @ amb)
    u, s, _ = np.linalg.svd(resid, full_matrices=False)
    basis_full = u[:, s > 0.5]

    edge = ~np.concatenate([np.arange(N + 1) <= K, np.abs(modes) <= K])
    if basis_full.shape[1]:
        _, se, vh = np.linalg.svd(basis_full[edge], full_matrices=True)
        se = np.concatenate([se, np.zeros(vh.shape[0] - se.size)])
        basis_H = basis_full @ vh[se <= EDGE_TOL].conj().T
    else:
        basis_H = basis_full
    A = scipy.linalg.block_diag(shift(hardy(N)).entries, shift(lebesgue(N)).entries)
    S_theta = basis_H.conj().T @ A @ basis_H
    return ModelSpace(symbol, N, B, basis_M, basis_H, basis_full, S_theta, dr)


@dataclass(frozen=True)
class ProjectionReport:
    gap_M: float
    gap_H: float


def projection_formula_check(ms: ModelSpace, e_star: complex = 1.0) -> ProjectionReport:
    """Compare the projections of ``e (+) 0`` with the closed forms.

    ``P_M(e (+) 0) = Theta conj(Theta(0)) e (+) Delta conj(Theta(0)) e`` and
    ``P_H(e (+) 0) = (1 - Theta conj(Theta(0))) e (+) (-Delta conj(Theta(0)) e)``.
    """
    N = ms.N
    v = np.zeros(3 * N + 2, dtype=complex)
    v[0] = e_star
    c = np.conj(ms.theta0) * e_star
    formula_M = np.concatenate([ms.symbol.taylor(N) * c, ms.symbol.delta_fourier(N) * c])
    if ms.delta_rank == 0:
        formula_M[N + 1:] = 0
    pm = ms.basis_M @ (ms.basis_M.conj().T @ v)
    ph = ms.basis_H @ (ms.basis_H.conj().T @ v)
    return ProjectionReport(float(np.linalg.norm(pm - formula_M)),
                            float(np.linalg.norm(ph - (v - formula_M))))


@dataclass(frozen=True)
class RangeReport:
    in_range_residual: float
    condition_holds: bool
    consistent: bool


def range_check(ms: ModelSpace, f, tol: float = 1e-7) -> RangeReport:
    """Least-squares test of ``f in ran S(Theta)`` against the criterion ``f_1(0) in Theta(0) E``."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (ms.dim,):
        raise ShapeError(f"f must have {ms.dim} coordinates")
    # the smallest singular value of S(Theta) is |Theta(0)|; cutting the solve at
    # tol makes "Theta(0) != 0" mean |Theta(0)| > tol on both sides
    u, sv, _ = np.linalg.svd(ms.S_theta)
    ran = u[:, sv > tol]              # absolute cutoff: S(Theta) is a contraction
    res = float(np.linalg.norm(f - ran @ (ran.conj().T @ f)))
    f10 = ms.to_ambient(f)[0]
    cond = abs(ms.theta0) > tol or abs(f10) <= tol
    return RangeReport(res, cond, (res <= tol) == cond)


def star_power_check(ms: ModelSpace, n: int, h, support_tol: float = 1e-8) -> float:
    """Gap between ``S(Theta)*^n h`` and ``(P_+ zbar^n h_1) (+) e^{-int} h_2``."""
    h = np.asarray(h, dtype=complex)
    v = ms.to_ambient(h)
    N, K = ms.N, ms.K
    lv = ms.lebesgue_part(v)
    low = np.arange(-N, N + 1) < -K + n
    if np.linalg.norm(lv[low]) > support_tol * max(np.linalg.norm(v), 1.0):
        raise ValueError(f"h is not supported {n} modes away from the truncation edge")
    lhs = ms.to_ambient(np.linalg.matrix_power(ms.S_theta.conj().T, n) @ h)
    hv = ms.hardy_part(v)
    rhs_h = np.concatenate([hv[n:], np.zeros(n, dtype=complex)])
    rhs_l = np.concatenate([lv[n:], np.zeros(n, dtype=complex)])
    return float(np.linalg.norm(lhs - np.concatenate([rhs_h, rhs_l])))


@dataclass(frozen=True)
class DecompositionReport:
    X1: np.ndarray
    X2: np.ndarray
    profile1: ZProfile
    factor_residual: float
    x_norm: float

    @property
    def profile_bound_holds(self) -> bool:
        return self.profile1.final <= self.x_norm + 1e-8


def decompose_X(ms: ModelSpace, X, profile_N: int | None = None) -> DecompositionReport:
    """Split ``X = X1 + X2`` with ``X1 h = X P_H (h_1(0) (+) 0)``.

    ``X1`` has a bounded orbit under ``S(Theta)*`` (profile bounded by
    ``||X||``) and ``X2`` factors as ``L S(Theta)*``; the reported residual is
    the operator norm of ``X2 - L S(Theta)*`` for the least-squares ``L``.
    """
    x = np.atleast_2d(np.asarray(X, dtype=complex))
    if x.shape[1] != ms.dim:
        raise ShapeError(f"X must act on {ms.dim} coordinates")
    e0 = ms.basis_H[0].conj()          # coordinates of P_H (1 (+) 0)
    row0 = ms.basis_H[0]               # h -> h_1(0)
    x1 = (x @ e0)[:, None] * row0[None, :]
    x2 = x - x1
    sstar = ms.S_theta.conj().T
    prof = z_profile(x1, sstar, ms.N if profile_N is None else profile_N)
    L = x2 @ np.linalg.pinv(sstar, rcond=1e-12)
    return DecompositionReport(x1, x2, prof, op_norm(x2 - L @ sstar), op_norm(x))
