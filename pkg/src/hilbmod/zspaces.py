"""Block Toeplitz and Hankel matrices of operator symbols.

For ``X : H^2(F) -> E`` with Fourier blocks ``X_n : F -> E`` the orbit sums
of ``X`` under ``S*`` and ``S`` are the squared norms of the Toeplitz and
Hankel operators built from the blocks.  This module builds both and checks
the two identities on vectors far enough from the truncation edge for them
to hold exactly.

It also carries the ``H^2 + L^2`` example whose functional ``X`` neither
kills ``ker T`` nor has a bounded orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .extensions import SplitReport, ZProfile, membership_split, z_profile
from .spaces import (OpMatrix, direct_sum, fiber_space, hardy, lebesgue,
                     shift)

__all__ = [
    "SymbolCoeffs",
    "XiFunction",
    "toeplitz_matrix",
    "hankel_matrix",
    "row_operator",
    "zss_identity_check",
    "xi_power_law",
    "counterexample_xi",
    "kernel_obstruction_example",
]


@dataclass(frozen=True)
class SymbolCoeffs:
    """Blocks ``X_0 .. X_{N_sym}``, each of shape ``(dim E, dim F)``."""

    blocks: tuple[np.ndarray, ...]

    def __init__(self, blocks: Sequence):
        bs = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
        if not bs:
            raise ValueError("a symbol needs at least one block")
        if any(b.shape != bs[0].shape for b in bs):
            raise ValueError("all symbol blocks must share one shape")
        object.__setattr__(self, "blocks", tuple(bs))

    @classmethod
    def scalar(cls, values) -> "SymbolCoeffs":
        return cls([[[v]] for v in values])

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocks[0].shape

    @property
    def n_sym(self) -> int:
        return len(self.blocks) - 1

    def block(self, n: int) -> np.ndarray:
        if 0 <= n < len(self.blocks):
            return self.blocks[n]
        return np.zeros(self.shape, dtype=complex)


def _block_pattern(sym: SymbolCoeffs, N: int, index: Callable[[int, int], int]) -> OpMatrix:
    e, f = sym.shape
    a = np.zeros(((N + 1) * e, (N + 1) * f), dtype=complex)
    for n in range(N + 1):
        for m in range(N + 1):
            k = index(n, m)
            if 0 <= k <= sym.n_sym:
                a[n * e:(n + 1) * e, m * f:(m + 1) * f] = sym.blocks[k]
    return OpMatrix(hardy(N, f), hardy(N, e), a)


def toeplitz_matrix(sym: SymbolCoeffs, N: int) -> OpMatrix:
    """Block ``(n, m)`` is ``X_{m-n}`` for ``m >= n`` and zero below the diagonal."""
    return _block_pattern(sym, N, lambda n, m: m - n)


def hankel_matrix(sym: SymbolCoeffs, N: int) -> OpMatrix:
    """Block ``(n, m)`` is ``X_{n+m}``."""
    return _block_pattern(sym, N, lambda n, m: n + m)


def row_operator(sym: SymbolCoeffs, N: int) -> OpMatrix:
    """``h -> sum_n X_n h(n)`` on ``HardyTrunc(N, F)``."""
    e, f = sym.shape
    a = np.hstack([sym.block(n) for n in range(N + 1)])
    return OpMatrix(hardy(N, f), fiber_space(e), a)


@dataclass(frozen=True)
class ZSSReport:
    toeplitz_gap: float
    hankel_gap: float


def zss_identity_check(sym: SymbolCoeffs, N: int, batch: int = 8, seed: int = 0) -> ZSSReport:
    """Max over a random batch of ``|sum ||X S*^n h||^2 - ||T_X h||^2|`` and the Hankel analogue.

    Test vectors live on modes ``<= N // 2``; the symbol must satisfy
    ``N_sym <= N // 2`` so neither orbit runs into the truncation edge.
    """
    if sym.n_sym > N // 2:
        raise ValueError(f"symbol length {sym.n_sym + 1} too long for N={N}")
    e, f = sym.shape
    space = hardy(N, f)
    X = row_operator(sym, N).entries
    S = shift(space).entries
    TX, HX = toeplitz_matrix(sym, N).entries, hankel_matrix(sym, N).entries
    rng = np.random.default_rng(seed)
    tgap = hgap = 0.0
    half = (N // 2 + 1) * f
    for _ in range(batch):
        h = np.zeros(space.dim, dtype=complex)
        h[:half] = rng.standard_normal(half) + 1j * rng.standard_normal(half)
        down, up = h.copy(), h.copy()
        sd = su = 0.0
        for _ in range(N + 1):
            sd += np.linalg.norm(X @ down) ** 2
            su += np.linalg.norm(X @ up) ** 2
            down = S.conj().T @ down
            up = S @ up
        tgap = max(tgap, abs(sd - np.linalg.norm(TX @ h) ** 2))
        hgap = max(hgap, abs(su - np.linalg.norm(HX @ h) ** 2))
    return ZSSReport(float(tgap), float(hgap))


@dataclass(frozen=True)
class XiFunction:
    """Samples of ``xi`` on a half-cell-offset grid and Fourier data of ``xi`` and ``xi^2``.

    Fourier coefficients use the normalised measure ``dt / 2 pi``; index
    ``fourier[n]`` is mode ``n`` for ``n >= 0`` and mode ``n - M`` above
    ``M // 2`` (FFT order).
    """

    grid: np.ndarray
    grid_values: np.ndarray
    fourier: np.ndarray
    fourier_sq: np.ndarray

    def coefficient(self, n: int) -> complex:
        return complex(self.fourier[n % len(self.grid)])

    def coefficient_sq(self, n: int) -> complex:
        return complex(self.fourier_sq[n % len(self.grid)])

    def l2_norm(self) -> float:
        return float(np.sqrt(np.mean(np.abs(self.grid_values) ** 2)))


def xi_power_law(exponent: float = -1.0 / 3.0) -> Callable[[np.ndarray], np.ndarray]:
    """``t -> |t|^exponent``.

    In ``L^2`` for ``exponent > -1/2``; the square leaves ``L^2`` once
    ``exponent <= -1/4``.
    """
    return lambda t: np.abs(t) ** exponent


def _xi_from_samples(xi: Callable[[np.ndarray], np.ndarray], M: int) -> XiFunction:
    # t_j = -pi + (j + 1/2) 2pi/M never hits 0 when M is even
    t = -np.pi + (np.arange(M) + 0.5) * 2 * np.pi / M
    v = np.asarray(xi(t), dtype=float) * np.ones_like(t)
    # trapezoid on a periodic grid: c_n = mean(v * exp(-i n t))
    phase = np.exp(1j * np.pi * np.fft.fftfreq(M, 1.0 / M) * (1 - 1.0 / M))
    four = np.fft.fft(v) / M * phase
    four_sq = np.fft.fft(v ** 2) / M * phase
    return XiFunction(t, v, four, four_sq)


@dataclass(frozen=True)
class XiReport:
    xi: XiFunction
    profile: np.ndarray
    strictly_increasing: bool

    def ratio(self, n_hi: int, n_lo: int) -> float:
        return float(self.profile[n_hi] / self.profile[n_lo])


def counterexample_xi(M_grid: int, N_modes: int, xi: Callable | None = None) -> XiReport:
    """Partial sums ``P(N) = sum_{n<=N} |<xi^2, e^{int}>|^2`` for ``N <= N_modes``.

    Default ``xi(t) = |t|^(-1/3)``: in ``L^2`` while ``xi^2`` is not, so the
    partial sums keep growing.
    """
    if M_grid < 8 * N_modes:
        raise ValueError(f"grid of {M_grid} points too coarse for {N_modes} modes")
    if M_grid % 2:
        raise ValueError("M_grid must be even so the grid avoids t = 0")
    xi = xi or xi_power_law()
    data = _xi_from_samples(xi, M_grid)
    c = np.abs(data.fourier_sq[: N_modes + 1]) ** 2
    prof = np.cumsum(c)
    return XiReport(data, prof, bool(np.all(np.diff(prof) > 0)))


@dataclass(frozen=True)
class KernelObstructionReport:
    T: OpMatrix
    X: OpMatrix
    kernel_vector_image: float
    kernel_vector_residual: float
    split: SplitReport
    profile: ZProfile
    xi_orbit_sums: np.ndarray


def kernel_obstruction_example(N: int = 64, M_grid: int | None = None, xi: Callable | None = None,
                     profile_N: int | None = None) -> KernelObstructionReport:
    """``T = S* (+) U`` on ``H^2 (+) L^2`` with ``X(h1 (+) h2) = h1(0) + <h2, xi>``.

    ``1 (+) 0`` spans part of ``ker T`` and ``X`` sends it to 1, so
    ``X`` is not of the form ``L T``; the orbit sums
    ``sum_n |X_2 U^n xi|^2`` grow without bound.
    """
    M_grid = M_grid or max(16 * N, 1024)
    xi = xi or xi_power_law()
    data = _xi_from_samples(xi, M_grid)
    Hs, Ls = hardy(N), lebesgue(N)
    dom = direct_sum(Hs, Ls)
    S, U = shift(Hs).entries, shift(Ls).entries
    T = np.zeros((dom.dim, dom.dim), dtype=complex)
    T[:N + 1, :N + 1] = S.conj().T
    T[N + 1:, N + 1:] = U
    xi_hat = np.array([data.coefficient(n) for n in range(-N, N + 1)])
    x = np.concatenate([np.eye(1, N + 1)[0], xi_hat.conj()])[None, :]
    X = OpMatrix(dom, fiber_space(1), x)
    v = np.zeros(dom.dim, dtype=complex)
    v[0] = 1.0
    pn = profile_N if profile_N is not None else N
    # sum_{n<=K} |X_2 U^n xi|^2 with the truncated U and truncated xi
    u_xi = xi_hat.copy()
    orbit = []
    acc = 0.0
    for _ in range(pn + 1):
        acc += abs(np.vdot(xi_hat, u_xi)) ** 2
        orbit.append(acc)
        u_xi = U @ u_xi
    return KernelObstructionReport(
        T=OpMatrix(dom, dom, T),
        X=X,
        kernel_vector_image=float(abs(x @ v)[0]),
        kernel_vector_residual=float(np.linalg.norm(T @ v)),
        split=membership_split(x, T, 1, pn),
        profile=z_profile(x, T, pn),
        xi_orbit_sums=np.array(orbit),
    )
