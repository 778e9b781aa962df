"""CAR generators on a truncated Fock space and the block operator ``R(X_alpha)``.

Level ``n`` of the Fock space is ``(C^2)^{(x) n}``, ``n = 1 .. n_max``, stored
level after level in Kronecker order.  The generator ``W_k`` acts on level
``n >= k + 1`` by ``V^{(x) k} (x) D (x) I^{(x) (n-k-1)}`` (a Jordan--Wigner
string) and vanishes on lower levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ConstructionError, ResourceBoundError
from .extensions import membership_split
from .funcalc import pb_constant_estimate
from .spaces import OpMatrix, block_matrix, fiber_space, hardy, op_norm, shift, zeros

__all__ = [
    "FockTrunc",
    "AlphaSequence",
    "car_generator",
    "car_relations_check",
    "hankel_X_alpha",
    "block_R_alpha",
    "adjoint_power_gap",
    "pb_criterion",
    "similarity_criterion",
    "omega_witness",
    "growth_experiment",
    "RESOURCE_BOUND",
]

V = sp.csr_matrix(np.diag([1.0, -1.0]))
D = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))
RESOURCE_BOUND = 100_000
IDENTITY_TOL = 1e-8


@dataclass(frozen=True)
class FockTrunc:
    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be positive")

    @property
    def dims(self) -> list[int]:
        return [2 ** n for n in range(1, self.n_max + 1)]

    @property
    def total_dim(self) -> int:
        return 2 ** (self.n_max + 1) - 2

    def offset(self, level: int) -> int:
        return 2 ** level - 2

    def level_slice(self, level: int) -> slice:
        if not 1 <= level <= self.n_max:
            raise IndexError(f"level {level} outside 1..{self.n_max}")
        return slice(self.offset(level), self.offset(level + 1))

    def flat_index(self, level: int, tensor_index: int) -> int:
        if not 0 <= tensor_index < 2 ** level:
            raise IndexError("tensor index out of range")
        return self.offset(level) + tensor_index

    def level_of(self, flat: int) -> tuple[int, int]:
        level = int(np.floor(np.log2(flat + 2)))
        return level, flat - self.offset(level)

    @property
    def space(self):
        return fiber_space(self.total_dim)


def _kron_chain(factors) -> sp.csr_matrix:
    out = sp.identity(1, format="csr")
    for f in factors:
        out = sp.kron(out, f, format="csr")
    return out


@lru_cache(maxsize=256)
def _generator_dense(k: int, n_max: int) -> np.ndarray:
    fock = FockTrunc(n_max)
    levels = []
    for n in range(1, n_max + 1):
        if n >= k + 1:
            levels.append(_kron_chain([V] * k + [D] + [sp.identity(2)] * (n - k - 1)))
        else:
            levels.append(sp.csr_matrix((2 ** n, 2 ** n)))
    w = sp.block_diag(levels, format="csr").toarray().astype(complex)
    assert w.shape == (fock.total_dim, fock.total_dim)
    w.setflags(write=False)
    return w


def car_generator(k: int, fock: FockTrunc) -> OpMatrix:
    if not 0 <= k <= fock.n_max - 1:
        raise ValueError(f"k={k} outside 0..{fock.n_max - 1}")
    return OpMatrix(fock.space, fock.space, _generator_dense(k, fock.n_max))


@dataclass(frozen=True)
class CARReport:
    max_anticomm_gap: float
    max_mixed_gap: float
    norm_gap: float
    square_exact: bool
    convention: str = ("C_{k,n} = V^(x)k (x) D (x) I^(x)(n-k-1), n >= k+1; "
                       "mixed relation compared with the identity on levels n >= max(j,k)+1")


def _levels_projection(fock: FockTrunc, lowest: int) -> np.ndarray:
    p = np.zeros(fock.total_dim)
    if lowest <= fock.n_max:
        p[fock.offset(lowest):] = 1.0
    return np.diag(p)


def car_relations_check(fock: FockTrunc, k_max: int) -> CARReport:
    """Anticommutation gaps of ``W_0 .. W_{k_max}``.

    ``W_j W_k* + W_k* W_j`` equals ``delta_jk`` times the identity only on
    levels where the generators act; below level ``k + 1`` ``W_k`` is zero, so
    the comparison uses the projection onto levels ``>= max(j, k) + 1``.
    """
    if k_max > fock.n_max - 1:
        raise ValueError("k_max exceeds n_max - 1")
    W = [car_generator(k, fock).entries for k in range(k_max + 1)]
    anti = mixed = ngap = 0.0
    square = True
    for j in range(k_max + 1):
        ngap = max(ngap, abs(op_norm(W[j]) - 1.0))
        square &= not np.any(W[j] @ W[j])
        for k in range(k_max + 1):
            anti = max(anti, op_norm(W[j] @ W[k] + W[k] @ W[j]))
            target = _levels_projection(fock, max(j, k) + 1) if j == k else 0.0
            wk = W[k].conj().T
            mixed = max(mixed, op_norm(W[j] @ wk + wk @ W[j] - target))
    return CARReport(anti, mixed, ngap, bool(square))


@dataclass(frozen=True)
class AlphaSequence:
    """``rule`` is ``"PowerLaw"`` (``param`` = exponent), ``"FiniteSupport"`` (values) or ``"Geometric"`` (ratio)."""

    rule: str
    param: object

    RULES = ("PowerLaw", "FiniteSupport", "Geometric")

    def __post_init__(self):
        if self.rule not in self.RULES:
            raise ValueError(f"unknown alpha rule {self.rule!r}")
        if self.rule == "FiniteSupport":
            object.__setattr__(self, "param", tuple(complex(a) for a in self.param))
            if not all(np.isfinite(a) for a in self.param):
                raise ValueError("alpha values must be finite")

    @classmethod
    def power_law(cls, p: float) -> "AlphaSequence":
        return cls("PowerLaw", float(p))

    @classmethod
    def finite(cls, values: Sequence[complex]) -> "AlphaSequence":
        return cls("FiniteSupport", values)

    @classmethod
    def geometric(cls, ratio: complex) -> "AlphaSequence":
        return cls("Geometric", complex(ratio))

    @classmethod
    def zero(cls) -> "AlphaSequence":
        return cls("FiniteSupport", ())

    def values(self, n: int) -> np.ndarray:
        """``alpha_0 .. alpha_{n-1}``."""
        k = np.arange(n)
        if self.rule == "PowerLaw":
            return (k + 1.0) ** (-self.param) + 0j
        if self.rule == "Geometric":
            return self.param ** k
        out = np.zeros(n, dtype=complex)
        m = min(n, len(self.param))
        out[:m] = self.param[:m]
        return out

    def __call__(self, k: int) -> complex:
        return complex(self.values(k + 1)[k])


def hankel_X_alpha(alpha: AlphaSequence, blocks: int, fock: FockTrunc) -> OpMatrix:
    """Block ``(i, j)`` is ``alpha_{i+j} W_{i+j}``; zero once ``i + j >= n_max``."""
    if blocks < 1:
        raise ValueError("blocks must be positive")
    d = fock.total_dim
    a = alpha.values(2 * blocks)
    x = np.zeros((blocks * d, blocks * d), dtype=complex)
    for i in range(blocks):
        for j in range(blocks):
            if i + j < fock.n_max and a[i + j] != 0:
                x[i * d:(i + 1) * d, j * d:(j + 1) * d] = a[i + j] * _generator_dense(i + j, fock.n_max)
    sp_ = hardy(blocks - 1, d)
    return OpMatrix(sp_, sp_, x)


def zeroed_blocks(blocks: int, fock: FockTrunc) -> int:
    """Number of Hankel positions ``(i, j)`` whose generator index is past the truncation."""
    return sum(1 for i in range(blocks) for j in range(blocks) if i + j >= fock.n_max)


def _R(alpha, blocks, fock) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    X = hankel_X_alpha(alpha, blocks, fock)
    S = shift(X.domain)
    R = block_matrix([[S.H, X], [zeros(S.domain, S.codomain), S]])
    return R.entries, X.entries, S.entries


def adjoint_power_gap(alpha: AlphaSequence, blocks: int, fock: FockTrunc, n: int,
                      batch: int = 4, seed: int = 0) -> float:
    """Max gap between ``R* ^n`` and ``[[S^n, 0], [n X* S^(n-1), S*^n]]`` on interior vectors.

    Test vectors live on the first ``blocks - n`` Hardy blocks of each
    component.
    """
    if n < 1:
        raise ValueError("n must be positive")
    R, X, S = _R(alpha, blocks, fock)
    d, m = fock.total_dim, X.shape[0]
    Sn = np.linalg.matrix_power(S, n)
    ll = n * X.conj().T @ np.linalg.matrix_power(S, n - 1)
    formula = np.block([[Sn, np.zeros_like(Sn)], [ll, Sn.conj().T]])
    lhs = np.linalg.matrix_power(R.conj().T, n)
    rng = np.random.default_rng(seed)
    keep = max(blocks - n, 1) * d
    gap = 0.0
    for _ in range(batch):
        v = np.zeros(2 * m, dtype=complex)
        for off in (0, m):
            v[off:off + keep] = rng.standard_normal(keep) + 1j * rng.standard_normal(keep)
        v /= np.linalg.norm(v)
        gap = max(gap, float(np.linalg.norm((lhs - formula) @ v)))
    return gap


def block_R_alpha(alpha: AlphaSequence, blocks: int, fock: FockTrunc,
                  verify_up_to: int = 3) -> OpMatrix:
    """``R(X_alpha) = [[S*, X_alpha], [0, S]]`` on two copies of ``HardyTrunc(blocks-1) (x) F``.

    The adjoint power formula is checked for ``n <= verify_up_to`` before
    returning.
    """
    X = hankel_X_alpha(alpha, blocks, fock)
    S = shift(X.domain)
    R = block_matrix([[S.H, X], [zeros(S.domain, S.codomain), S]])
    for n in range(1, min(verify_up_to, blocks - 1) + 1):
        gap = adjoint_power_gap(alpha, blocks, fock, n, batch=2)
        if gap > IDENTITY_TOL:
            raise ConstructionError(f"adjoint power identity off by {gap:.3e} at n={n}")
    return R


def pb_criterion(alpha: AlphaSequence, K: int, I_tail: int) -> float:
    """``max_{k <= K} (k+1)^2 sum_{i=k}^{I_tail} |alpha_i|^2``; the tail beyond ``I_tail`` is dropped."""
    if I_tail < K:
        raise ValueError("I_tail must be at least K")
    a2 = np.abs(alpha.values(I_tail + 1)) ** 2
    tails = np.cumsum(a2[::-1])[::-1][: K + 1]
    return float(np.max((np.arange(K + 1) + 1.0) ** 2 * tails))


def similarity_criterion(alpha: AlphaSequence, K: int) -> float:
    a2 = np.abs(alpha.values(K + 1)) ** 2
    return float(np.sum((np.arange(K + 1) + 1.0) ** 2 * a2))


@dataclass(frozen=True)
class OmegaReport:
    star_gaps: float          # max_k>=1 ||W_k* omega||
    hankel_gaps: float        # max_n>=2 ||n X* z^(n-1) omega||
    omega_pairing: float      # Omega(omega (+) 0)
    kernel_gap: float         # ||R (omega (+) 0)||
    w0_star_omega: float      # reported only
    obstruction: tuple[float, ...]
    ladder: tuple[int, ...]

    def facts_hold(self, tol: float = 1e-12) -> bool:
        return (self.star_gaps <= tol and self.hankel_gaps <= tol
                and abs(self.omega_pairing - 1) <= tol and self.kernel_gap <= tol)


def omega_witness(fock: FockTrunc, alpha: AlphaSequence, blocks: int,
                  ladder: Sequence[int] | None = None) -> OmegaReport:
    """Kernel witness ``omega = e_1`` on level 1 and the functional ``Omega``.

    ``obstruction`` lists, for each block count in ``ladder``, the operator
    norm of ``Omega - L R`` for the least-squares ``L``; it cannot drop below
    ``Omega(omega (+) 0) = 1`` since ``omega (+) 0`` lies in ``ker R``.
    """
    if fock.n_max < 2:
        raise ValueError("n_max must be at least 2")
    d = fock.total_dim
    omega = np.zeros(d, dtype=complex)
    omega[fock.flat_index(1, 0)] = 1.0
    star = max((float(np.linalg.norm(car_generator(k, fock).entries.conj().T @ omega))
                for k in range(1, fock.n_max)), default=0.0)
    w0 = float(np.linalg.norm(car_generator(0, fock).entries.conj().T @ omega))

    R, X, _ = _R(alpha, blocks, fock)
    m = X.shape[0]
    hank = 0.0
    for n in range(2, blocks + 1):
        v = np.zeros(m, dtype=complex)
        v[(n - 1) * d:n * d] = omega
        hank = max(hank, float(np.linalg.norm(n * X.conj().T @ v)))

    def functional(size: int) -> np.ndarray:
        w = np.zeros((1, 2 * size * d), dtype=complex)
        w[0, :d] = omega.conj()
        return w

    vec = np.zeros(2 * m, dtype=complex)
    vec[:d] = omega
    pairing = complex((functional(blocks) @ vec)[0])
    kernel = float(np.linalg.norm(R @ vec))

    ladder = tuple(ladder or (max(2, blocks // 2), blocks, 2 * blocks))
    obs = []
    for b in ladder:
        Rb, _, _ = _R(alpha, b, fock)
        obs.append(membership_split(functional(b), Rb, 1, profile_N=4).residual_norm)
    return OmegaReport(star, hank, float(pairing.real), kernel, w0, tuple(obs), ladder)


@dataclass(frozen=True)
class GrowthRow:
    blocks: int
    n_max: int
    d_max: int
    dim: int
    zeroed_blocks: int
    pb_estimate: float
    pb_criterion: float
    similarity_partial: float
    seed: int


def growth_experiment(alpha: AlphaSequence, ladder: Sequence[tuple[int, int, int]], seed: int = 0,
                      samples: int = 16, I_tail: int = 10 ** 6) -> list[GrowthRow]:
    """pb-constant estimates of ``R(X_alpha)`` along a truncation ladder ``(blocks, n_max, d_max)``.

    Criterion columns are evaluated at ``K = n_max - 1``, the last generator
    present in the truncation.  Per-step seeds are spawned from ``seed``.
    """
    for blocks, n_max, _ in ladder:
        size = FockTrunc(n_max).total_dim * blocks
        if size > RESOURCE_BOUND:
            raise ResourceBoundError(f"total_dim * blocks = {size} exceeds {RESOURCE_BOUND}")
    seeds = np.random.SeedSequence(seed).spawn(len(ladder))
    rows = []
    for (blocks, n_max, d_max), ss in zip(ladder, seeds):
        fock = FockTrunc(n_max)
        R = block_R_alpha(alpha, blocks, fock, verify_up_to=0)
        s = int(ss.generate_state(1)[0])
        est = pb_constant_estimate(R, d_max, samples=samples, seed=s)
        rows.append(GrowthRow(blocks, n_max, d_max, R.shape[0], zeroed_blocks(blocks, fock),
                              est.constant_lower_bound, pb_criterion(alpha, n_max - 1, I_tail),
                              similarity_criterion(alpha, n_max - 1), s))
    return rows
