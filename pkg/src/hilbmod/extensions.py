"""Block operators, commutator sums and Z-membership profiles.

An operator ``X : H -> E`` belongs to ``Z_E(T)`` when the orbit map
``h -> (X h, X T h, X T^2 h, ...)`` is bounded.  At a finite truncation we
can only record the norms of its partial stacks; a profile that stops
growing after a burn-in is the finite surrogate for membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConstructionError, HypothesisFailure, ShapeError
from .funcalc import SAFETY_FACTOR, Polynomial, sup_norm_estimate
from .spaces import (OpMatrix, as_matrix, as_op, block_matrix, fiber_space, hardy,
                     op_norm)

__all__ = [
    "ZProfile",
    "LambdaStack",
    "delta_X",
    "block_R",
    "delta_bound_check",
    "z_profile",
    "build_lambda",
    "innercrit_reduce",
    "membership_split",
    "sylvester_residual",
    "sa_split",
    "powers",
]

FLAT_TOL = 1e-6
BURN_IN = 8


def powers(T, n: int) -> list[np.ndarray]:
    """``[I, T, ..., T^n]``."""
    t = as_matrix(T)
    out = [np.eye(t.shape[1], dtype=complex)]
    for _ in range(n):
        out.append(out[-1] @ t)
    return out


def _check_square(t: np.ndarray, name: str):
    if t.shape[0] != t.shape[1]:
        raise ShapeError(f"{name} must be square, got {t.shape}")


def _check_block_shapes(t1, x, t2):
    _check_square(t1, "T1")
    _check_square(t2, "T2")
    if x.shape != (t1.shape[0], t2.shape[0]):
        raise ShapeError(f"X must map dom(T2) -> cod(T1); got {x.shape} "
                         f"for T1 {t1.shape}, T2 {t2.shape}")


def delta_X(phi: Polynomial, T1, X, T2) -> OpMatrix:
    """``sum_{k>=1} a_k sum_{j<k} T1^j X T2^(k-1-j)``."""
    t1, x, t2 = as_matrix(T1), as_matrix(X), as_matrix(T2)
    _check_block_shapes(t1, x, t2)
    d = phi.degree
    p1, p2 = powers(t1, max(d - 1, 0)), powers(t2, max(d - 1, 0))
    out = np.zeros_like(x, dtype=complex)
    for k in range(1, d + 1):
        a = phi.coeffs[k]
        if a == 0:
            continue
        out += a * sum(p1[j] @ x @ p2[k - 1 - j] for j in range(k))
    if isinstance(X, OpMatrix):
        return OpMatrix(X.domain, X.codomain, out)
    return OpMatrix.wrap(out)


def block_R(T1, X, T2) -> OpMatrix:
    """``[[T1, X], [0, T2]]``."""
    t1, t2 = as_op(T1), as_op(T2)
    x = X if isinstance(X, OpMatrix) else OpMatrix(t2.domain, t1.codomain, as_matrix(X))
    _check_block_shapes(t1.entries, x.entries, t2.entries)
    zero = OpMatrix(t1.domain, t2.codomain, np.zeros((t2.shape[0], t1.shape[1])))
    return block_matrix([[t1, x], [zero, t2]])


@dataclass(frozen=True)
class DeltaBoundReport:
    lhs: float
    rhs: float
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def delta_bound_check(phi: Polynomial, T1, X, T2, C1: float = 1.0, C2: float = 1.0
                      ) -> DeltaBoundReport:
    """Compare ``||delta_X(phi)||`` with ``C1 C2 d(d+1)/2 ||X|| ||phi||_inf``.

    ``C1`` and ``C2`` must bound ``||T1^j||`` and ``||T2^j||`` for ``j < d``
    (1 for contractions).  The sampled sup norm is inflated by
    :data:`~hilbmod.funcalc.SAFETY_FACTOR`.
    """
    d = phi.degree
    lhs = op_norm(delta_X(phi, T1, X, T2))
    rhs = (C1 * C2 * d * (d + 1) / 2 * op_norm(X)
           * sup_norm_estimate(phi) * SAFETY_FACTOR)
    return DeltaBoundReport(lhs, rhs, lhs <= rhs)


@dataclass(frozen=True)
class ZProfile:
    """Norms ``zeta_n`` of the stacked orbit maps ``h -> (X T^k h)_{k<=n}``."""

    values: np.ndarray
    truncation: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    @property
    def final(self) -> float:
        return float(self.values[-1])

    def is_flat(self, tol: float = FLAT_TOL, burn_in: int = BURN_IN) -> bool:
        """Relative growth after ``burn_in`` stays within ``tol``."""
        v = self.values
        if len(v) <= burn_in + 1:
            burn_in = 0
        ref = v[burn_in]
        scale = max(abs(v[-1]), 1e-300)
        return bool((v[-1] - ref) <= tol * scale)

    def growth(self) -> float:
        """Ratio of the last entry to the first nonzero one."""
        nz = self.values[self.values > 0]
        return float(self.values[-1] / nz[0]) if nz.size else 1.0


def z_profile(X, T, N: int) -> ZProfile:
    """Profile ``zeta_0 <= ... <= zeta_N`` with ``zeta_n^2 = lambda_max(sum_{k<=n} T*^k X*X T^k)``."""
    x, t = as_matrix(X), as_matrix(T)
    _check_square(t, "T")
    if x.shape[1] != t.shape[0]:
        raise ShapeError("X must be defined on the space T acts on")
    if N < 0:
        raise ValueError("N must be nonnegative")
    gram = np.zeros((t.shape[0], t.shape[0]), dtype=complex)
    xt = x.copy()
    vals = []
    for _ in range(N + 1):
        gram += xt.conj().T @ xt
        lam = np.linalg.eigvalsh(gram)[-1] if gram.size else 0.0
        vals.append(np.sqrt(max(lam, 0.0)))
        xt = xt @ t
    # eigvalsh roundoff can break monotonicity at the 1e-16 level
    return ZProfile(np.maximum.accumulate(vals), N)


@dataclass(frozen=True)
class LambdaStack:
    """Rows ``L_0 .. L_N`` and the stacked operator ``h -> sum z^n L_n h``."""

    rows: tuple[np.ndarray, ...]
    operator: OpMatrix = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.rows) - 1


def build_lambda(X_rows: Sequence, T, L, N: int, tol: float = 1e-10) -> LambdaStack:
    """Rows ``L_0 = -L``, ``L_n = sum_{j<n} X_{n-1-j} T^j - L T^n``.

    The commutator relation ``X_n = L_{n+1} - L_n T`` is verified for
    ``n < N`` before returning.
    """
    t, l = as_matrix(T), as_matrix(L)
    _check_square(t, "T")
    xs = [as_matrix(x) for x in X_rows]
    if len(xs) < N:
        raise ShapeError(f"need at least {N} rows X_0..X_(N-1), got {len(xs)}")
    for x in xs:
        if x.shape != l.shape or x.shape[1] != t.shape[0]:
            raise ShapeError("X_n and L must all map dom(T) -> E")
    tp = powers(t, N)
    rows = [-l]
    for n in range(1, N + 1):
        rows.append(sum(xs[n - 1 - j] @ tp[j] for j in range(n)) - l @ tp[n])
    scale = max(1.0, max((np.abs(x).max() for x in xs), default=0.0), np.abs(l).max(initial=0.0))
    for n in range(N):
        gap = np.abs(rows[n + 1] - rows[n] @ t - xs[n]).max()
        if gap > tol * scale * (n + 1):
            raise ConstructionError(f"X_{n} != L_{n+1} - L_{n} T (gap {gap:.3e})")
    e = l.shape[0]
    stacked = np.vstack(rows)
    op = OpMatrix(fiber_space(t.shape[0]), hardy(N, e), stacked)
    return LambdaStack(tuple(rows), op)


def innercrit_reduce(X_rows: Sequence, T, N: int, tol: float = 1e-8) -> np.ndarray:
    """``Y = sum_{j<N} X_j T^(N-1-j)`` under the hypothesis ``S*^N X T^N = 0``.

    The hypothesis reads ``X_n T^N = 0`` for every supplied row ``n >= N``.
    """
    t = as_matrix(T)
    _check_square(t, "T")
    xs = [as_matrix(x) for x in X_rows]
    if len(xs) < N:
        raise ShapeError(f"need at least {N} rows")
    tp = powers(t, N)
    tail = [x @ tp[N] for x in xs[N:]]
    resid = op_norm(np.vstack(tail)) if tail else 0.0
    if resid > tol:
        raise HypothesisFailure(f"S*^N X T^N != 0 (residual {resid:.3e})")
    if N == 0:
        return np.zeros((xs[0].shape[0] if xs else 0, t.shape[0]), dtype=complex)
    return sum(xs[j] @ tp[N - 1 - j] for j in range(N))


@dataclass(frozen=True)
class SplitReport:
    L: np.ndarray
    residual: np.ndarray
    residual_norm: float
    residual_profile: ZProfile


def membership_split(Y, T, N_power: int = 1, profile_N: int = 16) -> SplitReport:
    """Least-squares ``L`` for ``Y ~ L T^N`` and the Z-profile of the remainder.

    ``L = Y pinv(T^N)`` minimises the Frobenius norm of ``Y - L T^N``.  A flat
    remainder profile certifies ``Y in B T^N + Z(T)`` at this truncation.
    """
    y, t = as_matrix(Y), as_matrix(T)
    _check_square(t, "T")
    tn = np.linalg.matrix_power(t, N_power)
    L = y @ np.linalg.pinv(tn, rcond=1e-12)
    r = y - L @ tn
    return SplitReport(L, r, op_norm(r), z_profile(r, t, profile_N))


@dataclass(frozen=True)
class SylvesterReport:
    L: np.ndarray
    residual: float


def sylvester_residual(T1, T2, X) -> SylvesterReport:
    """Least-squares solution of ``T1 L - L T2 = X`` via the Kronecker form.

    ``vec(T1 L - L T2) = (I (x) T1 - T2^T (x) I) vec(L)`` with column-major
    ``vec``; the returned residual is the Frobenius norm of the misfit.
    """
    t1, t2, x = as_matrix(T1), as_matrix(T2), as_matrix(X)
    _check_block_shapes(t1, x, t2)
    m, n = x.shape
    K = np.kron(np.eye(n), t1) - np.kron(t2.T, np.eye(m))
    b = x.reshape(-1, order="F")
    sol, *_ = np.linalg.lstsq(K, b, rcond=None)
    L = sol.reshape((m, n), order="F")
    res = float(np.linalg.norm(t1 @ L - L @ t2 - x))
    return SylvesterReport(L, res)


@dataclass(frozen=True)
class SASplitReport:
    X1: np.ndarray
    X2: np.ndarray
    kernel_dim: int
    inclusion_residuals: tuple[float, float]
    x2_powers: tuple[float, ...]
    x1_split: SplitReport


def sa_split(T, X, K: int = 8, tol: float = 1e-8, rank_tol: float = 1e-10) -> SASplitReport:
    """``X = X P_{(ker T)^perp} + X P_{ker T}`` for ``T H c (ker T)^perp c T* H``.

    Certificates: ``||X2 T^k||`` for ``k = 1..K`` (all zero when the first
    inclusion holds) and the membership split of ``X1`` against ``T``.
    """
    t, x = as_matrix(T), as_matrix(X)
    _check_square(t, "T")
    n = t.shape[0]
    u, s, vh = np.linalg.svd(t)
    r = int(np.sum(s > rank_tol * max(1.0, s[0] if s.size else 0.0)))
    ker = vh[r:].conj().T
    p_ker = ker @ ker.conj().T
    p_perp = np.eye(n) - p_ker
    ran_t = u[:, :r]
    ran_tstar = vh[:r].conj().T
    # T H c (ker T)^perp, and (ker T)^perp c T* H
    inc1 = op_norm(p_ker @ ran_t) if r else 0.0
    inc2 = op_norm((np.eye(n) - ran_tstar @ ran_tstar.conj().T) @ p_perp)
    if max(inc1, inc2) > tol:
        raise HypothesisFailure(f"range inclusions fail (residuals {inc1:.3e}, {inc2:.3e})")
    x1, x2 = x @ p_perp, x @ p_ker
    tp = powers(t, K)
    x2p = tuple(op_norm(x2 @ tp[k]) for k in range(1, K + 1))
    return SASplitReport(x1, x2, n - r, (inc1, inc2), x2p, membership_split(x1, t, 1, K))
