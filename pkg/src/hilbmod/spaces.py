"""Truncated Hardy and Lebesgue spaces and dense operators between them.

Vectors are stored mode-major: the coordinate of fiber index ``f`` at mode
``n`` sits at ``mode_index(n) * fiber_dim + f``.  Hardy truncations carry the
modes ``0..N`` and Lebesgue truncations the modes ``-N..N``.

Shifts are compressions to the truncated space: the top mode is sent to zero
instead of wrapping around.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ShapeError, UnsupportedSpaceError

__all__ = [
    "SpaceKind",
    "SpaceDescriptor",
    "hardy",
    "lebesgue",
    "fiber_space",
    "direct_sum",
    "FourierVector",
    "OpMatrix",
    "as_matrix",
    "as_op",
    "evaluation_at_zero",
    "shift",
    "op_norm",
    "eval_projection",
    "bounded_below_margin",
    "identity",
    "zeros",
    "block_matrix",
]

SVD_RTOL = 1e-12


class SpaceKind(str, Enum):
    HARDY = "HardyTrunc"
    LEBESGUE = "LebesgueTrunc"
    SUM = "DirectSum"


@dataclass(frozen=True)
class SpaceDescriptor:
    """Shape of a truncated function space.

    Parameters
    ----------
    kind : SpaceKind
    degree_bound : int
        ``N``; Hardy spaces keep modes ``0..N``, Lebesgue spaces ``-N..N``.
        Ignored for direct sums.
    fiber_dim : int
        Dimension of the coefficient space.  Ignored for direct sums.
    parts : tuple of SpaceDescriptor
        Summands, only for ``SpaceKind.SUM``.
    """

    kind: SpaceKind
    degree_bound: int = 0
    fiber_dim: int = 1
    parts: tuple["SpaceDescriptor", ...] = ()

    def __post_init__(self):
        if self.kind is SpaceKind.SUM:
            if not self.parts:
                raise ValueError("a direct sum needs at least one part")
        else:
            if self.degree_bound < 0:
                raise ValueError("degree_bound must be nonnegative")
            if self.fiber_dim < 1:
                raise ValueError("fiber_dim must be positive")

    @property
    def n_modes(self) -> int:
        if self.kind is SpaceKind.HARDY:
            return self.degree_bound + 1
        if self.kind is SpaceKind.LEBESGUE:
            return 2 * self.degree_bound + 1
        raise UnsupportedSpaceError("a direct sum has no single mode range")

    @property
    def modes(self) -> np.ndarray:
        """Mode labels in storage order."""
        if self.kind is SpaceKind.HARDY:
            return np.arange(self.degree_bound + 1)
        if self.kind is SpaceKind.LEBESGUE:
            return np.arange(-self.degree_bound, self.degree_bound + 1)
        raise UnsupportedSpaceError("a direct sum has no single mode range")

    @property
    def dim(self) -> int:
        if self.kind is SpaceKind.SUM:
            return sum(p.dim for p in self.parts)
        return self.n_modes * self.fiber_dim

    def mode_index(self, n: int) -> int:
        """Storage position of mode ``n`` (before multiplying by the fiber)."""
        if self.kind is SpaceKind.HARDY:
            if not 0 <= n <= self.degree_bound:
                raise IndexError(f"mode {n} outside 0..{self.degree_bound}")
            return n
        if self.kind is SpaceKind.LEBESGUE:
            if not -self.degree_bound <= n <= self.degree_bound:
                raise IndexError(f"mode {n} outside ±{self.degree_bound}")
            return n + self.degree_bound
        raise UnsupportedSpaceError("a direct sum has no single mode range")

    def mode_slice(self, n: int) -> slice:
        i = self.mode_index(n) * self.fiber_dim
        return slice(i, i + self.fiber_dim)

    def offsets(self) -> list[int]:
        """Starting coordinates of the summands of a direct sum."""
        if self.kind is not SpaceKind.SUM:
            return [0]
        out, acc = [], 0
        for p in self.parts:
            out.append(acc)
            acc += p.dim
        return out


def hardy(N: int, fiber_dim: int = 1) -> SpaceDescriptor:
    return SpaceDescriptor(SpaceKind.HARDY, N, fiber_dim)


def lebesgue(N: int, fiber_dim: int = 1) -> SpaceDescriptor:
    return SpaceDescriptor(SpaceKind.LEBESGUE, N, fiber_dim)


def fiber_space(dim: int) -> SpaceDescriptor:
    """A plain ``C^dim``, modelled as the constants of ``H^2(C^dim)``."""
    return SpaceDescriptor(SpaceKind.HARDY, 0, dim)


def direct_sum(*parts: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor(SpaceKind.SUM, parts=tuple(parts))


@dataclass(frozen=True)
class FourierVector:
    """An element of a truncated Hardy or Lebesgue space.

    ``coeffs[i]`` is the fiber vector at mode ``space.modes[i]``.
    """

    space: SpaceDescriptor
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        if c.shape != (self.space.n_modes, self.space.fiber_dim):
            raise ShapeError(
                f"coeffs shape {c.shape} does not match "
                f"({self.space.n_modes}, {self.space.fiber_dim})"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_dense(cls, space: SpaceDescriptor, v) -> "FourierVector":
        v = np.asarray(v, dtype=complex)
        return cls(space, v.reshape(space.n_modes, space.fiber_dim))

    def to_dense(self) -> np.ndarray:
        return self.coeffs.reshape(-1).copy()

    def coefficient(self, n: int) -> np.ndarray:
        return self.coeffs[self.space.mode_index(n)]

    def inner(self, other: "FourierVector") -> complex:
        """``<self, other>``, linear in the first slot, summed mode by mode."""
        if other.space != self.space:
            raise ShapeError("vectors live in different spaces")
        return complex(sum(np.vdot(g, h) for h, g in zip(self.coeffs, other.coeffs)))

    def norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(h, h).real for h in self.coeffs)))


@dataclass(frozen=True)
class OpMatrix:
    """A dense complex matrix together with its domain and codomain."""

    domain: SpaceDescriptor
    codomain: SpaceDescriptor
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape != (self.codomain.dim, self.domain.dim):
            raise ShapeError(
                f"entries of shape {a.shape} do not fit "
                f"{self.codomain.dim} x {self.domain.dim}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def wrap(cls, a) -> "OpMatrix":
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        return cls(fiber_space(a.shape[1]), fiber_space(a.shape[0]), a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    @property
    def H(self) -> "OpMatrix":
        return OpMatrix(self.codomain, self.domain, self.entries.conj().T)

    def adjoint(self) -> "OpMatrix":
        return self.H

    def __matmul__(self, other):
        if isinstance(other, OpMatrix):
            if other.codomain.dim != self.domain.dim:
                raise ShapeError(f"cannot compose {self.shape} with {other.shape}")
            return OpMatrix(other.domain, self.codomain, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        if other.shape != self.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return OpMatrix(self.domain, self.codomain, self.entries + other.entries)

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        if other.shape != self.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        return OpMatrix(self.domain, self.codomain, self.entries - other.entries)

    def __neg__(self) -> "OpMatrix":
        return OpMatrix(self.domain, self.codomain, -self.entries)

    def __mul__(self, c) -> "OpMatrix":
        return OpMatrix(self.domain, self.codomain, c * self.entries)

    __rmul__ = __mul__

    def apply(self, v: FourierVector) -> FourierVector:
        if v.space != self.domain:
            raise ShapeError("vector is not in the operator's domain")
        return FourierVector.from_dense(self.codomain, self.entries @ v.to_dense())


def as_matrix(a) -> np.ndarray:
    """Dense ndarray view of an ``OpMatrix`` or array-like."""
    if isinstance(a, OpMatrix):
        return a.entries
    return np.atleast_2d(np.asarray(a, dtype=complex))


def as_op(a) -> OpMatrix:
    return a if isinstance(a, OpMatrix) else OpMatrix.wrap(a)


def identity(space: SpaceDescriptor) -> OpMatrix:
    return OpMatrix(space, space, np.eye(space.dim))


def zeros(domain: SpaceDescriptor, codomain: SpaceDescriptor) -> OpMatrix:
    return OpMatrix(domain, codomain, np.zeros((codomain.dim, domain.dim)))


def block_matrix(rows: Sequence[Sequence[OpMatrix]]) -> OpMatrix:
    """Assemble an operator on direct sums from a grid of blocks."""
    domains = [b.domain for b in rows[0]]
    codomains = [r[0].codomain for r in rows]
    for i, r in enumerate(rows):
        for j, b in enumerate(r):
            if b.domain.dim != domains[j].dim or b.codomain.dim != codomains[i].dim:
                raise ShapeError(f"block ({i}, {j}) has shape {b.shape}")
    dom = domains[0] if len(domains) == 1 else direct_sum(*domains)
    cod = codomains[0] if len(codomains) == 1 else direct_sum(*codomains)
    return OpMatrix(dom, cod, np.block([[b.entries for b in r] for r in rows]))


def shift(space: SpaceDescriptor) -> OpMatrix:
    """Multiplication by the variable, compressed to the truncated space.

    Mode ``n`` goes to ``n + 1``; the top mode ``N`` goes to zero.  The same
    rule applies on Lebesgue truncations, where the bottom mode ``-N`` is not
    hit and ``N`` is killed.
    """
    if space.kind is SpaceKind.SUM:
        raise UnsupportedSpaceError("shift is defined on Hardy or Lebesgue truncations only")
    m, f = space.n_modes, space.fiber_dim
    a = np.kron(np.eye(m, k=-1), np.eye(f))
    return OpMatrix(space, space, a)


def op_norm(a) -> float:
    """Largest singular value."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def eval_projection(space: SpaceDescriptor, target: str = "ConstantFunctions") -> OpMatrix:
    """Orthogonal projection of a Hardy truncation onto the constants."""
    if target != "ConstantFunctions":
        raise ValueError(f"unknown projection target {target!r}")
    if space.kind is not SpaceKind.HARDY:
        raise UnsupportedSpaceError("evaluation at 0 needs a Hardy space")
    a = np.zeros((space.dim, space.dim))
    s = space.mode_slice(0)
    a[s, s] = np.eye(space.fiber_dim)
    return OpMatrix(space, space, a)


def evaluation_at_zero(space: SpaceDescriptor) -> OpMatrix:
    """``h -> h(0)`` as an operator into the fiber ``C^fiber_dim``."""
    if space.kind is not SpaceKind.HARDY:
        raise UnsupportedSpaceError("evaluation at 0 needs a Hardy space")
    a = np.zeros((space.fiber_dim, space.dim))
    a[:, space.mode_slice(0)] = np.eye(space.fiber_dim)
    return OpMatrix(space, fiber_space(space.fiber_dim), a)


def bounded_below_margin(t) -> float:
    """Smallest singular value of a square operator."""
    a = as_matrix(t)
    if a.shape[0] != a.shape[1]:
        raise ShapeError("bounded_below_margin needs a square operator")
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[-1])
