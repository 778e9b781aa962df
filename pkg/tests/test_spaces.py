import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_complex, random_unitary
from hilbmod.errors import ShapeError, UnsupportedSpaceError
from hilbmod.spaces import (FourierVector, OpMatrix, SpaceKind, bounded_below_margin, direct_sum,
                            eval_projection, fiber_space, hardy, identity, lebesgue, op_norm, shift)


def test_dimensions_of_each_kind():
    assert hardy(4, 3).dim == 15
    assert lebesgue(4, 3).dim == 27
    assert direct_sum(hardy(4), lebesgue(2)).dim == 5 + 5
    assert fiber_space(7).dim == 7


def test_lebesgue_modes_are_symmetric():
    assert list(lebesgue(2).modes) == [-2, -1, 0, 1, 2]
    assert hardy(2).kind is SpaceKind.HARDY


def test_shift_on_three_modes_kills_the_top():
    S = shift(hardy(2)).entries
    assert np.array_equal(S @ np.eye(3)[0], np.eye(3)[1])
    assert np.array_equal(S @ np.eye(3)[1], np.eye(3)[2])
    assert not np.any(S @ np.eye(3)[2])


def test_shift_norm_and_defect():
    assert op_norm(shift(hardy(8))) == pytest.approx(1.0, abs=1e-12)
    S = shift(hardy(2)).entries
    assert np.array_equal(S.conj().T @ S, np.diag([1, 1, 0]))


def test_lebesgue_shift_drops_mode_N():
    U = shift(lebesgue(2)).entries
    e_top = np.zeros(5)
    e_top[-1] = 1
    assert not np.any(U @ e_top)
    e_m2 = np.zeros(5)
    e_m2[0] = 1
    assert np.array_equal(U @ e_m2, np.eye(5)[1])


def test_shift_of_direct_sum_is_unsupported():
    with pytest.raises(UnsupportedSpaceError):
        shift(direct_sum(hardy(2), hardy(2)))


@pytest.mark.parametrize("a, expected", [(np.eye(5), 1.0), (np.zeros((3, 3)), 0.0),
                                         (np.diag([3.0, 1.0]), 3.0)])
def test_op_norm_examples(a, expected):
    assert op_norm(a) == pytest.approx(expected, abs=1e-12)


def test_eval_projection():
    P = eval_projection(hardy(3)).entries
    h = np.arange(1, 5) + 0j
    assert np.allclose(P @ h, [1, 0, 0, 0])
    assert np.allclose(P @ P, P) and np.allclose(P, P.conj().T)
    S = shift(hardy(3)).entries
    assert not np.any(P @ S @ np.array([1, 2, 3, 0]))
    with pytest.raises(UnsupportedSpaceError):
        eval_projection(lebesgue(3))


@pytest.mark.parametrize("a, expected", [(np.eye(4), 1.0), (shift(hardy(2)).entries, 0.0),
                                         (np.diag([2.0, 0.5]), 0.5)])
def test_bounded_below_margin(a, expected):
    assert bounded_below_margin(a) == pytest.approx(expected, abs=1e-12)


def test_opmatrix_rejects_wrong_shape():
    with pytest.raises(ShapeError):
        OpMatrix(hardy(2), hardy(3), np.zeros((3, 3)))


def test_opmatrix_is_read_only():
    A = identity(hardy(2))
    with pytest.raises(ValueError):
        A.entries[0, 0] = 5


@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 6), st.integers(1, 3))
def test_parseval(seed, N, f):
    rng = np.random.default_rng(seed)
    sp = lebesgue(N, f)
    h = FourierVector.from_dense(sp, random_complex(rng, sp.dim))
    g = FourierVector.from_dense(sp, random_complex(rng, sp.dim))
    modewise = sum(np.vdot(g.coefficient(n), h.coefficient(n)) for n in sp.modes)
    assert abs(h.inner(g) - modewise) <= 1e-12 * (1 + abs(modewise))
    assert abs(h.inner(g) - np.vdot(g.to_dense(), h.to_dense())) <= 1e-12 * (1 + abs(modewise))
    assert h.norm() ** 2 == pytest.approx(sum(np.linalg.norm(h.coefficient(n)) ** 2 for n in sp.modes))


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 8), st.integers(1, 3))
def test_shift_isometric_below_top_mode(seed, N, f):
    rng = np.random.default_rng(seed)
    sp = hardy(N, f)
    h = random_complex(rng, sp.dim)
    h[sp.mode_slice(N)] = 0
    assert np.linalg.norm(shift(sp).entries @ h) == pytest.approx(np.linalg.norm(h), rel=1e-12)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 7))
def test_op_norm_unitarily_invariant_and_submultiplicative(seed, n):
    rng = np.random.default_rng(seed)
    A, B = random_complex(rng, n, n), random_complex(rng, n, n)
    U, V = random_unitary(rng, n), random_unitary(rng, n)
    assert op_norm(U @ A @ V) == pytest.approx(op_norm(A), rel=1e-10)
    assert op_norm(A @ B) <= op_norm(A) * op_norm(B) * (1 + 1e-12)


@given(st.integers(0, 2 ** 32 - 1))
def test_double_adjoint(seed):
    rng = np.random.default_rng(seed)
    A = OpMatrix(hardy(2), lebesgue(1), random_complex(rng, 3, 3))
    assert np.array_equal(A.H.H.entries, A.entries)
    assert A.H.domain == A.codomain
