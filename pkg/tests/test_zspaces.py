import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_complex
from hilbmod.spaces import shift
from hilbmod.zspaces import (SymbolCoeffs, counterexample_xi, hankel_matrix, row_operator,
                             kernel_obstruction_example, toeplitz_matrix, xi_power_law, zss_identity_check,
                             _xi_from_samples)

XI_RATIO_PIN = 1.963  # profile(4096) / profile(128) at the default grid, frozen +-10%


def exact_xi_sq_coefficient(n: int, s: float = 1.0 / 3.0) -> float:
    """Mode ``n`` of ``|t|^(s-1)`` on ``(-pi, pi]`` for the measure ``dt / 2pi``."""
    if n == 0:
        return float(mpmath.pi ** s / (s * mpmath.pi))
    g = mpmath.gammainc(s, 0, -1j * abs(n) * mpmath.pi)
    return float(mpmath.re(mpmath.exp(1j * mpmath.pi * s / 2) * g) / mpmath.pi * abs(n) ** (-s))


def test_toeplitz_examples():
    I2 = np.eye(2)
    assert np.array_equal(toeplitz_matrix(SymbolCoeffs([I2]), 3).entries, np.eye(8))
    T = toeplitz_matrix(SymbolCoeffs.scalar([0, 1]), 3).entries
    assert np.array_equal(T, shift(toeplitz_matrix(SymbolCoeffs.scalar([1]), 3).domain).entries.T)
    T = toeplitz_matrix(SymbolCoeffs.scalar([1, 0.5, 0.25]), 2).entries
    assert np.allclose(T, [[1, 0.5, 0.25], [0, 1, 0.5], [0, 0, 1]])


def test_hankel_examples():
    H = hankel_matrix(SymbolCoeffs([np.eye(2)]), 2).entries
    assert np.array_equal(H[:2, :2], np.eye(2)) and np.count_nonzero(H) == 2
    H = hankel_matrix(SymbolCoeffs.scalar([0, 0, 1]), 2).entries
    assert np.array_equal(H, np.fliplr(np.eye(3)))


def test_hankel_from_xi_matches_double_sum(rng):
    N = 12
    xi = _xi_from_samples(xi_power_law(), 1024)
    coeffs = [xi.coefficient(n).conjugate() for n in range(2 * N + 1)]
    H = hankel_matrix(SymbolCoeffs.scalar(coeffs), N).entries
    h = random_complex(rng, N + 1)
    direct = [sum(h[m] * np.conj(xi.coefficient(m + n)) for m in range(N + 1)) for n in range(N + 1)]
    assert np.allclose(H @ h, direct)


def test_symbol_shapes_validated():
    with pytest.raises(ValueError):
        SymbolCoeffs([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        SymbolCoeffs([])


def test_zss_identity_trivial_symbol():
    rep = zss_identity_check(SymbolCoeffs([np.eye(2)]), 8)
    assert rep.toeplitz_gap <= 1e-12 and rep.hankel_gap <= 1e-12


def test_zss_rejects_long_symbol():
    with pytest.raises(ValueError):
        zss_identity_check(SymbolCoeffs.scalar(np.ones(10)), 16)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 2))
def test_zss_identities_exact(seed, f):
    rng = np.random.default_rng(seed)
    n_sym = int(rng.integers(0, 9))
    sym = SymbolCoeffs([random_complex(rng, f, f) for _ in range(n_sym + 1)])
    rep = zss_identity_check(sym, 16, batch=3, seed=seed % 997)
    assert rep.toeplitz_gap <= 1e-10 and rep.hankel_gap <= 1e-10


def test_row_operator_is_the_symbol_functional(rng):
    sym = SymbolCoeffs.scalar([1, 2, 3])
    h = random_complex(rng, 6)
    assert row_operator(sym, 5).entries @ h == pytest.approx(h[0] + 2 * h[1] + 3 * h[2])


@given(st.integers(0, 2 ** 32 - 1))
def test_hankel_intertwining_on_interior(seed):
    rng = np.random.default_rng(seed)
    n_sym, N = 6, 10
    sym = SymbolCoeffs([random_complex(rng, 2, 2) for _ in range(n_sym + 1)])
    H = hankel_matrix(sym, N).entries
    S = shift(hankel_matrix(sym, N).domain).entries
    gap = S.conj().T @ H - H @ S
    # blocks (n, m) with n + m + 1 <= n_sym see no truncation
    for n in range(N + 1):
        for m in range(N + 1):
            if n + m + 1 <= n_sym:
                assert np.abs(gap[2 * n:2 * n + 2, 2 * m:2 * m + 2]).max() <= 1e-12


def test_xi_grid_avoids_zero_and_xi_is_square_integrable():
    xi = _xi_from_samples(xi_power_law(), 4096)
    assert np.all(xi.grid != 0) and np.all(xi.grid_values > 0)
    # ||xi||^2 is the mode-0 coefficient of xi^2
    assert xi.l2_norm() ** 2 == pytest.approx(exact_xi_sq_coefficient(0), rel=0.05)


def test_xi_control_constant_function():
    rep = counterexample_xi(4096, 256, xi=lambda t: np.ones_like(t))
    assert np.allclose(rep.profile, 1.0)
    assert not rep.strictly_increasing


def test_xi_grid_preconditions():
    with pytest.raises(ValueError):
        counterexample_xi(1000, 128)
    with pytest.raises(ValueError):
        counterexample_xi(8 * 129 + 1, 129)


def test_quadrature_misses_a_constant_singular_mass():
    xi = _xi_from_samples(xi_power_law(), 32768)
    deficit = [exact_xi_sq_coefficient(n) - xi.coefficient_sq(n).real for n in (0, 1, 2, 5, 8, 16, 32)]
    assert 0 < deficit[0] < 0.03
    assert np.ptp(deficit) <= 1e-3


def test_xi_profile_strictly_increasing_with_pinned_ratio():
    rep = counterexample_xi(32768, 4096)
    assert rep.strictly_increasing
    r = rep.ratio(4096, 128)
    assert r >= 1.5
    assert abs(r / XI_RATIO_PIN - 1) <= 0.10


def test_exact_profile_grows_faster_than_quadrature():
    exact = np.cumsum([exact_xi_sq_coefficient(n) ** 2 for n in range(1025)])
    quad = counterexample_xi(32768, 1024).profile
    assert exact[1024] / exact[128] > quad[1024] / quad[128] > 1.0


def test_kernel_obstruction_example():
    rep = kernel_obstruction_example(32)
    assert rep.kernel_vector_image == pytest.approx(1.0)
    assert rep.kernel_vector_residual == 0.0
    assert rep.split.residual_norm >= 1 - 1e-8
    assert not rep.profile.is_flat()
    assert np.all(np.diff(rep.xi_orbit_sums) >= 0)
