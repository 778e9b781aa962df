"""Desk-scale acceptance criteria, one test each, with a wall-clock budget.

Each test appends a ``PASS``/``FAIL`` line to the terminal summary and
prints it, so ``pytest -s tests/test_acceptance.py`` shows the table inline.
"""

import math
import time
from contextlib import contextmanager

import numpy as np

from conftest import ACCEPTANCE_LINES, random_complex, random_contraction
from hilbmod.extensions import block_R, delta_bound_check, delta_X, sylvester_residual
from hilbmod.funcalc import DN_LOG_CONSTANT, FAMILIES, Polynomial, dn_norm_lower_bound, eval_on_operator
from hilbmod.model_space import (ScalarSymbol, build_model_space, decompose_X,
                                 projection_formula_check, range_check, star_power_check)
from hilbmod.pisier import (AlphaSequence, FockTrunc, adjoint_power_gap, car_relations_check,
                            omega_witness, pb_criterion, similarity_criterion)
from hilbmod.zspaces import SymbolCoeffs, counterexample_xi, kernel_obstruction_example, zss_identity_check

XI_RATIO_PIN = 1.963


@contextmanager
def criterion(number: int, name: str, budget: float):
    t0 = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        ok = True
    except AssertionError as e:
        note = f" ({str(e).splitlines()[0][:80]})" if str(e) else ""
        raise
    finally:
        dt = time.perf_counter() - t0
        within = dt < budget
        line = (f"criterion {number} {name}: {'PASS' if ok and within else 'FAIL'} "
                f"[{dt:.2f} s / {budget:g} s]{note}")
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"runtime {dt:.2f} s exceeds {budget} s"


def test_criterion_1_delta_bound():
    with criterion(1, "delta-bound suite", 10):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            n1, n2 = (int(x) for x in rng.integers(1, 13, 2))
            T1, T2 = random_contraction(rng, n1), random_contraction(rng, n2)
            X = random_complex(rng, n1, n2)
            phi = Polynomial(random_complex(rng, int(rng.integers(2, 14))))
            rep = delta_bound_check(phi, T1, X, T2)
            assert rep.passed, f"bound failed: {rep.lhs} > {rep.rhs}"
            top = eval_on_operator(phi, block_R(T1, X, T2)).entries[:n1, n1:]
            assert np.abs(top - delta_X(phi, T1, X, T2).entries).max() <= 1e-10


def test_criterion_2_toeplitz_hankel():
    with criterion(2, "Toeplitz/Hankel identity", 5):
        rng = np.random.default_rng(7)
        for i in range(50):
            f = 1 + i % 2
            n_sym = int(rng.integers(0, 17))
            sym = SymbolCoeffs([random_complex(rng, f, f) / (k + 1) for k in range(n_sym + 1)])
            rep = zss_identity_check(sym, 32, batch=4, seed=i)
            assert max(rep.toeplitz_gap, rep.hankel_gap) <= 1e-10


MODEL_SYMBOLS = {
    "z": ScalarSymbol([0.0]),
    "z^2": ScalarSymbol([0.0, 0.0]),
    "1/2": ScalarSymbol([], 0.5),
    "blaschke": ScalarSymbol([0.3, -0.5j]),
}


def test_criterion_3_model_space():
    with criterion(3, "model-space suite", 30):
        rng = np.random.default_rng(11)
        for name, sym in MODEL_SYMBOLS.items():
            ms = build_model_space(sym, 64)
            rep = projection_formula_check(ms)
            assert max(rep.gap_M, rep.gap_H) <= 1e-8, name
            assert all(range_check(ms, ms.random_h(rng)).consistent for _ in range(20)), name
            for n in range(5):
                assert star_power_check(ms, n, ms.random_h(rng, 6)) <= 1e-8, (name, n)
            X = np.array([ms.random_h(rng) for _ in range(2)]).conj()
            dec = decompose_X(ms, X)
            assert dec.profile1.final <= dec.x_norm + 1e-8, name
            assert dec.factor_residual <= 1e-7, name


def test_criterion_4_car():
    with criterion(4, "CAR suite", 5):
        fock = FockTrunc(4)
        assert fock.total_dim == 30
        rep = car_relations_check(fock, 3)
        assert rep.square_exact
        assert rep.norm_gap <= 1e-12
        assert max(rep.max_anticomm_gap, rep.max_mixed_gap) <= 1e-12
        alpha = AlphaSequence.power_law(1.5)
        for n in (1, 2, 3):
            assert adjoint_power_gap(alpha, 8, fock, n) <= 1e-8


def test_criterion_5_omega_witness():
    with criterion(5, "omega witness", 5):
        rep = omega_witness(FockTrunc(3), AlphaSequence.power_law(1.5), 8)
        assert rep.facts_hold(1e-12)
        assert min(rep.obstruction) >= 0.9


def test_criterion_6_alpha_criteria():
    with criterion(6, "alpha criteria", 10):
        alpha = AlphaSequence.power_law(1.5)
        ks = [2 ** e for e in range(6, 15)]
        sim = np.array([similarity_criterion(alpha, K) for K in ks])
        assert np.all(np.abs(np.diff(sim) / math.log(2) - 1) <= 0.10)
        pb = np.array([pb_criterion(alpha, K, 10 ** 6) for K in ks])
        assert pb.max() / pb.min() - 1 < 0.05


def test_criterion_7_xi_counterexample():
    with criterion(7, "xi counterexample", 10):
        rep = counterexample_xi(32768, 4096)
        assert rep.strictly_increasing
        r = rep.ratio(4096, 128)
        assert r >= 1.5
        assert abs(r / XI_RATIO_PIN - 1) <= 0.10


def test_criterion_8_dn_log_bound():
    with criterion(8, "D^n log bound", 20):
        for e in range(9):
            n = 2 ** e
            b = dn_norm_lower_bound(n, FAMILIES, size=16, seed=0, n_ref=256)
            assert b <= DN_LOG_CONSTANT * (1 + math.log(n)), (n, b)


def test_criterion_9_sylvester():
    with criterion(9, "Sylvester and kernel obstruction", 10):
        rng = np.random.default_rng(99)
        for _ in range(50):
            n1, n2 = (int(x) for x in rng.integers(1, 9, 2))
            T1, T2 = random_complex(rng, n1, n1), random_complex(rng, n2, n2)
            A = random_complex(rng, n1, n2)
            assert sylvester_residual(T1, T2, T1 @ A - A @ T2).residual <= 1e-9
        ex = kernel_obstruction_example(64)
        assert ex.kernel_vector_residual == 0
        assert ex.split.residual_norm >= ex.kernel_vector_image - 1e-8
        assert ex.split.residual_norm > 0.5
