"""Matrix kernel tests: eigensolves, Lyapunov equations, derived scalars."""

import math

import numpy as np
import pytest

from gramsel.exceptions import (
    LyapunovResidualError,
    NotPositiveDefiniteError,
    UnstableSystemError,
)
from gramsel.linalg import (
    LyapunovSolver,
    log_det,
    numerical_rank,
    rank_from_spectrum,
    solve_lyapunov,
    spectral_abscissa,
    sym_eigh,
    sym_eigenvalues,
    trace_inverse,
)

from .oracles import (
    abscissa_by_charpoly,
    gramian_by_quadrature,
    random_spd,
    random_stable_matrix,
    random_symmetric,
)


class TestSymEigenvalues:
    def test_identity(self):
        assert np.allclose(sym_eigenvalues(np.eye(2)), [1.0, 1.0])

    def test_diagonal_descending(self):
        vals = sym_eigenvalues(np.diag([3.0, -1.0]))
        assert vals.tolist() == [3.0, -1.0]

    def test_trace_det_oracle(self):
        rng = np.random.default_rng(42)
        m = random_symmetric(rng, 6)
        vals = sym_eigenvalues(m)
        assert abs(vals.sum() - np.trace(m)) <= 1e-10 * max(1, abs(np.trace(m)))
        det = np.linalg.det(m)
        assert abs(np.prod(vals) - det) <= 1e-8 * abs(det)

    def test_reconstruction(self):
        rng = np.random.default_rng(7)
        m = random_symmetric(rng, 8)
        vals, vecs = sym_eigh(m)
        rebuilt = vecs @ np.diag(vals) @ vecs.T
        assert np.max(np.abs(rebuilt - m)) <= 1e-10 * max(1, np.max(np.abs(m)))
        assert np.all(np.diff(vals) <= 1e-14)

    def test_similarity_invariance_under_permutation(self):
        rng = np.random.default_rng(3)
        m = random_symmetric(rng, 7)
        base = sym_eigenvalues(m)
        for _ in range(50):
            perm = rng.permutation(7)
            p = np.eye(7)[perm]
            vals = sym_eigenvalues(p.T @ m @ p)
            assert np.max(np.abs(vals - base)) <= 1e-10

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="not symmetric"):
            sym_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_symmetrizes_roundoff(self):
        m = np.array([[1.0, 0.5 + 1e-15], [0.5, 2.0]])
        vals = sym_eigenvalues(m)
        assert vals.shape == (2,)


class TestLyapunov:
    def test_scalar(self):
        w = solve_lyapunov(np.array([[-1.0]]), np.array([[1.0]]))
        assert abs(w[0, 0] - 0.5) < 1e-14

    def test_decoupled_diagonal(self):
        w = solve_lyapunov(-np.eye(2), np.eye(2))
        assert np.allclose(w, 0.5 * np.eye(2), atol=1e-13)

    def test_quadrature_oracle(self):
        rng = np.random.default_rng(11)
        a = random_stable_matrix(rng, 4)
        b = rng.standard_normal(4)
        q = np.outer(b, b)
        w = solve_lyapunov(a, q)
        ref = gramian_by_quadrature(a, q)
        assert np.max(np.abs(w - ref)) <= 1e-6 * np.max(np.abs(ref))

    def test_residual_contract(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(2, 12))
            a = random_stable_matrix(rng, n, margin=float(rng.uniform(0.05, 1.0)))
            q = random_spd(rng, n)
            w = solve_lyapunov(a, q)
            residual = np.linalg.norm(a @ w + w @ a.T + q)
            assert residual <= 1e-8 * np.linalg.norm(q)
            assert np.min(np.linalg.eigvalsh(w)) >= -1e-10 * max(
                np.max(np.linalg.eigvalsh(w)), 1.0
            )

    def test_factorization_reuse_matches_one_shot(self):
        rng = np.random.default_rng(9)
        a = random_stable_matrix(rng, 5)
        solver = LyapunovSolver(a)
        for _ in range(4):
            q = random_spd(rng, 5)
            assert np.allclose(solver.solve(q), solve_lyapunov(a, q), atol=1e-13)

    def test_unstable_refused_with_abscissa(self):
        a = np.array([[0.3, 0.0], [0.0, -1.0]])
        with pytest.raises(UnstableSystemError) as err:
            solve_lyapunov(a, np.eye(2))
        assert err.value.abscissa == pytest.approx(0.3, abs=1e-12)

    def test_dimension_mismatch(self):
        solver = LyapunovSolver(-np.eye(3))
        with pytest.raises(ValueError, match="dimension"):
            solver.solve(np.eye(2))

    def test_zero_rhs_gives_zero(self):
        w = solve_lyapunov(-np.eye(3), np.zeros((3, 3)))
        assert np.all(w == 0.0)


class TestTraceInverse:
    def test_identity(self):
        assert trace_inverse(np.eye(3)) == pytest.approx(3.0, abs=1e-13)

    def test_diagonal(self):
        assert trace_inverse(np.diag([2.0, 4.0])) == pytest.approx(0.75, abs=1e-13)

    def test_eigenvalue_sum_oracle(self):
        rng = np.random.default_rng(23)
        m = random_spd(rng, 5)
        ref = float(np.sum(1.0 / sym_eigenvalues(m)))
        assert trace_inverse(m) == pytest.approx(ref, rel=1e-9)

    def test_singular_failure_names_min_eigenvalue(self):
        b = np.array([1.0, 2.0, 0.5])
        with pytest.raises(NotPositiveDefiniteError) as err:
            trace_inverse(np.outer(b, b))
        assert err.value.min_eigenvalue is not None
        assert err.value.min_eigenvalue < 1e-10


class TestLogDet:
    def test_identity_is_zero(self):
        for n in (1, 3, 6):
            assert log_det(np.eye(n)) == pytest.approx(0.0, abs=1e-13)

    def test_diagonal_exponentials(self):
        assert log_det(np.diag([math.e, math.e**2])) == pytest.approx(3.0, abs=1e-12)

    def test_eigenvalue_log_sum_oracle(self):
        rng = np.random.default_rng(31)
        m = random_spd(rng, 5)
        ref = float(np.sum(np.log(sym_eigenvalues(m))))
        assert log_det(m) == pytest.approx(ref, rel=1e-9, abs=1e-9)

    def test_non_pd_raises(self):
        with pytest.raises(NotPositiveDefiniteError):
            log_det(np.diag([1.0, -1.0]))


class TestNumericalRank:
    def test_zero_matrix(self):
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_below_threshold(self):
        assert numerical_rank(np.diag([1.0, 1e-15]), rel_tol=1e-9) == 1

    def test_rank_one_outer_product(self):
        rng = np.random.default_rng(2)
        b = rng.standard_normal(6)
        assert numerical_rank(np.outer(b, b)) == 1

    def test_rel_tol_validated(self):
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError, match="rel_tol"):
                rank_from_spectrum(np.array([1.0]), rel_tol=bad)


class TestSpectralAbscissa:
    def test_negative_identity(self):
        assert spectral_abscissa(-np.eye(3)) == pytest.approx(-1.0, abs=1e-13)

    def test_pure_rotation(self):
        assert spectral_abscissa(np.array([[0.0, 1.0], [-1.0, 0.0]])) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_charpoly_oracle(self):
        rng = np.random.default_rng(17)
        a = rng.standard_normal((8, 8))
        assert spectral_abscissa(a) == pytest.approx(abscissa_by_charpoly(a), abs=1e-8)


class TestWeylInequalities:
    def test_random_pairs(self):
        rng = np.random.default_rng(100)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            a = random_symmetric(rng, n)
            b = random_symmetric(rng, n)
            va = sym_eigenvalues(a)
            vb = sym_eigenvalues(b)
            vs = sym_eigenvalues(a + b)
            assert np.all(vs >= va + vb[-1] - 1e-10)
            assert np.all(vs <= va + vb[0] + 1e-10)
