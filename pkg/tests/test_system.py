"""LinearSystem, GramianBundle, additivity, and instance serialization."""

import numpy as np
import pytest

from gramsel.exceptions import UnstableSystemError
from gramsel.linalg import solve_lyapunov, sym_eigenvalues
from gramsel.serialize import (
    load_instance,
    save_instance,
    system_from_json,
    system_to_json,
)
from gramsel.system import (
    GramianBundle,
    LinearSystem,
    as_actuator_set,
    assemble,
    build_bundle,
)

from .oracles import random_stable_matrix


@pytest.fixture
def small_system():
    rng = np.random.default_rng(8)
    a = random_stable_matrix(rng, 5)
    candidates = rng.standard_normal((4, 5))
    return LinearSystem(a=a, candidates=candidates)


class TestLinearSystem:
    def test_standard_basis_default(self):
        sys5 = LinearSystem(a=-np.eye(5))
        assert sys5.num_candidates == 5
        assert np.allclose(sys5.candidates, np.eye(5))

    def test_unstable_refused(self):
        with pytest.raises(UnstableSystemError) as err:
            LinearSystem(a=np.eye(2))
        assert err.value.abscissa == pytest.approx(1.0)

    def test_candidate_dimension_checked(self):
        with pytest.raises(ValueError, match="candidates"):
            LinearSystem(a=-np.eye(3), candidates=[[1.0, 0.0]])

    def test_negative_epsilon_refused(self):
        with pytest.raises(ValueError, match="epsilon"):
            LinearSystem(a=-np.eye(2), epsilon=-1.0)

    def test_base_row_count_checked(self):
        with pytest.raises(ValueError, match="base"):
            LinearSystem(a=-np.eye(3), base=np.ones((2, 1)))

    def test_candidate_matrix_subsets(self, small_system):
        full = small_system.candidate_matrix()
        assert full.shape == (5, 4)
        sub = small_system.candidate_matrix([2, 0])
        assert np.allclose(sub, full[:, [0, 2]])


class TestActuatorSet:
    def test_canonical_order(self):
        assert as_actuator_set([3, 1, 2], 5) == (1, 2, 3)

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="duplicates"):
            as_actuator_set([1, 1], 4)

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            as_actuator_set([4], 4)


class TestBuildBundle:
    def test_no_base_zero_epsilon_gives_zero_base(self, small_system):
        bundle = build_bundle(small_system)
        assert not bundle.has_base
        assert np.all(bundle.w_base == 0.0)

    def test_scalar_decoupling(self):
        sys2 = LinearSystem(a=-np.eye(2), candidates=[[1.0, 0.0]])
        bundle = build_bundle(sys2)
        assert np.allclose(bundle.w_each[0], np.diag([0.5, 0.0]), atol=1e-13)

    def test_epsilon_enters_base_only(self):
        rng = np.random.default_rng(12)
        a = random_stable_matrix(rng, 4)
        cand = rng.standard_normal((3, 4))
        plain = build_bundle(LinearSystem(a=a, candidates=cand))
        reg = build_bundle(LinearSystem(a=a, candidates=cand, epsilon=1e-3))
        assert reg.has_base
        assert np.allclose(reg.w_base, solve_lyapunov(a, 1e-3 * np.eye(4)), atol=1e-12)
        assert np.array_equal(plain.w_each, reg.w_each)

    def test_base_plus_epsilon(self):
        rng = np.random.default_rng(13)
        a = random_stable_matrix(rng, 4)
        base = rng.standard_normal((4, 2))
        bundle = build_bundle(LinearSystem(a=a, base=base, epsilon=1e-4))
        expected = solve_lyapunov(a, base @ base.T + 1e-4 * np.eye(4))
        assert np.allclose(bundle.w_base, expected, atol=1e-12)

    def test_direct_solve_oracle(self):
        rng = np.random.default_rng(21)
        a = random_stable_matrix(rng, 5)
        cand = rng.standard_normal((4, 5))
        bundle = build_bundle(LinearSystem(a=a, candidates=cand))
        subset = (0, 2)
        b_matrix = cand[list(subset)].T
        direct = solve_lyapunov(a, b_matrix @ b_matrix.T)
        got = assemble(bundle, subset)
        assert np.max(np.abs(got - direct)) <= 1e-9 * max(1.0, np.max(np.abs(direct)))


class TestAssemble:
    def test_empty_returns_base(self, small_system):
        bundle = build_bundle(small_system)
        assert np.array_equal(assemble(bundle, ()), bundle.w_base)

    def test_singleton(self, small_system):
        bundle = build_bundle(small_system)
        expected = bundle.w_base + bundle.w_each[1]
        assert np.array_equal(assemble(bundle, (1,)), expected)

    def test_disjoint_union_identity(self, small_system):
        bundle = build_bundle(small_system)
        left = assemble(bundle, (0, 1, 2, 3))
        right = assemble(bundle, (0, 1)) + assemble(bundle, (2, 3)) - bundle.w_base
        assert np.max(np.abs(left - right)) <= 1e-12

    def test_additivity_random_pairs(self):
        rng = np.random.default_rng(33)
        a = random_stable_matrix(rng, 6)
        cand = rng.standard_normal((6, 6))
        bundle = build_bundle(LinearSystem(a=a, candidates=cand, epsilon=1e-5))
        for _ in range(50):
            labels = rng.integers(0, 3, size=6)
            s = tuple(np.flatnonzero(labels == 0))
            omega = tuple(np.flatnonzero(labels == 1))
            union = tuple(sorted(s + omega))
            gap = assemble(bundle, union) - assemble(bundle, s)
            direct = bundle.w_each[list(omega)].sum(axis=0) if omega else 0.0
            assert np.max(np.abs(gap - direct)) <= 1e-12

    def test_loewner_monotonicity(self, small_system):
        bundle = build_bundle(small_system)
        rng = np.random.default_rng(44)
        for _ in range(25):
            t = tuple(sorted(rng.choice(4, size=3, replace=False).tolist()))
            s = t[:1]
            diff = assemble(bundle, t) - assemble(bundle, s)
            vals = sym_eigenvalues(diff)
            assert vals[-1] >= -1e-10 * max(vals[0], 1.0)

    def test_method_delegates(self, small_system):
        bundle = build_bundle(small_system)
        assert np.array_equal(bundle.assemble((0, 1)), assemble(bundle, (0, 1)))


class TestInstanceSerialization:
    def test_round_trip_exact(self, small_system, tmp_path):
        path = tmp_path / "inst.json"
        save_instance(small_system, path)
        loaded = load_instance(path)
        assert np.array_equal(loaded.a, small_system.a)
        assert np.array_equal(loaded.candidates, small_system.candidates)
        assert loaded.base is None
        assert loaded.epsilon == small_system.epsilon

    def test_round_trip_with_base(self, tmp_path):
        rng = np.random.default_rng(3)
        a = random_stable_matrix(rng, 3)
        base = rng.standard_normal((3, 2))
        system = LinearSystem(a=a, base=base, epsilon=1e-6)
        path = tmp_path / "inst.json"
        save_instance(system, path)
        loaded = load_instance(path)
        assert np.array_equal(loaded.base, system.base)
        assert loaded.epsilon == 1e-6

    def test_standard_basis_shortcut(self):
        obj = {
            "a": {"n": 2, "entries": [-1.0, 0.0, 0.0, -2.0]},
            "candidates": "standard_basis",
            "base": None,
            "epsilon": 0.0,
        }
        system = system_from_json(obj)
        assert np.allclose(system.candidates, np.eye(2))

    def test_entry_count_validated(self):
        with pytest.raises(ValueError, match="entries"):
            system_from_json({"a": {"n": 2, "entries": [1.0, 2.0]}})

    def test_extra_keys_ignored(self, small_system):
        obj = system_to_json(small_system)
        obj["adjacency"] = [[0, 1]]
        obj["shift"] = 1.0
        system = system_from_json(obj)
        assert np.array_equal(system.a, small_system.a)
