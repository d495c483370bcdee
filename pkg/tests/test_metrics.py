"""Metric evaluation: the five set functions and their stated properties."""

import math

import numpy as np
import pytest
import scipy.linalg as sla

from gramsel.exceptions import NotPositiveDefiniteError
from gramsel.metrics import (
    Metric,
    as_metric,
    default_regularized,
    evaluate,
    normalized_evaluate,
)
from gramsel.linalg import sym_eigh
from gramsel.system import GramianBundle, LinearSystem, build_bundle

from .oracles import controllability_matrix, random_stable_matrix


def diag_bundle(w_base, *w_each):
    """Bundle fabricated directly from matrices (no Lyapunov solve)."""
    w_base = np.asarray(w_base, dtype=float)
    return GramianBundle(
        w_base=w_base,
        w_each=np.stack([np.asarray(w, dtype=float) for w in w_each]),
        epsilon=0.0,
        has_base=bool(np.any(w_base)),
    )


class TestMetricKind:
    def test_modularity_classes(self):
        assert Metric.TRACE.modularity == "modular"
        assert Metric.LOG_DET.modularity == "submodular"
        assert Metric.RANK.modularity == "submodular"
        assert Metric.LAMBDA_MIN.modularity == "non-submodular"
        assert Metric.NEG_TRACE_INV.modularity == "non-submodular"

    def test_all_monotone(self):
        assert all(m.monotone for m in Metric)

    def test_as_metric_accepts_keys(self):
        assert as_metric("lmin") is Metric.LAMBDA_MIN
        assert as_metric(Metric.TRACE) is Metric.TRACE

    def test_as_metric_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown metric"):
            as_metric("h2norm")


class TestEvaluate:
    def test_lambda_min_empty_no_base_is_zero(self):
        bundle = build_bundle(LinearSystem(a=-np.eye(3)))
        assert evaluate("lmin", bundle, ()) == 0.0

    def test_trace_decoupled(self):
        bundle = build_bundle(LinearSystem(a=-np.eye(2)))
        assert evaluate("trace", bundle, (0, 1)) == pytest.approx(1.0, abs=1e-12)

    def test_neg_trace_inv_identity_base(self):
        bundle = diag_bundle(np.eye(2), np.eye(2))
        assert evaluate("ntrinv", bundle, ()) == pytest.approx(-2.0, abs=1e-13)

    def test_rank_matches_kalman_oracle(self):
        rng = np.random.default_rng(14)
        a = random_stable_matrix(rng, 4)
        b = rng.standard_normal(4)
        bundle = build_bundle(LinearSystem(a=a, candidates=[b]))
        kalman_rank = np.linalg.matrix_rank(controllability_matrix(a, b))
        assert kalman_rank == 4
        assert evaluate("rank", bundle, (0,)) == 4.0

    def test_logdet_singular_gives_minus_inf(self):
        bundle = build_bundle(LinearSystem(a=-np.eye(3)))
        assert evaluate("logdet", bundle, (0,)) == -math.inf

    def test_ntrinv_singular_raises_naming_eigenvalue(self):
        bundle = build_bundle(LinearSystem(a=-np.eye(3)))
        with pytest.raises(NotPositiveDefiniteError) as err:
            evaluate("ntrinv", bundle, (0,))
        assert err.value.min_eigenvalue is not None


class TestNormalizedEvaluate:
    def test_empty_is_exactly_zero(self):
        bundle = diag_bundle(np.eye(2), np.eye(2))
        for metric in Metric:
            assert normalized_evaluate(metric, bundle, ()) == 0.0

    def test_empty_is_zero_even_when_raw_is_minus_inf(self):
        bundle = build_bundle(LinearSystem(a=-np.eye(3)))
        assert evaluate("logdet", bundle, ()) == -math.inf
        assert normalized_evaluate("logdet", bundle, ()) == 0.0

    def test_diag_arithmetic(self):
        bundle = diag_bundle(np.eye(2), np.eye(2))
        assert normalized_evaluate("ntrinv", bundle, (0,)) == pytest.approx(
            1.0, abs=1e-13
        )

    def test_lambda_min_matches_raw_without_base(self):
        rng = np.random.default_rng(6)
        a = random_stable_matrix(rng, 4)
        bundle = build_bundle(LinearSystem(a=a))
        for subset in ((0,), (1, 3), (0, 1, 2, 3)):
            assert normalized_evaluate("lmin", bundle, subset) == evaluate(
                "lmin", bundle, subset
            )


class TestMetricProperties:
    def test_trace_is_modular(self):
        rng = np.random.default_rng(99)
        a = random_stable_matrix(rng, 5)
        bundle = build_bundle(LinearSystem(a=a, epsilon=1e-4))
        singles = [
            normalized_evaluate("trace", bundle, (i,)) for i in range(bundle.size)
        ]
        for _ in range(30):
            size = int(rng.integers(0, 6))
            s = tuple(sorted(rng.choice(5, size=size, replace=False).tolist()))
            direct = normalized_evaluate("trace", bundle, s)
            additive = sum(singles[i] for i in s)
            assert direct == pytest.approx(additive, rel=1e-10, abs=1e-10)

    def test_logdet_submodular_spot_check(self):
        rng = np.random.default_rng(55)
        a = random_stable_matrix(rng, 5)
        bundle = build_bundle(LinearSystem(a=a, epsilon=1e-2))
        for _ in range(40):
            small = set(rng.choice(5, size=2, replace=False).tolist())
            extra = set(rng.choice(5, size=1).tolist()) - small
            big = small | set(rng.choice(5, size=2, replace=False).tolist())
            omega = next(iter(set(range(5)) - big), None)
            if omega is None or not small <= big:
                continue
            gain_small = evaluate("logdet", bundle, tuple(sorted(small | {omega}))) - (
                evaluate("logdet", bundle, tuple(sorted(small)))
            )
            gain_big = evaluate("logdet", bundle, tuple(sorted(big | {omega}))) - (
                evaluate("logdet", bundle, tuple(sorted(big)))
            )
            assert gain_small >= gain_big - 1e-9

    @pytest.mark.parametrize("metric,epsilon", [("lmin", 0.0), ("ntrinv", None)])
    def test_monotonicity_spot_check(self, metric, epsilon):
        rng = np.random.default_rng(77)
        a = random_stable_matrix(rng, 5)
        base = rng.standard_normal((5, 5)) if metric == "ntrinv" else None
        bundle = build_bundle(
            LinearSystem(a=a, base=base, epsilon=0.0 if epsilon is None else epsilon)
        )
        for _ in range(100):
            size = int(rng.integers(0, 5))
            s = tuple(sorted(rng.choice(5, size=size, replace=False).tolist()))
            omega = int(rng.choice([i for i in range(5) if i not in s]))
            gain = evaluate(metric, bundle, tuple(sorted(s + (omega,)))) - evaluate(
                metric, bundle, s
            )
            assert gain >= -1e-10

    def test_energy_quadratic_form_cross_check(self):
        rng = np.random.default_rng(65)
        a = random_stable_matrix(rng, 5)
        bundle = build_bundle(LinearSystem(a=a, base=rng.standard_normal((5, 5))))
        w = bundle.assemble((0, 2))
        x = rng.standard_normal(5)
        via_solve = float(x @ sla.cho_solve(sla.cho_factor(w, lower=True), x))
        vals, vecs = sym_eigh(w)
        via_eig = float(np.sum((vecs.T @ x) ** 2 / vals))
        assert via_solve == pytest.approx(via_eig, rel=1e-9)


class TestDefaultRegularized:
    def test_applies_for_ntrinv_without_base(self):
        system = LinearSystem(a=-np.eye(3))
        out = default_regularized(system, "ntrinv")
        assert out.epsilon == 1e-6

    def test_noop_with_base_or_epsilon_or_other_metric(self):
        system = LinearSystem(a=-np.eye(3), epsilon=1e-3)
        assert default_regularized(system, "ntrinv") is system
        plain = LinearSystem(a=-np.eye(3))
        assert default_regularized(plain, "lmin") is plain
        based = LinearSystem(a=-np.eye(3), base=np.ones((3, 1)))
        assert default_regularized(based, "ntrinv") is based
