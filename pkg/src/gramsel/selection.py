"""Greedy and exhaustive actuator subset selection.

The functional core is :func:`greedy` (iterative argmax of the marginal
gain under a cardinality budget) and :func:`brute_force` (exact optimum by
subset enumeration, for ground truth on small instances). Both return a
:class:`SelectionReport`. Lazy-greedy acceleration is deliberately not used:
its priority-queue shortcut is only sound for certified submodular
objectives, and two of the supported metrics are not submodular.

:class:`GreedyActuatorSelector` and :class:`BruteForceActuatorSelector` wrap
the same core behind the scikit-learn estimator API (``fit`` /
``transform`` / ``get_params``) so selection composes with pipelines and
model-selection tooling.
"""

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .exceptions import EnumerationCapError, GramselError, MetricEvaluationError
from .linalg import sym_eigenvalues
from .metrics import Metric, as_metric, default_regularized, evaluate
from .seeding import derive_seed
from .system import GramianBundle, LinearSystem, assemble, build_bundle

#: Marginal gains closer than this (relative) are a tie; the smallest
#: candidate index wins, so results are reproducible across platforms.
TIE_RTOL = 1e-12

#: Refuse brute-force enumerations larger than this many subsets by default.
DEFAULT_ENUMERATION_CAP = 2_000_000


@dataclass
class SelectionReport:
    """Outcome of one selection run.

    ``values`` has length ``len(picks) + 1`` and starts at the empty-set
    value, so ``values[i]`` is the metric after the first ``i`` picks. For
    monotone metrics it is nondecreasing. ``optimum_set`` / ``optimum_value``
    and the normalized ``ratio`` are filled when a brute-force reference was
    computed.
    """

    metric: Metric
    picks: list[int] = field(default_factory=list)
    values: list[float] = field(default_factory=list)
    optimum_set: tuple[int, ...] | None = None
    optimum_value: float | None = None
    ratio: float | None = None

    @property
    def selected(self):
        """Chosen subset in canonical (sorted) order."""
        return tuple(sorted(self.picks))

    @property
    def value(self):
        """Metric value of the full selection."""
        return self.values[-1]

    def to_json(self):
        out = {
            "metric": self.metric.value,
            "picks": list(self.picks),
            "values": [float(v) for v in self.values],
        }
        if self.optimum_set is not None:
            out["optimum_set"] = list(self.optimum_set)
            out["optimum_value"] = float(self.optimum_value)
        if self.ratio is not None:
            out["ratio"] = float(self.ratio)
        return out


def _tie_window(value):
    return TIE_RTOL * max(1.0, abs(value)) if math.isfinite(value) else 0.0


def _evaluate_or_attach(metric, bundle, subset):
    try:
        return evaluate(metric, bundle, subset)
    except GramselError as err:
        raise MetricEvaluationError(
            f"{metric.value} evaluation failed on subset {tuple(subset)}: {err}",
            subset=tuple(subset),
            metric=metric,
        ) from err


def greedy(bundle, metric, k):
    """Greedily pick ``k`` candidates by largest marginal gain.

    Each round evaluates ``f(S + {e}) - f(S)`` for every remaining candidate
    and adds the argmax; gains within ``TIE_RTOL`` (relative) are ties and
    the smallest index wins. For the integer-valued rank metric, ties are
    broken first by the smallest eigenvalue of the assembled Gramian, then
    by index. Evaluation failures propagate with the offending subset
    attached.
    """
    metric = as_metric(metric)
    m = bundle.size
    if not 0 <= k <= m:
        raise ValueError(f"k must lie in [0, {m}], got {k}")
    rank_secondary = metric is Metric.RANK

    picks: list[int] = []
    current = _evaluate_or_attach(metric, bundle, ())
    values = [current]
    remaining = list(range(m))

    for _ in range(k):
        new_values = []
        primaries = []
        secondaries = []
        for e in remaining:
            subset = picks + [e]
            val = _evaluate_or_attach(metric, bundle, subset)
            new_values.append(val)
            if current == -math.inf:
                # Any finite value beats -inf; ranking by the new value is
                # then equivalent to ranking by the (ill-defined) gain.
                primaries.append(val)
            else:
                primaries.append(val - current)
            if rank_secondary:
                secondaries.append(float(sym_eigenvalues(assemble(bundle, subset))[-1]))

        best = max(primaries)
        window = _tie_window(best)
        tied = [i for i, g in enumerate(primaries) if g >= best - window]
        if rank_secondary and len(tied) > 1:
            best_sec = max(secondaries[i] for i in tied)
            sec_window = _tie_window(best_sec)
            tied = [i for i in tied if secondaries[i] >= best_sec - sec_window]
        choice = tied[0]  # remaining is ascending, so this is the smallest index

        pick = remaining.pop(choice)
        picks.append(pick)
        current = new_values[choice]
        values.append(current)

    return SelectionReport(metric=metric, picks=picks, values=values)


def brute_force(bundle, metric, k, cap=DEFAULT_ENUMERATION_CAP):
    """Exact maximizer over all size-``k`` subsets.

    Enumerates in lexicographic order and keeps the first strict float
    maximum, so exact value ties resolve to the lexicographically smallest
    index list. Refuses instances with more than ``cap`` subsets.
    """
    metric = as_metric(metric)
    m = bundle.size
    if not 0 <= k <= m:
        raise ValueError(f"k must lie in [0, {m}], got {k}")
    count = math.comb(m, k)
    if count > cap:
        raise EnumerationCapError(
            f"brute force over C({m}, {k}) = {count} subsets exceeds the cap {cap}",
            count=count,
        )

    best_value = None
    best_set = None
    for combo in itertools.combinations(range(m), k):
        value = _evaluate_or_attach(metric, bundle, combo)
        if best_value is None or value > best_value:
            best_value, best_set = value, combo

    values = [
        _evaluate_or_attach(metric, bundle, best_set[:i]) for i in range(k + 1)
    ]
    return SelectionReport(
        metric=metric,
        picks=list(best_set),
        values=values,
        optimum_set=best_set,
        optimum_value=best_value,
    )


def normalized_ratio(achieved, optimal, baseline):
    """``(achieved - baseline) / (optimal - baseline)``, scale-aware.

    The shift by the empty-set value makes the ratio meaningful for
    non-normalized metrics (the additive offset drops out). Defined as 1.0
    when the optimum does not improve on the baseline; a numerator within
    round-off of zero is snapped to zero so ratios of monotone metrics stay
    in [0, 1] despite eigensolver noise.
    """
    denom = optimal - baseline
    scale = max(1.0, abs(optimal), abs(baseline))
    if abs(denom) <= 1e-12 * scale:
        return 1.0
    numer = achieved - baseline
    if abs(numer) <= 1e-12 * scale:
        numer = 0.0
    return numer / denom


def compare_with_optimum(report, bundle, cap=DEFAULT_ENUMERATION_CAP):
    """Attach the brute-force optimum and normalized ratio to a greedy report."""
    reference = brute_force(bundle, report.metric, len(report.picks), cap)
    report.optimum_set = reference.optimum_set
    report.optimum_value = reference.optimum_value
    report.ratio = normalized_ratio(
        report.values[-1], reference.optimum_value, report.values[0]
    )
    return report


@dataclass
class OptimalityStats:
    """Greedy-versus-optimal outcomes over a seeded instance ensemble."""

    metric: Metric
    k: int
    seeds: list[int]
    ratios: list[float]
    exact: list[bool]

    @property
    def mean_ratio(self):
        return float(np.mean(self.ratios))

    @property
    def min_ratio(self):
        return float(np.min(self.ratios))

    @property
    def exact_fraction(self):
        return float(np.mean(self.exact))


def greedy_vs_optimal(system_factory, metric, k, instances, master_seed=0,
                      cap=DEFAULT_ENUMERATION_CAP):
    """Normalized greedy/optimal ratios over a seeded random ensemble.

    ``system_factory`` maps an integer seed to a :class:`LinearSystem`;
    per-instance seeds are derived from ``(master_seed, index)`` so any run
    is reproducible bit-for-bit from the stored seed. The trace-inverse
    metric gets the documented epsilon default when a factory instance
    carries no base term.
    """
    metric = as_metric(metric)
    seeds = []
    ratios = []
    exact = []
    for index in range(instances):
        seed = derive_seed(master_seed, index)
        system = default_regularized(system_factory(seed), metric)
        bundle = build_bundle(system)
        got = greedy(bundle, metric, k)
        ref = brute_force(bundle, metric, k, cap)
        ratio = normalized_ratio(got.values[-1], ref.optimum_value, got.values[0])
        seeds.append(seed)
        ratios.append(ratio)
        exact.append(
            abs(got.values[-1] - ref.optimum_value)
            <= _tie_window(ref.optimum_value)
        )
    return OptimalityStats(metric=metric, k=k, seeds=seeds, ratios=ratios, exact=exact)


class _BaseActuatorSelector(BaseEstimator):
    """Shared fit/transform plumbing for the selector estimators."""

    def _resolve_bundle(self, system):
        metric = as_metric(self.metric)
        if isinstance(system, GramianBundle):
            return system, metric, None
        if isinstance(system, LinearSystem):
            if self.epsilon is not None:
                system = replace(system, epsilon=float(self.epsilon))
            system = default_regularized(system, metric)
            return build_bundle(system), metric, system.candidate_matrix()
        raise TypeError(
            f"fit expects a LinearSystem or GramianBundle, got {type(system).__name__}"
        )

    def fit(self, system, y=None):
        """Run the selection on a system or prebuilt bundle.

        Sets ``picks_`` (greedy order), ``support_`` (boolean mask over the
        candidate catalog), ``values_`` and ``report_``; returns ``self``.
        """
        bundle, metric, candidate_matrix = self._resolve_bundle(system)
        report = self._run(bundle, metric)
        self.report_ = report
        self.picks_ = list(report.picks)
        self.values_ = list(report.values)
        self.n_candidates_ = bundle.size
        support = np.zeros(bundle.size, dtype=bool)
        support[self.picks_] = True
        self.support_ = support
        self.candidate_matrix_ = candidate_matrix
        return self

    def _check_fitted(self):
        if not hasattr(self, "support_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit first"
            )

    def get_support(self, indices=False):
        """Selected-candidate mask, or the sorted indices with ``indices=True``."""
        self._check_fitted()
        if indices:
            return np.flatnonzero(self.support_)
        return self.support_.copy()

    def transform(self, X=None):
        """Select the chosen columns from a candidate matrix.

        ``X`` must have one column per catalog entry (shape (n, M)). With
        ``X=None`` the catalog matrix of the fitted system is used, so the
        return value is the (n, k) input matrix of the selection.
        """
        self._check_fitted()
        if X is None:
            if self.candidate_matrix_ is None:
                raise ValueError(
                    "no candidate matrix available: the selector was fitted on a "
                    "GramianBundle; pass X explicitly"
                )
            X = self.candidate_matrix_
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_candidates_:
            raise ValueError(
                f"X must have {self.n_candidates_} columns (one per candidate), "
                f"got shape {X.shape}"
            )
        return X[:, self.support_]


class GreedyActuatorSelector(_BaseActuatorSelector):
    """Greedy Gramian-metric actuator selection as a scikit-learn estimator.

    Parameters
    ----------
    metric : str or Metric
        One of "trace", "logdet", "rank", "lmin", "ntrinv".
    k : int
        Number of actuators to pick.
    epsilon : float or None
        Override the system's identity regularization; ``None`` keeps the
        system value (plus the trace-inverse default when applicable).
    compare_brute_force : bool
        Also compute the exact optimum and the normalized ratio (small
        instances only).
    enumeration_cap : int
        Subset-count cap for the brute-force comparison.

    Examples
    --------
    >>> selector = GreedyActuatorSelector(metric="ntrinv", k=2)
    >>> selector.fit(system).picks_          # doctest: +SKIP
    [4, 17]
    """

    def __init__(self, metric="lmin", k=1, epsilon=None, compare_brute_force=False,
                 enumeration_cap=DEFAULT_ENUMERATION_CAP):
        self.metric = metric
        self.k = k
        self.epsilon = epsilon
        self.compare_brute_force = compare_brute_force
        self.enumeration_cap = enumeration_cap

    def _run(self, bundle, metric):
        report = greedy(bundle, metric, self.k)
        if self.compare_brute_force:
            compare_with_optimum(report, bundle, self.enumeration_cap)
        return report


class BruteForceActuatorSelector(_BaseActuatorSelector):
    """Exact actuator selection by exhaustive enumeration (small instances)."""

    def __init__(self, metric="lmin", k=1, epsilon=None,
                 enumeration_cap=DEFAULT_ENUMERATION_CAP):
        self.metric = metric
        self.k = k
        self.epsilon = epsilon
        self.enumeration_cap = enumeration_cap

    def _run(self, bundle, metric):
        return brute_force(bundle, metric, self.k, self.enumeration_cap)
