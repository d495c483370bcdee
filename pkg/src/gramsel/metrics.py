"""Scalar set functions of the controllability Gramian.

Five metrics are supported; each maps a candidate subset S to a real number
through the assembled Gramian W(S):

==========  =====================  ==============
key         f(S)                   modularity
==========  =====================  ==============
trace       tr(W)                  modular
logdet      log det(W)             submodular
rank        numerical rank of W    submodular
lmin        smallest eigenvalue    non-submodular
ntrinv      -tr(W^{-1})            non-submodular
==========  =====================  ==============

All five are monotone nondecreasing under their preconditions (ntrinv needs
a positive definite base Gramian). ``logdet`` returns ``-inf`` on a singular
Gramian instead of raising, so greedy selection stays total: any finite
value ranks above ``-inf`` and ties among ``-inf`` fall back to index order.
"""

import enum
import math
from dataclasses import replace

import numpy as np

from .exceptions import NotPositiveDefiniteError
from .linalg import DEFAULT_RANK_RTOL, rank_from_spectrum, sym_eigenvalues, trace_inverse, log_det
from .system import DEFAULT_TRACE_INV_EPSILON, as_actuator_set, assemble


class Metric(enum.Enum):
    """Gramian metric selector; values double as the CLI names."""

    TRACE = "trace"
    LOG_DET = "logdet"
    RANK = "rank"
    LAMBDA_MIN = "lmin"
    NEG_TRACE_INV = "ntrinv"

    @property
    def modularity(self):
        """One of "modular", "submodular", "non-submodular"."""
        return _MODULARITY[self]

    @property
    def monotone(self):
        """All five metrics are monotone nondecreasing (ntrinv given a PD base)."""
        return True


_MODULARITY = {
    Metric.TRACE: "modular",
    Metric.LOG_DET: "submodular",
    Metric.RANK: "submodular",
    Metric.LAMBDA_MIN: "non-submodular",
    Metric.NEG_TRACE_INV: "non-submodular",
}

METRIC_CHOICES = tuple(m.value for m in Metric)


def as_metric(value):
    """Coerce a Metric or its CLI key to a Metric member."""
    if isinstance(value, Metric):
        return value
    try:
        return Metric(value)
    except ValueError:
        raise ValueError(
            f"unknown metric {value!r}; choose from {', '.join(METRIC_CHOICES)}"
        ) from None


def evaluate(metric, bundle, subset, rank_rel_tol=DEFAULT_RANK_RTOL):
    """Evaluate a metric on the Gramian assembled for ``subset``.

    Returns a float; ``-inf`` for logdet on a singular Gramian. The
    trace-inverse metric raises
    :class:`~gramsel.exceptions.NotPositiveDefiniteError` (naming the
    smallest eigenvalue) when the assembled Gramian is singular.
    """
    metric = as_metric(metric)
    w = assemble(bundle, subset)
    if metric is Metric.TRACE:
        return float(np.trace(w))
    if metric is Metric.LOG_DET:
        try:
            return log_det(w)
        except NotPositiveDefiniteError:
            return -math.inf
    if metric is Metric.RANK:
        return float(rank_from_spectrum(sym_eigenvalues(w), rank_rel_tol))
    if metric is Metric.LAMBDA_MIN:
        return float(sym_eigenvalues(w)[-1])
    return -trace_inverse(w)


def normalized_evaluate(metric, bundle, subset, rank_rel_tol=DEFAULT_RANK_RTOL):
    """``f(subset) - f(empty)``; exactly 0.0 for the empty subset.

    Shifting by the empty-set value makes every metric normalized, which the
    greedy guarantees and ratio estimators are stated for. The shift leaves
    marginal gains unchanged.
    """
    idx = as_actuator_set(subset, bundle.size, "subset")
    if not idx:
        return 0.0
    offset = evaluate(metric, bundle, (), rank_rel_tol)
    return evaluate(metric, bundle, idx, rank_rel_tol) - offset


def default_regularized(system, metric):
    """Apply the documented epsilon default for the trace-inverse metric.

    The trace-inverse metric needs an invertible Gramian. When it is
    requested on a system with neither base actuators nor regularization,
    return a copy with ``epsilon = DEFAULT_TRACE_INV_EPSILON``; otherwise
    return the system unchanged.
    """
    if (
        as_metric(metric) is Metric.NEG_TRACE_INV
        and system.base is None
        and system.epsilon == 0.0
    ):
        return replace(system, epsilon=DEFAULT_TRACE_INV_EPSILON)
    return system
