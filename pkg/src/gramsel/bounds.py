"""Closed-form near-optimality certificates for greedy selection.

For a monotone nondecreasing normalized set function with submodularity
ratio gamma and curvature alpha, greedy selection under a cardinality
budget achieves at least

    (1 / alpha) * (1 - exp(-alpha * gamma))

of the optimum. The classical 1 - 1/e guarantee for submodular objectives
is the alpha = gamma = 1 corner. True gamma and alpha are intractable to
compute, but for the two non-submodular Gramian metrics closed-form bounds
follow from eigenvalue inequalities for sums of symmetric matrices:

* :func:`lambda_min_bounds` bounds gamma from below by
  ``min_w lambda_min(W_w) / max_w lambda_max(W_w)`` over the
  single-candidate Gramians (valid for the smallest-eigenvalue metric on an
  unaugmented bundle).
* :func:`trace_inverse_bounds` bounds gamma from below by
  ``min_w tr(W_w) * (min_w lambda_min(Wbar_w))^2 /
  (max_w tr(W_w) * lambda_max(Wbar_V)^2)`` where ``Wbar`` includes the base
  term (valid for the trace-inverse metric, which needs a positive definite
  base Gramian).

Both derivations force ``alpha_ub = 1 - gamma_lb``; that identity is an
artifact of the proof technique, not a property of the true quantities.
The bounds hold for every problem instance and are often conservative; a
zero gamma lower bound is flagged vacuous and certifies nothing.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NoCertificateError, NotPositiveDefiniteError
from .linalg import sym_eigenvalues
from .system import assemble

#: Below this curvature the closed-form factor switches to its series
#: expansion to avoid cancellation in 1 - exp(-alpha * gamma).
SERIES_ALPHA_THRESHOLD = 1e-8

#: Gamma lower bounds at or below this are snapped to zero and flagged vacuous.
VACUITY_TOL = 1e-15


@dataclass(frozen=True)
class GuaranteeBound:
    """A certified (gamma lower bound, alpha upper bound) pair.

    ``factor`` is the greedy guarantee evaluated at the bound point;
    ``vacuous`` is set when the gamma bound is zero, in which case the
    certificate is worthless (every factor statement degenerates to 0).
    ``source`` names the bound family ("lambda_min" or "trace_inverse").
    """

    gamma_lb: float
    alpha_ub: float
    factor: float
    vacuous: bool
    source: str

    def to_json(self):
        return {
            "gamma_lb": float(self.gamma_lb),
            "alpha_ub": float(self.alpha_ub),
            "factor": float(self.factor),
            "vacuous": bool(self.vacuous),
            "source": self.source,
        }


def _factor_direct(alpha, gamma):
    return -math.expm1(-alpha * gamma) / alpha


def _factor_series(alpha, gamma):
    # (1 - exp(-a g)) / a = g - a g^2/2 + a^2 g^3/6 - ...; three terms leave
    # a truncation error below 1e-17 for a < 1e-8.
    g2 = gamma * gamma
    return gamma - alpha * g2 / 2.0 + alpha * alpha * g2 * gamma / 6.0


def guarantee_factor(alpha, gamma):
    """Greedy approximation factor ``(1/alpha) * (1 - exp(-alpha * gamma))``.

    Continuous at ``alpha = 0`` with limiting value ``gamma``; equals
    ``1 - 1/e`` at ``alpha = gamma = 1``. Inputs outside [0, 1] are refused.
    """
    alpha = float(alpha)
    gamma = float(gamma)
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if alpha < SERIES_ALPHA_THRESHOLD:
        return _factor_series(alpha, gamma)
    return _factor_direct(alpha, gamma)


def _bound_from_gamma(gamma, source):
    if gamma <= VACUITY_TOL:
        gamma = 0.0
    gamma = min(gamma, 1.0)
    alpha = 1.0 - gamma
    return GuaranteeBound(
        gamma_lb=gamma,
        alpha_ub=alpha,
        factor=guarantee_factor(alpha, gamma),
        vacuous=gamma == 0.0,
        source=source,
    )


def lambda_min_bounds(bundle):
    """Certificate for the smallest-eigenvalue metric on a raw bundle.

    ``gamma_lb = min_w lambda_min(W_w) / max_w lambda_max(W_w)`` over the
    single-candidate Gramians, ``alpha_ub = 1 - gamma_lb``. The bound is
    vacuous whenever any single-candidate Gramian is singular, i.e. whenever
    some candidate alone does not render the network controllable, which is
    the typical case in large sparse networks. Those instances are reported
    as vacuous rather than repaired.

    Bundles carrying a base term are refused: the derivation addresses the
    raw subset Gramian, and a base term does not remove the vacuity (the
    per-candidate Gramians still do not contain it).
    """
    if bundle.size == 0:
        raise ValueError("bound requires at least one candidate actuator")
    if bundle.has_base:
        raise ValueError(
            "lambda_min_bounds applies to bundles built without base inputs or "
            "regularization; this bundle carries a base term. The bound would be "
            "vacuous regardless, because single-candidate Gramians never include "
            "the base."
        )
    lam_min = math.inf
    lam_max = -math.inf
    for w in bundle.w_each:
        vals = sym_eigenvalues(w)
        # Gramians are PSD in exact arithmetic; clamp round-off negatives.
        lam_min = min(lam_min, max(float(vals[-1]), 0.0))
        lam_max = max(lam_max, float(vals[0]))
    gamma = lam_min / lam_max if lam_max > 0.0 else 0.0
    return _bound_from_gamma(gamma, "lambda_min")


def trace_inverse_bounds(bundle):
    """Certificate for the trace-inverse metric on a base-augmented bundle.

    Requires the base Gramian to be positive definite (base actuators and/or
    identity regularization providing controllability); refuses otherwise.
    """
    if bundle.size == 0:
        raise ValueError("bound requires at least one candidate actuator")
    base_vals = sym_eigenvalues(bundle.w_base)
    if float(base_vals[-1]) <= 0.0:
        raise NotPositiveDefiniteError(
            "trace_inverse_bounds requires a positive definite base Gramian "
            f"(base actuators or regularization providing controllability); "
            f"smallest base eigenvalue {float(base_vals[-1]):.6e}",
            min_eigenvalue=float(base_vals[-1]),
        )
    traces = [float(np.trace(w)) for w in bundle.w_each]
    lam_min_aug = math.inf
    for i in range(bundle.size):
        vals = sym_eigenvalues(bundle.w_base + bundle.w_each[i])
        lam_min_aug = min(lam_min_aug, max(float(vals[-1]), 0.0))
    full = assemble(bundle, range(bundle.size))
    lam_max_full = float(sym_eigenvalues(full)[0])
    numerator = min(traces) * lam_min_aug * lam_min_aug
    denominator = max(traces) * lam_max_full * lam_max_full
    gamma = numerator / denominator if denominator > 0.0 else 0.0
    return _bound_from_gamma(gamma, "trace_inverse")


def certified_lower_value(report, bound, optimal_value=None):
    """Certified floor implied by a guarantee bound.

    With a known (or hypothesized) optimum ``f*``, returns the floor

        f(empty) + factor * (f* - f(empty))

    on the greedy value. The optimum is taken from ``optimal_value`` or,
    failing that, from ``report.optimum_value``. When neither is available
    the multiplicative certificate itself (``bound.factor``) is returned:
    greedy is guaranteed at least that fraction of ``f* - f(empty)`` above
    ``f(empty)``.

    Raises :class:`~gramsel.exceptions.NoCertificateError` for a vacuous
    bound; a vacuous certificate is never turned into a number.
    """
    if bound.vacuous:
        raise NoCertificateError(
            "no certificate: the gamma lower bound is zero, so the guarantee "
            "factor degenerates to 0"
        )
    if not report.metric.monotone:
        raise ValueError("the guarantee applies to monotone metrics only")
    reference = optimal_value if optimal_value is not None else report.optimum_value
    if reference is None:
        return bound.factor
    baseline = report.values[0]
    return baseline + bound.factor * (reference - baseline)
