"""Empirical and exhaustive estimation of the submodularity ratio and curvature.

For a normalized nondecreasing set function f with marginal gains
``rho_A(B) = f(A | B) - f(B)``:

* the submodularity ratio gamma is the largest value with
  ``sum_{w in Omega - S} rho_w(S) >= gamma * rho_Omega(S)`` for all pairs
  (Omega, S); gamma = 1 iff f is submodular;
* the curvature alpha is the smallest value with
  ``rho_j((S - j) | Omega) >= (1 - alpha) * rho_j(S - j)`` for all
  (Omega, S) and j in S - Omega; alpha = 0 iff f is supermodular.

Both involve a number of constraints exponential in 2M, so beyond tiny
catalogs they are estimated from random subset pairs. Sampling relaxes the
definitions one-sidedly: a sampled gamma can only over-estimate (the min is
taken over fewer constraints) and a sampled max-alpha can only
under-estimate. :func:`exhaustive_gamma_alpha` evaluates every constraint
and is exact; it doubles as the oracle for the closed-form bounds.

Sampling law (the definitions do not dictate one, so it is fixed and
documented here): |S| uniform on 0..M-1 and S uniform at that size; |Omega|
uniform on 1..min(M, omega_cap) and Omega uniform at that size; for
curvature samples, j uniform in S - Omega, redrawing the pair while
S - Omega is empty. By default ``omega_cap`` is M (all scales of the
definitions are exercised). Capping it probes small context extensions
only, which is how the near-submodular behaviour of the Gramian metrics
shows up in practice: with catalog-scale Omega the curvature samples of the
trace-inverse metric saturate near 1 on essentially every instance. Each
sample uses an independent generator seeded from (seed, sample index), so
estimates do not depend on evaluation order or worker count.

Pairs whose reference marginal is within
``1e-12 * (1 + |f(V) - f(empty)|)`` of zero constrain nothing ("largest
gamma such that" is vacuous there); they are skipped and counted.
"""

import math
from dataclasses import dataclass

from .exceptions import EnumerationCapError, NoAdmissibleSamplesError
from .metrics import as_metric, evaluate
from .seeding import rng_for

#: Exhaustive enumeration is limited to this many candidates (4^M pair
#: combinations, plus the per-pair j choices for curvature).
EXHAUSTIVE_MAX_CANDIDATES = 6


@dataclass(frozen=True)
class SamplePlan:
    """How many subset pairs to draw, from which seed, under which size law.

    ``omega_cap`` bounds |Omega|; ``None`` means the full catalog size.
    """

    pairs: int = 5000
    seed: int = 0
    omega_cap: int | None = None
    law: str = "sizes uniform; subsets uniform at their size"

    def __post_init__(self):
        if self.pairs < 1:
            raise ValueError(f"pairs must be >= 1, got {self.pairs}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.omega_cap is not None and self.omega_cap < 1:
            raise ValueError(f"omega_cap must be >= 1, got {self.omega_cap}")


@dataclass
class RatioEstimate:
    """Estimated (or exact) submodularity ratio / curvature figures.

    Gamma estimates fill ``gamma`` and ``gamma_witness``; curvature
    estimates fill the ``alpha_*`` fields and ``alpha_witness``. ``samples``
    counts admissible constraints, ``skipped`` the degenerate ones. The
    witness records the subsets attaining the binding constraint.
    """

    mode: str
    samples: int
    skipped: int
    gamma: float | None = None
    alpha_min: float | None = None
    alpha_max: float | None = None
    alpha_avg: float | None = None
    gamma_witness: dict | None = None
    alpha_witness: dict | None = None

    def to_json(self):
        out = {"mode": self.mode, "samples": self.samples, "skipped": self.skipped}
        if self.gamma is not None:
            out["gamma_emp"] = float(self.gamma)
            out["witnesses"] = {"gamma": self.gamma_witness}
        if self.alpha_max is not None:
            out["alpha_emp_range"] = [float(self.alpha_min), float(self.alpha_max)]
            out["alpha_emp_avg"] = float(self.alpha_avg)
            out.setdefault("witnesses", {})["alpha"] = self.alpha_witness
        return out


def _clamp01(x):
    """Clamp to [0, 1], snapping values within round-off of an endpoint.

    Ratios of mathematically equal marginal sums come out at 1 +- a few ulp;
    reporting 0.999999999999999 as a submodularity violation (or 1e-15 as
    positive curvature) would be noise, not signal.
    """
    if x >= 1.0 - 1e-12:
        return 1.0
    if x <= 1e-12:
        return 0.0
    return x


def _normalized_table(bundle, metric):
    """Closure returning f(subset) - f(empty) with the offset precomputed."""
    offset = evaluate(metric, bundle, ())

    def value(subset):
        if not subset:
            return 0.0
        return evaluate(metric, bundle, subset) - offset

    return value


def _denominator_tol(value, bundle, metric):
    full = value(tuple(range(bundle.size)))
    return 1e-12 * (1.0 + abs(full))


def _draw_subset(rng, m, size):
    if size == 0:
        return ()
    return tuple(sorted(int(i) for i in rng.choice(m, size=size, replace=False)))


def _draw_pair(rng, m, omega_cap=None):
    omega_max = m if omega_cap is None else min(m, omega_cap)
    s = _draw_subset(rng, m, int(rng.integers(0, m)))
    omega = _draw_subset(rng, m, int(rng.integers(1, omega_max + 1)))
    return s, omega


def estimate_gamma(bundle, metric, plan=SamplePlan()):
    """Largest gamma consistent with ``plan.pairs`` sampled (Omega, S) pairs.

    Over-estimates the true ratio (sampling can only drop constraints); the
    result is clamped to [0, 1].
    """
    metric = as_metric(metric)
    m = bundle.size
    value = _normalized_table(bundle, metric)
    tol = _denominator_tol(value, bundle, metric)

    best = math.inf
    witness = None
    used = 0
    skipped = 0
    for i in range(plan.pairs):
        rng = rng_for(plan.seed, i)
        s, omega = _draw_pair(rng, m, plan.omega_cap)
        f_s = value(s)
        union = tuple(sorted(set(s) | set(omega)))
        rho_omega = value(union) - f_s
        if rho_omega <= tol:
            skipped += 1
            continue
        extra = sorted(set(omega) - set(s))
        lhs = sum(value(tuple(sorted(s + (w,)))) - f_s for w in extra)
        ratio = lhs / rho_omega
        used += 1
        if ratio < best:
            best = ratio
            witness = {"s": list(s), "omega": list(omega), "ratio": float(ratio)}
    if used == 0:
        raise NoAdmissibleSamplesError(
            f"all {plan.pairs} sampled pairs had near-zero marginals "
            f"(tolerance {tol:.3e}); the metric is constant on this instance"
        )
    return RatioEstimate(
        mode="sampled",
        samples=used,
        skipped=skipped,
        gamma=_clamp01(best),
        gamma_witness=witness,
    )


def estimate_alpha(bundle, metric, plan=SamplePlan()):
    """Curvature statistics from sampled (Omega, S, j) triples.

    Per admissible sample, ``alpha = 1 - rho_j((S - j) | Omega) /
    rho_j(S - j)`` clamped to [0, 1]. The maximum is the binding estimate
    (an under-estimate of the true curvature under sampling); the minimum
    and average describe the typical behaviour.
    """
    metric = as_metric(metric)
    m = bundle.size
    value = _normalized_table(bundle, metric)
    tol = _denominator_tol(value, bundle, metric)

    collected = []
    witness = None
    skipped = 0
    for i in range(plan.pairs):
        rng = rng_for(plan.seed, i)
        for _ in range(10_000):
            s, omega = _draw_pair(rng, m, plan.omega_cap)
            diff = sorted(set(s) - set(omega))
            if diff:
                break
        else:  # pragma: no cover - astronomically unlikely
            raise NoAdmissibleSamplesError(
                "could not draw a pair with S - Omega non-empty"
            )
        j = int(diff[int(rng.integers(0, len(diff)))])
        s_minus = tuple(sorted(set(s) - {j}))
        rho_ref = value(s) - value(s_minus)
        if rho_ref <= tol:
            skipped += 1
            continue
        union = tuple(sorted(set(s) | set(omega)))
        union_minus = tuple(sorted((set(s) - {j}) | set(omega)))
        rho_ctx = value(union) - value(union_minus)
        alpha = _clamp01(1.0 - rho_ctx / rho_ref)
        collected.append(alpha)
        if witness is None or alpha > witness["alpha"]:
            witness = {
                "s": list(s),
                "omega": list(omega),
                "j": j,
                "alpha": float(alpha),
            }
    if not collected:
        raise NoAdmissibleSamplesError(
            f"all {plan.pairs} sampled triples had near-zero reference marginals "
            f"(tolerance {tol:.3e})"
        )
    return RatioEstimate(
        mode="sampled",
        samples=len(collected),
        skipped=skipped,
        alpha_min=float(min(collected)),
        alpha_max=float(max(collected)),
        alpha_avg=float(sum(collected) / len(collected)),
        alpha_witness=witness,
    )


def _bits(mask, m):
    return [i for i in range(m) if mask & (1 << i)]


def exhaustive_gamma_alpha(bundle, metric):
    """Exact gamma and alpha over every constraint in the definitions.

    Restricted to small catalogs; the constraint count grows as 4^M. With no
    admissible constraint (a constant function) the definitional extremes
    gamma = 1, alpha = 0 are returned.
    """
    metric = as_metric(metric)
    m = bundle.size
    if m > EXHAUSTIVE_MAX_CANDIDATES:
        raise EnumerationCapError(
            f"exhaustive evaluation of {4 ** m} subset-pair constraints refused "
            f"(M = {m} > {EXHAUSTIVE_MAX_CANDIDATES})",
            count=4 ** m,
        )
    value = _normalized_table(bundle, metric)
    tol = _denominator_tol(value, bundle, metric)

    total = 1 << m
    table = [value(tuple(_bits(mask, m))) for mask in range(total)]

    gamma_best = math.inf
    gamma_witness = None
    gamma_used = 0
    gamma_skipped = 0
    for s_mask in range(total):
        f_s = table[s_mask]
        for o_mask in range(total):
            rho = table[s_mask | o_mask] - f_s
            if rho <= tol:
                gamma_skipped += 1
                continue
            gamma_used += 1
            lhs = 0.0
            extra = o_mask & ~s_mask
            for w in _bits(extra, m):
                lhs += table[s_mask | (1 << w)] - f_s
            ratio = lhs / rho
            if ratio < gamma_best:
                gamma_best = ratio
                gamma_witness = {
                    "s": _bits(s_mask, m),
                    "omega": _bits(o_mask, m),
                    "ratio": float(ratio),
                }
    gamma = _clamp01(gamma_best) if gamma_used else 1.0

    alphas = []
    alpha_witness = None
    alpha_skipped = 0
    for s_mask in range(total):
        for o_mask in range(total):
            own = s_mask & ~o_mask
            if not own:
                continue
            for j in _bits(own, m):
                bit = 1 << j
                rho_ref = table[s_mask] - table[s_mask & ~bit]
                if rho_ref <= tol:
                    alpha_skipped += 1
                    continue
                rho_ctx = table[s_mask | o_mask] - table[(s_mask & ~bit) | o_mask]
                alpha = _clamp01(1.0 - rho_ctx / rho_ref)
                alphas.append(alpha)
                if alpha_witness is None or alpha > alpha_witness["alpha"]:
                    alpha_witness = {
                        "s": _bits(s_mask, m),
                        "omega": _bits(o_mask, m),
                        "j": j,
                        "alpha": float(alpha),
                    }

    gamma_est = RatioEstimate(
        mode="exhaustive",
        samples=gamma_used,
        skipped=gamma_skipped,
        gamma=gamma,
        gamma_witness=gamma_witness,
    )
    if alphas:
        alpha_est = RatioEstimate(
            mode="exhaustive",
            samples=len(alphas),
            skipped=alpha_skipped,
            alpha_min=float(min(alphas)),
            alpha_max=float(max(alphas)),
            alpha_avg=float(sum(alphas) / len(alphas)),
            alpha_witness=alpha_witness,
        )
    else:
        alpha_est = RatioEstimate(
            mode="exhaustive",
            samples=0,
            skipped=alpha_skipped,
            alpha_min=0.0,
            alpha_max=0.0,
            alpha_avg=0.0,
            alpha_witness=None,
        )
    return gamma_est, alpha_est
