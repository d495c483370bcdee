"""Network control instances and their precomputed controllability Gramians.

A :class:`LinearSystem` bundles the stable dynamics matrix, the catalog of
candidate actuator vectors, optional pre-installed base inputs, and the
identity regularization weight. :func:`build_bundle` solves one Lyapunov
equation per candidate (reusing a single operator factorization) and the
resulting :class:`GramianBundle` assembles the Gramian of any subset by
summation: the Gramian depends additively on the actuators, so

    W(base + S) = W(base) + sum_{i in S} W(candidate i)

holds exactly and no subset ever needs a fresh solve.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import LyapunovSolver, spectral_abscissa
from .exceptions import UnstableSystemError
from .validation import as_float_matrix, check_square

#: Identity regularization applied by default when the trace-inverse metric
#: is requested on a system with no base actuators (documented, overridable).
DEFAULT_TRACE_INV_EPSILON = 1e-6

#: Sentinel accepted for ``candidates``: one unit vector per state node.
STANDARD_BASIS = "standard_basis"


def as_actuator_set(indices, size, name="indices"):
    """Canonicalize a subset of candidate indices to a sorted tuple.

    Indices are 0-based positions into the candidate catalog. Duplicates and
    out-of-range entries are rejected.
    """
    try:
        idx = tuple(sorted(int(i) for i in indices))
    except (TypeError, ValueError) as err:
        raise ValueError(f"{name} must be an iterable of integers") from err
    for i in idx:
        if not 0 <= i < size:
            raise ValueError(f"{name} entry {i} out of range [0, {size})")
    if len(set(idx)) != len(idx):
        raise ValueError(f"{name} contains duplicates: {idx}")
    return idx


@dataclass(frozen=True)
class LinearSystem:
    """A stable network with a catalog of candidate actuator locations.

    Parameters
    ----------
    a : (n, n) array_like
        Hurwitz-stable dynamics matrix.
    candidates : iterable of (n,) vectors, or the string "standard_basis"
        Candidate input columns b_1 ... b_M. The default catalog is the
        standard basis (one actuator per state node).
    base : (n, m) array_like, optional
        Pre-installed input matrix. When it renders the system controllable
        the base Gramian is positive definite and the trace-inverse metric
        is well defined without regularization.
    epsilon : float
        Weight of the identity term added to the base Lyapunov right-hand
        side. Enters the base Gramian once, never the per-candidate ones,
        which preserves exact additivity of candidate contributions.
    """

    a: np.ndarray
    candidates: np.ndarray = STANDARD_BASIS
    base: np.ndarray | None = None
    epsilon: float = 0.0

    def __post_init__(self):
        a = check_square(self.a, "a")
        rho = spectral_abscissa(a)
        if rho >= 0.0:
            raise UnstableSystemError(
                f"LinearSystem requires a stable dynamics matrix: "
                f"spectral abscissa {rho:.6g} >= 0",
                abscissa=rho,
            )
        n = a.shape[0]

        if isinstance(self.candidates, str):
            if self.candidates != STANDARD_BASIS:
                raise ValueError(
                    f"unknown candidate catalog {self.candidates!r}; "
                    f"expected vectors or {STANDARD_BASIS!r}"
                )
            cand = np.eye(n)
        else:
            cand = np.atleast_2d(np.asarray(self.candidates, dtype=float))
            if cand.ndim != 2 or cand.shape[1] != n:
                raise ValueError(
                    f"candidates must be M vectors of length n={n}, "
                    f"got array of shape {cand.shape}"
                )
            if not np.all(np.isfinite(cand)):
                raise ValueError("candidates contain non-finite entries")
            cand = cand.copy()

        base = self.base
        if base is not None:
            base = as_float_matrix(base, "base")
            if base.shape[0] != n:
                raise ValueError(
                    f"base must have {n} rows to match a, got {base.shape[0]}"
                )

        eps = float(self.epsilon)
        if not np.isfinite(eps) or eps < 0.0:
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")

        object.__setattr__(self, "a", a)
        object.__setattr__(self, "candidates", cand)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "epsilon", eps)

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def num_candidates(self):
        return self.candidates.shape[0]

    def candidate_matrix(self, subset=None):
        """Input matrix with the selected candidate vectors as columns.

        With ``subset=None`` the full (n, M) catalog matrix is returned.
        """
        if subset is None:
            return self.candidates.T.copy()
        idx = as_actuator_set(subset, self.num_candidates, "subset")
        return self.candidates[list(idx)].T.copy()


@dataclass(frozen=True)
class GramianBundle:
    """Base Gramian plus one Gramian per candidate actuator.

    ``w_base`` solves ``A W + W A^T + B0 B0^T + eps I = 0`` (the zero matrix
    when there is no base input and eps = 0); ``w_each[i]`` solves
    ``A W + W A^T + b_i b_i^T = 0``. All stored matrices are positive
    semidefinite up to solver accuracy, and the bundle is immutable.
    """

    w_base: np.ndarray
    w_each: np.ndarray
    epsilon: float
    has_base: bool

    @property
    def n(self):
        return self.w_base.shape[0]

    @property
    def size(self):
        """Number of candidate actuators M."""
        return self.w_each.shape[0]

    def assemble(self, subset):
        return assemble(self, subset)


def build_bundle(system):
    """Solve the per-candidate Lyapunov equations and return the bundle.

    A single operator factorization is shared by the base solve and all M
    candidate solves, so the bundle costs roughly one factorization plus
    M + 1 back-substitutions.
    """
    solver = LyapunovSolver(system.a)
    n = system.n
    if system.base is None and system.epsilon == 0.0:
        w_base = np.zeros((n, n))
        has_base = False
    else:
        q = system.epsilon * np.eye(n)
        if system.base is not None:
            q = q + system.base @ system.base.T
        w_base = solver.solve(q)
        has_base = True
    w_each = np.stack([solver.solve(np.outer(b, b)) for b in system.candidates])
    return GramianBundle(
        w_base=w_base, w_each=w_each, epsilon=system.epsilon, has_base=has_base
    )


def assemble(bundle, subset):
    """Gramian of a candidate subset: ``w_base + sum_{i in subset} w_each[i]``.

    Pure summation over precomputed parts, cost O(|subset| n^2); never
    re-solves a Lyapunov equation.
    """
    idx = as_actuator_set(subset, bundle.size, "subset")
    w = bundle.w_base.copy()
    if idx:
        w += bundle.w_each[list(idx)].sum(axis=0)
    return w
