"""Dense real matrix kernels: symmetric eigensolves, Lyapunov equations,
trace-inverse, log-determinant, numerical rank, and spectral abscissa.

Everything operates on plain ``numpy.ndarray`` inputs and is pure: no global
state, safe for concurrent use. Symmetric inputs are validated and
symmetrized on entry (see :func:`gramsel.validation.check_symmetric`), so
downstream factorizations never see round-off asymmetry.
"""

import numpy as np
import scipy.linalg as sla

from .exceptions import (
    EigenDecompositionError,
    LyapunovResidualError,
    NotPositiveDefiniteError,
    SingularOperatorError,
    UnstableSystemError,
)
from .validation import check_square, check_symmetric

#: Guaranteed relative residual of every Lyapunov solve:
#: ||A W + W A^T + Q||_F <= LYAPUNOV_RESIDUAL_RTOL * ||Q||_F.
LYAPUNOV_RESIDUAL_RTOL = 1e-8

#: Default relative eigenvalue cutoff for numerical rank decisions. The
#: threshold is necessarily arbitrary; override it where the application
#: dictates a different notion of "numerically zero".
DEFAULT_RANK_RTOL = 1e-9


def spectral_abscissa(a):
    """Largest real part among the eigenvalues of a square matrix.

    Parameters
    ----------
    a : (n, n) array_like
        Real square matrix; neither symmetry nor stability is assumed.

    Returns
    -------
    float
        ``max Re(lambda)`` over the spectrum of ``a``. Negative exactly when
        the matrix is Hurwitz stable.
    """
    a = check_square(a, "a")
    try:
        eigs = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as err:
        raise EigenDecompositionError(
            f"eigenvalue iteration failed while computing the spectral abscissa: {err}"
        ) from err
    return float(eigs.real.max())


def sym_eigenvalues(m):
    """Eigenvalues of a symmetric matrix, sorted descending.

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric matrix (validated to 1e-12 relative asymmetry).

    Returns
    -------
    (n,) ndarray
        Real eigenvalues with ``values[0] >= values[1] >= ...``.
    """
    m = check_symmetric(m, "m")
    try:
        vals = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as err:
        raise EigenDecompositionError(
            f"symmetric eigenvalue iteration did not converge: {err}"
        ) from err
    return vals[::-1].copy()


def sym_eigh(m):
    """Eigenvalues (descending) and matching orthonormal eigenvectors.

    Returns
    -------
    values : (n,) ndarray
        Descending eigenvalues.
    vectors : (n, n) ndarray
        Column ``vectors[:, i]`` pairs with ``values[i]``; the
        reconstruction ``vectors @ diag(values) @ vectors.T`` reproduces the
        input to high relative accuracy.
    """
    m = check_symmetric(m, "m")
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as err:
        raise EigenDecompositionError(
            f"symmetric eigenvalue iteration did not converge: {err}"
        ) from err
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def rank_from_spectrum(values, rel_tol=DEFAULT_RANK_RTOL):
    """Count eigenvalues strictly above ``rel_tol * max(largest, 0)``.

    Shared between :func:`numerical_rank` and the rank metric so the two can
    never disagree. Returns 0 for an all-zero (or negative) spectrum.
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    values = np.asarray(values, dtype=float)
    top = max(float(values.max()), 0.0)
    return int(np.count_nonzero(values > rel_tol * top))


def numerical_rank(m, rel_tol=DEFAULT_RANK_RTOL):
    """Numerical rank of a symmetric matrix by relative eigenvalue cutoff."""
    return rank_from_spectrum(sym_eigenvalues(m), rel_tol)


def trace_inverse(m):
    """``tr(m^{-1})`` for a symmetric positive definite matrix.

    Computed from a Cholesky factor ``m = L L^T`` as ``||L^{-1}||_F^2``
    (one triangular solve), never by forming the explicit inverse of ``m``.

    Raises
    ------
    NotPositiveDefiniteError
        If the factorization fails; the error names the smallest eigenvalue.
    """
    m = check_symmetric(m, "m")
    try:
        chol = sla.cholesky(m, lower=True)
    except np.linalg.LinAlgError as err:
        lam_min = float(np.linalg.eigvalsh(m)[0])
        raise NotPositiveDefiniteError(
            f"matrix is numerically singular: smallest eigenvalue {lam_min:.6e}",
            min_eigenvalue=lam_min,
        ) from err
    inv_factor = sla.solve_triangular(chol, np.eye(m.shape[0]), lower=True)
    return float(np.sum(inv_factor * inv_factor))


def log_det(m):
    """``log det(m)`` for a symmetric positive definite matrix.

    Uses the Cholesky factor, ``2 * sum(log diag(L))``, which is stable for
    well-conditioned and moderately ill-conditioned inputs alike.
    """
    m = check_symmetric(m, "m")
    try:
        chol = sla.cholesky(m, lower=True)
    except np.linalg.LinAlgError as err:
        lam_min = float(np.linalg.eigvalsh(m)[0])
        raise NotPositiveDefiniteError(
            f"log_det requires a positive definite matrix: smallest eigenvalue "
            f"{lam_min:.6e}",
            min_eigenvalue=lam_min,
        ) from err
    return float(2.0 * np.sum(np.log(np.diag(chol))))


class LyapunovSolver:
    """LU-factorized continuous-time Lyapunov operator for a fixed stable ``a``.

    Solves ``a @ w + w @ a.T + q = 0`` for symmetric positive semidefinite
    ``q``. The linear operator ``kron(I, a) + kron(a, I)`` over the n^2
    unknowns of ``w`` is factorized once at construction; every subsequent
    :meth:`solve` reuses that factorization, so Gramians for many input
    matrices sharing the same dynamics cost one factorization plus a cheap
    back-substitution each. Instances are immutable after construction and
    may be shared across threads.

    Intended for desk-scale dense problems (n up to roughly 64); the
    operator is an (n^2, n^2) dense matrix.
    """

    def __init__(self, a):
        a = check_square(a, "a")
        rho = spectral_abscissa(a)
        if rho >= 0.0:
            raise UnstableSystemError(
                f"dynamics matrix is not Hurwitz: spectral abscissa {rho:.6g} >= 0",
                abscissa=rho,
            )
        n = a.shape[0]
        eye = np.eye(n)
        operator = np.kron(eye, a) + np.kron(a, eye)
        lu, piv = sla.lu_factor(operator, check_finite=False)
        if np.any(np.diag(lu) == 0.0):
            raise SingularOperatorError(
                "linearized Lyapunov operator is numerically singular"
            )
        self._a = a
        self._lu = (lu, piv)
        self._n = n

    @property
    def n(self):
        """State dimension of the underlying dynamics matrix."""
        return self._n

    @property
    def a(self):
        """Copy of the (stable) dynamics matrix this solver was built for."""
        return self._a.copy()

    def solve(self, q):
        """Solve ``a w + w a.T + q = 0`` and return the symmetrized ``w``.

        The result is checked against the residual contract
        ``||a w + w a.T + q||_F <= 1e-8 ||q||_F`` and a
        :class:`~gramsel.exceptions.LyapunovResidualError` is raised if the
        back-substitution ever failed to meet it.
        """
        q = check_symmetric(q, "q")
        if q.shape[0] != self._n:
            raise ValueError(
                f"q has dimension {q.shape[0]}, solver was built for {self._n}"
            )
        flat = sla.lu_solve(self._lu, -q.reshape(-1, order="F"), check_finite=False)
        w = flat.reshape((self._n, self._n), order="F")
        w = 0.5 * (w + w.T)
        q_norm = float(np.linalg.norm(q))
        if q_norm > 0.0:
            residual = float(np.linalg.norm(self._a @ w + w @ self._a.T + q))
            if residual > LYAPUNOV_RESIDUAL_RTOL * q_norm:
                raise LyapunovResidualError(
                    f"Lyapunov residual {residual:.3e} exceeds "
                    f"{LYAPUNOV_RESIDUAL_RTOL:g} * ||q||_F = "
                    f"{LYAPUNOV_RESIDUAL_RTOL * q_norm:.3e}"
                )
        return w


def solve_lyapunov(a, q):
    """One-shot continuous Lyapunov solve ``a w + w a.T + q = 0``.

    Build a :class:`LyapunovSolver` directly when several right-hand sides
    share the same dynamics matrix.
    """
    return LyapunovSolver(a).solve(q)
