"""Input validation helpers shared across the package.

All helpers coerce to float64 ndarrays, check finiteness, and raise
``ValueError`` with the offending argument name in the message.
"""

import numpy as np

#: Relative asymmetry accepted before a matrix is rejected as non-symmetric.
SYMMETRY_RTOL = 1e-12


def as_float_matrix(value, name="matrix"):
    """Coerce to a 2-D float64 array with finite entries."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_square(value, name="matrix"):
    """Coerce to a square float64 matrix."""
    arr = as_float_matrix(value, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_symmetric(value, name="matrix", rtol=SYMMETRY_RTOL):
    """Validate symmetry to within ``rtol`` and return the symmetrized matrix.

    The asymmetry is measured relative to ``max(1, max|entry|)`` so that
    matrices with entries below unit scale are held to an absolute 1e-12.
    The returned matrix is ``(m + m.T) / 2``, which removes any round-off
    asymmetry before it can reach an eigenvalue or factorization routine.
    """
    arr = check_square(value, name)
    scale = max(1.0, float(np.abs(arr).max()))
    asym = float(np.abs(arr - arr.T).max())
    if asym > rtol * scale:
        raise ValueError(
            f"{name} is not symmetric: max asymmetry {asym:.3e} exceeds "
            f"{rtol:g} relative to scale {scale:.3e}"
        )
    return 0.5 * (arr + arr.T)


def check_vector(value, n=None, name="vector"):
    """Coerce to a 1-D float64 vector, optionally of fixed length."""
    arr = np.asarray(value, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if n is not None and arr.size != n:
        raise ValueError(f"{name} must have length {n}, got {arr.size}")
    return arr
