"""Input validation helpers, in the spirit of ``sklearn.utils.check_array``."""

import numpy as np

from .exceptions import NotParsevalError, ShapeError
from .linalg import as_field

TIGHT_TOL = 1e-9


def check_frame(U, field=None, allow_wide_only=True):
    """Validate a frame matrix (vectors are columns) and return it as an array.

    ``field`` casts to float64/complex128; by default the dtype decides.
    """
    U = np.asarray(U)
    if U.ndim != 2:
        raise ShapeError(f"frame must be a 2-d array, got ndim={U.ndim}")
    m, N = U.shape
    if m < 1:
        raise ShapeError("frame needs at least one row")
    if allow_wide_only and N < m:
        raise ShapeError(f"frame has N={N} < m={m} columns")
    if field is None:
        field = "complex" if np.iscomplexobj(U) else "real"
    U = as_field(U, field)
    if not np.all(np.isfinite(U)):
        raise ValueError("frame contains NaN or infinity")
    return U


def parseval_residual(U):
    m = U.shape[0]
    return float(np.max(np.abs(U @ U.conj().T - np.eye(m))))


def check_parseval(U, tol=TIGHT_TOL, field=None):
    U = check_frame(U, field=field)
    res = parseval_residual(U)
    if res >= tol:
        raise NotParsevalError(f"UU* - I has max entry {res:.3g} >= {tol:.3g}")
    return U


def check_weights(t, N=None, tol=1e-12):
    """Validate a nonnegative unit weight vector."""
    t = np.asarray(t, dtype=np.float64).ravel()
    if N is not None and t.shape[0] != N:
        raise ShapeError(f"weights have length {t.shape[0]}, expected {N}")
    if np.any(t < 0):
        raise ValueError("weights must be nonnegative")
    if abs(np.linalg.norm(t) - 1.0) > tol:
        raise ValueError("weights must have unit Euclidean norm")
    return t
