"""Small dense linear algebra over the real or complex field.

Matrices are plain numpy arrays; the field is carried by the dtype
(float64 for real, complex128 for complex).
"""

import numpy as np

from .exceptions import ConvergenceError, DomainError, RankError, ShapeError

REAL = "real"
COMPLEX = "complex"
FIELDS = (REAL, COMPLEX)

RANK_TOL = 1e-8


def check_field(field):
    field = str(field).lower()
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}, got {field!r}")
    return field


def field_of(A):
    return COMPLEX if np.iscomplexobj(A) else REAL


def as_field(A, field):
    """Cast ``A`` to the dtype used for ``field``."""
    if check_field(field) == COMPLEX:
        return np.asarray(A, dtype=np.complex128)
    A = np.asarray(A)
    if np.iscomplexobj(A):
        if np.any(A.imag != 0):
            raise DomainError("complex entries cannot be cast to the real field")
        A = A.real
    return np.asarray(A, dtype=np.float64)


def multiply(A, B):
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2:
        raise ShapeError("multiply expects two 2-d matrices")
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if field_of(A) != field_of(B):
        raise ShapeError("operands live over different fields")
    return A @ B


def adjoint(A):
    A = np.asarray(A)
    return A.conj().T if np.iscomplexobj(A) else A.T


def orthonormalize_rows(A, rank_tol=RANK_TOL):
    """Return ``U`` with orthonormal rows spanning the row space of ``A``.

    Householder QR of ``A*`` with the diagonal of ``R`` made real positive,
    so the result is unique and an input that already has orthonormal rows
    comes back unchanged up to rounding.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ShapeError("expected a 2-d matrix")
    m, N = A.shape
    if m > N:
        raise ShapeError(f"need m <= N for orthonormal rows, got {m}x{N}")
    Q, R = np.linalg.qr(adjoint(A))
    d = np.diag(R)
    mag = np.abs(d)
    scale = mag.max() if m else 0.0
    if m and (scale == 0.0 or mag.min() < rank_tol * scale):
        raise RankError("rows are numerically linearly dependent")
    phase = d / mag
    # A* = (Q D)(D^-1 R), D = diag(phase), keeps the triangular factor positive
    Q = Q * phase
    return adjoint(Q)


def dominant_eigenpair(A, tol=1e-12, max_iter=100_000, x0=None, seed=0):
    """Perron eigenpair of a symmetric entrywise-nonnegative matrix.

    Power iteration on ``A + shift*I`` (the shift breaks the tie between
    ``lambda_max`` and ``-lambda_max`` for periodic matrices). Stops once
    successive Rayleigh quotients differ by less than ``tol`` and the
    residual ``||Ax - vx||`` is below ``tol * max|A|``.

    With ``x0`` given, runs from that start only; otherwise from two seeded
    random nonnegative vectors and keeps the larger Rayleigh quotient.

    Returns ``(value, vector)`` with ``vector`` a nonnegative unit vector.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("dominant_eigenpair needs a square matrix")
    if np.any(A < 0):
        raise DomainError("matrix has negative entries")
    n = A.shape[0]
    amax = float(A.max()) if n else 0.0
    if amax == 0.0:
        x = np.zeros(n)
        x[0] = 1.0
        return 0.0, x

    if x0 is not None:
        starts = [np.abs(np.asarray(x0, dtype=np.float64).ravel())]
    else:
        rng = np.random.default_rng(seed)
        starts = [rng.random(n) + 0.5, rng.random(n) + 0.5]

    best = None
    for x in starts:
        value, vec = _power_iterate(A, x, amax, tol, max_iter)
        if best is None or value > best[0]:
            best = (value, vec)
    return best


def _power_iterate(A, x, amax, tol, max_iter):
    shift = 0.1 * amax
    norm = np.linalg.norm(x)
    if norm == 0.0 or x.shape != (A.shape[0],):
        raise ShapeError("bad starting vector")
    x = x / norm
    y = A @ x
    value = float(x @ y)
    for _ in range(max_iter):
        z = y + shift * x
        x = z / np.linalg.norm(z)
        y = A @ x
        new = float(x @ y)
        if abs(new - value) < tol and np.linalg.norm(y - new * x) < tol * amax:
            return new, np.maximum(x, 0.0)
        value = new
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def numerical_rank(A, rank_tol=RANK_TOL):
    """Number of singular values above ``rank_tol`` times the largest one."""
    A = np.asarray(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tol * s[0]))
