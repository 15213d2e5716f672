"""Frame data model: tightness, Parseval scaling, coherence and ETF checks."""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DomainError, NotTightError, ZeroColumnError
from .linalg import COMPLEX, REAL, check_field, field_of
from .validation import TIGHT_TOL, check_frame

ETF_TOL = 1e-9


@dataclass(frozen=True)
class CoherenceProfile:
    offdiag_max: float
    offdiag_min: float
    offdiag_spread: float
    welch_value: float


def gram(U):
    U = check_frame(U, allow_wide_only=False)
    return U.conj().T @ U


def is_tight(U, tol=TIGHT_TOL):
    """Return ``(flag, alpha)`` where ``UU* = (1/alpha) I`` when ``flag`` holds."""
    U = check_frame(U, allow_wide_only=False)
    m = U.shape[0]
    S = U @ U.conj().T
    c = float(np.trace(S).real) / m
    if c <= 0.0:
        return False, math.inf
    flag = bool(np.max(np.abs(S - c * np.eye(m))) < tol)
    return flag, 1.0 / c


def normalize_to_parseval(U, tol=TIGHT_TOL):
    U = check_frame(U)
    flag, alpha = is_tight(U, tol=tol * max(1.0, _frame_scale(U)))
    if not flag:
        raise NotTightError("frame is not tight")
    return math.sqrt(alpha) * U


def _frame_scale(U):
    return float(np.trace(U @ U.conj().T).real) / U.shape[0]


def welch_angle(m, N):
    """Common value of ``|<u_i, u_j>|`` in an ETF of ``N`` unit vectors in dimension ``m``."""
    if not (1 <= m < N):
        raise DomainError(f"welch_angle needs N > m >= 1, got m={m}, N={N}")
    return math.sqrt((N - m) / (m * (N - 1)))


def cardinality_cap(m, field):
    """Largest possible number of vectors in an ETF (distinct lines) of dimension ``m``."""
    if m < 1:
        raise DomainError("m must be positive")
    return m * (m + 1) // 2 if check_field(field) == REAL else m * m


def _unit_columns(U):
    norms = np.linalg.norm(U, axis=0)
    if np.any(norms == 0.0):
        raise ZeroColumnError(f"column {int(np.argmin(norms))} is zero")
    return U / norms


def coherence_profile(U):
    U = check_frame(U, allow_wide_only=False)
    m, N = U.shape
    V = _unit_columns(U)
    A = np.abs(V.conj().T @ V)
    off = A[~np.eye(N, dtype=bool)]
    if off.size:
        hi, lo = float(off.max()), float(off.min())
    else:
        hi = lo = 0.0
    welch = welch_angle(m, N) if N > m else 0.0
    return CoherenceProfile(hi, lo, hi - lo, welch)


def etf_certificate(U, tol=ETF_TOL, allow_trivial=False, field=None):
    """Check the ETF conditions and return ``(ok, reasons)``.

    Accepts unit-norm ETFs and their Parseval rescalings alike: column norms
    must agree with each other, angles are measured between normalized
    columns. ``reasons`` lists every failed condition.
    """
    U = check_frame(U, allow_wide_only=False)
    m, N = U.shape
    field = check_field(field) if field is not None else field_of(U)
    reasons = []
    norms = np.linalg.norm(U, axis=0)
    if np.any(norms == 0.0):
        return False, ["zero column"]
    if np.max(np.abs(norms / norms.mean() - 1.0)) >= tol:
        reasons.append("column norms differ")
    flag, _ = is_tight(U / norms.mean(), tol=tol)
    if not flag:
        reasons.append("not tight")
    prof = coherence_profile(U)
    if N < m:
        reasons.append("fewer vectors than dimension")
    elif N == m:
        if not allow_trivial:
            reasons.append("degenerate N=m")
        elif prof.offdiag_max >= tol:
            reasons.append("basis not orthogonal")
    else:
        if prof.offdiag_spread >= tol:
            reasons.append(f"not equiangular (spread {prof.offdiag_spread:.3g})")
        if abs(prof.offdiag_max - prof.welch_value) >= tol:
            reasons.append("coherence differs from Welch value")
    if N > cardinality_cap(m, field):
        reasons.append(f"N={N} exceeds the {field} cap {cardinality_cap(m, field)}")
    return not reasons, reasons


def certify_etf(U, tol=ETF_TOL, allow_trivial=False, field=None):
    return etf_certificate(U, tol=tol, allow_trivial=allow_trivial, field=field)[0]


class ParsevalNormalizer(TransformerMixin, BaseEstimator):
    """Rescale tight frames to Parseval frames (``UU* = I``).

    ``fit`` records the tightness constant of a reference frame;
    ``transform`` rescales any tight frame independently.
    """

    def __init__(self, tol=TIGHT_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        X = check_frame(X)
        flag, alpha = is_tight(X, tol=self.tol * max(1.0, _frame_scale(X)))
        if not flag:
            raise NotTightError("frame is not tight")
        self.alpha_ = alpha
        self.field_ = COMPLEX if np.iscomplexobj(X) else REAL
        return self

    def transform(self, X):
        check_is_fitted(self, "alpha_")
        return normalize_to_parseval(X, tol=self.tol)
