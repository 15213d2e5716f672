"""Rational weights and column replication.

A weighted frame ``(t, U)`` with rational ``t = n/q`` is turned into an
equal-weight Parseval frame by repeating column ``u_i`` ``n_i^2`` times,
scaled by ``1/n_i``. Its equal-weight objective equals the weighted
objective of ``U`` at ``t/||t||``.
"""

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .constants import abs_gram, objective
from .exceptions import EmptyFrameError, NotTightError, PrecisionError, TooLargeError
from .search import OptConfig, lambda_search
from .validation import check_parseval, parseval_residual

MAX_COLUMNS = 10**6
MAX_DENOMINATOR = 10**15


@dataclass(frozen=True)
class RationalWeights:
    q: int
    n: tuple

    @property
    def n_columns(self):
        return sum(k * k for k in self.n)

    @property
    def t(self):
        return np.array(self.n, dtype=np.float64) / self.q

    def norm_times_q_squared(self):
        # ||t||^2 q^2, exact
        return self.n_columns


def rationalize(t, eps, base=10, min_count=0, max_denominator=MAX_DENOMINATOR):
    """Round ``t`` to ``n/q`` with ``q`` the smallest power of ``base`` such that
    ``||t - n/q|| <= eps``.

    ``eps = 0`` requires ``t`` given as exact rationals (``Fraction`` or int)
    and uses the least common denominator. ``min_count`` floors every
    count, which keeps every column when the result is replicated.
    """
    if eps == 0:
        fr = [Fraction(x) for x in t]
        if any(x < 0 for x in fr):
            raise ValueError("weights must be nonnegative")
        q = 1
        for x in fr:
            q = q * x.denominator // math.gcd(q, x.denominator)
        n = tuple(max(int(x * q), min_count) for x in fr)
        if any(k != x * q for k, x in zip(n, fr)):
            raise PrecisionError("min_count changes an exact rational weight")
        return RationalWeights(q, n)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise ValueError("weights must be nonnegative")
    q = 1
    while True:
        n = np.maximum(np.rint(t * q), min_count).astype(np.int64)
        if np.linalg.norm(t - n / q) <= eps:
            return RationalWeights(q, tuple(int(k) for k in n))
        q *= base
        if q > max_denominator:
            raise PrecisionError(f"no denominator up to {max_denominator} reaches eps={eps}")


def replicate(U, w, tight_tol=1e-10, max_columns=MAX_COLUMNS):
    """Block matrix ``[u_1 1*/n_1 (n_1^2 times) | ... ]``; zero counts drop the column.

    Dropping a column is only allowed when it is a zero vector, otherwise
    the result would not be Parseval.
    """
    U = check_parseval(U)
    n = np.asarray(w.n, dtype=np.int64)
    if n.shape[0] != U.shape[1]:
        raise ValueError("weight count does not match the number of columns")
    if not n.any():
        raise EmptyFrameError("all counts are zero")
    if w.n_columns > max_columns:
        raise TooLargeError(f"{w.n_columns} columns exceeds the limit {max_columns}")
    blocks = [np.repeat(U[:, [i]] / k, k * k, axis=1) for i, k in enumerate(n) if k > 0]
    out = np.hstack(blocks)
    res = parseval_residual(out)
    if res >= tight_tol:
        raise NotTightError(f"replicated frame is not Parseval (residual {res:.3g})")
    return out


def replicated_mu_objective(U, w):
    """Equal-weight objective of ``replicate(U, w)`` without materializing it."""
    n = np.asarray(w.n, dtype=np.float64)
    A = abs_gram(np.asarray(U))
    # sum_ij n_i n_j |<u_i,u_j>|, pairwise summation by numpy
    return float((np.outer(n, n) * A).sum() / w.n_columns)


@dataclass
class IdentityCheck:
    lhs: float
    rhs: float
    lhs_analytic: float
    materialized: bool
    ok: bool

    def to_dict(self):
        return asdict(self)


def verify_replication_identity(U, w, rtol=1e-10, max_columns=MAX_COLUMNS):
    """Compare the replicated equal-weight objective with the weighted one.

    ``lhs`` is computed on the materialized replica when it fits in
    ``max_columns``, and is cross-checked against the analytic sum.
    """
    U = check_parseval(U)
    t = w.t
    rhs = objective(t / np.linalg.norm(t), U)
    analytic = replicated_mu_objective(U, w)
    materialized = w.n_columns <= max_columns
    if materialized:
        R = replicate(U, w, max_columns=max_columns)
        lhs = float(abs_gram(R).sum() / R.shape[1])
    else:
        lhs = analytic
    scale = max(1.0, abs(rhs))
    ok = abs(lhs - rhs) < rtol * scale and abs(lhs - analytic) < rtol * scale
    return IdentityCheck(lhs, rhs, analytic, materialized, bool(ok))


@dataclass
class WitnessReport:
    m: int
    N: int
    field: str
    eps: float
    lambda_value: float
    q: int
    n: list
    n_columns: int
    weight_error: float
    norm_deviation: float
    witness_value: float
    bound: float
    holds: bool

    def to_dict(self):
        return asdict(self)


def lambda_to_mu_witness(m, N, field="real", eps=1e-4, config=None, base=10):
    """Turn the best weighted frame for ``(m, N)`` into an equal-weight frame.

    Reports the weighted value, the rational weights, the equal-weight value
    of the replicated frame, and checks it against ``(value - eps)/(1+eps)^2``.
    ``weight_error = ||t - n/q||`` and ``norm_deviation = | ||n/q|| - 1 |`` are
    reported separately.
    """
    rep = lambda_search(m, N, field, config or OptConfig())
    w = rationalize(rep.best_t, eps, base=base, min_count=1)
    t_eps = w.t
    witness = replicated_mu_objective(rep.best_U, w)
    bound = (rep.best_value - eps) / (1.0 + eps) ** 2
    return WitnessReport(
        m=m,
        N=N,
        field=field,
        eps=eps,
        lambda_value=rep.best_value,
        q=w.q,
        n=list(w.n),
        n_columns=w.n_columns,
        weight_error=float(np.linalg.norm(rep.best_t - t_eps)),
        norm_deviation=float(abs(np.linalg.norm(t_eps) - 1.0)),
        witness_value=witness,
        bound=bound,
        holds=bool(witness >= bound - 1e-12),
    )


class FrameReplicator(TransformerMixin, BaseEstimator):
    """Transformer form of ``replicate``: ``fit`` rationalizes ``weights``."""

    def __init__(self, weights=None, eps=1e-3, base=10, min_count=1, max_columns=MAX_COLUMNS):
        self.weights = weights
        self.eps = eps
        self.base = base
        self.min_count = min_count
        self.max_columns = max_columns

    def fit(self, X, y=None):
        X = check_parseval(X)
        t = self.weights
        if t is None:
            t = np.full(X.shape[1], 1.0 / math.sqrt(X.shape[1]))
        self.rational_weights_ = rationalize(t, self.eps, base=self.base, min_count=self.min_count)
        return self

    def transform(self, X):
        return replicate(X, self.rational_weights_, max_columns=self.max_columns)
