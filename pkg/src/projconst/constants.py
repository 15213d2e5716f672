"""Objective, exact inner maximization, closed-form bounds and equality checks."""

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .exceptions import DomainError, NotEtfError
from .frames import cardinality_cap, etf_certificate, normalize_to_parseval, welch_angle
from .linalg import COMPLEX, REAL, check_field, dominant_eigenpair
from .validation import TIGHT_TOL, check_parseval, check_weights

# Real dimensions with a known maximal ETF, and the complex ones (SIC-POVMs).
REAL_MAXIMAL_DIMS = (2, 3, 7, 23)
COMPLEX_MAXIMAL_DIMS = tuple(range(1, 18)) + (19, 24, 28, 35, 48)


def abs_gram(U):
    return np.abs(U.conj().T @ U)


def objective(t, U, tol=TIGHT_TOL):
    """``sum_ij t_i t_j |U*U|_ij`` for a Parseval frame ``U``."""
    U = check_parseval(U, tol=tol)
    t = check_weights(t, N=U.shape[1], tol=1e-10)
    return float(t @ abs_gram(U) @ t)


def mu_objective(U, tol=TIGHT_TOL):
    """Equal-weight objective ``(1/N) sum_ij |U*U|_ij``."""
    U = check_parseval(U, tol=tol)
    return float(abs_gram(U).sum() / U.shape[1])


def optimal_weights(U, tol=1e-13, x0=None, check=True):
    """Maximize the objective over unit ``t >= 0`` for fixed ``U``.

    The maximum is the largest eigenvalue of the nonnegative matrix
    ``|U*U|`` and is attained at its Perron vector. Returns ``(t, value)``.
    """
    if check:
        U = check_parseval(U)
    A = abs_gram(U)
    _, t = dominant_eigenpair(A, tol=tol, x0=x0)
    t = t / np.linalg.norm(t)
    return t, float(t @ A @ t)


def delta_bound(m, N):
    """``(m/N) (1 + sqrt((N-1)(N-m)/m))``."""
    if not 1 <= m <= N:
        raise DomainError(f"need N >= m >= 1, got m={m}, N={N}")
    return (m / N) * (1.0 + math.sqrt((N - 1) * (N - m) / m))


def _square_free(n):
    """Write ``n = k^2 * s`` with ``s`` square-free; return ``(k, s)``."""
    k, s, p = 1, n, 2
    while p * p <= s:
        while s % (p * p) == 0:
            s //= p * p
            k *= p
        p += 1
    return k, s


def delta_exact(m, N):
    """Exact form of ``delta_bound(m, N)``.

    Returns ``(value, text)`` where ``value`` is a ``Fraction`` when the
    bound is rational and None otherwise, and ``text`` is a closed form
    such as ``"4/3"`` or ``"(1+sqrt(5))/2"``.
    """
    if not 1 <= m <= N:
        raise DomainError(f"need N >= m >= 1, got m={m}, N={N}")
    r = Fraction((N - 1) * (N - m), m)
    p, q = r.numerator, r.denominator
    # sqrt(p/q) = sqrt(p*q)/q = k*sqrt(s)/q
    k, s = _square_free(p * q)
    if s == 1 or p == 0:
        value = Fraction(m, N) * (1 + Fraction(k if p else 0, q))
        return value, str(value)
    a, b, c = m * q, m * k, N * q
    g = math.gcd(math.gcd(a, b), c)
    a, b, c = a // g, b // g, c // g
    root = f"sqrt({s})" if b == 1 else f"{b}*sqrt({s})"
    text = f"({a}+{root})" if c != 1 else f"{a}+{root}"
    return None, text if c == 1 else f"{text}/{c}"


def global_upper_bound(m, field="real"):
    """Closed-form bound on the projection constants in dimension ``m``.

    Agrees with ``delta_bound`` at the cardinality cap; equals 1 for m = 1.
    """
    field = check_field(field)
    if m < 1:
        raise DomainError("m must be positive")
    if m == 1:
        return 1.0
    if field == REAL:
        value = (2.0 / (m + 1)) * (1.0 + (m - 1) / 2.0 * math.sqrt(m + 2))
    else:
        value = (1.0 / m) * (1.0 + (m - 1) * math.sqrt(m + 1))
    assert abs(value - delta_bound(m, cardinality_cap(m, field))) < 1e-12 * value
    return value


@dataclass
class BoundReport:
    m: int
    N: int
    field: str
    delta: float
    delta_exact: str
    welch: Optional[float]
    cap: int
    golden: Optional[str] = None
    golden_label: Optional[str] = None

    def to_dict(self):
        return asdict(self)


def bound_report(m, N=None, field="real"):
    field = check_field(field)
    cap = cardinality_cap(m, field)
    if N is None:
        N = cap
    if N < m:
        raise DomainError(f"need N >= m, got m={m}, N={N}")
    _, text = delta_exact(m, N)
    welch = welch_angle(m, N) if N > m else None
    rep = BoundReport(m, N, field, delta_bound(m, N), text, welch, cap)
    if N == cap:
        if m == 1:
            rep.golden, rep.golden_label = "1", "trivial case m=1"
        elif field == REAL and m in REAL_MAXIMAL_DIMS:
            rep.golden, rep.golden_label = text, "real maximal ETF exists"
        elif field == COMPLEX and m in COMPLEX_MAXIMAL_DIMS:
            rep.golden, rep.golden_label = text, "complex maximal ETF (SIC) known"
    return rep


@dataclass
class EqualityReport:
    m: int
    N: int
    delta: float
    uniform_value: float
    perron_value: float
    perron_uniform_dev: float
    passed: bool
    reasons: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def certify_equality(U, etf_tol=1e-8, value_tol=1e-9, vector_tol=1e-6):
    """Check that an ETF attains ``delta_bound`` with uniform and Perron weights."""
    ok, reasons = etf_certificate(U, tol=etf_tol)
    if not ok:
        raise NotEtfError("frame is not an ETF: " + "; ".join(reasons))
    U = normalize_to_parseval(U)
    m, N = U.shape
    delta = delta_bound(m, N)
    uniform = mu_objective(U)
    t, perron = optimal_weights(U)
    dev = float(np.max(np.abs(t - 1.0 / math.sqrt(N))))
    reasons = []
    if abs(uniform - delta) >= value_tol:
        reasons.append(f"uniform objective {uniform!r} != delta {delta!r}")
    if abs(perron - delta) >= value_tol:
        reasons.append(f"Perron value {perron!r} != delta {delta!r}")
    if dev >= vector_tol:
        reasons.append(f"Perron vector deviates from uniform by {dev:.3g}")
    return EqualityReport(m, N, delta, uniform, perron, dev, not reasons, reasons)
