"""Executable audit of the rank argument bounding the equal-weight constant.

Every step of the chain for a Parseval frame ``U`` with nonzero columns
becomes one :class:`AuditLine` (``lhs <= rhs`` up to a relative tolerance):

* lifts ``L_i = |u_i|^{-3/2} u_i u_i*`` and their Frobenius Gram ``G``;
* ``sum (|<u_i,u_j>| - phi|u_i||u_j|)^2 / (|u_i||u_j|) >= ((1-phi) sum|u_i|)^2 / rk G``;
* its rearrangement ``2 phi sum|U*U| <= sum |<u_i,u_j>|^2/(|u_i||u_j|)
  + (phi^2 - (1-phi)^2/rk G)(sum|u_i|)^2``;
* the two auxiliary bounds ``<= N`` and ``(sum|u_i|)^2 <= N m``;
* ``rk G`` against the dimension of the real span of the lifts.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .constants import abs_gram, delta_bound
from .exceptions import DomainError, RankError, ZeroColumnError
from .frames import cardinality_cap, is_tight
from .linalg import REAL, RANK_TOL, check_field, field_of, numerical_rank
from .validation import check_frame, check_parseval

ZERO_TOL = 1e-12
AUDIT_RTOL = 1e-9


@dataclass
class AuditLine:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool

    def to_dict(self):
        return asdict(self)


def _line(name, lhs, rhs, rtol=AUDIT_RTOL):
    slack = rhs - lhs
    return AuditLine(name, float(lhs), float(rhs), float(slack), bool(slack >= -rtol * max(1.0, abs(lhs), abs(rhs))))


@dataclass
class LiftSystem:
    L: np.ndarray  # (N, m, m)
    G: np.ndarray  # (N, N), real
    norms: np.ndarray


def default_phi(m, field):
    """Default ``phi``: ``1/sqrt(m+2)`` (real) or ``1/sqrt(m+1)`` (complex)."""
    return 1.0 / math.sqrt(m + 2) if check_field(field) == REAL else 1.0 / math.sqrt(m + 1)


def drop_zero_columns(U, tol=ZERO_TOL):
    """Remove columns of norm below ``tol`` from a tight frame.

    The tightness constant is unchanged and the equal-weight objective can
    only increase.
    """
    U = check_frame(U)
    m, N = U.shape
    norms = np.linalg.norm(U, axis=0)
    keep = norms >= tol
    if int(keep.sum()) < m:
        raise RankError(f"only {int(keep.sum())} nonzero columns for dimension {m}")
    V = U[:, keep]
    before, after = is_tight(U), is_tight(V)
    if not (before[0] and after[0]) or abs(before[1] - after[1]) > 1e-9 * before[1]:
        raise ValueError("dropping zero columns changed the frame operator")
    mu_before = abs_gram(U).sum() / N
    mu_after = abs_gram(V).sum() / V.shape[1]
    assert mu_after >= mu_before - 1e-12 * max(1.0, mu_before)
    return V


def build_lift_system(U, check=True):
    U = check_parseval(U) if check else np.asarray(U)
    norms = np.linalg.norm(U, axis=0)
    if np.any(norms < ZERO_TOL):
        raise ZeroColumnError("lift system needs nonzero columns")
    c = norms ** -1.5
    L = c[:, None, None] * np.einsum("in,jn->nij", U, U.conj())
    G = np.outer(c, c) * abs_gram(U) ** 2
    sys = LiftSystem(L, G, norms)
    if check:
        _check_lifts(sys)
    return sys


def _check_lifts(sys):
    L, G, nrm = sys.L, sys.G, sys.norms
    frob = np.einsum("aij,bji->ab", L, L).real
    if np.max(np.abs(frob - G)) > 1e-12 * max(1.0, np.abs(G).max()):
        raise AssertionError("G_ij != tr(L_i L_j)")
    traces = np.einsum("aii->a", L).real
    if np.max(np.abs(traces - nrm**0.5)) > 1e-12 * max(1.0, nrm.max()):
        raise AssertionError("tr L_i != |u_i|^(1/2)")
    if np.max(np.abs(G @ nrm**1.5 - nrm**0.5)) > 1e-10 * max(1.0, nrm.max()):
        raise AssertionError("row identity sum_k |u_k|^(3/2) G_ik = |u_i|^(1/2) fails")


def audit_central_inequality(U, phi=None, rank_tol=RANK_TOL, field=None):
    """Audit lines for one Parseval frame; ``phi`` defaults to :func:`default_phi`."""
    U = check_parseval(U)
    m, N = U.shape
    field = check_field(field) if field else field_of(U)
    if phi is None:
        phi = default_phi(m, field)
    if phi <= 0:
        raise DomainError("phi must be positive")
    sys = build_lift_system(U, check=False)
    n = sys.norms
    A = abs_gram(U)
    nn = np.outer(n, n)
    rk = numerical_rank(sys.G, rank_tol)
    cap = cardinality_cap(m, field)
    total = A.sum()
    cs = (A**2 / nn).sum()
    s1 = n.sum()
    coef = phi**2 - (1.0 - phi) ** 2 / rk
    coef_cap = phi**2 - (1.0 - phi) ** 2 / cap
    lines = [
        _line("chain_lower_bound", ((1.0 - phi) * s1) ** 2 / rk, ((A - phi * nn) ** 2 / nn).sum()),
        _line("rearranged_bound", 2.0 * phi * total, cs + coef * s1**2),
        _line("cauchy_schwarz_N", cs, N),
        _line("norm_sum_Nm", s1**2, N * m),
        _line("phi_feasible", (1.0 - phi) ** 2 / rk, phi**2),
        _line("rank_cap", rk, cap),
    ]
    if coef >= 0:
        lines.append(_line("summed_bound", 2.0 * phi * total, N + coef * N * m))
    if coef_cap >= 0:
        bound = (1.0 + coef_cap * m) / (2.0 * phi)
        lines.append(_line("mu_bound", total / N, bound))
    return lines


@dataclass
class RankAudit:
    rank_A: int
    rank_G: int
    trace_AA: float
    trace_bound: float
    passed: bool

    def to_dict(self):
        return asdict(self)


def audit_rank_structure(U, a, b, rank_tol=RANK_TOL):
    """Check ``rk(aG - b s s^T) <= rk G`` (``s_i = |u_i|^{1/2}``) and ``tr(AA*) >= (tr A)^2 / rk A``."""
    U = check_parseval(U)
    sys = build_lift_system(U, check=False)
    s = sys.norms**0.5
    A = a * sys.G - b * np.outer(s, s)
    rA = numerical_rank(A, rank_tol)
    rG = numerical_rank(sys.G, rank_tol)
    tAA = float((A * A).sum())
    bound = float(np.trace(A)) ** 2 / rA if rA else 0.0
    ok = rA <= rG and tAA >= bound - AUDIT_RTOL * max(1.0, bound)
    return RankAudit(rA, rG, tAA, bound, bool(ok))


def mu_upper_bound(m, field="real"):
    """Bound on the equal-weight constant for any number of vectors in dimension ``m``."""
    if m < 1:
        raise DomainError("m must be positive")
    if m == 1:
        return 1.0
    return delta_bound(m, cardinality_cap(m, field))
