"""Constructions of equiangular tight frames.

All constructors return Parseval frames (``UU* = I``) whose columns share a
common norm ``sqrt(m/N)``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .exceptions import (
    FactorizationError,
    NotTwoGraphError,
    SearchExhaustedError,
    UnsupportedError,
)
from .frames import coherence_profile, normalize_to_parseval
from .linalg import check_field

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def helmert_basis(n):
    """Orthonormal rows spanning the complement of the all-ones vector in R^n."""
    H = np.zeros((n - 1, n))
    for k in range(1, n):
        H[k - 1, :k] = 1.0
        H[k - 1, k] = -k
        H[k - 1] /= math.sqrt(k * (k + 1))
    return H


def simplex_etf(m, field="real"):
    """ETF(m, m+1): the standard basis of K^(m+1) projected off the all-ones vector."""
    if m < 1:
        raise ValueError("m must be positive")
    U = helmert_basis(m + 1)
    if check_field(field) == "complex":
        U = U.astype(np.complex128)
    return U


def real_maximal_etf(m):
    """Real ETF(m, m(m+1)/2) for m in {2, 3, 7}."""
    if m == 2:
        return simplex_etf(2)
    if m == 3:
        g = GOLDEN
        vecs = []
        for s in (1.0, -1.0):
            base = np.array([0.0, s, g])
            vecs += [base, np.roll(base, 1), np.roll(base, 2)]
        U = np.array(vecs).T
        return normalize_to_parseval(U / np.linalg.norm(U, axis=0))
    if m == 7:
        H = helmert_basis(8)
        cols = []
        for i, j in itertools.combinations(range(8), 2):
            a = np.zeros(8)
            a[i] = a[j] = 1.0
            cols.append(H @ a)
        U = np.array(cols).T
        return normalize_to_parseval(U / np.linalg.norm(U, axis=0))
    if m == 23:
        raise UnsupportedError(
            "m=23 has no built-in construction; load a 276-vertex Seidel matrix "
            "and use seidel_to_etf"
        )
    raise UnsupportedError(f"no real maximal ETF is known for m={m}")


def check_seidel(S):
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NotTwoGraphError("Seidel matrix must be square")
    N = S.shape[0]
    off = ~np.eye(N, dtype=bool)
    if np.any(np.diag(S) != 0) or np.any(np.abs(S[off]) != 1) or np.any(S != S.T):
        raise NotTwoGraphError("Seidel matrix must be symmetric, zero-diagonal, +-1 elsewhere")
    return S


def seidel_from_frame(U):
    """Sign pattern of the Gram matrix of a real frame, as a Seidel matrix."""
    U = np.asarray(U, dtype=np.float64)
    S = np.sign(U.T @ U)
    np.fill_diagonal(S, 0.0)
    return check_seidel(S)


def seidel_to_etf(S, tol=1e-8):
    """Real ETF whose Gram sign pattern is the regular two-graph ``S``.

    The Gram of the unit-norm frame is ``I - S / lambda_min``; the frame
    dimension is ``N`` minus the multiplicity of ``lambda_min``.
    """
    S = check_seidel(S)
    N = S.shape[0]
    w, V = np.linalg.eigh(S)
    scale = max(1.0, float(np.abs(w).max()))
    lam_min = w[0]
    low = np.abs(w - lam_min) < tol * scale
    m = N - int(low.sum())
    if lam_min >= 0 or m < 1:
        raise NotTwoGraphError("smallest eigenvalue is not a proper negative eigenvalue")
    if np.ptp(w[~low]) >= tol * scale:
        raise NotTwoGraphError("Seidel matrix has more than two distinct eigenvalues")
    G = np.eye(N) - S / lam_min
    mu = 1.0 - w[~low] / lam_min
    U = np.sqrt(mu)[:, None] * V[:, ~low].T
    if np.max(np.abs(U.T @ U - G)) >= tol * scale:
        raise FactorizationError("Gram factorization residual too large")
    return normalize_to_parseval(U, tol=tol)


def golay_code():
    """The 4096 codewords of the extended binary Golay code, as a 0/1 array."""
    g = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]  # 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
    gen = np.zeros((12, 23), dtype=np.int64)
    for r in range(12):
        gen[r, r : r + 12] = g
    msgs = np.array(list(itertools.product((0, 1), repeat=12)), dtype=np.int64)
    words = msgs @ gen % 2
    parity = words.sum(axis=1) % 2
    return np.hstack([words, parity[:, None]])


def leech_two_graph():
    """Seidel matrix of the regular two-graph on 276 vertices (ETF(23, 276)).

    Built from the Leech lattice vectors v of norm 32 (coordinates scaled by
    sqrt(8)) with ``v . w = 24`` for ``w = (5, 1, ..., 1)``: the 23 vectors
    ``4e_0 + 4e_j`` and the 253 octad vectors ``2*1_octad`` with ``0`` in
    the octad. The lines are spanned by ``v - w/2``.
    """
    code = golay_code()
    octads = code[code.sum(axis=1) == 8]
    octads = octads[octads[:, 0] == 1]
    vecs = []
    for j in range(1, 24):
        v = np.zeros(24)
        v[0] = v[j] = 4.0
        vecs.append(v)
    vecs.extend(2.0 * octads.astype(np.float64))
    w = np.ones(24)
    w[0] = 5.0
    X = np.array(vecs) - w / 2.0
    S = np.sign(X @ X.T)
    np.fill_diagonal(S, 0.0)
    return check_seidel(S)


@dataclass
class SicFiducial:
    d: int
    v: np.ndarray
    achieved_spread: float
    converged: bool = True
    start: int = -1


@dataclass
class SearchConfig:
    tol: float = 1e-9
    max_starts: int = 200
    seed: int = 0


def weyl_heisenberg_orbit(v):
    """The d^2 vectors X^a Z^b v (shift X, clock Z), as columns."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    d = v.shape[0]
    omega = np.exp(2j * np.pi * np.arange(d) / d)
    cols = []
    for a in range(d):
        for b in range(d):
            cols.append(np.roll(omega**b * v, a))
    return np.array(cols).T


def sic_frame(fiducial):
    """Parseval frame of the Weyl-Heisenberg orbit of a fiducial."""
    v = fiducial.v if isinstance(fiducial, SicFiducial) else fiducial
    d = len(np.ravel(v))
    return weyl_heisenberg_orbit(v) / math.sqrt(d)


def _overlaps(v):
    # |entry [a, b]| = |<v, X^a Z^b v>|
    d = v.shape[0]
    W = np.array([np.conj(np.roll(v, -a)) * v for a in range(d)])
    return np.fft.ifft(W, axis=1) * d


def _sic_residuals(x, d):
    v = x[:d] + 1j * x[d:]
    v = v / np.linalg.norm(v)
    P = np.abs(_overlaps(v)) ** 2
    return P.ravel()[1:] - 1.0 / (d + 1)


def _orbit_spread(v):
    return coherence_profile(weyl_heisenberg_orbit(v)).offdiag_spread


def sic_fiducial(d, config=None, raise_on_failure=True):
    """Fiducial vector of a Weyl-Heisenberg SIC in dimension ``d`` (2 <= d <= 8).

    Exact for d = 2, 3. Otherwise a seeded multi-start Levenberg-Marquardt
    fit of all squared overlaps to ``1/(d+1)``, accepted once the orbit's
    coherence spread drops below ``config.tol``.
    """
    if not 2 <= d <= 8:
        raise UnsupportedError("SIC fiducials are provided for 2 <= d <= 8")
    config = config or SearchConfig()
    if d == 2:
        s = 1.0 / math.sqrt(3.0)
        v = np.array([math.sqrt((1 + s) / 2), np.exp(1j * np.pi / 4) * math.sqrt((1 - s) / 2)])
        return SicFiducial(2, v, _orbit_spread(v))
    if d == 3:
        v = np.array([0.0, 1.0, -1.0], dtype=np.complex128) / math.sqrt(2.0)
        return SicFiducial(3, v, _orbit_spread(v))

    best = None
    for start in range(config.max_starts):
        rng = np.random.default_rng([config.seed, d, start])
        x0 = rng.standard_normal(2 * d)
        sol = least_squares(
            _sic_residuals, x0, args=(d,), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        v = sol.x[:d] + 1j * sol.x[d:]
        v /= np.linalg.norm(v)
        spread = _orbit_spread(v)
        if best is None or spread < best.achieved_spread:
            best = SicFiducial(d, v, spread, spread < config.tol, start)
        if spread < config.tol:
            return best
    best.converged = False
    if raise_on_failure:
        raise SearchExhaustedError(
            f"no SIC fiducial in d={d} after {config.max_starts} starts "
            f"(best spread {best.achieved_spread:.3g})",
            best,
        )
    return best
