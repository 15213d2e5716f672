import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_parseval
from projconst.etf import simplex_etf
from projconst.exceptions import DomainError, NotTightError, ZeroColumnError
from projconst.frames import (
    ParsevalNormalizer,
    cardinality_cap,
    certify_etf,
    coherence_profile,
    etf_certificate,
    gram,
    is_tight,
    normalize_to_parseval,
    welch_angle,
)
from projconst.linalg import multiply, adjoint


def mercedes_benz():
    """Three unit vectors at 120 degrees."""
    ang = np.array([0.0, 2.0, 4.0]) * np.pi / 3
    return np.vstack([np.cos(ang), np.sin(ang)])


def test_gram_of_unitary_is_identity():
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((4, 4)))
    assert np.allclose(gram(Q), np.eye(4), atol=1e-12)


def test_gram_mercedes_benz_offdiagonal():
    G = gram(mercedes_benz())
    off = np.abs(G[~np.eye(3, dtype=bool)])
    assert np.allclose(off, 0.5, atol=1e-15)


def test_gram_matches_multiply():
    U = random_parseval(3, 7, "complex", seed=4)
    assert np.array_equal(gram(U), multiply(adjoint(U), U))


def test_is_tight():
    U = random_parseval(2, 5, seed=1)
    assert is_tight(U) == (True, pytest.approx(1.0))
    flag, _ = is_tight(np.array([[1.0, 1.0], [0.0, 0.0]]))
    assert not flag


def test_is_tight_scaled_simplex():
    # unit simplex ETF(3,4) scaled by 2: UU* = 4 * (4/3) I
    U = simplex_etf(3)
    U = 2 * U / np.linalg.norm(U, axis=0)
    S = U @ U.T
    c = np.trace(S) / 3
    assert np.allclose(S, c * np.eye(3))
    flag, alpha = is_tight(U)
    assert flag and alpha == pytest.approx(1 / c) and alpha == pytest.approx(3 / 16)


def test_normalize_to_parseval():
    U = random_parseval(3, 6, seed=2)
    assert np.allclose(normalize_to_parseval(U), U, atol=1e-15)
    V = normalize_to_parseval(3 * U)
    assert np.max(np.abs(V @ V.T - np.eye(3))) < 1e-12
    W = normalize_to_parseval(mercedes_benz())
    assert np.allclose(np.linalg.norm(W, axis=0), math.sqrt(2 / 3))
    with pytest.raises(NotTightError):
        normalize_to_parseval(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]))


@pytest.mark.parametrize(
    "m,N,expected",
    [(2, 3, 0.5), (7, 28, 1 / 3), (3, 6, 1 / math.sqrt(5)), (2, 4, 1 / math.sqrt(3)), (3, 9, 0.5)],
)
def test_welch_angle(m, N, expected):
    assert welch_angle(m, N) == pytest.approx(expected, abs=1e-15)


def test_welch_angle_276_exact():
    sq = Fraction(276 - 23, 23 * 275)
    assert sq == Fraction(1, 25)
    assert welch_angle(23, 276) == pytest.approx(0.2, abs=1e-15)


def test_welch_angle_domain():
    with pytest.raises(DomainError):
        welch_angle(3, 3)


@pytest.mark.parametrize("m", range(1, 9))
def test_welch_at_cap(m):
    # squared Welch value at the caps is exactly 1/(m+2) (real) and 1/(m+1) (complex)
    N = cardinality_cap(m, "real")
    if N > m:
        assert Fraction(N - m, m * (N - 1)) == Fraction(1, m + 2)
        assert welch_angle(m, N) == pytest.approx(1 / math.sqrt(m + 2), abs=1e-15)
    N = cardinality_cap(m, "complex")
    if N > m:
        assert Fraction(N - m, m * (N - 1)) == Fraction(1, m + 1)


def test_cardinality_cap():
    assert cardinality_cap(7, "real") == 28
    assert cardinality_cap(3, "complex") == 9
    assert cardinality_cap(1, "real") == 1
    assert cardinality_cap(23, "real") == 276


def test_coherence_profile():
    assert coherence_profile(np.eye(3)).offdiag_max == 0.0
    prof = coherence_profile(mercedes_benz())
    assert prof.offdiag_spread < 1e-12
    assert prof.offdiag_max == pytest.approx(0.5)
    U = mercedes_benz()
    c, s = math.cos(0.1), math.sin(0.1)
    U[:, 0] = np.array([[c, -s], [s, c]]) @ U[:, 0]
    assert coherence_profile(U).offdiag_spread > 0.05
    with pytest.raises(ZeroColumnError):
        coherence_profile(np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 1.0]]))


def test_certify_etf():
    assert certify_etf(mercedes_benz())
    assert certify_etf(normalize_to_parseval(mercedes_benz()))
    ok, reasons = etf_certificate(np.eye(3))
    assert not ok and "degenerate N=m" in reasons
    assert certify_etf(np.eye(3), allow_trivial=True)
    assert not certify_etf(random_parseval(2, 5, seed=0))


def test_certify_etf_respects_field_cap():
    # 4 real vectors in R^2 cannot be equiangular; the complex SIC(2) can
    U = random_parseval(2, 4, seed=0)
    ok, reasons = etf_certificate(U)
    assert not ok


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("field", ["real", "complex"])
def test_gram_psd_and_trace(seed, field):
    U = random_parseval(3, 8, field, seed=seed)
    G = gram(U)
    assert np.linalg.eigvalsh(G).min() > -1e-10
    assert abs(np.trace(G).real - 3) < 1e-10


def test_parseval_normalizer_transformer():
    T = ParsevalNormalizer().fit(3 * mercedes_benz())
    assert T.alpha_ == pytest.approx(1 / 13.5)
    out = T.transform(5 * mercedes_benz())
    assert np.max(np.abs(out @ out.T - np.eye(2))) < 1e-12
    assert T.get_params() == {"tol": 1e-9}
