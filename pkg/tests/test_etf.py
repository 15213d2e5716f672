import math
from fractions import Fraction

import numpy as np
import pytest

from projconst.etf import (
    SearchConfig,
    golay_code,
    helmert_basis,
    leech_two_graph,
    real_maximal_etf,
    seidel_from_frame,
    seidel_to_etf,
    sic_fiducial,
    sic_frame,
    simplex_etf,
    weyl_heisenberg_orbit,
)
from projconst.exceptions import NotTwoGraphError, SearchExhaustedError, UnsupportedError
from projconst.frames import certify_etf, coherence_profile, gram


def parseval_residual(U):
    return np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])))


@pytest.mark.parametrize("m", range(1, 9))
def test_simplex_is_parseval_with_coherence_one_over_m(m):
    U = simplex_etf(m)
    assert U.shape == (m, m + 1)
    assert parseval_residual(U) < 1e-13
    assert np.allclose(np.linalg.norm(U, axis=0) ** 2, m / (m + 1))
    if m > 1:
        assert coherence_profile(U).offdiag_max == pytest.approx(1 / m, abs=1e-13)
        assert certify_etf(U)


@pytest.mark.parametrize("m", range(1, 7))
def test_simplex_gram_exact(m):
    # Gram of the projected basis is I - J/(m+1), checked entrywise against Fractions
    G = gram(simplex_etf(m))
    n = m + 1
    for i in range(n):
        for j in range(n):
            exact = Fraction(int(i == j)) - Fraction(1, n)
            assert abs(G[i, j] - float(exact)) < 1e-14


def test_simplex_complex_field():
    U = simplex_etf(3, "complex")
    assert np.iscomplexobj(U)
    assert certify_etf(U)


def test_helmert_rows_orthogonal_to_ones():
    H = helmert_basis(6)
    assert np.max(np.abs(H @ np.ones(6))) < 1e-14
    assert parseval_residual(H) < 1e-14


@pytest.mark.parametrize("m,N,coh", [(2, 3, 0.5), (3, 6, 1 / math.sqrt(5)), (7, 28, 1 / 3)])
def test_real_maximal_etf(m, N, coh):
    U = real_maximal_etf(m)
    assert U.shape == (m, N)
    assert parseval_residual(U) < 1e-12
    prof = coherence_profile(U)
    assert prof.offdiag_max == pytest.approx(coh, abs=1e-12)
    assert prof.offdiag_spread < 1e-12
    assert certify_etf(U)


def test_real_maximal_unsupported():
    with pytest.raises(UnsupportedError, match="seidel_to_etf"):
        real_maximal_etf(23)
    with pytest.raises(UnsupportedError):
        real_maximal_etf(4)


@pytest.mark.parametrize("m", [2, 3, 7])
def test_seidel_round_trip(m):
    U = real_maximal_etf(m)
    S = seidel_from_frame(U)
    V = seidel_to_etf(S)
    assert V.shape == U.shape
    # same Gram up to the Parseval scaling
    assert np.max(np.abs(gram(V) - gram(U))) < 1e-10
    assert certify_etf(V)


def test_seidel_all_minus_one_gives_triangle():
    S = -np.ones((3, 3))
    np.fill_diagonal(S, 0)
    U = seidel_to_etf(S)
    assert U.shape == (2, 3)
    assert certify_etf(U)


def test_seidel_rejects_non_two_graph():
    # a path-like sign pattern on 4 vertices has more than two eigenvalues
    S = np.array([[0, 1, 1, 1], [1, 0, -1, 1], [1, -1, 0, 1], [1, 1, 1, 0]], dtype=float)
    with pytest.raises(NotTwoGraphError):
        seidel_to_etf(S)
    with pytest.raises(NotTwoGraphError):
        seidel_to_etf(np.array([[0, 2], [2, 0]]))
    with pytest.raises(NotTwoGraphError):
        seidel_to_etf(np.array([[0, 1], [-1, 0]]))


def test_golay_code_weights():
    code = golay_code()
    assert code.shape == (4096, 24)
    weights = np.bincount(code.sum(axis=1), minlength=25)
    assert weights[0] == 1 and weights[24] == 1
    assert weights[8] == 759 and weights[16] == 759 and weights[12] == 2576
    assert set(np.nonzero(weights)[0]) == {0, 8, 12, 16, 24}


def test_leech_two_graph_gives_etf_23_276():
    S = leech_two_graph()
    assert S.shape == (276, 276)
    ev = np.linalg.eigvalsh(S)
    assert np.allclose(ev[:253], -5) and np.allclose(ev[253:], 55)
    U = seidel_to_etf(S)
    assert U.shape == (23, 276)
    assert parseval_residual(U) < 1e-10
    assert coherence_profile(U).offdiag_max == pytest.approx(0.2, abs=1e-10)
    assert certify_etf(U)


def test_sic_d2_d3_exact():
    for d in (2, 3):
        f = sic_fiducial(d)
        assert f.achieved_spread < 1e-14
        U = sic_frame(f)
        assert U.shape == (d, d * d)
        assert parseval_residual(U) < 1e-13
        prof = coherence_profile(weyl_heisenberg_orbit(f.v))
        assert prof.offdiag_max == pytest.approx(1 / math.sqrt(d + 1), abs=1e-13)
        assert certify_etf(U)


def test_sic_d4_search():
    f = sic_fiducial(4)
    assert f.converged and f.achieved_spread < 1e-9
    U = sic_frame(f)
    assert certify_etf(U, tol=1e-8)
    # d^2 pairwise distinct lines
    G = np.abs(gram(U))
    np.fill_diagonal(G, 0.0)
    assert G.max() < 0.25 - 1e-6


def test_sic_search_exhausted():
    with pytest.raises(SearchExhaustedError) as info:
        sic_fiducial(5, SearchConfig(tol=1e-300, max_starts=1))
    assert info.value.fiducial is not None
    best = sic_fiducial(5, SearchConfig(tol=1e-300, max_starts=1), raise_on_failure=False)
    assert not best.converged


def test_sic_unsupported_dimension():
    with pytest.raises(UnsupportedError):
        sic_fiducial(9)
