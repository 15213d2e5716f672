"""Acceptance gate: one test per criterion, each printing a pass/fail line.

The lines are collected by ``conftest.record_acceptance`` and shown in the
terminal summary under "acceptance criteria".
"""

import json
import math
import os
import time

import numpy as np
import pytest

from oracles import random_search_max
from projconst.bukhcox import audit_central_inequality, build_lift_system, mu_upper_bound, default_phi
from projconst.cli import main
from projconst.constants import abs_gram, certify_equality, delta_bound, mu_objective, objective, optimal_weights
from projconst.etf import leech_two_graph, real_maximal_etf, seidel_to_etf, sic_fiducial, sic_frame
from projconst.frames import cardinality_cap
from projconst.io import read_seidel, write_seidel
from projconst.linalg import numerical_rank, orthonormalize_rows
from projconst.replication import RationalWeights, replicated_mu_objective, verify_replication_identity
from projconst.search import OptConfig, lambda_search, mu_search


def frame_batch(count=200, max_m=5, max_N=20, seed=2024):
    """Seeded random Parseval frames, alternating real and complex."""
    out = []
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        m = int(rng.integers(1, max_m + 1))
        N = int(rng.integers(m, max_N + 1))
        A = rng.standard_normal((m, N))
        field = "complex" if k % 2 else "real"
        if field == "complex":
            A = A + 1j * rng.standard_normal((m, N))
        out.append((field, orthonormalize_rows(A)))
    return out


def test_criterion_1_triangle_value(capsys, record_acceptance):
    start = time.perf_counter()
    code = main(["lambda", "-m", "2", "-N", "3", "--field", "real"])
    elapsed = time.perf_counter() - start
    rep = json.loads(capsys.readouterr().out)
    err = abs(rep["best_value"] - 4 / 3)
    passed = code == 0 and err <= 1e-6 and elapsed < 5 and rep["starts"] == 32 and rep["seed"] == 0
    record_acceptance(1, passed, f"lambda(2,3) = {rep['best_value']:.12f}, |err| = {err:.1e}, {elapsed:.2f} s")
    assert passed


def _seidel_276(tmp_path):
    path = os.environ.get("PROJCONST_DATA")
    if path and os.path.exists(path):
        return read_seidel(path), "PROJCONST_DATA"
    path = tmp_path / "seidel276.txt"
    write_seidel(path, leech_two_graph())
    return read_seidel(path), "generated file"


def test_criterion_2_real_golden_values(tmp_path, record_acceptance):
    cases = [
        (3, lambda: real_maximal_etf(3), (1 + math.sqrt(5)) / 2),
        (7, lambda: real_maximal_etf(7), 2.5),
        (23, lambda: seidel_to_etf(_seidel_276(tmp_path)[0]), 14 / 3),
    ]
    details, passed = [], True
    for m, build, target in cases:
        start = time.perf_counter()
        rep = certify_equality(build())
        elapsed = time.perf_counter() - start
        err = max(abs(rep.uniform_value - target), abs(rep.perron_value - target))
        ok = rep.passed and err <= 1e-9 and elapsed < 10
        passed &= ok
        details.append(f"m={m}: {rep.perron_value:.12f} (err {err:.1e}, {elapsed:.2f} s)")
    record_acceptance(2, passed, "; ".join(details))
    assert passed


def test_criterion_3_complex_golden_values(record_acceptance):
    details, passed = [], True
    for d, tol in [(2, 1e-8), (3, 1e-9)]:
        rep = certify_equality(sic_frame(sic_fiducial(d)))
        target = (1 + (d - 1) * math.sqrt(d + 1)) / d
        err = abs(rep.perron_value - target)
        passed &= rep.passed and err <= tol
        details.append(f"d={d} err {err:.1e}")
    for d in range(4, 9):
        start = time.perf_counter()
        fid = sic_fiducial(d, raise_on_failure=False)
        elapsed = time.perf_counter() - start
        ok = fid.achieved_spread < 1e-8 and elapsed < 60
        passed &= ok
        details.append(f"d={d} spread {fid.achieved_spread:.1e} in {elapsed:.1f} s")
    record_acceptance(3, passed, "; ".join(details))
    assert passed


def test_criterion_4_bound_dominance(record_acceptance):
    start = time.perf_counter()
    worst_delta, worst_mu = -np.inf, -np.inf
    for field, U in frame_batch():
        m, N = U.shape
        uniform = mu_objective(U)
        t, perron = optimal_weights(U)
        worst_delta = max(worst_delta, perron - delta_bound(m, N), uniform - delta_bound(m, N))
        worst_mu = max(worst_mu, uniform - mu_upper_bound(m, field))
    elapsed = time.perf_counter() - start
    passed = worst_delta <= 1e-8 and worst_mu <= 1e-8 and elapsed < 30
    record_acceptance(
        4, passed,
        f"max(value - delta) = {worst_delta:.2e}, max(mu - bound) = {worst_mu:.2e}, {elapsed:.2f} s",
    )
    assert passed


def test_criterion_5_rank_audit(record_acceptance):
    start = time.perf_counter()
    failures, lines_checked = [], 0
    for k, (field, U) in enumerate(frame_batch()):
        m = U.shape[0]
        for ln in audit_central_inequality(U, phi=default_phi(m, field), field=field):
            lines_checked += 1
            if not ln.passed:
                failures.append((k, ln.name, ln.slack))
        rk = numerical_rank(build_lift_system(U).G)
        if rk > cardinality_cap(m, field):
            failures.append((k, "rank", rk))
    elapsed = time.perf_counter() - start
    passed = not failures and elapsed < 60
    record_acceptance(5, passed, f"{lines_checked} audit lines, {len(failures)} failures, {elapsed:.2f} s")
    assert passed, failures[:5]


def test_criterion_6_replication_identity(record_acceptance):
    worst, bad = 0.0, 0
    for k in range(100):
        rng = np.random.default_rng([606, k])
        m = int(rng.integers(1, 5))
        N = int(rng.integers(m, 9))
        A = rng.standard_normal((m, N))
        if k % 2:
            A = A + 1j * rng.standard_normal((m, N))
        U = orthonormalize_rows(A)
        w = RationalWeights(1, tuple(int(x) for x in rng.integers(1, 6, N)))
        chk = verify_replication_identity(U, w)
        scale = max(1.0, chk.rhs)
        rel = max(abs(chk.lhs - chk.rhs), abs(chk.lhs - replicated_mu_objective(U, w))) / scale
        worst = max(worst, rel)
        bad += not (chk.ok and chk.materialized and rel < 1e-10)
    passed = bad == 0
    record_acceptance(6, passed, f"100 instances, worst relative error {worst:.1e}")
    assert passed


def test_criterion_7_inner_problem(record_acceptance):
    worst_gap, worst_consistency = 0.0, 0.0
    above = False
    for k in range(20):
        rng = np.random.default_rng([707, k])
        m = int(rng.integers(1, 4))
        N = int(rng.integers(m, 7))
        U = orthonormalize_rows(rng.standard_normal((m, N)))
        t, value = optimal_weights(U)
        sampled = random_search_max(abs_gram(U), n_samples=10**6, seed=k)
        above |= sampled > value + 1e-12
        worst_gap = max(worst_gap, abs(value - sampled))
        worst_consistency = max(worst_consistency, abs(objective(t, U) - value))
    passed = not above and worst_gap <= 1e-3 and worst_consistency <= 1e-10
    record_acceptance(
        7, passed,
        f"max |perron - sampled| = {worst_gap:.1e}, max |objective(t) - value| = {worst_consistency:.1e}",
    )
    assert passed


def test_criterion_8_trivial_scales(record_acceptance):
    cases = [(m, m) for m in range(1, 7)] + [(1, N) for N in range(2, 11)]
    worst = 0.0
    for m, N in cases:
        for search in (lambda_search, mu_search):
            for field in ("real", "complex"):
                rep = search(m, N, field, OptConfig())
                worst = max(worst, abs(rep.best_value - 1.0))
    passed = worst <= 1e-9
    record_acceptance(8, passed, f"{len(cases) * 4} runs, max |value - 1| = {worst:.1e}")
    assert passed


def test_criterion_9_scope_note(record_acceptance):
    # suprema over all N and global optimality are out of reach; the property
    # suites stand in for them. Spot-check that a witness chain closes.
    lam = lambda_search(2, 4, "real", OptConfig(starts=8))
    w = RationalWeights(10**4, tuple(int(round(x * 10**4)) for x in lam.best_t))
    chk = verify_replication_identity(lam.best_U, w, max_columns=0)
    passed = chk.ok and lam.best_value <= delta_bound(2, 4) + 1e-8
    record_acceptance(
        9, passed,
        "note: suprema over N not desk-verifiable; covered by bound, witness and regression suites",
    )
    assert passed
