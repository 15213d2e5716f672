"""Multi-start searches for the maximal and quasimaximal projection constants.

Both searches maximize over Parseval frames ``U`` (``UU* = I``). The
``|.|`` of Gram entries is replaced by ``h_eps(z) = sqrt(|z|^2 + eps^2)``
with ``eps`` annealed geometrically; each stage runs projected gradient
ascent with Armijo backtracking and a QR retraction. ``lambda_search``
resets the weights to the exact Perron vector after every accepted step,
``mu_search`` keeps them uniform.
"""

import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import List

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .constants import abs_gram, delta_bound, optimal_weights
from .exceptions import ConvergenceError, DomainError, RankError
from .linalg import COMPLEX, check_field, orthonormalize_rows
from .validation import check_frame, check_parseval


@dataclass
class OptConfig:
    starts: int = 32
    seed: int = 0
    eps_init: float = 1e-1
    eps_final: float = 1e-8
    eps_factor: float = 0.5
    max_outer: int = 500
    max_linesearch: int = 30
    tol: float = 1e-13
    n_jobs: int = 1

    @classmethod
    def keys(cls):
        return [f.name for f in fields(cls)]

    def to_dict(self):
        return asdict(self)


@dataclass
class OptReport:
    kind: str
    m: int
    N: int
    field: str
    best_value: float
    best_t: np.ndarray
    best_U: np.ndarray
    delta_bound: float
    gap: float
    starts: int
    iterations: List[int]
    converged: bool
    seed: int
    best_start: int = 0
    start_values: List[float] = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        d["best_t"] = self.best_t.tolist()
        U = self.best_U
        if np.iscomplexobj(U):
            d["best_U"] = {"re": U.real.tolist(), "im": U.imag.tolist()}
        else:
            d["best_U"] = U.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["best_t"] = np.asarray(d["best_t"], dtype=np.float64)
        U = d["best_U"]
        if isinstance(U, dict):
            d["best_U"] = np.asarray(U["re"]) + 1j * np.asarray(U["im"])
        else:
            d["best_U"] = np.asarray(U, dtype=np.float64)
        return cls(**d)


def smoothed_objective(U, t, eps):
    """Value of ``sum_ij t_i t_j h_eps(G_ij)`` and its gradient in ``U``.

    The gradient is with respect to the real inner product
    ``Re tr(X* Y)``, which covers the complex case.
    """
    G = U.conj().T @ U
    H = np.sqrt(np.abs(G) ** 2 + eps * eps)
    tt = np.outer(t, t)
    W = tt * G / H
    return float((tt * H).sum()), 2.0 * U @ W


def _value(U, t, eps):
    G = U.conj().T @ U
    return float(np.outer(t, t).ravel() @ np.sqrt(np.abs(G) ** 2 + eps * eps).ravel())


def _tangent(U, Z):
    # project onto the tangent space of {UU* = I} at U
    S = Z @ U.conj().T
    return Z - 0.5 * (S + S.conj().T) @ U


def _perron(U, t):
    try:
        return optimal_weights(U, x0=t, check=False)
    except ConvergenceError:
        return optimal_weights(U, check=False)


def _random_frame(m, N, field, rng):
    A = rng.standard_normal((m, N))
    if field == COMPLEX:
        A = A + 1j * rng.standard_normal((m, N))
    return orthonormalize_rows(A)


def ascend(U, kind, config):
    """Run the annealed ascent from ``U``; return ``(U, t, value, iters, converged)``.

    Trial steps start from the Barzilai-Borwein length of the previous
    step, then halve until the Armijo condition holds.
    """
    N = U.shape[1]
    if kind == "lambda":
        t, _ = _perron(U, None)
    else:
        t = np.full(N, 1.0 / math.sqrt(N))
    eps = config.eps_init
    step = 1.0
    iters = 0
    converged = False
    while True:
        stage_done = False
        # no point resolving a stage beyond its own smoothing error
        stage_tol = max(config.tol, eps * eps)
        prev = None
        for _ in range(config.max_outer):
            f, grad = smoothed_objective(U, t, eps)
            xi = _tangent(U, grad)
            g2 = float(np.vdot(xi, xi).real)
            if g2 < config.tol**2:
                stage_done = True
                break
            if prev is not None:
                s_k, y_k = U - prev[0], prev[1] - xi
                sy = float(np.vdot(s_k, y_k).real)
                if sy > 0:
                    step = min(float(np.vdot(s_k, s_k).real) / sy, 1e3)
            accepted = False
            for _ in range(config.max_linesearch):
                try:
                    trial = orthonormalize_rows(U + step * xi)
                except RankError:
                    step *= 0.5
                    continue
                f_new = _value(trial, t, eps)
                if f_new >= f + 1e-4 * step * g2:
                    accepted = True
                    break
                step *= 0.5
            iters += 1
            if not accepted:
                stage_done = True
                break
            prev = (U, xi)
            U = trial
            if kind == "lambda":
                t, _ = _perron(U, t)
            if f_new - f <= stage_tol * max(1.0, abs(f)):
                stage_done = True
                break
        if eps <= config.eps_final:
            converged = stage_done
            break
        eps = max(eps * config.eps_factor, config.eps_final)
    if kind == "lambda":
        t, value = _perron(U, t)
    else:
        value = float(abs_gram(U).sum() / N)
    return U, t, value, iters, converged


def _run_start(m, N, field, kind, config, index, U0=None):
    if U0 is None:
        U0 = _random_frame(m, N, field, np.random.default_rng([config.seed, index]))
    return ascend(U0, kind, config)


def _search(m, N, field, kind, config, init=None):
    field = check_field(field)
    config = config or OptConfig()
    if not 1 <= m <= N:
        raise DomainError(f"need N >= m >= 1, got m={m}, N={N}")
    delta = delta_bound(m, N)
    if N == m:
        U = np.eye(m, dtype=np.complex128 if field == COMPLEX else np.float64)
        t = np.zeros(m)
        t[0] = 1.0
        if kind == "mu":
            t = np.full(m, 1.0 / math.sqrt(m))
        return OptReport(kind, m, N, field, 1.0, t, U, delta, delta - 1.0, 0, [], True, config.seed)

    jobs = []
    if init is not None:
        jobs.append(delayed(_run_start)(m, N, field, kind, config, -1, init))
    jobs += [delayed(_run_start)(m, N, field, kind, config, i) for i in range(config.starts)]
    results = Parallel(n_jobs=config.n_jobs)(jobs)
    # max value, ties to the lowest start index
    best = max(range(len(results)), key=lambda i: (results[i][2], -i))
    U, t, value, _, conv = results[best]
    return OptReport(
        kind=kind,
        m=m,
        N=N,
        field=field,
        best_value=value,
        best_t=t,
        best_U=U,
        delta_bound=delta,
        gap=delta - value,
        starts=len(results),
        iterations=[r[3] for r in results],
        converged=conv,
        seed=config.seed,
        best_start=best - (1 if init is not None else 0),
        start_values=[r[2] for r in results],
    )


def lambda_search(m, N, field="real", config=None, init=None):
    """Estimate the maximal relative projection constant for ``(m, N)``."""
    return _search(m, N, field, "lambda", config, init)


def mu_search(m, N, field="real", config=None, init=None):
    """Estimate the quasimaximal (equal-weight) constant for ``(m, N)``."""
    return _search(m, N, field, "mu", config, init)


class _ConstantSearch(BaseEstimator):
    _kind = None

    def __init__(
        self,
        m=2,
        N=3,
        field="real",
        starts=32,
        seed=0,
        eps_init=1e-1,
        eps_final=1e-8,
        eps_factor=0.5,
        max_outer=500,
        max_linesearch=30,
        tol=1e-13,
        n_jobs=1,
    ):
        self.m = m
        self.N = N
        self.field = field
        self.starts = starts
        self.seed = seed
        self.eps_init = eps_init
        self.eps_final = eps_final
        self.eps_factor = eps_factor
        self.max_outer = max_outer
        self.max_linesearch = max_linesearch
        self.tol = tol
        self.n_jobs = n_jobs

    def _config(self):
        params = self.get_params()
        return OptConfig(**{k: params[k] for k in OptConfig.keys()})

    def fit(self, X=None, y=None):
        """Run the search. ``X``, if given, is a Parseval frame used as an extra start."""
        init = None
        if X is not None:
            init = check_parseval(X, field=self.field)
            if init.shape != (self.m, self.N):
                raise ValueError(f"initial frame has shape {init.shape}, expected {(self.m, self.N)}")
        start = time.perf_counter()
        rep = _search(self.m, self.N, self.field, self._kind, self._config(), init)
        self.fit_time_ = time.perf_counter() - start
        self.report_ = rep
        self.value_ = rep.best_value
        self.weights_ = rep.best_t
        self.frame_ = rep.best_U
        self.gap_ = rep.gap
        return self

    def score(self, X, y=None):
        check_is_fitted(self, "report_")
        X = check_frame(X)
        return self._score(check_parseval(X))


class LambdaSearch(_ConstantSearch):
    """Search estimator for the maximal relative projection constant.

    After ``fit``: ``value_``, ``weights_`` (Perron weights), ``frame_``,
    ``gap_`` (distance to the closed-form upper bound) and ``report_``.
    ``score(X)`` is the exact weighted objective of a Parseval frame ``X``.
    """

    _kind = "lambda"

    def _score(self, U):
        return optimal_weights(U)[1]


class MuSearch(_ConstantSearch):
    """Search estimator for the quasimaximal constant (uniform weights)."""

    _kind = "mu"

    def _score(self, U):
        return float(abs_gram(U).sum() / U.shape[1])
