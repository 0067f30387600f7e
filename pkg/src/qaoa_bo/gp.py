"""Matern Gaussian-process machinery.

Covers kernel evaluation in the half-integer closed forms, Cholesky-backed
posterior mean/variance with fixed observation-noise variance 1/(4M),
Gaussian differential entropy, the sequential information-gain sum, and the
Matern maximal-information-gain growth shape.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.spatial.distance import cdist

from .errors import InvalidInstanceError, NumericalError

SUPPORTED_NU = (0.5, 1.5, 2.5)
JITTER = 1e-10
VARIANCE_SLACK = 1e-9


@dataclass(frozen=True)
class MaternKernel:
    """Stationary Matern covariance with unit variance scale.

    Smoothness restricted to nu in {1/2, 3/2, 5/2}, where the general
    Bessel-function form reduces to closed-form products of polynomials and
    exponentials in the Euclidean distance.
    """

    nu: float = 2.5
    length_scale: float = 1.0

    def __post_init__(self):
        if self.nu not in SUPPORTED_NU:
            raise InvalidInstanceError(f"nu must be one of {SUPPORTED_NU}, got {self.nu}")
        if not (self.length_scale > 0.0):
            raise InvalidInstanceError(f"length scale must be > 0, got {self.length_scale}")

    def from_distance(self, d):
        """Kernel value(s) from Euclidean distance(s)."""
        r = np.asarray(d, dtype=float) / self.length_scale
        if self.nu == 0.5:
            out = np.exp(-r)
        elif self.nu == 1.5:
            s = math.sqrt(3.0) * r
            out = (1.0 + s) * np.exp(-s)
        else:
            s = math.sqrt(5.0) * r
            out = (1.0 + s + s**2 / 3.0) * np.exp(-s)
        return out if out.ndim else float(out)

    def __call__(self, a, b) -> float:
        a = np.asarray(a, dtype=float).ravel()
        b = np.asarray(b, dtype=float).ravel()
        if a.size != b.size:
            raise InvalidInstanceError(f"dimension mismatch: {a.size} vs {b.size}")
        return float(self.from_distance(np.linalg.norm(a - b)))

    def matrix(self, X: np.ndarray, Y: np.ndarray | None = None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
        return self.from_distance(cdist(X, Y))


def matern(a, b, kernel: MaternKernel) -> float:
    return kernel(a, b)


@dataclass
class ObservationSet:
    """Accumulated (point, noisy target) pairs with the measurement count M
    that fixes the assumed noise variance 1/(4M)."""

    points: np.ndarray  # (t, 2p)
    targets: np.ndarray  # (t,)
    M: int

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.targets = np.asarray(self.targets, dtype=float).ravel()
        if self.points.size == 0:
            self.points = self.points.reshape(0, self.points.shape[-1] if self.points.ndim > 1 else 0)
        if len(self.targets) != self.points.shape[0]:
            raise InvalidInstanceError(
                f"{self.points.shape[0]} points but {len(self.targets)} targets"
            )
        if self.M < 1:
            raise InvalidInstanceError(f"measurement count must be >= 1, got {self.M}")

    @classmethod
    def empty(cls, dim: int, M: int) -> "ObservationSet":
        return cls(points=np.zeros((0, dim)), targets=np.zeros(0), M=M)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def noise_variance(self) -> float:
        return 1.0 / (4.0 * self.M)


@dataclass
class GpPosterior:
    """Posterior after conditioning on an ObservationSet.

    ``chol`` is the lower Cholesky factor of K + I/(4M) and ``alpha`` solves
    (K + I/(4M)) alpha = y. Empty data reproduces the prior (mean 0,
    variance 1 everywhere).
    """

    kernel: MaternKernel
    data: ObservationSet
    chol: np.ndarray | None
    alpha: np.ndarray | None
    jitter_applied: bool = False


def fit(data: ObservationSet, kernel: MaternKernel) -> GpPosterior:
    """Factorize K + I/(4M) and solve the mean weights.

    A failed factorization is retried once with a tiny diagonal jitter,
    then surfaced as an error; silent jitter escalation is not acceptable
    here because it hides modeling bugs.
    """
    if len(data) == 0:
        return GpPosterior(kernel=kernel, data=data, chol=None, alpha=None)
    K = kernel.matrix(data.points)
    A = K + data.noise_variance * np.eye(len(data))
    jitter_applied = False
    try:
        L = cholesky(A, lower=True)
    except np.linalg.LinAlgError:
        jitter_applied = True
        try:
            L = cholesky(A + JITTER * np.eye(len(data)), lower=True)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"Gram factorization failed even with {JITTER} jitter") from exc
    alpha = cho_solve((L, True), data.targets)
    return GpPosterior(kernel=kernel, data=data, chol=L, alpha=alpha, jitter_applied=jitter_applied)


def predict_many(gp: GpPosterior, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and variance at each query row."""
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    prior_var = 1.0  # k(x, x) for the unit-variance Matern
    if gp.chol is None:
        return np.zeros(queries.shape[0]), np.full(queries.shape[0], prior_var)
    kvec = gp.kernel.matrix(queries, gp.data.points)  # (q, t)
    mu = kvec @ gp.alpha
    v = solve_triangular(gp.chol, kvec.T, lower=True)  # (t, q)
    var = prior_var - np.einsum("ij,ij->j", v, v)
    floor = var.min()
    if floor < -VARIANCE_SLACK:
        raise NumericalError(f"posterior variance {floor} below -{VARIANCE_SLACK}")
    return mu, np.clip(var, 0.0, None)


def predict(gp: GpPosterior, query) -> tuple[float, float]:
    mu, var = predict_many(gp, np.asarray(query, dtype=float).reshape(1, -1))
    return float(mu[0]), float(var[0])


def posterior_covariance(gp: GpPosterior, queries: np.ndarray) -> np.ndarray:
    """Full posterior covariance matrix of the latent function at the queries."""
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    Kqq = gp.kernel.matrix(queries)
    if gp.chol is None:
        return Kqq
    kvec = gp.kernel.matrix(queries, gp.data.points)
    v = solve_triangular(gp.chol, kvec.T, lower=True)
    return Kqq - v.T @ v


def log_marginal_likelihood(gp: GpPosterior) -> float:
    """Log evidence of the observations under the fitted prior + noise."""
    if gp.chol is None:
        return 0.0
    t = len(gp.data)
    return float(
        -0.5 * gp.data.targets @ gp.alpha
        - np.log(np.diagonal(gp.chol)).sum()
        - 0.5 * t * math.log(2.0 * math.pi)
    )


def fit_length_scale(
    data: ObservationSet,
    nu: float = 2.5,
    grid: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0),
) -> tuple[float, dict[float, float]]:
    """Optional preprocessing: pick the grid length scale maximizing the
    log marginal likelihood. Returns (best_scale, per-scale scores)."""
    scores = {}
    for ell in grid:
        gp = fit(data, MaternKernel(nu=nu, length_scale=ell))
        scores[ell] = log_marginal_likelihood(gp)
    best = max(scores, key=scores.get)
    return best, scores


def gaussian_entropy(K: np.ndarray) -> float:
    """Differential entropy 0.5*log det(2*pi*e*K) of N(mu, K)."""
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise InvalidInstanceError(f"covariance must be square, got {K.shape}")
    if not np.allclose(K, K.T, atol=1e-10):
        raise InvalidInstanceError("covariance must be symmetric")
    try:
        L = cholesky(K, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("covariance is not positive definite") from exc
    m = K.shape[0]
    logdet = 2.0 * np.log(np.diagonal(L)).sum()
    return float(0.5 * (m * math.log(2.0 * math.pi * math.e) + logdet))


def information_gain(sigma2_sequence, M: int) -> float:
    """g_T = 0.5 * sum_t log(1 + 4M * sigma^2_{t-1}(theta_t))."""
    seq = np.asarray(sigma2_sequence, dtype=float).ravel()
    if seq.size and seq.min() < 0.0:
        raise InvalidInstanceError(f"negative posterior variance {seq.min()} in gain sequence")
    if M < 1:
        raise InvalidInstanceError(f"measurement count must be >= 1, got {M}")
    return float(0.5 * np.log1p(4.0 * M * seq).sum())


def max_information_gain_bound(T: int, p: int, nu: float) -> float:
    """Growth shape T^(p/(nu+p)) * (log T)^(nu/(nu+p)) with unit constant.

    This is an asymptotic envelope for the maximal information gain of the
    Matern family, not a certified numeric bound.
    """
    if T < 2:
        raise InvalidInstanceError(f"need T >= 2, got {T}")
    if p < 1 or nu <= 0:
        raise InvalidInstanceError(f"need p >= 1 and nu > 0, got p={p}, nu={nu}")
    return float(T ** (p / (nu + p)) * math.log(T) ** (nu / (nu + p)))


def posterior_to_json(gp: GpPosterior) -> str:
    """Snapshot of the conditioning data and kernel for trace archiving."""
    payload = {
        "kernel": {"nu": gp.kernel.nu, "length_scale": gp.kernel.length_scale},
        "M": gp.data.M,
        "points": gp.data.points.tolist(),
        "targets": gp.data.targets.tolist(),
        "jitter_applied": gp.jitter_applied,
    }
    return json.dumps(payload, indent=2)
