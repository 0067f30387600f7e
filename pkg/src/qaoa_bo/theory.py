"""Closed-form trainability bound calculators and empirical harnesses.

Every calculator is a pure arithmetic function of its inputs. Asymptotic
statements are evaluated with unit constants and flagged as shapes, not
certified bounds. The Lipschitz harness samples parameter pairs and counts
violations against a supplied constant: the noiseless constant is
probabilistic at level delta (violation fraction at most delta expected),
the noisy one is deterministic (zero violations expected inside its regime).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidInstanceError
from .rng import substream
from .simulator import TWO_PI


def lipschitz_noiseless(V_hat: float, delta: float) -> float:
    """sqrt(V_hat / delta): gradient-variance Chebyshev envelope."""
    if V_hat <= 0.0:
        raise InvalidInstanceError(f"V_hat must be > 0, got {V_hat}")
    if not (0.0 < delta < 1.0):
        raise InvalidInstanceError(f"delta must be in (0,1), got {delta}")
    return math.sqrt(V_hat / delta)


def lipschitz_noisy(
    d: int,
    n: int,
    q: float,
    p: int,
    form: str = "lemma2",
    h1_norm_inf: float | None = None,
    d1: int | None = None,
) -> float:
    """Channel-circuit Lipschitz factor.

    form="lemma2": d^3 * n^(7/2) * q^((d+1)p).
    form="refined": sqrt(ln2/2) * d^2 * n^(5/2) * |H|_inf * q^((d1+1)p + 1)
    with defaults |H|_inf = n*d/2 and d1 = d (cost-block depth).
    """
    if not (0.0 < q < 1.0):
        raise InvalidInstanceError(f"noise strength must be in (0,1), got {q}")
    if d < 1 or n < 1 or p < 1:
        raise InvalidInstanceError(f"need d, n, p >= 1; got d={d}, n={n}, p={p}")
    if form == "lemma2":
        return float(d**3 * n**3.5 * q ** ((d + 1) * p))
    if form == "refined":
        if h1_norm_inf is None:
            h1_norm_inf = n * d / 2.0
        if d1 is None:
            d1 = d
        return float(
            math.sqrt(math.log(2.0) / 2.0)
            * d**2 * n**2.5 * h1_norm_inf * q ** ((d1 + 1) * p + 1)
        )
    raise InvalidInstanceError(f"unknown Lipschitz form {form!r}")


def effective_depth_noiseless(epsilon: float, nu: float, T: int) -> float:
    """Largest layer count with guaranteed eps-regret in T steps (noiseless):

    p_max = (eps^2 - nu + sqrt((eps^2 - nu)^2 + 4 nu eps^2 (1 + log(T/log T)))) / 2
    """
    if T < 3:
        raise InvalidInstanceError(f"need T >= 3, got {T}")
    if epsilon <= 0.0 or nu <= 0.0:
        raise InvalidInstanceError(f"need epsilon, nu > 0; got {epsilon}, {nu}")
    e2 = epsilon**2
    disc = (e2 - nu) ** 2 + 4.0 * nu * e2 * (1.0 + math.log(T / math.log(T)))
    return float(0.5 * ((e2 - nu) + math.sqrt(disc)))


def depth_defining_inequality(p: int, epsilon: float, nu: float, T: int) -> bool:
    """Check (p * (log T / T)^(nu/(nu+p)))^(1/2) <= epsilon; trivially true at p=0."""
    if p == 0:
        return True
    lhs = math.sqrt(p * (math.log(T) / T) ** (nu / (nu + p)))
    return lhs <= epsilon


def noise_band(n: int, poly_degree: int = 3) -> tuple[float, float]:
    """Admissible noise-strength band (n^-poly_degree, n^(-1/sqrt(log n)))."""
    if n < 2:
        raise InvalidInstanceError(f"need n >= 2, got {n}")
    return float(n ** (-poly_degree)), float(n ** (-1.0 / math.sqrt(math.log(n))))


@dataclass(frozen=True)
class NoisyDepthResult:
    """Depth limit for the channel circuit plus the inputs that shaped it.

    ``p_max`` carries unit constants only (asymptotic shape, constants
    unknown); c1/c2 default to 7/2 + 2 log T / log n, the bracketing
    exponents at p=1, and are echoed so overrides are auditable.
    """

    p_max: float
    c1: float
    c2: float
    q: float
    q_band_lower: float
    q_band_upper: float
    q_in_band: bool
    asymptotic: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def effective_depth_noisy(
    n: int,
    d: int,
    q: float,
    c1: float | None = None,
    c2: float | None = None,
    T: int | None = None,
    poly_degree: int = 3,
) -> NoisyDepthResult:
    """Depth limit (c1 log n + 3 log d) / ((d+1) log(1/q) n^(c1-c2))."""
    if not (0.0 < q < 1.0):
        raise InvalidInstanceError(f"noise strength must be in (0,1), got {q}")
    if n < 2 or d < 1:
        raise InvalidInstanceError(f"need n >= 2 and d >= 1; got n={n}, d={d}")
    if c1 is None or c2 is None:
        steps = T if T is not None else n**2
        bracket = 3.5 + 2.0 * math.log(steps) / math.log(n)
        c1 = bracket if c1 is None else c1
        c2 = bracket if c2 is None else c2
    if not (c1 >= c2 > 0.0):
        raise InvalidInstanceError(f"need c1 >= c2 > 0, got c1={c1}, c2={c2}")
    value = (c1 * math.log(n) + 3.0 * math.log(d)) / (
        (d + 1) * math.log(1.0 / q) * n ** (c1 - c2)
    )
    lo, hi = noise_band(n, poly_degree)
    return NoisyDepthResult(
        p_max=float(value), c1=float(c1), c2=float(c2), q=float(q),
        q_band_lower=lo, q_band_upper=hi, q_in_band=bool(lo <= q <= hi),
    )


@dataclass(frozen=True)
class LipschitzReport:
    """Empirical ratio statistics against a candidate Lipschitz constant."""

    bound: float
    samples: int
    max_observed_ratio: float
    violations: int
    seed: int

    @property
    def violation_fraction(self) -> float:
        return self.violations / self.samples

    def to_json(self) -> str:
        payload = asdict(self)
        payload["violation_fraction"] = self.violation_fraction
        return json.dumps(payload, indent=2)


def verify_lipschitz(objective, L: float, p: int, n_pairs: int, seed: int) -> LipschitzReport:
    """Sample uniform parameter pairs and count |f - f'| / l1-distance
    ratios exceeding L. No slack is applied to the bound."""
    if n_pairs < 100:
        raise InvalidInstanceError(f"need at least 100 pairs, got {n_pairs}")
    if L <= 0.0:
        raise InvalidInstanceError(f"bound must be > 0, got {L}")
    rng = substream(seed, "lipschitz")
    a = rng.uniform(0.0, TWO_PI, size=(n_pairs, 2 * p))
    b = rng.uniform(0.0, TWO_PI, size=(n_pairs, 2 * p))
    if hasattr(objective, "batch"):
        fa = np.asarray(objective.batch(a), dtype=float)
        fb = np.asarray(objective.batch(b), dtype=float)
    else:
        fa = np.array([float(objective(row)) for row in a])
        fb = np.array([float(objective(row)) for row in b])
    dist = np.abs(a - b).sum(axis=1)
    ratios = np.abs(fa - fb) / dist
    return LipschitzReport(
        bound=float(L),
        samples=n_pairs,
        max_observed_ratio=float(ratios.max()),
        violations=int((ratios > L).sum()),
        seed=seed,
    )
