"""GP-UCB Bayesian optimization loop and its bound bookkeeping.

The loop draws T0 random initial observations, then repeats: compute the
step's UCB scale eta_t, maximize mean + sqrt(eta)*std over a parameter
grid (optionally refined by golden-section search), measure the objective,
refit the posterior, and update the incumbent. Traces carry everything
needed to re-derive regret and information-gain quantities offline.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BudgetExceededError, ConfigError, InvalidInstanceError, NumericalError
from .gp import GpPosterior, MaternKernel, ObservationSet, fit, information_gain, predict, predict_many
from .rng import substream
from .simulator import TWO_PI, ParamVector, sample_objective, theta_grid

TRACE_SCHEMA = 1
GRID_CELL_BUDGET = 10**7
DEFAULT_GRID_PER_DIM = {1: 64, 2: 24, 3: 10}


# ---------------------------------------------------------------------------
# UCB scale schedules
# ---------------------------------------------------------------------------

def eta_theorem1(t: int, delta: float, p: int, V_hat: float) -> tuple[float, bool]:
    """Noiseless-analysis schedule
    ``2 log(2 pi^2 t^2 / (3 delta)) + 4p log(8 pi p t^2 sqrt(V_hat/delta))``.

    If the second log's argument falls below 1 the term is clamped to 0 and
    flagged (returned bool), mirroring the grid-degree >= 1 validity edge.
    """
    if not (0.0 < delta < 1.0):
        raise InvalidInstanceError(f"delta must be in (0,1), got {delta}")
    if t < 1 or p < 1 or V_hat <= 0.0:
        raise InvalidInstanceError(f"need t>=1, p>=1, V_hat>0; got t={t}, p={p}, V_hat={V_hat}")
    first = 2.0 * math.log(2.0 * math.pi**2 * t**2 / (3.0 * delta))
    arg = 8.0 * math.pi * p * t**2 * math.sqrt(V_hat / delta)
    clamped = arg < 1.0
    second = 0.0 if clamped else 4.0 * p * math.log(arg)
    return first + second, clamped


def eta_theorem2(t: int, delta: float, p: int, d: int, n: int, q: float) -> tuple[float, bool]:
    """Noisy-analysis schedule
    ``2 log(pi^2 t^2 / (3 delta)) + 4p log(4 pi p t^2 d^3 n^(7/2) q^((d+1)p))``,
    clamped the same way when the second log's argument drops below 1.
    """
    if not (0.0 < delta < 1.0):
        raise InvalidInstanceError(f"delta must be in (0,1), got {delta}")
    if not (0.0 < q < 1.0):
        raise InvalidInstanceError(f"noise strength must be in (0,1), got {q}")
    if t < 1 or p < 1 or d < 1 or n < 1:
        raise InvalidInstanceError(f"need t,p,d,n >= 1; got t={t}, p={p}, d={d}, n={n}")
    first = 2.0 * math.log(math.pi**2 * t**2 / (3.0 * delta))
    arg = 4.0 * math.pi * p * t**2 * d**3 * n**3.5 * q ** ((d + 1) * p)
    clamped = arg < 1.0
    second = 0.0 if clamped else 4.0 * p * math.log(arg)
    return first + second, clamped


def eta_sqrt_log(t: int, delta: float, scale: float = 1.0) -> float:
    """Pragmatic schedule ``scale * 2 log(pi^2 t^2 / (3 delta))``."""
    if not (0.0 < delta < 1.0):
        raise InvalidInstanceError(f"delta must be in (0,1), got {delta}")
    return scale * 2.0 * math.log(math.pi**2 * t**2 / (3.0 * delta))


def ucb(mu: float, sigma: float, eta: float) -> float:
    """Acquisition value mu + sqrt(eta) * sigma."""
    if sigma < 0.0 or eta < 0.0:
        raise InvalidInstanceError(f"need sigma >= 0 and eta >= 0, got {sigma}, {eta}")
    return mu + math.sqrt(eta) * sigma


def discretization_tau(t: int, p: int, V_hat: float, delta: float, variant: str = "lemma5") -> float:
    """Grid degree tau_t per step: 4*pi*p*t^2*sqrt(V/delta), or twice that
    for the variant threaded through the noiseless-schedule chain."""
    if t < 1 or p < 1 or V_hat <= 0.0 or not (0.0 < delta < 1.0):
        raise InvalidInstanceError("need t,p >= 1, V_hat > 0, delta in (0,1)")
    base = 4.0 * math.pi * p * t**2 * math.sqrt(V_hat / delta)
    if variant == "lemma5":
        tau = base
    elif variant == "theorem1":
        tau = 2.0 * base
    else:
        raise ConfigError(f"unknown tau variant {variant!r}")
    if tau < 1.0:
        warnings.warn(f"discretization degree tau={tau} < 1; outside the validity regime")
    return tau


# ---------------------------------------------------------------------------
# configuration and trace containers
# ---------------------------------------------------------------------------

@dataclass
class BoConfig:
    """Settings for one BO run; ``seed`` fans out into named substreams."""

    p: int
    T: int
    T0: int | None = None  # default 2p + 1
    M: int = 1000
    delta: float = 0.1
    kernel: MaternKernel = field(default_factory=MaternKernel)
    eta_schedule: str = "constant"  # constant | sqrt_log | theorem1 | theorem2
    eta_constant: float = 4.0
    eta_sqrt_log_scale: float = 1.0
    V_hat: float | None = None  # required by theorem1
    noise_params: tuple[int, int, float] | None = None  # (d, n, q), required by theorem2
    grid_per_dim: int | None = None
    grid_mode: str = "fixed"  # fixed | tau (analysis-faithful, grid degree tau_t per step)
    refine: bool = False
    estimator_mode: str = "gaussian"  # gaussian | shots
    normalize_targets: bool = True
    target_scale: float | None = None  # |E| for MaxCut; required if normalizing
    seed: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ConfigError(f"p must be >= 1, got {self.p}")
        if self.T < 0:
            raise ConfigError(f"T must be >= 0, got {self.T}")
        if self.T0 is None:
            self.T0 = 2 * self.p + 1
        if self.T0 < 1:
            raise ConfigError(f"T0 must be >= 1, got {self.T0}")
        if self.M < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        if not (0.0 < self.delta < 1.0):
            raise ConfigError(f"delta must be in (0,1), got {self.delta}")
        if self.grid_per_dim is None:
            self.grid_per_dim = DEFAULT_GRID_PER_DIM.get(
                self.p, max(2, int(GRID_CELL_BUDGET ** (1.0 / (2 * self.p))))
            )
        if self.grid_per_dim < 2:
            raise ConfigError(f"grid_per_dim must be >= 2, got {self.grid_per_dim}")
        if self.eta_schedule not in ("constant", "sqrt_log", "theorem1", "theorem2"):
            raise ConfigError(f"unknown eta schedule {self.eta_schedule!r}")
        if self.eta_schedule == "theorem1" and not self.V_hat:
            raise ConfigError("theorem1 schedule requires V_hat")
        if self.eta_schedule == "theorem2" and self.noise_params is None:
            raise ConfigError("theorem2 schedule requires noise_params (d, n, q)")
        if self.grid_mode not in ("fixed", "tau"):
            raise ConfigError(f"unknown grid mode {self.grid_mode!r}")
        if self.grid_mode == "tau" and not self.V_hat:
            raise ConfigError("tau grid mode requires V_hat")
        if self.estimator_mode not in ("gaussian", "shots"):
            raise ConfigError(f"unknown estimator mode {self.estimator_mode!r}")
        if self.normalize_targets and self.target_scale is None:
            raise ConfigError("normalize_targets=True requires target_scale (e.g. edge count)")

    def eta_at(self, t: int) -> tuple[float, bool]:
        if self.eta_schedule == "constant":
            return self.eta_constant, False
        if self.eta_schedule == "sqrt_log":
            return eta_sqrt_log(t, self.delta, self.eta_sqrt_log_scale), False
        if self.eta_schedule == "theorem1":
            return eta_theorem1(t, self.delta, self.p, self.V_hat)
        d, n, q = self.noise_params
        return eta_theorem2(t, self.delta, self.p, d, n, q)

    def grid_at(self, t: int) -> int:
        """Acquisition grid per dimension at step t.

        Fixed mode returns the configured resolution; tau mode follows the
        step's discretization degree, floored at 2 and capped by the cell
        budget."""
        if self.grid_mode == "fixed":
            return self.grid_per_dim
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # tau < 1 maps to the floor of 2
            tau = discretization_tau(t, self.p, self.V_hat, self.delta, variant="theorem1")
        cap = int(GRID_CELL_BUDGET ** (1.0 / (2 * self.p)))
        return max(2, min(math.ceil(tau), cap))

    def scale(self) -> float:
        return float(self.target_scale) if self.normalize_targets else 1.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["kernel"] = {"nu": self.kernel.nu, "length_scale": self.kernel.length_scale}
        return out


@dataclass
class BoRecord:
    """One observation: init design point (t=0) or BO step (t >= 1).

    ``mu``/``sigma`` are the posterior mean/std at the point just before the
    observation was added, in normalized target units; the sigma sequence of
    a whole trace therefore feeds the sequential information-gain sum
    directly.
    """

    index: int
    phase: str  # "init" | "bo"
    t: int
    theta: tuple[float, ...]
    y: float
    f_exact: float | None
    mu: float
    sigma: float
    eta: float | None
    eta_clamped: bool
    best_y: float
    best_f: float | None
    best_index: int
    gain: float


@dataclass
class BoTrace:
    records: list[BoRecord]
    config: dict
    seed: int
    theta_plus_by_y: tuple[float, ...]
    theta_plus_by_f: tuple[float, ...] | None

    @property
    def bo_records(self) -> list[BoRecord]:
        return [r for r in self.records if r.phase == "bo"]

    def sigma2_sequence(self, bo_only: bool = False) -> np.ndarray:
        recs = self.bo_records if bo_only else self.records
        return np.array([r.sigma**2 for r in recs])

    def to_json(self) -> str:
        payload = {
            "schema": TRACE_SCHEMA,
            "seed": self.seed,
            "config": self.config,
            "theta_plus_by_y": list(self.theta_plus_by_y),
            "theta_plus_by_f": None if self.theta_plus_by_f is None else list(self.theta_plus_by_f),
            "records": [asdict(r) for r in self.records],
        }
        return json.dumps(payload, indent=2)

    def to_csv(self, f_star: float | None = None) -> str:
        """Long-format CSV, one row per record, schema-version comment first."""
        buf = io.StringIO()
        buf.write(f"# schema: {TRACE_SCHEMA}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["phase", "t", "y", "best_y", "f_exact", "best_f", "r_t", "eta_t", "sigma_t", "gain_so_far"])
        for r in self.records:
            r_t = ""
            if f_star is not None and r.phase == "bo" and r.best_f is not None:
                r_t = repr(f_star - r.best_f)
            writer.writerow([
                r.phase,
                r.t,
                repr(r.y),
                repr(r.best_y),
                "" if r.f_exact is None else repr(r.f_exact),
                "" if r.best_f is None else repr(r.best_f),
                r_t,
                "" if r.eta is None else repr(r.eta),
                repr(r.sigma),
                repr(r.gain),
            ])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# acquisition maximization
# ---------------------------------------------------------------------------

def _check_grid_budget(grid_per_dim: int, p: int) -> None:
    if grid_per_dim ** (2 * p) > GRID_CELL_BUDGET:
        raise BudgetExceededError(
            f"acquisition grid {grid_per_dim}^{2 * p} exceeds {GRID_CELL_BUDGET} cells"
        )


def _golden_max(fun, lo: float, hi: float, tol: float = 1e-7) -> float:
    """Argmax of a unimodal-enough fun on [lo, hi] by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return (a + b) / 2.0


def select_next(
    gp: GpPosterior,
    eta: float,
    p: int,
    grid_per_dim: int,
    refine: bool = False,
) -> ParamVector:
    """Maximize the UCB over the uniform grid; optional coordinate-wise
    golden-section refinement within the winning cell.

    Ties break toward the lexicographically smallest grid index, so a flat
    acquisition (prior-only posterior) returns the all-zeros point.
    """
    _check_grid_budget(grid_per_dim, p)
    grid = theta_grid(p, grid_per_dim)
    mu, var = predict_many(gp, grid)
    scores = mu + math.sqrt(eta) * np.sqrt(var)
    best = int(np.argmax(scores))
    point = grid[best].copy()
    if refine:
        cell = TWO_PI / grid_per_dim

        def ucb_at(x):
            m, v = predict(gp, x)
            return m + math.sqrt(eta) * math.sqrt(v)

        for _ in range(2):
            for j in range(2 * p):
                lo, hi = point[j] - cell, point[j] + cell

                def along(v, j=j):
                    trial = point.copy()
                    trial[j] = v
                    return ucb_at(trial)

                point[j] = _golden_max(along, lo, hi)
    return ParamVector.create(point)


def batch_evaluate(objective, thetas: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
    """Evaluate an objective over rows of ``thetas``, chunked to bound memory."""
    thetas = np.asarray(thetas, dtype=float)
    if hasattr(objective, "batch"):
        parts = [np.asarray(objective.batch(thetas[i:i + chunk]), dtype=float)
                 for i in range(0, thetas.shape[0], chunk)]
        return np.concatenate(parts) if parts else np.zeros(0)
    return np.array([float(objective(row)) for row in thetas])


def grid_search_maximum(objective, p: int, per_dim: int, refine: bool = True) -> tuple[float, ParamVector]:
    """Dense-grid argmax of a deterministic objective, refined per coordinate.

    Used as the f* oracle for regret accounting; self-consistency across two
    resolutions bounds the residual grid error.
    """
    _check_grid_budget(per_dim, p)
    grid = theta_grid(p, per_dim)
    vals = batch_evaluate(objective, grid)
    best = int(np.argmax(vals))
    point = grid[best].copy()
    f_best = float(vals[best])
    if refine:
        cell = TWO_PI / per_dim
        for _ in range(2):
            for j in range(2 * p):
                lo, hi = point[j] - cell, point[j] + cell

                def along(v, j=j):
                    trial = point.copy()
                    trial[j] = v
                    return float(objective(trial))

                point[j] = _golden_max(along, lo, hi)
        f_best = float(objective(point))
    return f_best, ParamVector.create(point)


# ---------------------------------------------------------------------------
# the loop
# ---------------------------------------------------------------------------

def run_bo(objective, config: BoConfig, exact_objective=None) -> BoTrace:
    """Run the full loop and return its trace.

    ``objective`` is the measurable handle (fed to the estimator);
    ``exact_objective``, when given, is evaluated alongside for regret
    accounting and incumbent-by-value tracking. Deterministic for a fixed
    (config, seed).
    """
    dim = 2 * config.p
    rng_init = substream(config.seed, "init")
    rng_est = substream(config.seed, "estimator")
    scale = config.scale()
    kernel = config.kernel

    points: list[np.ndarray] = []
    targets: list[float] = []  # normalized units, GP-side
    records: list[BoRecord] = []

    best_y = -math.inf
    best_y_index = -1
    best_theta_by_y: np.ndarray | None = None
    best_f: float | None = None  # over BO-selected points only
    best_theta_by_f: np.ndarray | None = None
    gain = 0.0

    def observe(theta: np.ndarray) -> tuple[float, float | None]:
        y = sample_objective(objective, theta, config.M, mode=config.estimator_mode, rng=rng_est)
        f = None if exact_objective is None else float(exact_objective(theta))
        return y, f

    init_points = rng_init.uniform(0.0, TWO_PI, size=(config.T0, dim))
    for i in range(config.T0):
        gp = fit(ObservationSet(np.array(points).reshape(len(points), dim), np.array(targets), config.M), kernel)
        theta = init_points[i]
        mu, var = predict(gp, theta)
        y, f = observe(theta)
        points.append(theta)
        targets.append(y / scale)
        gain += 0.5 * math.log1p(4.0 * config.M * var)
        if y > best_y:
            best_y, best_y_index, best_theta_by_y = y, len(records), theta
        records.append(BoRecord(
            index=len(records), phase="init", t=0,
            theta=tuple(float(v) for v in theta),
            y=y, f_exact=f, mu=mu, sigma=math.sqrt(var),
            eta=None, eta_clamped=False,
            best_y=best_y, best_f=best_f, best_index=best_y_index, gain=gain,
        ))

    for t in range(1, config.T + 1):
        gp = fit(ObservationSet(np.array(points), np.array(targets), config.M), kernel)
        eta_t, clamped = config.eta_at(t)
        theta_pv = select_next(gp, eta_t, config.p, config.grid_at(t), config.refine)
        theta = theta_pv.as_array()
        mu, var = predict(gp, theta)
        y, f = observe(theta)
        points.append(theta)
        targets.append(y / scale)
        gain += 0.5 * math.log1p(4.0 * config.M * var)
        if y > best_y:
            best_y, best_y_index, best_theta_by_y = y, len(records), theta
        if f is not None and (best_f is None or f > best_f):
            best_f, best_theta_by_f = f, theta
        records.append(BoRecord(
            index=len(records), phase="bo", t=t,
            theta=tuple(float(v) for v in theta),
            y=y, f_exact=f, mu=mu, sigma=math.sqrt(var),
            eta=eta_t, eta_clamped=clamped,
            best_y=best_y, best_f=best_f, best_index=best_y_index, gain=gain,
        ))

    return BoTrace(
        records=records,
        config=config.to_dict(),
        seed=config.seed,
        theta_plus_by_y=tuple(float(v) for v in best_theta_by_y),
        theta_plus_by_f=None if best_theta_by_f is None else tuple(float(v) for v in best_theta_by_f),
    )


# ---------------------------------------------------------------------------
# error accounting
# ---------------------------------------------------------------------------

def optimization_error(trace: BoTrace, f_star: float, tolerance: float = 1e-6) -> np.ndarray:
    """r_t = f* - max_{s<=t} f(theta_s) over the BO-selected points.

    The incumbent here follows exact objective values, not noisy estimates.
    A violation beyond ``tolerance`` below zero means the f* oracle was run
    at too coarse a resolution.
    """
    recs = trace.bo_records
    if any(r.f_exact is None for r in recs):
        raise InvalidInstanceError("trace lacks exact objective values; rerun with an exact handle")
    best = -math.inf
    out = np.empty(len(recs))
    for i, r in enumerate(recs):
        best = max(best, r.f_exact)
        out[i] = f_star - best
    if out.size and out.min() < -tolerance:
        raise NumericalError(
            f"negative optimization error {out.min()}: f* oracle resolution too coarse"
        )
    return out


def regret_bound_lemma11(T: int, eta_T: float, g_T: float, M: int) -> float:
    """Closed-form regret bound ``(sqrt(c0*T*eta_T*g_T) + pi^2/6) / T`` with
    ``c0 = 8 / log(1 + 4M)``."""
    if T < 1 or eta_T <= 0.0 or g_T <= 0.0 or M < 1:
        raise InvalidInstanceError("need T, M >= 1 and eta_T, g_T > 0")
    c0 = 8.0 / math.log1p(4.0 * M)
    return float((math.sqrt(c0 * T * eta_T * g_T) + math.pi**2 / 6.0) / T)


def trace_information_gain(trace: BoTrace, bo_only: bool = False) -> float:
    """Sequential information gain accumulated by a trace."""
    M = trace.config["M"]
    return information_gain(trace.sigma2_sequence(bo_only=bo_only), M)
