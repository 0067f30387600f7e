"""Reproducible experiment runner.

Subcommands: run | sweep | oracle | landscape | theory. A declarative INI
config file can seed any run; command-line flags win over file values, and
the QAOA_BO_OUT environment variable overrides the configured output
directory (flags still win over the environment). All delimited output
carries a schema-version comment and the resolved config, so a run is
reconstructible from its artifacts alone. Files are written to a temp name
and renamed on success; failures leave no partial files.

Exit codes: 1 config error, 2 budget exceeded, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import report
from .bo import (
    BoConfig,
    DEFAULT_GRID_PER_DIM,
    GRID_CELL_BUDGET,
    TRACE_SCHEMA,
    batch_evaluate,
    eta_sqrt_log,
    eta_theorem1,
    eta_theorem2,
    discretization_tau,
    grid_search_maximum,
    optimization_error,
    regret_bound_lemma11,
    run_bo,
    trace_information_gain,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    GenerationFailureError,
    InvalidInstanceError,
    NumericalError,
)
from .gp import MaternKernel, max_information_gain_bound
from .gradient import estimate_gradient_variance
from .graph import Graph, random_regular_graph, read_edge_list, ring_graph
from .hamiltonian import maxcut_hamiltonian
from .simulator import NoiselessObjective, NoisyObjective, PauliChannel, theta_grid
from .theory import (
    effective_depth_noiseless,
    effective_depth_noisy,
    lipschitz_noiseless,
    lipschitz_noisy,
    verify_lipschitz,
)

OUTDIR_ENV = "QAOA_BO_OUT"
SWEEP_RUN_BUDGET = 10_000


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors surface as config errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# config resolution
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    graph_spec: str = "ring:4"
    p: int = 1
    noise_spec: str = "none"
    estimator: str = "gaussian"
    M: int = 1000
    T: int = 20
    T0: int | None = None
    delta: float = 0.1
    eta_spec: str = "constant:4"
    nu: float = 2.5
    length_scale: float = 1.0
    grid: int | None = None
    grid_mode: str = "fixed"
    refine: bool = False
    normalize: bool = True
    out_dir: str = "out"
    seeds: list[int] = field(default_factory=lambda: [0])
    plot: bool = True
    v_hat: float | None = None
    oracle_res: int | None = None


def parse_seeds(spec: str) -> list[int]:
    """'0:20' is a half-open range; '1,4,9' and '7' are explicit lists."""
    spec = spec.strip()
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        seeds = list(range(int(lo), int(hi)))
    else:
        seeds = [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    if not seeds:
        raise ConfigError(f"seed list resolved empty from {spec!r}")
    return seeds


def parse_graph_spec(spec: str) -> Graph:
    kind, _, rest = spec.partition(":")
    if kind == "ring":
        return ring_graph(int(rest))
    if kind == "regular":
        parts = rest.split(",")
        if len(parts) != 3:
            raise ConfigError(f"regular graph spec needs n,d,seed; got {spec!r}")
        return random_regular_graph(int(parts[0]), int(parts[1]), int(parts[2]))
    if kind == "file":
        return read_edge_list(rest)
    raise ConfigError(f"unknown graph spec {spec!r} (expected ring:N, regular:N,D,SEED, file:PATH)")


def parse_noise_spec(spec: str) -> PauliChannel | None:
    spec = spec.strip()
    if spec in ("none", "", "0"):
        return None
    kind, _, rest = spec.partition(":")
    if kind != "pauli":
        raise ConfigError(f"unknown noise spec {spec!r} (expected none or pauli:Q or pauli:QX,QY,QZ)")
    parts = [float(v) for v in rest.split(",")]
    if len(parts) == 1:
        if parts[0] == 0.0:
            return None
        return PauliChannel.symmetric(parts[0])
    if len(parts) == 3:
        qx, qy, qz = parts
        return PauliChannel(q_identity=1.0 - qx - qy - qz, q_x=qx, q_y=qy, q_z=qz)
    raise ConfigError(f"noise spec needs 1 or 3 probabilities, got {spec!r}")


def parse_eta_spec(spec: str) -> tuple[str, float]:
    kind, _, rest = spec.partition(":")
    if kind == "constant":
        return "constant", float(rest) if rest else 4.0
    if kind == "sqrt_log":
        return "sqrt_log", float(rest) if rest else 1.0
    if kind in ("theorem1", "theorem2"):
        return kind, 0.0
    raise ConfigError(f"unknown eta spec {spec!r}")


_FILE_KEYS = {
    ("problem", "graph"): ("graph_spec", str),
    ("problem", "p"): ("p", int),
    ("problem", "noise"): ("noise_spec", str),
    ("estimator", "mode"): ("estimator", str),
    ("estimator", "M"): ("M", int),
    ("bo", "T"): ("T", int),
    ("bo", "T0"): ("T0", int),
    ("bo", "delta"): ("delta", float),
    ("bo", "eta"): ("eta_spec", str),
    ("bo", "nu"): ("nu", float),
    ("bo", "length_scale"): ("length_scale", float),
    ("bo", "grid"): ("grid", int),
    ("bo", "grid_mode"): ("grid_mode", str),
    ("bo", "refine"): ("refine", lambda s: s.lower() in ("1", "true", "yes", "on")),
    ("bo", "normalize"): ("normalize", lambda s: s.lower() in ("1", "true", "yes", "on")),
    ("bo", "V_hat"): ("v_hat", float),
    ("output", "dir"): ("out_dir", str),
    ("output", "seeds"): ("seeds", parse_seeds),
    ("output", "plot"): ("plot", lambda s: s.lower() in ("1", "true", "yes", "on")),
    ("output", "oracle_res"): ("oracle_res", int),
}


def resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if getattr(args, "config", None):
        ini = configparser.ConfigParser()
        read = ini.read(args.config)
        if not read:
            raise ConfigError(f"config file {args.config!r} not found")
        for (section, key), (attr, conv) in _FILE_KEYS.items():
            if ini.has_option(section, key):
                try:
                    setattr(cfg, attr, conv(ini.get(section, key)))
                except ValueError as exc:
                    raise ConfigError(f"bad value for [{section}] {key}: {exc}") from exc
        allowed: dict[str, set] = {}
        for section, key in _FILE_KEYS:
            allowed.setdefault(section, set()).add(key.lower())
        for section in ini.sections():
            if section not in allowed:
                raise ConfigError(f"unknown config section [{section}]")
            extra = {k for k, _ in ini.items(section) if k.lower() not in allowed[section]}
            if extra:
                raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")
    env_dir = os.environ.get(OUTDIR_ENV)
    if env_dir:
        cfg.out_dir = env_dir
    # flags win over file and environment
    flag_map = {
        "graph": "graph_spec", "p": "p", "noise": "noise_spec", "estimator": "estimator",
        "M": "M", "T": "T", "T0": "T0", "delta": "delta", "eta": "eta_spec", "nu": "nu",
        "length_scale": "length_scale", "grid": "grid", "grid_mode": "grid_mode",
        "out": "out_dir", "v_hat": "v_hat",
        "oracle_res": "oracle_res",
    }
    for flag, attr in flag_map.items():
        val = getattr(args, flag, None)
        if val is not None:
            setattr(cfg, attr, val)
    if getattr(args, "seeds", None) is not None:
        cfg.seeds = parse_seeds(args.seeds)
    if getattr(args, "refine", None) is not None:
        cfg.refine = args.refine
    if getattr(args, "normalize", None) is not None:
        cfg.normalize = args.normalize
    if getattr(args, "plot", None) is not None:
        cfg.plot = args.plot
    return cfg


@dataclass
class ResolvedProblem:
    graph: Graph
    channel: PauliChannel | None
    objective: object
    degree: int

    @property
    def edge_count(self) -> int:
        return self.graph.num_edges


def resolve_problem(cfg: ExperimentConfig) -> ResolvedProblem:
    graph = parse_graph_spec(cfg.graph_spec)
    channel = parse_noise_spec(cfg.noise_spec)
    h = maxcut_hamiltonian(graph)
    objective = NoisyObjective(h, channel) if channel is not None else NoiselessObjective(h)
    if graph.degree is not None:
        degree = graph.degree
    else:
        seq = graph.degree_sequence()
        degree = seq[0] if seq and all(d == seq[0] for d in seq) else 0
    return ResolvedProblem(graph=graph, channel=channel, objective=objective, degree=degree)


def build_bo_config(cfg: ExperimentConfig, prob: ResolvedProblem, seed: int) -> BoConfig:
    schedule, eta_param = parse_eta_spec(cfg.eta_spec)
    v_hat = cfg.v_hat
    if v_hat is None and (schedule == "theorem1" or cfg.grid_mode == "tau"):
        v_hat = estimate_gradient_variance(prob.objective, cfg.p, 500, seed=0).V_hat
    noise_params = None
    if schedule == "theorem2":
        if prob.channel is None:
            raise ConfigError("theorem2 eta schedule requires a Pauli noise channel")
        if prob.degree < 1:
            raise ConfigError("theorem2 eta schedule requires a regular graph")
        noise_params = (prob.degree, prob.graph.n, prob.channel.strength)
    return BoConfig(
        p=cfg.p, T=cfg.T, T0=cfg.T0, M=cfg.M, delta=cfg.delta,
        kernel=MaternKernel(nu=cfg.nu, length_scale=cfg.length_scale),
        eta_schedule=schedule,
        eta_constant=eta_param if schedule == "constant" else 4.0,
        eta_sqrt_log_scale=eta_param if schedule == "sqrt_log" else 1.0,
        V_hat=v_hat, noise_params=noise_params,
        grid_per_dim=cfg.grid, grid_mode=cfg.grid_mode, refine=cfg.refine,
        estimator_mode=cfg.estimator,
        normalize_targets=cfg.normalize,
        target_scale=float(prob.edge_count) if cfg.normalize else None,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# file helpers
# ---------------------------------------------------------------------------

def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_versioned_csv(path: str) -> tuple[list[str], list[list[str]]]:
    """Read a schema-stamped CSV, rejecting unknown schema versions."""
    import csv as _csv

    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith("# schema:"):
            raise ConfigError(f"{path}: missing schema comment")
        version = int(first.split(":", 1)[1])
        if version != TRACE_SCHEMA:
            raise ConfigError(f"{path}: unsupported schema version {version}")
        rows = [r for r in _csv.reader(fh) if r and not r[0].startswith("#")]
    return rows[0], rows[1:]


def _config_comment(payload: dict) -> str:
    return "# config: " + json.dumps(payload, separators=(",", ":")) + "\n"


def default_oracle_res(p: int, acquisition_grid: int | None) -> int:
    base = acquisition_grid or DEFAULT_GRID_PER_DIM.get(p, 8)
    cap = int(GRID_CELL_BUDGET ** (1.0 / (2 * p)))
    return min(4 * base, cap)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    cfg = resolve_config(args)
    prob = resolve_problem(cfg)
    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    res = cfg.oracle_res or default_oracle_res(cfg.p, cfg.grid)
    f_star, theta_star = grid_search_maximum(prob.objective, cfg.p, res, refine=True)

    resolved = {
        "graph": cfg.graph_spec, "edges": prob.edge_count, "p": cfg.p,
        "noise": cfg.noise_spec, "estimator": cfg.estimator, "M": cfg.M,
        "eta": cfg.eta_spec, "seeds": cfg.seeds, "oracle_resolution": res,
    }
    traces = []
    for seed in cfg.seeds:
        bo_cfg = build_bo_config(cfg, prob, seed)
        trace = run_bo(prob.objective, bo_cfg, exact_objective=prob.objective)
        traces.append(trace)
        atomic_write_text(os.path.join(out, f"trace_seed{seed}.json"), trace.to_json())
        csv_text = trace.to_csv(f_star=f_star)
        head, _, rest = csv_text.partition("\n")
        csv_text = head + "\n" + _config_comment({**resolved, "seed": seed}) + rest
        atomic_write_text(os.path.join(out, f"trace_seed{seed}.csv"), csv_text)

    r_curves = [optimization_error(tr, f_star) for tr in traces] if cfg.T > 0 else []
    best_f_curves = [np.array([rec.best_f for rec in tr.bo_records]) for tr in traces]
    summary = {
        "schema": TRACE_SCHEMA,
        "config": resolved,
        "f_star": f_star,
        "theta_star": list(theta_star.values),
        "eta_schedule": parse_eta_spec(cfg.eta_spec)[0],
        "g_T": [trace_information_gain(tr) for tr in traces],
        "g_T_bo_only": [trace_information_gain(tr, bo_only=True) for tr in traces],
        "best_f_final": [float(c[-1]) for c in best_f_curves if c.size],
        "r_final": [float(c[-1]) for c in r_curves],
        "r_quantiles": {},
    }
    if r_curves:
        stacked = np.vstack(r_curves)
        summary["r_quantiles"] = {
            "p25": np.quantile(stacked, 0.25, axis=0).tolist(),
            "p50": np.quantile(stacked, 0.50, axis=0).tolist(),
            "p75": np.quantile(stacked, 0.75, axis=0).tolist(),
        }
    atomic_write_text(os.path.join(out, "summary.json"), json.dumps(summary, indent=2))
    if cfg.plot and best_f_curves and best_f_curves[0].size:
        report.plot_convergence(best_f_curves, os.path.join(out, "convergence.png"), f_star=f_star)
        if r_curves:
            report.plot_regret(r_curves, os.path.join(out, "regret.png"))
    print(json.dumps({"out": out, "f_star": f_star, "seeds": len(cfg.seeds)}))
    return 0


def _parse_sweep_spec(specs: list[str]) -> dict[str, list]:
    table = {}
    for spec in specs:
        key, _, rest = spec.partition("=")
        key = key.strip()
        if key not in ("n", "p", "q", "M"):
            raise ConfigError(f"sweep variable must be one of n,p,q,M; got {key!r}")
        vals = [v.strip() for v in rest.split(",") if v.strip() != ""]
        if not vals:
            raise ConfigError(f"empty sweep range for {key!r}")
        table[key] = [float(v) if key == "q" else int(v) for v in vals]
    if not table:
        raise ConfigError("no sweep variables given")
    return table


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    table = _parse_sweep_spec(args.sweep)
    keys = sorted(table)
    import itertools

    cells = list(itertools.product(*(table[k] for k in keys)))
    total = len(cells) * len(cfg.seeds)
    if total > SWEEP_RUN_BUDGET:
        raise BudgetExceededError(f"sweep needs {total} runs, budget is {SWEEP_RUN_BUDGET}")
    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)

    long_rows = []
    summary_rows = []
    run_id = 0
    for cell in cells:
        cell_cfg = ExperimentConfig(**{**cfg.__dict__})
        params = dict(zip(keys, cell))
        if "n" in params:
            kind, _, rest = cell_cfg.graph_spec.partition(":")
            if kind == "ring":
                cell_cfg.graph_spec = f"ring:{params['n']}"
            elif kind == "regular":
                _, d, gseed = rest.split(",")
                cell_cfg.graph_spec = f"regular:{params['n']},{d},{gseed}"
            else:
                raise ConfigError("sweeping n requires a ring: or regular: graph spec")
        if "p" in params:
            cell_cfg.p = int(params["p"])
        if "q" in params:
            cell_cfg.noise_spec = "none" if params["q"] == 0.0 else f"pauli:{params['q']}"
        if "M" in params:
            cell_cfg.M = int(params["M"])
        prob = resolve_problem(cell_cfg)
        res = cell_cfg.oracle_res or default_oracle_res(cell_cfg.p, cell_cfg.grid)
        f_star, _ = grid_search_maximum(prob.objective, cell_cfg.p, res, refine=True)
        for seed in cfg.seeds:
            bo_cfg = build_bo_config(cell_cfg, prob, seed)
            trace = run_bo(prob.objective, bo_cfg, exact_objective=prob.objective)
            r = optimization_error(trace, f_star) if cell_cfg.T > 0 else np.zeros(0)
            for rec in trace.records:
                long_rows.append([
                    run_id,
                    *(params.get(k, "") for k in keys),
                    seed, rec.phase, rec.t,
                    repr(rec.y), repr(rec.best_y),
                    "" if rec.f_exact is None else repr(rec.f_exact),
                    "" if rec.best_f is None else repr(rec.best_f),
                    repr(f_star - rec.best_f) if (rec.phase == "bo" and rec.best_f is not None) else "",
                    "" if rec.eta is None else repr(rec.eta),
                    repr(rec.sigma), repr(rec.gain),
                ])
            summary_rows.append({
                "run": run_id, **params, "seed": seed, "f_star": f_star,
                "best_f_final": trace.bo_records[-1].best_f if trace.bo_records else None,
                "r_final": float(r[-1]) if r.size else None,
                "g_T": trace_information_gain(trace),
            })
            run_id += 1

    import csv as _csv

    buf = io.StringIO()
    buf.write(f"# schema: {TRACE_SCHEMA}\n")
    buf.write(_config_comment({"sweep": {k: table[k] for k in keys}, "base": cfg.graph_spec, "seeds": cfg.seeds}))
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["run", *keys, "seed", "phase", "t", "y", "best_y", "f_exact", "best_f", "r_t", "eta_t", "sigma_t", "gain_so_far"])
    w.writerows(long_rows)
    atomic_write_text(os.path.join(out, "sweep_long.csv"), buf.getvalue())

    buf = io.StringIO()
    buf.write(f"# schema: {TRACE_SCHEMA}\n")
    w = _csv.writer(buf, lineterminator="\n")
    cols = ["run", *keys, "seed", "f_star", "best_f_final", "r_final", "g_T"]
    w.writerow(cols)
    for row in summary_rows:
        w.writerow([row.get(c, "") for c in cols])
    atomic_write_text(os.path.join(out, "sweep_summary.csv"), buf.getvalue())

    if cfg.plot and len(keys) == 1 and summary_rows:
        report.plot_sweep_summary(summary_rows, keys[0], os.path.join(out, "sweep_summary.png"))
    print(json.dumps({"out": out, "runs": run_id}))
    return 0


def cmd_oracle(args) -> int:
    cfg = resolve_config(args)
    if getattr(args, "p", None) is not None and args.p < 1:
        raise ConfigError(f"p must be >= 1, got {args.p}")
    prob = resolve_problem(cfg)
    res = cfg.oracle_res or default_oracle_res(cfg.p, cfg.grid)
    refine = args.refine if args.refine is not None else True
    f_star, theta_star = grid_search_maximum(prob.objective, cfg.p, res, refine=refine)
    payload = {
        "f_star": f_star,
        "theta_star": list(theta_star.values),
        "resolution": res,
        "refined": refine,
        "graph": cfg.graph_spec,
        "noise": cfg.noise_spec,
        "p": cfg.p,
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out_file:
        atomic_write_text(args.out_file, text + "\n")
    return 0


def cmd_landscape(args) -> int:
    cfg = resolve_config(args)
    if cfg.p not in (1, 2):
        raise ConfigError(f"landscape export supports p in {{1, 2}}, got p={cfg.p}")
    prob = resolve_problem(cfg)
    per_dim = cfg.grid or DEFAULT_GRID_PER_DIM[cfg.p]
    if per_dim ** (2 * cfg.p) > GRID_CELL_BUDGET:
        raise BudgetExceededError(f"landscape grid {per_dim}^{2 * cfg.p} exceeds {GRID_CELL_BUDGET}")
    grid = theta_grid(cfg.p, per_dim)
    h = maxcut_hamiltonian(prob.graph)
    f_vals = batch_evaluate(NoiselessObjective(h), grid)
    noisy_vals = None
    if prob.channel is not None:
        noisy_vals = batch_evaluate(NoisyObjective(h, prob.channel), grid)

    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    buf = io.StringIO()
    buf.write(f"# schema: {TRACE_SCHEMA}\n")
    buf.write(_config_comment({"graph": cfg.graph_spec, "p": cfg.p, "grid": per_dim, "noise": cfg.noise_spec}))
    header = [f"theta_{k + 1}" for k in range(2 * cfg.p)] + ["f"] + (["f_noisy"] if noisy_vals is not None else [])
    buf.write(",".join(header) + "\n")
    for i in range(grid.shape[0]):
        row = [repr(float(v)) for v in grid[i]] + [repr(float(f_vals[i]))]
        if noisy_vals is not None:
            row.append(repr(float(noisy_vals[i])))
        buf.write(",".join(row) + "\n")
    csv_path = os.path.join(out, "landscape.csv")
    atomic_write_text(csv_path, buf.getvalue())
    if cfg.plot and cfg.p == 1:
        report.plot_landscape(f_vals, per_dim, os.path.join(out, "landscape.png"), noisy=noisy_vals)
    print(json.dumps({"out": csv_path, "rows": int(grid.shape[0])}))
    return 0


def cmd_theory(args) -> int:
    sub = args.calculator
    if sub == "lipschitz-noiseless":
        payload = {"L": lipschitz_noiseless(args.v_hat, args.delta),
                   "V_hat": args.v_hat, "delta": args.delta}
    elif sub == "lipschitz-noisy":
        payload = {
            "L": lipschitz_noisy(args.d, args.n, args.q, args.p, form=args.form,
                                 h1_norm_inf=args.h1_norm, d1=args.d1),
            "form": args.form, "d": args.d, "n": args.n, "q": args.q, "p": args.p,
        }
    elif sub == "depth-noiseless":
        p_max = effective_depth_noiseless(args.epsilon, args.nu, args.T)
        payload = {"p_max": p_max, "epsilon": args.epsilon, "nu": args.nu, "T": args.T,
                   "note": "asymptotic shape, unit constants"}
    elif sub == "depth-noisy":
        result = effective_depth_noisy(args.n, args.d, args.q, c1=args.c1, c2=args.c2, T=args.T_steps)
        payload = json.loads(result.to_json())
        payload["note"] = "asymptotic shape, unit constants"
    elif sub == "eta1":
        eta, clamped = eta_theorem1(args.t, args.delta, args.p, args.v_hat)
        payload = {"eta": eta, "clamped": clamped}
    elif sub == "eta2":
        eta, clamped = eta_theorem2(args.t, args.delta, args.p, args.d, args.n, args.q)
        payload = {"eta": eta, "clamped": clamped}
    elif sub == "sqrt-log":
        payload = {"eta": eta_sqrt_log(args.t, args.delta, args.scale)}
    elif sub == "tau":
        payload = {"tau": discretization_tau(args.t, args.p, args.v_hat, args.delta, args.variant)}
    elif sub == "gain-bound":
        payload = {"bound": max_information_gain_bound(args.T, args.p, args.nu),
                   "note": "asymptotic shape, unit constants"}
    elif sub == "regret-bound":
        payload = {"bound": regret_bound_lemma11(args.T, args.eta_T, args.g_T, args.M)}
    elif sub == "lipschitz-verify":
        cfg = resolve_config(args)
        prob = resolve_problem(cfg)
        rep = verify_lipschitz(prob.objective, args.bound, cfg.p, args.pairs, args.seed)
        payload = json.loads(rep.to_json())
    else:
        raise ConfigError(f"unknown theory calculator {sub!r}")
    print(json.dumps(payload, indent=2))
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--graph", help="ring:N | regular:N,D,SEED | file:PATH")
    parser.add_argument("--p", type=int, help="layer count")
    parser.add_argument("--noise", help="none | pauli:Q | pauli:QX,QY,QZ")
    parser.add_argument("--estimator", choices=["gaussian", "shots"])
    parser.add_argument("--M", type=int, help="measurements per estimate")
    parser.add_argument("--T", type=int, help="BO step budget")
    parser.add_argument("--T0", type=int, help="initial random observations")
    parser.add_argument("--delta", type=float, help="failure probability in (0,1)")
    parser.add_argument("--eta", help="constant:C | sqrt_log[:SCALE] | theorem1 | theorem2")
    parser.add_argument("--nu", type=float, help="Matern smoothness (0.5, 1.5, 2.5)")
    parser.add_argument("--length-scale", dest="length_scale", type=float)
    parser.add_argument("--grid", type=int, help="acquisition grid per dimension")
    parser.add_argument("--grid-mode", dest="grid_mode", choices=["fixed", "tau"],
                        help="fixed resolution or the per-step discretization degree")
    parser.add_argument("--refine", action=argparse.BooleanOptionalAction, default=None)
    parser.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=None,
                        help="divide targets by edge count before GP fitting")
    parser.add_argument("--v-hat", dest="v_hat", type=float, help="gradient variance for theorem1")
    parser.add_argument("--seeds", help="e.g. 0:20 or 3,5,8")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--oracle-res", dest="oracle_res", type=int, help="f* oracle grid per dimension")
    parser.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None,
                        help="render figures next to the delimited output")


def build_parser() -> _Parser:
    parser = _Parser(prog="qaoa-bo", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    run_p = subs.add_parser("run", help="run one BO experiment per seed")
    _add_common(run_p)
    run_p.set_defaults(func=cmd_run)

    sweep_p = subs.add_parser("sweep", help="cartesian sweep over n/p/q/M")
    _add_common(sweep_p)
    sweep_p.add_argument("--sweep", action="append", required=True,
                         metavar="VAR=V1,V2,...", help="sweep variable (repeatable)")
    sweep_p.set_defaults(func=cmd_sweep)

    oracle_p = subs.add_parser("oracle", help="dense-grid global maximum of the objective")
    _add_common(oracle_p)
    oracle_p.add_argument("--out-file", help="also write the JSON result here")
    oracle_p.set_defaults(func=cmd_oracle)

    land_p = subs.add_parser("landscape", help="full-grid objective export (p <= 2)")
    _add_common(land_p)
    land_p.set_defaults(func=cmd_landscape)

    th_p = subs.add_parser("theory", help="closed-form bound calculators (JSON to stdout)")
    th_subs = th_p.add_subparsers(dest="calculator", required=True)

    t = th_subs.add_parser("lipschitz-noiseless")
    t.add_argument("--v-hat", dest="v_hat", type=float, required=True)
    t.add_argument("--delta", type=float, required=True)

    t = th_subs.add_parser("lipschitz-noisy")
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--q", type=float, required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--form", choices=["lemma2", "refined"], default="lemma2")
    t.add_argument("--h1-norm", dest="h1_norm", type=float)
    t.add_argument("--d1", type=int)

    t = th_subs.add_parser("depth-noiseless")
    t.add_argument("--epsilon", type=float, required=True)
    t.add_argument("--nu", type=float, required=True)
    t.add_argument("--T", type=int, required=True)

    t = th_subs.add_parser("depth-noisy")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--q", type=float, required=True)
    t.add_argument("--c1", type=float)
    t.add_argument("--c2", type=float)
    t.add_argument("--T", dest="T_steps", type=int)

    t = th_subs.add_parser("eta1")
    t.add_argument("--t", type=int, required=True)
    t.add_argument("--delta", type=float, required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--v-hat", dest="v_hat", type=float, required=True)

    t = th_subs.add_parser("eta2")
    t.add_argument("--t", type=int, required=True)
    t.add_argument("--delta", type=float, required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--q", type=float, required=True)

    t = th_subs.add_parser("sqrt-log")
    t.add_argument("--t", type=int, required=True)
    t.add_argument("--delta", type=float, required=True)
    t.add_argument("--scale", type=float, default=1.0)

    t = th_subs.add_parser("tau")
    t.add_argument("--t", type=int, required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--v-hat", dest="v_hat", type=float, required=True)
    t.add_argument("--delta", type=float, required=True)
    t.add_argument("--variant", choices=["lemma5", "theorem1"], default="lemma5")

    t = th_subs.add_parser("gain-bound")
    t.add_argument("--T", type=int, required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--nu", type=float, required=True)

    t = th_subs.add_parser("regret-bound")
    t.add_argument("--T", type=int, required=True)
    t.add_argument("--eta-T", dest="eta_T", type=float, required=True)
    t.add_argument("--g-T", dest="g_T", type=float, required=True)
    t.add_argument("--M", type=int, required=True)

    t = th_subs.add_parser("lipschitz-verify")
    _add_common(t)
    t.add_argument("--bound", type=float, required=True)
    t.add_argument("--pairs", type=int, default=1000)
    t.add_argument("--seed", type=int, default=0)

    th_p.set_defaults(func=cmd_theory)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, InvalidInstanceError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, GenerationFailureError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
