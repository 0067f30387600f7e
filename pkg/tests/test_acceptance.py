"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances are pinned here, not deferred. Criteria 7, 8 and 11 share the
same pinned ensemble configuration (4-cycle, p=1, M=1000, T=20, gaussian
estimator, constant eta=4, Matern nu=5/2, length scale 1, targets divided
by the edge count).
"""

import json
import math
import time

import numpy as np
import pytest

from qaoa_bo.bo import (
    BoConfig,
    grid_search_maximum,
    optimization_error,
    regret_bound_lemma11,
    run_bo,
    trace_information_gain,
)
from qaoa_bo.cli import main as cli_main
from qaoa_bo.gp import MaternKernel, ObservationSet, fit, gaussian_entropy, predict_many
from qaoa_bo.gradient import estimate_gradient_variance, exact_partial, finite_difference_gradient
from qaoa_bo.graph import random_regular_graph, ring_graph
from qaoa_bo.hamiltonian import maxcut_hamiltonian
from qaoa_bo.simulator import NoiselessObjective, NoisyObjective, PauliChannel, noiseless_objective, noisy_objective
from qaoa_bo.theory import (
    depth_defining_inequality,
    effective_depth_noiseless,
    lipschitz_noiseless,
    lipschitz_noisy,
    noise_band,
    verify_lipschitz,
)


def report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def ring4_h():
    return maxcut_hamiltonian(ring_graph(4))


@pytest.fixture(scope="module")
def ring4_obj(ring4_h):
    return NoiselessObjective(ring4_h)


@pytest.fixture(scope="module")
def fig1c_ensemble(ring4_obj):
    """The pinned criterion-7 configuration, 20 seeds."""
    start = time.perf_counter()
    f_star, _ = grid_search_maximum(ring4_obj, 1, 256)
    traces = []
    for seed in range(20):
        cfg = BoConfig(
            p=1, T=20, M=1000, delta=0.1,
            kernel=MaternKernel(nu=2.5, length_scale=1.0),
            eta_schedule="constant", eta_constant=4.0,
            estimator_mode="gaussian",
            normalize_targets=True, target_scale=4.0,
            seed=seed,
        )
        traces.append(run_bo(ring4_obj, cfg, exact_objective=ring4_obj))
    return {"traces": traces, "f_star": f_star, "elapsed": time.perf_counter() - start}


def test_criterion_1_noiseless_objective_exactness():
    start = time.perf_counter()
    cases = [
        (ring_graph(4), 2.0),
        (ring_graph(3), 1.5),
        (random_regular_graph(8, 3, seed=1), 6.0),
    ]
    worst = 0.0
    for g, expected in cases:
        h = maxcut_hamiltonian(g)
        for p in (1, 3):
            worst = max(worst, abs(noiseless_objective(h, [0.0] * (2 * p)) - expected))
    elapsed = time.perf_counter() - start
    report(1, worst <= 1e-12 and elapsed < 1.0,
           f"max |f(0) - |E|/2| = {worst:.2e} (tol 1e-12), elapsed {elapsed:.2f}s (< 1s)")


def test_criterion_2_p1_maxcut_optimum(capsys):
    start = time.perf_counter()
    values = {}
    for res in (64, 256):
        assert cli_main(["oracle", "--graph", "ring:4", "--p", "1",
                         "--oracle-res", str(res)]) == 0
        values[res] = json.loads(capsys.readouterr().out)["f_star"]
    elapsed = time.perf_counter() - start
    ok = (abs(values[64] - 3.0) <= 0.01 and abs(values[256] - 3.0) <= 0.01
          and abs(values[64] - values[256]) <= 0.01 and elapsed < 10.0)
    with capsys.disabled():
        report(2, ok, f"f*(64)={values[64]:.6f}, f*(256)={values[256]:.6f}, elapsed {elapsed:.2f}s (< 10s)")


def test_criterion_3_gp_posterior_oracle_equivalence():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for i in range(10):
        p = [1, 2][i % 2]
        nu = (0.5, 1.5, 2.5)[i % 3]
        t = int(rng.integers(2, 13))
        M = int(rng.choice([1, 10, 100, 1000]))
        k = MaternKernel(nu=nu, length_scale=1.0)
        X = rng.uniform(0, 2 * math.pi, size=(t, 2 * p))
        y = rng.normal(size=t)
        gp = fit(ObservationSet(X, y, M), k)
        Q = rng.uniform(0, 2 * math.pi, size=(20, 2 * p))
        mu, var = predict_many(gp, Q)
        Ainv = np.linalg.inv(k.matrix(X) + np.eye(t) / (4 * M))
        kq = k.matrix(Q, X)
        worst = max(worst, np.abs(mu - kq @ Ainv @ y).max())
        worst = max(worst, np.abs(var - (1.0 - np.einsum("ij,jk,ik->i", kq, Ainv, kq))).max())
    report(3, worst <= 1e-8, f"max |posterior - dense inverse| = {worst:.2e} (tol 1e-8)")


def test_criterion_4_information_gain_identity(ring4_obj):
    worst = 0.0
    for seed in range(10):
        cfg = BoConfig(p=1, T=15, M=1000, eta_schedule="constant", eta_constant=4.0,
                       normalize_targets=True, target_scale=4.0, seed=seed)
        trace = run_bo(ring4_obj, cfg, exact_objective=None)
        gain = trace_information_gain(trace)
        pts = np.array([r.theta for r in trace.records])
        noise = np.eye(len(pts)) / (4 * cfg.M)
        oracle = gaussian_entropy(cfg.kernel.matrix(pts) + noise) - gaussian_entropy(noise)
        worst = max(worst, abs(gain - oracle))
    report(4, worst <= 1e-8, f"max |sequential gain - entropy difference| = {worst:.2e} (tol 1e-8)")


def test_criterion_5_gradient_cross_check(ring4_h, ring4_obj):
    rng = np.random.default_rng(99)
    worst = 0.0
    for p in (1, 2):
        for _ in range(50):
            th = rng.uniform(0, 2 * math.pi, size=2 * p)
            j = int(rng.integers(0, 2 * p))
            fd = finite_difference_gradient(ring4_obj, th, step=1e-5).values[j]
            worst = max(worst, abs(exact_partial(ring4_h, th, j) - fd))
    rep = estimate_gradient_variance(ring4_obj, p=1, n_samples=2000, seed=7)
    ses = [math.sqrt(v / rep.sample_count) for v in rep.per_coordinate_variance]
    mean_ok = all(abs(m) <= 3 * se for m, se in zip(rep.mean_per_coordinate, ses))
    report(5, worst <= 1e-6 and mean_ok,
           f"max |exact - fd| = {worst:.2e} (tol 1e-6); per-coordinate means within 3 SE of 0: {mean_ok}")


def test_criterion_6_noise_channel_fixed_points(ring4_h):
    rng = np.random.default_rng(5)
    worst_dep, worst_id, worst_weak = 0.0, 0.0, 0.0
    for p in (1, 2):
        for _ in range(10):  # 10 per depth = 20 random points total
            th = rng.uniform(0, 2 * math.pi, size=2 * p)
            worst_dep = max(worst_dep, abs(
                noisy_objective(ring4_h, th, PauliChannel.symmetric(0.25)) - 2.0))
            clean = noiseless_objective(ring4_h, th)
            worst_id = max(worst_id, abs(
                noisy_objective(ring4_h, th, PauliChannel(1.0, 0.0, 0.0, 0.0)) - clean))
            worst_weak = max(worst_weak, abs(
                noisy_objective(ring4_h, th, PauliChannel.symmetric(1e-6)) - clean))
    ok = worst_dep <= 1e-10 and worst_id <= 1e-10 and worst_weak <= 1e-4
    report(6, ok, f"depolarizing |f-2| = {worst_dep:.2e} (1e-10); identity channel "
                  f"{worst_id:.2e} (1e-10); q=1e-6 {worst_weak:.2e} (1e-4)")


def test_criterion_7_fig1c_qualitative_reproduction(fig1c_ensemble):
    traces = fig1c_ensemble["traces"]
    hits = 0
    passages = []
    for tr in traces:
        best = [r.best_f for r in tr.bo_records]
        hits += best[-1] >= 2.7
        passages.append(next((t + 1 for t, b in enumerate(best) if b >= 2.9), math.inf))
    fp_median = float(np.median(passages))
    elapsed = fig1c_ensemble["elapsed"]
    ok = hits >= 16 and fp_median <= 15 and elapsed < 120.0
    report(7, ok, f"best f >= 2.7 in {hits}/20 seeds (need >= 16); median first passage to 2.9 "
                  f"= {fp_median} (need <= 15); elapsed {elapsed:.1f}s (< 120s)")


def test_criterion_8_regret_accounting(fig1c_ensemble):
    f_star = fig1c_ensemble["f_star"]
    ok = True
    looseness = []
    for tr in fig1c_ensemble["traces"]:
        r = optimization_error(tr, f_star)
        ok &= all(b <= a + 1e-15 for a, b in zip(r, r[1:]))
        g_T = trace_information_gain(tr, bo_only=True)
        bound = regret_bound_lemma11(20, 4.0, g_T, M=1000)
        ok &= bound >= r[-1]
        looseness.append(bound / max(r[-1], 1e-12))
    report(8, ok, f"r_t nonincreasing and closed-form regret bound >= r_T in 20/20 runs; "
                  f"bound/r_T looseness median {np.median(looseness):.1f}x (reported, not bounded)")


def test_criterion_9_lipschitz_harnesses(ring4_h, ring4_obj):
    rep_v = estimate_gradient_variance(ring4_obj, p=1, n_samples=2000, seed=11)
    L = lipschitz_noiseless(rep_v.V_hat, delta=0.05)
    noiseless = verify_lipschitz(ring4_obj, L=L, p=1, n_pairs=5000, seed=12)
    ok = noiseless.violation_fraction <= 0.05
    detail = (f"noiseless: L={L:.3f}, max ratio {noiseless.max_observed_ratio:.3f}, "
              f"violations {noiseless.violations}/5000 (frac <= 0.05)")
    for q in (0.05, 0.1):
        obj = NoisyObjective(ring4_h, PauliChannel.symmetric(q))
        bound = lipschitz_noisy(2, 4, q, 1)
        rep = verify_lipschitz(obj, L=bound, p=1, n_pairs=1000, seed=13)
        in_regime = bound >= rep.max_observed_ratio
        # zero violations whenever the deterministic bound dominates; outside
        # that regime the numbers are reported with a flag
        ok &= (rep.violations == 0) == in_regime
        detail += (f"; noisy q={q}: bound {bound:.3f}, max ratio {rep.max_observed_ratio:.3f}"
                   f"{' [outside bound regime]' if not in_regime else ''}")
    report(9, ok, detail)


def test_criterion_10_theory_calculators():
    ok = True
    for eps in (0.3, 0.5, 0.8):
        for nu in (0.5, 1.5, 2.5):
            for T in (10**3, 10**4, 10**5):
                p = math.floor(effective_depth_noiseless(eps, nu, T))
                ok &= depth_defining_inequality(p, eps, nu, T)
    band_ok = all(0.10 < noise_band(n)[1] < 0.16 for n in range(50, 101))
    report(10, ok and band_ok,
           "depth inequality holds on the 3x3x3 (eps, nu, T) grid; "
           f"band endpoint in (0.10, 0.16) for n in 50..100: {band_ok}")


def test_criterion_11_determinism(tmp_path):
    args = ["run", "--graph", "ring:4", "--p", "1", "--T", "20", "--M", "1000",
            "--eta", "constant:4", "--nu", "2.5", "--length-scale", "1.0",
            "--estimator", "gaussian", "--normalize", "--seeds", "0:20", "--no-plot"]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli_main(args + ["--out", str(out_a)]) == 0
    assert cli_main(args + ["--out", str(out_b)]) == 0
    names = sorted(p.name for p in out_a.iterdir())
    identical = all((out_a / n).read_bytes() == (out_b / n).read_bytes() for n in names)
    report(11, identical and len(names) == 41,
           f"{len(names)} output files byte-identical across reruns: {identical}")
