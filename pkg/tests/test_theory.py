import math

import numpy as np
import pytest

from qaoa_bo.errors import InvalidInstanceError
from qaoa_bo.gradient import estimate_gradient_variance
from qaoa_bo.simulator import NoisyObjective, PauliChannel
from qaoa_bo.theory import (
    depth_defining_inequality,
    effective_depth_noiseless,
    effective_depth_noisy,
    lipschitz_noiseless,
    lipschitz_noisy,
    noise_band,
    verify_lipschitz,
)


class TestLipschitzNoiseless:
    def test_examples(self):
        assert lipschitz_noiseless(0.01, 0.01) == pytest.approx(1.0, abs=1e-12)
        assert lipschitz_noiseless(0.04, 0.25) == pytest.approx(0.4, abs=1e-12)

    def test_delta_scaling(self):
        assert lipschitz_noiseless(0.02, 0.05) == pytest.approx(
            math.sqrt(2) * lipschitz_noiseless(0.02, 0.10), abs=1e-12
        )

    def test_domain(self):
        with pytest.raises(InvalidInstanceError):
            lipschitz_noiseless(0.0, 0.1)
        with pytest.raises(InvalidInstanceError):
            lipschitz_noiseless(0.1, 1.0)


class TestLipschitzNoisy:
    def test_lemma2_arithmetic(self):
        # 2^3 * 4^(7/2) * 0.1^3
        assert lipschitz_noisy(2, 4, 0.1, 1) == pytest.approx(8 * 128 * 1e-3, abs=1e-12)

    def test_decreasing_in_p(self):
        vals = [lipschitz_noisy(2, 4, 0.3, p) for p in (1, 2, 3, 4)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_refined_matches_stated_ratio(self):
        # with d1 = d and |H|_inf = n d / 2 the refined form equals
        # lemma2 * sqrt(ln2/2) * q / 2
        d, n, q, p = 2, 4, 0.07, 2
        ratio = lipschitz_noisy(d, n, q, p, form="refined") / lipschitz_noisy(d, n, q, p)
        assert ratio == pytest.approx(math.sqrt(math.log(2) / 2) * q / 2, abs=1e-12)

    def test_unknown_form(self):
        with pytest.raises(InvalidInstanceError):
            lipschitz_noisy(2, 4, 0.1, 1, form="other")


class TestEffectiveDepthNoiseless:
    def test_equal_eps2_nu_simplification(self):
        eps = 1.3
        nu = eps**2
        T = 5000
        expected = eps**2 * math.sqrt(1 + math.log(T / math.log(T)))
        assert effective_depth_noiseless(eps, nu, T) == pytest.approx(expected, abs=1e-10)

    def test_increasing_in_T(self):
        vals = [effective_depth_noiseless(0.5, 2.5, T) for T in (10, 100, 10_000, 10**6)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_defining_inequality_at_reference_point(self):
        p_max = effective_depth_noiseless(0.5, 2.5, 10_000)
        p = math.floor(p_max)
        assert p >= 1
        assert depth_defining_inequality(p, 0.5, 2.5, 10_000)

    def test_domain(self):
        with pytest.raises(InvalidInstanceError):
            effective_depth_noiseless(0.5, 2.5, 2)


class TestEffectiveDepthNoisy:
    def test_grows_with_q(self):
        lo = effective_depth_noisy(64, 3, 0.01).p_max
        hi = effective_depth_noisy(64, 3, 0.12).p_max
        assert hi > lo

    def test_band_endpoint_slightly_above_tenth(self):
        for n in range(50, 101):
            _, hi = noise_band(n)
            assert 0.10 < hi < 0.16

    def test_c1_equals_c2_kills_power(self):
        r = effective_depth_noisy(32, 3, 0.05, c1=5.0, c2=5.0)
        expected = (5.0 * math.log(32) + 3 * math.log(3)) / (4 * math.log(1 / 0.05))
        assert r.p_max == pytest.approx(expected, abs=1e-12)

    def test_default_constants_echoed(self):
        r = effective_depth_noisy(64, 3, 0.05, T=4096)
        assert r.c1 == r.c2 == pytest.approx(3.5 + 2 * math.log(4096) / math.log(64), abs=1e-12)
        assert r.q_in_band == (r.q_band_lower <= 0.05 <= r.q_band_upper)
        assert r.asymptotic

    def test_domain(self):
        with pytest.raises(InvalidInstanceError):
            effective_depth_noisy(64, 3, 1.2)
        with pytest.raises(InvalidInstanceError):
            effective_depth_noisy(64, 3, 0.05, c1=1.0, c2=2.0)


class TestVerifyLipschitz:
    def test_constant_objective(self):
        rep = verify_lipschitz(lambda th: 3.0, L=0.5, p=1, n_pairs=200, seed=0)
        assert rep.max_observed_ratio == 0.0
        assert rep.violations == 0

    def test_deterministic(self, ring4_objective):
        a = verify_lipschitz(ring4_objective, L=2.0, p=1, n_pairs=200, seed=3)
        b = verify_lipschitz(ring4_objective, L=2.0, p=1, n_pairs=200, seed=3)
        assert a == b

    def test_noiseless_probabilistic_bound(self, ring4_objective):
        rep_v = estimate_gradient_variance(ring4_objective, p=1, n_samples=1000, seed=1)
        L = lipschitz_noiseless(rep_v.V_hat, delta=0.05)
        rep = verify_lipschitz(ring4_objective, L=L, p=1, n_pairs=1000, seed=2)
        assert rep.violation_fraction <= 0.05

    def test_noisy_reporting_is_consistent(self, ring4_hamiltonian):
        q = 0.05
        obj = NoisyObjective(ring4_hamiltonian, PauliChannel.symmetric(q))
        L = lipschitz_noisy(2, 4, q, 1)
        rep = verify_lipschitz(obj, L=L, p=1, n_pairs=200, seed=4)
        # violations and max ratio must tell the same story
        assert (rep.violations == 0) == (rep.max_observed_ratio <= L)

    def test_pair_floor(self, ring4_objective):
        with pytest.raises(InvalidInstanceError):
            verify_lipschitz(ring4_objective, L=1.0, p=1, n_pairs=10, seed=0)

    def test_json_shape(self, ring4_objective):
        import json

        rep = verify_lipschitz(ring4_objective, L=2.0, p=1, n_pairs=150, seed=0)
        payload = json.loads(rep.to_json())
        assert set(payload) == {
            "bound", "samples", "max_observed_ratio", "violations", "seed", "violation_fraction",
        }

    def test_max_ratio_below_dense_gradient_scan(self, ring4_hamiltonian, ring4_objective):
        # the l1-distance ratio can never beat the true global Lipschitz
        # constant max_j sup|d_j f|, approximated here by a dense scan
        from qaoa_bo.gradient import exact_gradient
        from qaoa_bo.simulator import theta_grid

        grads = np.array([
            exact_gradient(ring4_hamiltonian, th).as_array()
            for th in theta_grid(1, 40)
        ])
        global_L = np.abs(grads).max()
        rep = verify_lipschitz(ring4_objective, L=global_L, p=1, n_pairs=2000, seed=6)
        assert rep.max_observed_ratio <= global_L * 1.05  # 5% slack for scan resolution


def test_calculators_match_independent_arithmetic():
    # same formulas recomputed through a different composition of operations
    assert lipschitz_noisy(3, 6, 0.2, 2) == pytest.approx(
        math.exp(3 * math.log(3) + 3.5 * math.log(6) + 8 * math.log(0.2)), rel=1e-12
    )
    eps, nu, T = 0.7, 1.5, 12_345
    a = eps**2 - nu
    assert effective_depth_noiseless(eps, nu, T) == pytest.approx(
        0.5 * a + 0.5 * math.hypot(a, 2 * math.sqrt(nu) * eps * math.sqrt(1 + math.log(T / math.log(T)))),
        rel=1e-12,
    )
