import json
import math

import numpy as np
import pytest

from qaoa_bo.cli import (
    main,
    parse_eta_spec,
    parse_graph_spec,
    parse_noise_spec,
    parse_seeds,
    read_versioned_csv,
)
from qaoa_bo.errors import ConfigError


def run_cli(*argv):
    return main(list(argv))


class TestParsers:
    def test_seeds(self):
        assert parse_seeds("0:4") == [0, 1, 2, 3]
        assert parse_seeds("3,5,8") == [3, 5, 8]
        assert parse_seeds("7") == [7]
        with pytest.raises(ConfigError):
            parse_seeds("")

    def test_graph_specs(self):
        assert parse_graph_spec("ring:5").num_edges == 5
        g = parse_graph_spec("regular:6,3,2")
        assert g.degree_sequence() == [3] * 6
        with pytest.raises(ConfigError):
            parse_graph_spec("mesh:4")

    def test_noise_specs(self):
        assert parse_noise_spec("none") is None
        ch = parse_noise_spec("pauli:0.05")
        assert ch.strength == 0.05
        ch = parse_noise_spec("pauli:0.01,0.02,0.03")
        assert ch.q_x == 0.01 and ch.q_z == 0.03
        with pytest.raises(ConfigError):
            parse_noise_spec("pauli:0.1,0.2")

    def test_eta_specs(self):
        assert parse_eta_spec("constant:2.5") == ("constant", 2.5)
        assert parse_eta_spec("sqrt_log") == ("sqrt_log", 1.0)
        assert parse_eta_spec("theorem1") == ("theorem1", 0.0)
        with pytest.raises(ConfigError):
            parse_eta_spec("linear")


class TestOracleCommand:
    def test_ring4_two_resolutions_agree(self, tmp_path, capsys):
        values = {}
        for res in (64, 256):
            assert run_cli("oracle", "--graph", "ring:4", "--p", "1",
                           "--oracle-res", str(res)) == 0
            values[res] = json.loads(capsys.readouterr().out)["f_star"]
        assert values[64] == pytest.approx(3.0, abs=0.01)
        assert values[256] == pytest.approx(3.0, abs=0.01)
        assert abs(values[64] - values[256]) < 0.01

    def test_depolarized_oracle_flat_at_two(self, capsys):
        assert run_cli("oracle", "--graph", "ring:4", "--p", "1",
                       "--noise", "pauli:0.25", "--oracle-res", "8") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["f_star"] == pytest.approx(2.0, abs=1e-10)

    def test_p_zero_rejected(self, capsys):
        assert run_cli("oracle", "--graph", "ring:4", "--p", "0") == 1

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "oracle.json"
        assert run_cli("oracle", "--graph", "ring:4", "--p", "1",
                       "--oracle-res", "16", "--out-file", str(target)) == 0
        assert json.loads(target.read_text())["resolution"] == 16


class TestRunCommand:
    def test_outputs_and_summary(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert run_cli("run", "--graph", "ring:4", "--p", "1", "--T", "4",
                       "--M", "500", "--seeds", "0:2", "--out", str(out),
                       "--no-plot") == 0
        for seed in (0, 1):
            trace = json.loads((out / f"trace_seed{seed}.json").read_text())
            assert trace["schema"] == 1 and trace["seed"] == seed
            assert trace["config"]["M"] == 500
            header, rows = read_versioned_csv(out / f"trace_seed{seed}.csv")
            assert header[0] == "phase"
            assert len(rows) == 3 + 4  # T0 default 2p+1 plus T steps
        summary = json.loads((out / "summary.json").read_text())
        assert summary["f_star"] == pytest.approx(3.0, abs=0.01)
        assert len(summary["g_T"]) == 2
        assert len(summary["r_quantiles"]["p50"]) == 4

    def test_byte_identical_reruns(self, tmp_path):
        args = ["run", "--graph", "ring:4", "--p", "1", "--T", "3", "--M", "100",
                "--seeds", "0:2", "--no-plot"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*args, "--out", str(out_a)) == 0
        assert run_cli(*args, "--out", str(out_b)) == 0
        for name in ("trace_seed0.json", "trace_seed0.csv", "trace_seed1.json", "summary.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_plot_files_rendered(self, tmp_path):
        out = tmp_path / "run"
        assert run_cli("run", "--graph", "ring:4", "--p", "1", "--T", "3",
                       "--seeds", "0:2", "--out", str(out), "--plot") == 0
        assert (out / "convergence.png").stat().st_size > 0
        assert (out / "regret.png").stat().st_size > 0

    def test_invalid_delta_exits_one(self, tmp_path, capsys):
        code = run_cli("run", "--graph", "ring:4", "--p", "1", "--T", "2",
                       "--delta", "1.5", "--out", str(tmp_path / "x"))
        assert code == 1
        assert "delta" in capsys.readouterr().err

    def test_env_var_sets_outdir_and_flag_wins(self, tmp_path, monkeypatch):
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("QAOA_BO_OUT", str(env_dir))
        assert run_cli("run", "--graph", "ring:4", "--p", "1", "--T", "2",
                       "--seeds", "0:1", "--no-plot") == 0
        assert (env_dir / "summary.json").exists()
        flag_dir = tmp_path / "from_flag"
        assert run_cli("run", "--graph", "ring:4", "--p", "1", "--T", "2",
                       "--seeds", "0:1", "--no-plot", "--out", str(flag_dir)) == 0
        assert (flag_dir / "summary.json").exists()

    def test_noisy_run_end_to_end(self, tmp_path):
        out = tmp_path / "noisy"
        assert run_cli("run", "--graph", "ring:4", "--p", "1", "--T", "3",
                       "--noise", "pauli:0.05", "--M", "200", "--seeds", "0:1",
                       "--oracle-res", "16", "--out", str(out), "--no-plot") == 0
        summary = json.loads((out / "summary.json").read_text())
        assert 2.0 < summary["f_star"] < 3.0  # channel contracts the peak toward 2

    def test_config_file_with_flag_override(self, tmp_path):
        ini = tmp_path / "exp.ini"
        ini.write_text(
            "[problem]\ngraph = ring:4\np = 1\n\n"
            "[bo]\nT = 2\n\n[output]\nseeds = 0:1\nplot = false\n"
            f"dir = {tmp_path / 'from_file'}\n"
        )
        assert run_cli("run", "--config", str(ini)) == 0
        assert (tmp_path / "from_file" / "summary.json").exists()
        # flag overrides the file's T
        assert run_cli("run", "--config", str(ini), "--T", "3",
                       "--out", str(tmp_path / "o2")) == 0
        trace = json.loads((tmp_path / "o2" / "trace_seed0.json").read_text())
        assert trace["config"]["T"] == 3

    def test_unknown_config_key_rejected(self, tmp_path):
        ini = tmp_path / "exp.ini"
        ini.write_text("[bo]\nTT = 2\n")
        assert run_cli("run", "--config", str(ini)) == 1


class TestSweepCommand:
    def test_noise_sweep(self, tmp_path, capsys):
        out = tmp_path / "sw"
        assert run_cli("sweep", "--graph", "ring:4", "--p", "1", "--T", "2",
                       "--seeds", "0:2", "--sweep", "q=0,0.02,0.05,0.1",
                       "--oracle-res", "24", "--out", str(out), "--no-plot") == 0
        header, rows = read_versioned_csv(out / "sweep_summary.csv")
        assert header == ["run", "q", "seed", "f_star", "best_f_final", "r_final", "g_T"]
        assert len(rows) == 8  # 4 noise levels x 2 seeds
        q0 = [r for r in rows if float(r[1]) == 0.0]
        for row in q0:
            assert float(row[3]) == pytest.approx(3.0, abs=0.01)
        _, long_rows = read_versioned_csv(out / "sweep_long.csv")
        assert len(long_rows) == 8 * (3 + 2)

    def test_depth_sweep_oracle_nondecreasing(self, tmp_path):
        out = tmp_path / "sw"
        assert run_cli("sweep", "--graph", "ring:4", "--T", "1", "--seeds", "0:1",
                       "--grid", "8", "--oracle-res", "24",
                       "--sweep", "p=1,2", "--out", str(out), "--no-plot") == 0
        _, rows = read_versioned_csv(out / "sweep_summary.csv")
        f_by_p = {int(r[1]): float(r[3]) for r in rows}
        assert f_by_p[2] >= f_by_p[1] - 0.02  # deeper circuits subsume shallower ones

    def test_empty_range_exits_one(self, tmp_path):
        assert run_cli("sweep", "--graph", "ring:4", "--sweep", "q=",
                       "--out", str(tmp_path / "x")) == 1

    def test_budget_exceeded_exits_two(self, tmp_path):
        assert run_cli("sweep", "--graph", "ring:4", "--T", "1",
                       "--seeds", "0:5001", "--sweep", "q=0,0.01",
                       "--out", str(tmp_path / "x")) == 2


class TestLandscapeCommand:
    def test_ring4_grid(self, tmp_path, capsys):
        out = tmp_path / "land"
        assert run_cli("landscape", "--graph", "ring:4", "--p", "1", "--grid", "64",
                       "--out", str(out), "--no-plot") == 0
        header, rows = read_versioned_csv(out / "landscape.csv")
        assert header == ["theta_1", "theta_2", "f"]
        assert len(rows) == 4096
        assert float(rows[0][2]) == 2.0  # theta = (0, 0)
        assert max(float(r[2]) for r in rows) == pytest.approx(3.0, abs=0.01)

    def test_noisy_column_contracts(self, tmp_path):
        out = tmp_path / "land"
        assert run_cli("landscape", "--graph", "ring:4", "--p", "1", "--grid", "12",
                       "--noise", "pauli:0.05", "--out", str(out), "--no-plot") == 0
        header, rows = read_versioned_csv(out / "landscape.csv")
        assert header[-1] == "f_noisy"
        f = np.array([float(r[2]) for r in rows])
        fn = np.array([float(r[3]) for r in rows])
        assert np.all(np.abs(fn - 2.0) <= np.abs(f - 2.0) + 1e-12)
        assert fn.min() > f.min() - 1e-12 and fn.max() < f.max() + 1e-12

    def test_figure_rendered_alongside_csv(self, tmp_path):
        out = tmp_path / "land"
        assert run_cli("landscape", "--graph", "ring:4", "--p", "1", "--grid", "12",
                       "--out", str(out), "--plot") == 0
        assert (out / "landscape.png").stat().st_size > 0

    def test_p2_grid_shape(self, tmp_path):
        out = tmp_path / "land"
        assert run_cli("landscape", "--graph", "ring:4", "--p", "2", "--grid", "4",
                       "--out", str(out), "--no-plot") == 0
        header, rows = read_versioned_csv(out / "landscape.csv")
        assert header == ["theta_1", "theta_2", "theta_3", "theta_4", "f"]
        assert len(rows) == 256

    def test_p3_rejected(self, tmp_path):
        assert run_cli("landscape", "--graph", "ring:4", "--p", "3",
                       "--out", str(tmp_path / "x")) == 1


class TestTheoryCommand:
    def test_depth_noiseless_value(self, capsys):
        assert run_cli("theory", "depth-noiseless", "--epsilon", "0.5",
                       "--nu", "2.5", "--T", "10000") == 0
        payload = json.loads(capsys.readouterr().out)
        e2 = 0.25
        disc = (e2 - 2.5) ** 2 + 4 * 2.5 * e2 * (1 + math.log(10000 / math.log(10000)))
        assert payload["p_max"] == pytest.approx(0.5 * ((e2 - 2.5) + math.sqrt(disc)), abs=1e-10)

    def test_lipschitz_noisy_value(self, capsys):
        assert run_cli("theory", "lipschitz-noisy", "--d", "2", "--n", "4",
                       "--q", "0.1", "--p", "1") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["L"] == pytest.approx(8 * 4**3.5 * 1e-3, rel=1e-12)

    def test_eta_and_tau(self, capsys):
        assert run_cli("theory", "eta1", "--t", "1", "--delta", "0.1",
                       "--p", "1", "--v-hat", "0.01") == 0
        eta1 = json.loads(capsys.readouterr().out)
        assert not eta1["clamped"]
        assert run_cli("theory", "tau", "--t", "1", "--p", "1", "--v-hat", "0.01",
                       "--delta", "0.01", "--variant", "lemma5") == 0
        tau = json.loads(capsys.readouterr().out)
        assert tau["tau"] == pytest.approx(4 * math.pi, abs=1e-10)

    def test_unknown_calculator_exits_one(self):
        assert run_cli("theory", "frobnicate") == 1

    def test_lipschitz_verify_runs(self, capsys):
        assert run_cli("theory", "lipschitz-verify", "--graph", "ring:4", "--p", "1",
                       "--bound", "3.0", "--pairs", "150", "--seed", "1") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["samples"] == 150


def test_versioned_csv_rejects_unknown_schema(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# schema: 99\na,b\n1,2\n")
    with pytest.raises(ConfigError):
        read_versioned_csv(bad)
    worse = tmp_path / "worse.csv"
    worse.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        read_versioned_csv(worse)
