import json
import os
from fractions import Fraction

import numpy as np
import pytest

from dunkl_intertwining.main import EXIT_DOMAIN, EXIT_FAILED, EXIT_NUMERIC, EXIT_OK, EXIT_PARSE, main
from dunkl_intertwining.output import read_table, sha256_file, table_to_ensemble_positions
from dunkl_intertwining.simulation.ensemble import ensemble_stats
from dunkl_intertwining.simulation.simulation_typing import Ensemble, SimConfig


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_jack_prints_exact_row(capsys):
    code, out = run(capsys, "jack", "--tau", "2", "--alpha", "3/2", "--n", "2")
    assert code == EXIT_OK
    assert "m(1,1)\t4/5" in out
    assert "m(2)\t1" in out


def test_jack_schur_row_and_points(capsys):
    code, out = run(capsys, "jack", "--tau", "2", "--alpha", "1", "--n", "3", "--x", "1,1,1", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["monomial_coefficients"] == {"(2)": "1", "(1,1)": "1"}
    assert payload["values"][0]["value"] == pytest.approx(6.0)


def test_jack_c_normalized_rows_sum_to_power_of_e1(capsys):
    totals: dict[str, Fraction] = {}
    for tau in ("2", "1,1"):
        code, out = run(capsys, "jack", "--tau", tau, "--alpha", "2", "--n", "2", "--json")
        assert code == EXIT_OK
        for mu, coeff in json.loads(out)["c_normalized_coefficients"].items():
            totals[mu] = totals.get(mu, Fraction(0)) + Fraction(coeff)
    assert totals == {"(2)": 1, "(1,1)": 2}


def test_jack_domain_error(capsys):
    code, _ = run(capsys, "jack", "--tau", "2,1", "--alpha", "1/1", "--n", "1")
    assert code == EXIT_DOMAIN


@pytest.mark.parametrize(
    "argv",
    [
        ["jack", "--tau", "1,2", "--n", "2"],
        ["jack", "--tau", "2", "--alpha", "x/y", "--n", "2"],
        ["intertwine", "--lambda", "2", "--n", "3"],
        ["tpd", "--x", "0.1", "--y", "0.2"],
        ["verify", "nonsense"],
    ],
)
def test_parse_errors_exit_two(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == EXIT_PARSE


def test_intertwine_example(capsys):
    code, out = run(capsys, "intertwine", "--lambda", "2", "--k", "1", "--n", "3")
    assert code == EXIT_OK
    assert "m(2)\t1/2" in out
    assert "m(1,1)\t1/2" in out


def test_intertwine_identity_and_check(capsys):
    code, out = run(capsys, "intertwine", "--lambda", "2,1", "--k", "0", "--n", "3", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["monomial_coefficients"] == {"(2,1)": "1"}
    code, out = run(capsys, "intertwine", "--lambda", "2,1", "--k", "1/2", "--n", "3", "--check", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["relations_hold"] is True


def test_intertwine_limit(capsys):
    code, out = run(capsys, "intertwine", "--limit", "--lambda", "1,1", "--n", "3", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["coefficient"] == "1/3"
    assert payload["monomial_coefficients"] == {"(2)": "1/3", "(1,1)": "2/3"}


def test_intertwine_negative_k(capsys):
    code, _ = run(capsys, "intertwine", "--lambda", "2", "--k", "-1", "--n", "2")
    assert code == EXIT_DOMAIN


def test_tpd_methods_agree_at_beta_two(capsys):
    code, out = run(capsys, "tpd", "--x=-0.5,0.5", "--y=-0.2,0.7", "--beta", "2", "--method", "both", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["relative_difference"] < 1e-8
    assert payload["degree"] >= 2


def test_tpd_dunkl_method_matches_series_on_ordered_points(capsys):
    argv = ["tpd", "--x=-0.5,0.5", "--y=-0.2,0.7", "--k", "1", "--json"]
    code, out = run(capsys, *argv)
    assert code == EXIT_OK
    series = json.loads(out)
    code, out = run(capsys, *argv, "--method", "dunkl")
    assert code == EXIT_OK
    dunkl = json.loads(out)
    assert dunkl["value"] == pytest.approx(series["value"], rel=1e-10)
    assert dunkl["c_k"] == pytest.approx(2 * np.pi)


def test_tpd_one_particle(capsys):
    code, out = run(capsys, "tpd", "--x", "0.0", "--y", "1.0", "--t", "1", "--k", "0.5", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["value"] == pytest.approx(np.exp(-0.5) / np.sqrt(2 * np.pi))


def test_tpd_on_the_diagonal(capsys):
    code, out = run(capsys, "tpd", "--x=-0.5,0.5", "--y=-0.5,0.5", "--beta", "1", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["value"] > 0


def test_tpd_unordered_and_cap(capsys):
    code, _ = run(capsys, "tpd", "--x", "0.5,0.1", "--y", "0.1,0.2", "--beta", "1")
    assert code == EXIT_DOMAIN
    code, _ = run(capsys, "tpd", "--x=-3,3", "--y=-3,3", "--beta", "2", "--n-max", "3")
    assert code == EXIT_NUMERIC
    code, _ = run(capsys, "tpd", "--x", "0.1,0.5", "--y", "0.1,0.2", "--beta", "1", "--method", "grabiner")
    assert code == EXIT_DOMAIN


def test_verify_quadratic(capsys, tmp_path):
    out_dir = str(tmp_path / "verify")
    code, out = run(capsys, "verify", "quadratic", "--out", out_dir)
    assert code == EXIT_OK
    assert "quadratic: PASS" in out
    assert "FAIL" not in out
    report = json.loads(open(os.path.join(out_dir, "verify.json"), encoding="utf-8").read())
    assert report["passed"] is True
    assert len(report["checks"]) == 5 * 4 * 2
    manifest = json.loads(open(os.path.join(out_dir, "manifest.json"), encoding="utf-8").read())
    assert manifest["outputs"]["verify.json"] == sha256_file(os.path.join(out_dir, "verify.json"))


def test_verify_failure_exit_code(capsys, monkeypatch):
    from dunkl_intertwining import verify

    def failing(options):
        report = verify.SuiteReport("quadratic")
        report.at_most("always", 1.0, 0.0)
        return report

    monkeypatch.setitem(verify.SUITES, "quadratic", failing)
    code, out = run(capsys, "verify", "quadratic")
    assert code == EXIT_FAILED
    assert "FAIL" in out


def test_simulate_writes_reproducible_outputs(capsys, tmp_path):
    argv = ["simulate", "--n", "3", "--k", "1", "--dt", "0.01", "--t", "0.2", "--traj", "8", "--seed", "3", "--dunkl"]
    first, second = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(argv + ["--out", first]) == EXIT_OK
    assert main(argv + ["--out", second]) == EXIT_OK
    capsys.readouterr()

    for name in ("trajectories.csv", "stats.csv", "jumps.csv", "summary.json"):
        assert sha256_file(os.path.join(first, name)) == sha256_file(os.path.join(second, name))
    manifest = json.loads(open(os.path.join(first, "manifest.json"), encoding="utf-8").read())
    assert manifest["config"]["seed"] == 3
    assert manifest["config"]["n_grid"] == 11
    assert set(manifest["outputs"]) == {"trajectories.csv", "stats.csv", "jumps.csv", "summary.json"}

    config = SimConfig.from_dict(manifest["config"])
    _, rows = read_table(os.path.join(first, "trajectories.csv"))
    positions = table_to_ensemble_positions(rows, config.n_grid)
    stats = ensemble_stats(Ensemble(config, config.times, positions, ()))
    _, stats_rows = read_table(os.path.join(first, "stats.csv"))
    np.testing.assert_array_equal(stats_rows[:, 1:4], stats.mean)
    np.testing.assert_array_equal(stats_rows[:, 4:7], stats.variance)


def test_simulate_from_config_file(capsys, tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"n_vars": 2, "k": 2.0, "dt": 0.05, "t_end": 0.5, "n_traj": 4, "n_grid": 3}))
    code, out = run(capsys, "simulate", "--config", str(path), "--seed", "9")
    assert code == EXIT_OK
    assert out.startswith("4 trajectories, N=2, beta=4")


def test_simulate_config_errors(capsys, tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"n_vars": 2, "k": -2.0, "dt": 0.05, "t_end": 0.5, "n_traj": 4, "n_grid": 3}))
    assert main(["simulate", "--config", str(path)]) == EXIT_DOMAIN
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == EXIT_PARSE
    path.write_text("{not json")
    assert main(["simulate", "--config", str(path)]) == EXIT_PARSE


def test_freeze_needs_large_k(capsys):
    assert main(["freeze", "--k", "10", "--traj", "2"]) == EXIT_DOMAIN


@pytest.mark.slow
def test_freeze_table(capsys, tmp_path):
    code, out = run(capsys, "freeze", "--n", "3", "--k", "10000", "--t", "1", "--traj", "10", "--seed", "1", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out.startswith("sqrt(2t) z_3:")
    header, rows = read_table(str(tmp_path / "freeze.csv"))
    assert header == ["k", "particle", "prediction", "mean_abs_deviation"]
    assert rows.shape == (6, 4)
