import json

import pytest

from qicomm.cli import main

FIG1_FLAGS = ["--kappa", "0.1", "--ns", "0.004", "--nb", "100"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_point_reference_numbers(capsys):
    code, out, _ = run_cli(capsys, "point", "--preset", "figure1", "--m", "2000000")
    assert code == 0
    report = json.loads(out)
    assert report["bounds"]["opa"]["upper"] <= 7.15e-6
    assert report["bounds"]["eve_opt"]["lower"] == pytest.approx(0.285, rel=0.005)
    assert report["bounds"]["eve_opt"]["upper"] == pytest.approx(0.451, rel=0.005)
    assert report["asymptotic"]["valid"] is True


def test_point_lossless_channel_blinds_eavesdropper(capsys):
    code, out, _ = run_cli(capsys, "point", "--kappa", "1.0", "--ns", "0.1", "--nb", "2", "--m", "1000")
    assert code == 0
    report = json.loads(out)
    assert report["exponents"]["eve_opt"] == 0.0
    assert report["bounds"]["eve_opt"] == {"upper": 0.5, "lower": 0.5}


def test_point_dark_source_all_zero(capsys):
    code, out, _ = run_cli(capsys, "point", "--kappa", "0.5", "--ns", "0", "--nb", "1", "--m", "100")
    assert code == 0
    report = json.loads(out)
    assert all(value == 0.0 for value in report["exponents"].values())


def test_point_usage_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "point", "--kappa", "3.0", "--ns", "1", "--nb", "1")
    assert code == 1
    assert "kappa" in err


def test_missing_required_params(capsys):
    code, _, err = run_cli(capsys, "point")
    assert code == 1
    assert "preset" in err or "kappa" in err


def test_sweep_schema_and_monotonicity(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--preset", "figure1", "--m-min", "10000", "--m-max", "10000000", "--points", "12"
    )
    assert code == 0
    lines = out.strip().splitlines()
    header = lines[0].split(",")
    assert header == [
        "M",
        "alice_opt_upper",
        "alice_opt_lower",
        "eve_upper",
        "eve_lower",
        "homodyne_upper",
        "opa_upper",
    ]
    rows = [line.split(",") for line in lines[1:]]
    ms = [int(row[0]) for row in rows]
    assert ms == sorted(ms)
    for col in range(1, 7):
        values = [float(row[col]) for row in rows]
        assert all(0.0 < v <= 0.5 for v in values)
        assert values == sorted(values, reverse=True)
        # serialized with at least 10 significant digits
        mantissa = rows[0][col].split("e")[0]
        assert len(mantissa.replace(".", "").replace("-", "")) >= 10


def test_sweep_crossover_against_eavesdropper(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--preset", "figure1", "--m-min", "1000000", "--m-max", "10000000", "--points", "5"
    )
    assert code == 0
    for line in out.strip().splitlines()[1:]:
        cells = line.split(",")
        assert float(cells[1]) < float(cells[4])  # alice_opt_upper < eve_lower


def test_sweep_no_noise_regime(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep",
        "--preset",
        "figure2-no-noise",
        "--m-min",
        "10000",
        "--m-max",
        "100000",
        "--points",
        "3",
    )
    assert code == 0
    lines = out.strip().splitlines()
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[6] == ""  # amplifier column empty without noise
        assert float(cells[1]) > float(cells[3])  # alice upper above eve upper


def test_unknown_preset(capsys):
    code, _, err = run_cli(capsys, "sweep", "--preset", "figure9")
    assert code == 1
    assert "figure1" in err


def test_high_brightness_preset(capsys):
    code, out, _ = run_cli(capsys, "point", "--preset", "figure2-high-brightness", "--m", "1000")
    assert code == 0
    report = json.loads(out)
    assert report["params"]["ns"] == 10.0
    ratio = report["exponents"]["alice_opt"] / report["exponents"]["eve_opt"]
    assert 1.0 / 1.5 < ratio < 1.5
    assert report["asymptotic"]["valid"] is False


def test_mc_report_and_determinism(capsys):
    args = ["mc", "--preset", "figure1", "--m", "200000", "--receiver", "homodyne",
            "--trials", "1000", "--seed", "21"]
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    code, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    report = json.loads(out1)
    assert report["errors"] == report["trials"] * report["p_hat"]
    assert report["ci95"][0] <= report["p_hat"] <= report["ci95"][1]
    assert report["dominated"] is True


def test_mc_requires_receiver(capsys):
    code, _, err = run_cli(capsys, "mc", "--preset", "figure1")
    assert code == 1
    assert "receiver" in err


def test_link_budget_reference(capsys):
    code, out, _ = run_cli(
        capsys,
        "link-budget",
        "--bandwidth-hz", "1e12",
        "--bit-duration-s", "2e-6",
        "--fiber-km", "50",
        "--loss-db-per-km", "0.2",
        "--ns", "0.004",
        "--nb", "100",
    )
    assert code == 0
    report = json.loads(out)
    assert report["link"]["kappa"] == pytest.approx(0.1, rel=1e-12)
    assert report["link"]["mode_pairs"] == 2_000_000
    assert report["link"]["bit_rate_hz"] == pytest.approx(5e5)
    assert report["bounds"]["opa"]["upper"] <= 7.15e-6


def test_link_budget_zero_length_and_duration_scaling(capsys):
    code, out, _ = run_cli(
        capsys, "link-budget", "--fiber-km", "0", "--ns", "0.004", "--nb", "100"
    )
    assert code == 0
    assert json.loads(out)["link"]["kappa"] == 1.0
    code, out, _ = run_cli(
        capsys, "link-budget", "--bit-duration-s", "4e-6", "--ns", "0.004", "--nb", "100"
    )
    doubled = json.loads(out)
    assert doubled["link"]["mode_pairs"] == 4_000_000
    assert doubled["link"]["bit_rate_hz"] == pytest.approx(2.5e5)


def test_oracle_check_single_point(capsys):
    code, out, _ = run_cli(
        capsys,
        "oracle-check",
        "--ns-grid", "0.1",
        "--kappa-grid", "0.6",
        "--nb-grid", "0.2",
        "--s-grid", "0.5",
        "--cutoff", "16",
    )
    assert code == 0
    assert "PASS" in out
    assert "failures=0" in out


def test_oracle_check_reports_undersized_cutoff(capsys):
    code, out, _ = run_cli(
        capsys,
        "oracle-check",
        "--ns-grid", "0.3",
        "--kappa-grid", "0.6",
        "--nb-grid", "3.0",
        "--s-grid", "0.5",
        "--cutoff", "4",
    )
    assert code == 2
    assert "ERROR" in out


def test_config_file_and_flag_override(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"kappa": 0.1, "ns": 0.004, "nb": 100.0, "m": 1000}))
    code, out_config, _ = run_cli(capsys, "point", "--config", str(config))
    assert code == 0
    assert json.loads(out_config)["params"]["m"] == 1000
    code, out_flag, _ = run_cli(capsys, "point", "--config", str(config), "--m", "5000")
    assert code == 0
    report = json.loads(out_flag)
    assert report["params"]["m"] == 5000
    assert report["params"]["kappa"] == 0.1


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "point", "--preset", "figure1", "--m", "1000", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["params"]["m"] == 1000
