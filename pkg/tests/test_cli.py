# /tests/test_cli.py

import io
import math

import pandas as pd
import pytest

from app.main import main
from app.models.validation_model import CheckResult, ValidationReport, Verdict
from app.services import config_service, report_service

# --- Fixtures ---

@pytest.fixture
def write_config(tmp_path):
    """Factory writing a configuration file into the test's temporary directory."""
    def _write(text, name="run.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def quick_optimizer(write_config):
    return write_config("restarts = 2\nmax_iters = 60\nfeasibility_samples = 20\n")


def read_stdout(capsys):
    return pd.read_csv(io.StringIO(capsys.readouterr().out))

# --- eval ---

def test_eval_reference_scenario(capsys):
    """
    GIVEN the baseline configuration (silent policy)
    WHEN `eval` runs
    THEN one lower-bound row reports zero throughput and eta = P0(20, 0).
    """
    assert main(["eval"]) == 0
    frame = read_stdout(capsys)
    assert list(frame.columns) == report_service.EVAL_COLUMNS
    assert len(frame) == 1
    assert frame.loc[0, "mode"] == "lower"
    assert frame.loc[0, "mu_s"] == 0.0
    assert frame.loc[0, "eta"] == pytest.approx(0.576162, abs=1e-6)
    assert bool(frame.loc[0, "feasible"])
    print("\n✅ SUCCESS: test_eval_reference_scenario passed.")


def test_eval_both_bounds_with_policy_file(capsys, write_config):
    path = write_config("alpha_t = 1\nPs1 = 32\n")
    assert main(["eval", "--config", path, "--mode", "both"]) == 0
    frame = read_stdout(capsys)
    assert frame["mode"].tolist() == ["lower", "upper"]
    assert frame.loc[0, "Pavail"] == pytest.approx(0.625)
    assert frame.loc[0, "mu_s"] <= frame.loc[1, "mu_s"]
    print("\n✅ SUCCESS: test_eval_both_bounds_with_policy_file passed.")


def test_eval_unstable_queue_row(capsys, write_config):
    path = write_config("lambda_p = 0.6\n")
    assert main(["eval", "--config", path]) == 0
    frame = read_stdout(capsys)
    assert math.isinf(frame.loc[0, "D_p"])
    assert not bool(frame.loc[0, "feasible"])
    assert frame.loc[0, "mu_s"] == 0.0
    print("\n✅ SUCCESS: test_eval_unstable_queue_row passed.")

# --- Configuration errors ---

def test_unknown_key_exits_with_config_error(capsys, write_config):
    path = write_config("lambda_p = 0.1\nlamda_e = 3\n")
    assert main(["eval", "--config", path]) == 1
    err = capsys.readouterr().err
    assert "lamda_e" in err
    assert "line 2" in err
    print("\n✅ SUCCESS: test_unknown_key_exits_with_config_error passed.")


def test_invalid_probability_exits_with_config_error(capsys, write_config):
    path = write_config("P_MD = 1.5\n")
    assert main(["validate", "--config", path]) == 1
    assert "P_MD" in capsys.readouterr().err
    print("\n✅ SUCCESS: test_invalid_probability_exits_with_config_error passed.")


def test_usage_errors_exit_with_two():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["eval", "--mode", "sideways"])
    assert excinfo.value.code == 2
    print("\n✅ SUCCESS: test_usage_errors_exit_with_two passed.")

# --- dump-config ---

def test_dump_config_round_trips(tmp_path, write_config):
    source = write_config("lambda_p = 0.3\nsweep_axis = q\nsweep_values = 0.2,0.4\n")
    out = tmp_path / "dumped.cfg"
    assert main(["dump-config", "--config", source, "--seed", "7", "--pin-powers", "--out", str(out)]) == 0
    dumped = config_service.parse_config(out)
    assert dumped.params.lambda_p == 0.3
    assert dumped.optim.seed == dumped.sim.seed == 7
    assert dumped.optim.pin_powers
    assert dumped.sweep_values == [0.2, 0.4]
    assert config_service.dump_config(dumped) == out.read_text(encoding="utf-8")
    print("\n✅ SUCCESS: test_dump_config_round_trips passed.")

# --- optimize, sweep, simulate ---

def test_optimize_writes_one_row_per_bound(capsys, quick_optimizer):
    assert main(["optimize", "--config", quick_optimizer, "--mode", "both", "--restarts", "1"]) == 0
    frame = read_stdout(capsys)
    assert list(frame.columns) == report_service.OPTIM_COLUMNS
    assert frame["mode"].tolist() == ["lower", "upper"]
    assert frame["feasible"].all()
    print("\n✅ SUCCESS: test_optimize_writes_one_row_per_bound passed.")


def test_sweep_requires_an_axis(capsys, quick_optimizer):
    assert main(["sweep", "--config", quick_optimizer]) == 1
    assert "sweep_axis" in capsys.readouterr().err
    print("\n✅ SUCCESS: test_sweep_requires_an_axis passed.")


def test_sweep_rejects_unordered_values(capsys, quick_optimizer):
    assert main(["sweep", "--config", quick_optimizer, "--axis", "q", "--values", "0.5,0.2"]) == 1
    print("\n✅ SUCCESS: test_sweep_rejects_unordered_values passed.")


def test_sweep_rows(capsys, quick_optimizer):
    assert main(["sweep", "--config", quick_optimizer, "--axis", "q", "--values", "0.2,0.8", "--pin-powers"]) == 0
    frame = read_stdout(capsys)
    assert list(frame.columns) == report_service.SWEEP_COLUMNS
    assert frame["value"].tolist() == [0.2, 0.2, 0.8, 0.8]
    assert frame["pinned"].tolist() == [False, True, False, True]
    assert (frame["axis"] == "q").all()
    print("\n✅ SUCCESS: test_sweep_rows passed.")


def test_simulate_lowers_warmup_for_short_runs(capsys):
    assert main(["simulate", "--slots", "5000", "--seed", "3"]) == 0
    frame = read_stdout(capsys)
    assert list(frame.columns) == report_service.SIM_COLUMNS
    assert frame.loc[0, "slots_measured"] == 4500
    assert frame.loc[0, "mu_s_hat"] == 0.0
    print("\n✅ SUCCESS: test_simulate_lowers_warmup_for_short_runs passed.")

# --- validate ---

@pytest.mark.parametrize("verdict, code", [(Verdict.PASS, 0), (Verdict.WARN, 0), (Verdict.FAIL, 2)])
def test_validate_exit_status_follows_verdicts(mocker, capsys, verdict, code):
    report = ValidationReport(checks=[
        CheckResult(name="stub", estimate=1.0, reference=1.0, tolerance=0.0, verdict=verdict),
    ])
    run = mocker.patch("app.commands.validate_command.validation_service.run_validate", return_value=report)
    assert main(["validate", "--slots", "2000"]) == code
    assert run.call_args.args[0].sim.slots == 2000
    frame = read_stdout(capsys)
    assert frame["verdict"].tolist() == [verdict.value]
    print(f"\n✅ SUCCESS: validate exits {code} on {verdict.value}.")
