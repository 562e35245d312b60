import pytest

from algograph.backend import ChatExchange, estimate_tokens
from algograph.config import parse_config
from algograph.errors import ConfigFileError, PartialFailureError
from algograph.instances import load_instance
from algograph.sweep import (
    PREDICT_COLUMNS,
    SweepResult,
    predict,
    rows_to_csv,
    run_sweep,
    summarize,
    summary_columns,
)

COUNTING_CFG = """
[sweep]
task = counting
mode = vary-m
n = 200
m_values = 10 20 40 50 67 100 200
trials = 10
base_seed = 42

[backend]
kind = mock
profile = exact

[cost_model]
kind = compute-bound-linear
l_sys = 40
p = 4
"""


def test_counting_sweep_shape_and_exactness():
    config = parse_config(COUNTING_CFG)
    result = run_sweep(config)
    assert len(result.rows) == 70
    assert all(row["err_abs"] == 0.0 for row in result.rows)
    assert all(row["failed"] == 0 for row in result.rows)
    csv_text = rows_to_csv(result.rows, result.columns())
    assert csv_text.count("\n") == 71  # header + 70 rows


def test_sweep_rerun_is_byte_identical():
    config = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 2"))
    first = run_sweep(config)
    second = run_sweep(config)
    assert rows_to_csv(first.rows, first.columns()) == rows_to_csv(second.rows, second.columns())


def test_sweep_workers_do_not_change_rows():
    base = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 3"))
    import dataclasses
    threaded = dataclasses.replace(base, workers=4)
    assert run_sweep(base).rows == run_sweep(threaded).rows


def test_sweep_m_above_n_is_clamped_with_warning():
    config = parse_config(COUNTING_CFG.replace(
        "m_values = 10 20 40 50 67 100 200", "m_values = 300").replace("trials = 10", "trials = 1"))
    result = run_sweep(config)
    row = result.rows[0]
    assert row["call_count"] == 1
    assert "exceeds instance size" in row["warning"]


def test_sweep_vary_n_mode():
    config = parse_config("""
[sweep]
task = counting
mode = vary-n
n_values = 50 100
trials = 2
base_seed = 1
""")
    result = run_sweep(config)
    assert [(r["n"], r["m"]) for r in result.rows] == [(50, 50), (50, 50), (100, 100), (100, 100)]
    assert all(r["call_count"] == 1 for r in result.rows)


def test_summarize_mean_std_conventions():
    config = parse_config(COUNTING_CFG)
    result = run_sweep(config)
    summary = summarize(result)
    assert len(summary) == 7
    for entry in summary:
        assert entry["trials"] == 10
        assert entry["failures"] == 0
        assert entry["err_abs_mean"] == 0.0
        assert entry["err_abs_std"] == 0.0
    assert summary_columns(result)[:6] == ["task", "mode", "n", "m", "trials", "failures"]


def test_summarize_two_values():
    config = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 2"))
    result = run_sweep(config)
    # splice two known values into a metric column
    for row, value in zip(result.rows, [1.0, 3.0]):
        row["err_abs"] = value
    entry = summarize(result)[0]
    assert entry["err_abs_mean"] == 2.0
    assert entry["err_abs_std"] == 1.0  # population convention


def test_single_trial_std_is_zero():
    config = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 1"))
    summary = summarize(run_sweep(config))
    assert all(entry["err_abs_std"] == 0.0 for entry in summary)


class ExplodingBackend:
    def __init__(self, fail_for):
        self.fail_for = fail_for
        self.calls = 0

    def chat(self, prompt, *, seed):
        from algograph.errors import BackendError

        self.calls += 1
        if self.calls in self.fail_for:
            raise BackendError("boom")
        return ChatExchange(
            prompt_text=prompt,
            response_text="0",
            prompt_tokens=estimate_tokens(prompt),
            completion_tokens=1,
            latency_ms=1.0,
        )


def test_failed_trials_are_flagged_and_sweep_continues(monkeypatch):
    config = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 3").replace(
        "m_values = 10 20 40 50 67 100 200", "m_values = 200"))
    backend = ExplodingBackend(fail_for={2})
    monkeypatch.setattr(type(config), "make_backend", lambda self: backend)
    result = run_sweep(config)
    failed = [r for r in result.rows if r["failed"]]
    assert len(failed) == 1
    assert failed[0]["err_abs"] == ""
    assert failed[0]["wall_ms"] == ""
    summary = summarize(result)[0]
    assert summary["failures"] == 1
    assert summary["trials"] == 3


def test_majority_failure_aborts(monkeypatch):
    config = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 4").replace(
        "m_values = 10 20 40 50 67 100 200", "m_values = 200"))
    backend = ExplodingBackend(fail_for={1, 2, 3})
    monkeypatch.setattr(type(config), "make_backend", lambda self: backend)
    with pytest.raises(PartialFailureError):
        run_sweep(config)


def test_dump_instances(tmp_path):
    config = parse_config(COUNTING_CFG.replace("trials = 10", "trials = 1").replace(
        "m_values = 10 20 40 50 67 100 200", "m_values = 100"))
    import dataclasses
    config = dataclasses.replace(config, dump_instances=str(tmp_path / "dumps"))
    run_sweep(config)
    files = sorted((tmp_path / "dumps").glob("*.txt"))
    assert len(files) == 1
    instance = load_instance(files[0])
    assert instance.task == "counting" and instance.n == 200


def test_predict_table_rows():
    config = parse_config("""
[sweep]
task = sorting
mode = vary-m
n = 200
m_values = 10 20 40 50 67 100 200
trials = 1

[cost_model]
kind = compute-bound-linear
c_pre = 1
c_dec = 0
l_sys = 0
p = 4
""")
    rows = predict(config)
    assert {r["m"]: r["pred_latency"] for r in rows} == {
        10: 50.0, 20: 60.0, 40: 80.0, 50: 50.0, 67: 67.0, 100: 100.0, 200: 200.0,
    }
    assert all(r["pred_opt_m_latency"] == 50 for r in rows)
    assert set(PREDICT_COLUMNS) >= {"pred_cost_sum", "pred_latency"}


def test_predict_retrieval_overlapping_optimum():
    config = parse_config("""
[sweep]
task = retrieval
mode = vary-m
n = 10000
m_values = 1000 2000 2500 4000 5000 10000
trials = 1

[cost_model]
kind = compute-bound-linear
c_pre = 1
c_dec = 0
l_sys = 0
p = 4
""")
    rows = predict(config)
    assert all(r["pred_opt_m_latency"] == 4000 for r in rows)


def test_predict_quadratic_cost_optimum():
    config = parse_config("""
[sweep]
task = counting
mode = vary-m
n = 400
m_values = 25 50 100 200 400
trials = 1

[cost_model]
kind = quadratic-flops
c_pre = 1
c_dec = 0
l_sys = 100
p = 4
""")
    rows = predict(config)
    assert all(r["pred_opt_m_cost"] == 100 for r in rows)
    at_100 = [r for r in rows if r["m"] == 100][0]
    assert at_100["pred_cost_sum"] / 400 == 400.0


def test_config_error_reports_line():
    bad = COUNTING_CFG.replace("task = counting", "task = juggling")
    with pytest.raises(ConfigFileError) as err:
        parse_config(bad, path="sweep.cfg")
    assert "juggling" in str(err.value)
    assert "sweep.cfg:3" in str(err.value)


def test_config_missing_n():
    with pytest.raises(ConfigFileError) as err:
        parse_config("[sweep]\ntask = counting\nmode = vary-m\nm_values = 10\n")
    assert "needs n" in str(err.value)


def test_config_rejects_unknown_profile_field():
    bad = COUNTING_CFG + "\n[profile]\nfancy_knob = 3\n"
    with pytest.raises(ConfigFileError) as err:
        parse_config(bad, path="x.cfg")
    assert "fancy_knob" in str(err.value)


def test_config_profile_overrides_apply():
    config = parse_config(COUNTING_CFG + "\n[profile]\ncount_rho_max = 0.25\ncount_tau = 0\n")
    backend = config.make_backend()
    assert backend.profile.count_rho_max == 0.25
    assert backend.profile.latency.kind == "compute-bound-linear"


def test_extra_p_latency_columns():
    config = parse_config(COUNTING_CFG.replace("p = 4", "p = 4\nextra_p = 2 8").replace(
        "trials = 10", "trials = 1"))
    result = run_sweep(config)
    assert "latency_p2" in result.columns()
    assert "latency_p8" in result.columns()
    row = result.rows[0]
    assert row["latency_inf"] <= row["latency_p8"] <= row["latency_p2"] <= row["latency_sequential"]
