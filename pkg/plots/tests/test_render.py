import pytest

from algograph_plots.render import extract_series, render, self_check_csv
from algograph_plots.spec import FigureSpecError, load_figure_spec, parse_figure_spec

SUMMARY = """\
task,mode,n,m,trials,failures,err_abs_mean,err_abs_std,latency_p4_mean,latency_p4_std
counting,vary-m,200,10,10,0,0.4,0.29,315.0,0.0
counting,vary-m,200,20,10,0,0.8,0.6,195.0,0.0
counting,vary-m,200,50,10,0,1.7,1.1,73.0,0.0
counting,vary-m,200,100,10,0,2.9,1.25,85.0,0.0
counting,vary-m,200,200,10,0,5.1,2.3,110.0,0.0
"""

PREDICTIONS = """\
task,mode,n,m,pred_cost_sum,pred_latency,pred_opt_m_cost,pred_opt_m_latency
counting,vary-m,200,10,1000.0,50.0,200,50
counting,vary-m,200,20,600.0,60.0,200,50
counting,vary-m,200,50,240.0,50.0,200,50
counting,vary-m,200,100,160.0,100.0,200,50
counting,vary-m,200,200,120.0,200.0,200,50
"""

SPEC = """\
[figure]
summary_csv = summary.csv
prediction_csv = predictions.csv
x = m
out = fig.svg
format = svg

[panel.latency]
metric = latency_p4
label = latency (p=4)
style = cost
prediction = pred_latency

[panel.err]
metric = err_abs
label = absolute error
style = error
"""


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "summary.csv").write_text(SUMMARY, encoding="utf-8")
    (tmp_path / "predictions.csv").write_text(PREDICTIONS, encoding="utf-8")
    (tmp_path / "fig.spec").write_text(SPEC, encoding="utf-8")
    return tmp_path


def test_spec_parsing_resolves_paths(workdir):
    spec = load_figure_spec(workdir / "fig.spec")
    assert spec.summary_csv == str(workdir / "summary.csv")
    assert spec.prediction_csv == str(workdir / "predictions.csv")
    assert spec.x == "m"
    assert len(spec.panels) == 2


def test_spec_errors():
    with pytest.raises(FigureSpecError):
        parse_figure_spec("[figure]\nsummary_csv = s.csv\n")  # no out
    with pytest.raises(FigureSpecError):
        parse_figure_spec("[figure]\nsummary_csv = s.csv\nout = f.svg\nx = q\n"
                          "[panel.a]\nmetric = err_abs\n")
    with pytest.raises(FigureSpecError):
        parse_figure_spec("[figure]\nsummary_csv = s.csv\nout = f.svg\n")  # no panels
    with pytest.raises(FigureSpecError):
        parse_figure_spec("[figure]\nsummary_csv = s.csv\nout = f.svg\n"
                          "[panel.a]\nmetric = err_abs\nstyle = rainbow\n")


def test_error_panels_come_first(workdir):
    spec = load_figure_spec(workdir / "fig.spec")
    ordered = spec.ordered_panels()
    assert [p.style for p in ordered] == ["error", "cost"]


def test_extract_series_keeps_csv_strings(workdir):
    spec = load_figure_spec(workdir / "fig.spec")
    series = {s.panel.name: s for s in extract_series(spec)}
    assert series["err"].mean == ["0.4", "0.8", "1.7", "2.9", "5.1"]
    assert series["err"].std == ["0.29", "0.6", "1.1", "1.25", "2.3"]
    assert series["latency"].prediction == ["50.0", "60.0", "50.0", "100.0", "200.0"]
    assert series["latency"].x == ["10", "20", "50", "100", "200"]


def test_render_writes_deterministic_svg(workdir):
    spec = load_figure_spec(workdir / "fig.spec")
    render(spec)
    first = (workdir / "fig.svg").read_bytes()
    render(spec)
    assert (workdir / "fig.svg").read_bytes() == first
    assert b"<svg" in first


@pytest.mark.parametrize("fmt", ["png", "pdf"])
def test_render_other_formats(workdir, fmt):
    text = SPEC.replace("out = fig.svg", f"out = fig.{fmt}").replace(
        "format = svg", f"format = {fmt}")
    (workdir / "fig.spec").write_text(text, encoding="utf-8")
    spec = load_figure_spec(workdir / "fig.spec")
    render(spec)
    assert (workdir / f"fig.{fmt}").stat().st_size > 0


def test_missing_column_is_named(workdir):
    text = SPEC.replace("metric = err_abs", "metric = err_bogus")
    (workdir / "fig.spec").write_text(text, encoding="utf-8")
    with pytest.raises(FigureSpecError) as err:
        render(load_figure_spec(workdir / "fig.spec"))
    assert "err_bogus_mean" in str(err.value)


def test_empty_csv_is_rejected(workdir):
    (workdir / "summary.csv").write_text("", encoding="utf-8")
    with pytest.raises(FigureSpecError):
        render(load_figure_spec(workdir / "fig.spec"))
    (workdir / "summary.csv").write_text(SUMMARY.splitlines()[0] + "\n", encoding="utf-8")
    with pytest.raises(FigureSpecError) as err:
        render(load_figure_spec(workdir / "fig.spec"))
    assert "no data rows" in str(err.value)


def test_single_point_renders_without_band(workdir):
    lines = SUMMARY.splitlines()
    (workdir / "summary.csv").write_text("\n".join(lines[:2]) + "\n", encoding="utf-8")
    spec = load_figure_spec(workdir / "fig.spec")
    series = render(spec)
    assert all(len(s.x) == 1 for s in series)


def test_prediction_without_csv_is_rejected(workdir):
    text = SPEC.replace("prediction_csv = predictions.csv\n", "")
    (workdir / "fig.spec").write_text(text, encoding="utf-8")
    with pytest.raises(FigureSpecError) as err:
        render(load_figure_spec(workdir / "fig.spec"))
    assert "prediction_csv" in str(err.value)


def test_self_check_csv_shape(workdir):
    spec = load_figure_spec(workdir / "fig.spec")
    dump = self_check_csv(extract_series(spec))
    lines = dump.splitlines()
    assert lines[0] == "panel,kind,x,value,std"
    measured = [l for l in lines if ",measured," in l]
    predicted = [l for l in lines if ",prediction," in l]
    assert len(measured) == 2 * 5
    assert len(predicted) == 5


def test_cli_roundtrip(workdir, capsys):
    from algograph_plots.cli import main

    check = workdir / "series.csv"
    code = main([str(workdir / "fig.spec"), "--self-check", str(check)])
    assert code == 0
    assert (workdir / "fig.svg").exists()
    assert check.exists()
    out = capsys.readouterr().out
    assert "wrote" in out


def test_cli_bad_spec(workdir, capsys):
    from algograph_plots.cli import main

    (workdir / "fig.spec").write_text("[figure]\nout = f.svg\n", encoding="utf-8")
    assert main([str(workdir / "fig.spec")]) == 2
    assert "figure error" in capsys.readouterr().err
