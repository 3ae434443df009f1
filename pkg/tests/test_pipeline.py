import json
import math

import numpy as np
import pytest

from tfpkit.accounting import PLAN_WINDOWS, decompose_period, window_average_growth
from tfpkit.errors import NumericError, ValidationError
from tfpkit.pipeline import EXACT_FIT, SECTIONS, PipelineConfig, run_pipeline
from tfpkit.report import emit_report, render, to_json
from tfpkit.series import PanelDataset, write_panel_csv
from tfpkit.synthetic import generate_economy, reference_economy_spec


@pytest.fixture
def noise_free_report(noise_free_economy):
    panel, _ = noise_free_economy
    return run_pipeline(PipelineConfig(trend=True, convention="log"), panel)


def _numbers(obj, path=""):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return
    if isinstance(obj, (int, float)):
        yield path, obj
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from _numbers(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _numbers(v, f"{path}.{i}")


# --- config ------------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [
    {"significance": 0.2},
    {"alpha": 1.0},
    {"alpha": 0.0},
    {"alpha": "guess"},
    {"format": "xml"},
    {"sections": ("data", "bogus")},
    {"convention": "geometric"},
])
def test_config_rejects_invalid_fields(kwargs):
    with pytest.raises(ValidationError):
        PipelineConfig(**kwargs)


def test_config_describe_keeps_only_basename(tmp_path):
    cfg = PipelineConfig(input=str(tmp_path / "deep" / "panel.csv"))
    assert cfg.describe()["input"] == "panel.csv"


# --- noise-free oracle -------------------------------------------------------

def test_noise_free_run_is_exact(noise_free_report, noise_free_economy):
    _, truth = noise_free_economy
    r = noise_free_report
    fit = r["estimation"]["restricted"]
    assert fit["r_squared"] == pytest.approx(1.0, abs=1e-12)
    assert fit["alpha"] == pytest.approx(0.52, abs=1e-9)
    rows = r["tfp"]["rows"]
    np.testing.assert_allclose([row["growth"] for row in rows], truth.tfp_log_growth, atol=1e-8)
    assert [row["year"] for row in rows] == list(range(1356, 1386))


def test_noise_free_run_marks_inference_undefined(noise_free_report):
    r = noise_free_report
    assert r["estimation"]["restricted"]["alpha_t"] is None
    assert r["estimation"]["wald_crs"] is None
    assert r["cointegration"]["cointegrated"] is None
    assert r.undefined["estimation.wald_crs"] == EXACT_FIT
    assert "crs_rejected" not in r.warning_codes()


def test_every_section_present_and_every_number_finite(noise_free_report):
    doc = noise_free_report.to_dict()
    assert [k for k in doc if k in SECTIONS] == list(SECTIONS)
    for path, x in _numbers(doc):
        assert math.isfinite(x), path


def test_section_selection_controls_presence(noise_free_economy):
    panel, _ = noise_free_economy
    r = run_pipeline(PipelineConfig(trend=True, sections=("data", "tfp")), panel)
    assert set(r.sections) == {"data", "tfp"}
    assert "decomposition" not in r


def test_fixed_alpha_skips_estimation(noise_free_economy):
    panel, _ = noise_free_economy
    r = run_pipeline(PipelineConfig(alpha=0.4, sections=("data", "decomposition")), panel)
    d = r["decomposition"]
    assert d["alpha_source"] == "fixed" and d["beta"] == pytest.approx(0.6)


def test_default_periods_are_the_plan_windows(noise_free_report):
    rows = noise_free_report["decomposition"]["periods"]
    assert [(row["first_year"], row["last_year"]) for row in rows] == list(PLAN_WINDOWS)
    for row in rows:
        c = row["capital_contribution"] + row["labor_contribution"] + row["tfp_contribution"]
        assert c == pytest.approx(row["value_added_growth"], abs=1e-12)


def test_default_periods_outside_sample_warns():
    panel, _ = generate_economy(reference_economy_spec(3, start_year=2000))
    r = run_pipeline(PipelineConfig(trend=True), panel)
    assert r["decomposition"]["periods"] == []
    assert "default_periods_outside_sample" in r.warning_codes()


def test_explicit_periods_outside_sample_fail():
    panel, _ = generate_economy(reference_economy_spec(3))
    with pytest.raises(ValidationError):
        run_pipeline(PipelineConfig(trend=True, periods="1350-1360"), panel)


def test_interpolation_warning_and_no_interpolate_failure(noise_free_economy):
    panel, _ = noise_free_economy
    labor = panel.labor.values.copy()
    labor[5] = np.nan
    gappy = PanelDataset.from_arrays(panel.start_year, panel.value_added.values, labor, panel.capital.values)
    r = run_pipeline(PipelineConfig(trend=True), gappy)
    assert "interpolated_values" in r.warning_codes()
    assert r["data"]["interpolated_years"] == [1360]
    with pytest.raises(ValidationError):
        run_pipeline(PipelineConfig(trend=True, interpolate=False), gappy)


def test_zero_growth_window_leaves_shares_undefined():
    # flat panel: every growth rate is zero, so shares are undefined
    n = 12
    years_panel = PanelDataset.from_arrays(1356, [5.0] * n, [100.0] * n, [10.0] * n)
    r = run_pipeline(PipelineConfig(alpha=0.5, sections=("data", "decomposition"),
                                    periods="1357-1360"), years_panel)
    assert r["decomposition"]["full_sample"]["tfp_share"] is None
    assert "shares_undefined" in r.warning_codes()


def test_plain_fit_on_trending_tfp_is_numeric_failure(noise_free_economy):
    # constant TFP growth without a trend term drives rho to one
    panel, _ = noise_free_economy
    with pytest.raises(NumericError):
        run_pipeline(PipelineConfig(), panel)


# --- reference-magnitude Monte Carlo (generator truth) -----------------------------

def _true_split(panel):
    v, k, l = window_average_growth(panel, panel.start_year + 1, panel.end_year, "logarithmic")
    return decompose_period(v, k, l, 0.52).shares


def test_reference_economy_shares_and_cointegration_rates():
    seeds = range(40)
    close = rejects = 0
    for seed in seeds:
        panel, _ = generate_economy(reference_economy_spec(seed))
        r = run_pipeline(PipelineConfig(trend=True, convention="log",
                                        sections=("cointegration", "decomposition")), panel)
        row = r["decomposition"]["full_sample"]
        got = (row["capital_share"], row["labor_share"], row["tfp_share"])
        close += max(abs(a - b) for a, b in zip(got, _true_split(panel))) <= 10.0
        rejects += bool(r["cointegration"]["cointegrated"])
    # about 3 in 4 seeds land within 10 pp of the generator split (75% over 200 seeds)
    assert close >= 0.6 * len(seeds)
    # residual test power at n=31, rho=0.5 is about 0.375: well below one, far above size
    assert rejects >= 0.2 * len(seeds)


def test_reference_economy_report_is_complete():
    panel, _ = generate_economy(reference_economy_spec(1))
    r = run_pipeline(PipelineConfig(trend=True, convention="log"), panel)
    assert r["cointegration"]["cointegrated"] is True
    assert r["estimation"]["restricted"]["ar1"]["converged"] is True
    assert r["diagnostics"]["normality"]["statistic"] >= 0
    assert r.undefined == {}


# --- serialization -----------------------------------------------------------

def test_serialization_is_deterministic(noise_free_economy):
    panel, _ = noise_free_economy
    cfg = PipelineConfig(trend=True, convention="log")
    a, b = run_pipeline(cfg, panel), run_pipeline(cfg, panel)
    for fmt in ("json", "text", "csv"):
        assert render(a, fmt) == render(b, fmt)


def test_json_round_trip_is_exact():
    panel, _ = generate_economy(reference_economy_spec(2))
    r = run_pipeline(PipelineConfig(trend=True), panel)
    back = json.loads(to_json(r))
    orig = dict(_numbers(r.to_dict()))
    parsed = dict(_numbers(back))
    assert orig.keys() == parsed.keys()
    for k, v in orig.items():
        assert parsed[k] == v, k


def test_csv_writes_one_file_per_section(tmp_path, noise_free_report):
    emit_report(noise_free_report, "csv", tmp_path / "out")
    names = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert names == sorted(["config.csv", *(f"{s}.csv" for s in SECTIONS), "warnings.csv", "undefined.csv"])
    for p in (tmp_path / "out").iterdir():
        assert p.read_text().startswith("field,value\n")


def test_unwritable_path_is_validation_error(tmp_path, noise_free_report):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ValidationError):
        emit_report(noise_free_report, "json", blocker / "report.json")
    with pytest.raises(ValidationError):
        emit_report(noise_free_report, "csv", blocker / "dir")


def test_run_from_file_matches_run_from_panel(tmp_path, noise_free_economy):
    panel, _ = noise_free_economy
    path = tmp_path / "p.csv"
    write_panel_csv(panel, path)
    a = run_pipeline(PipelineConfig(input=str(path), trend=True))
    b = run_pipeline(PipelineConfig(input=str(path), trend=True), panel)
    assert to_json(a) == to_json(b)
