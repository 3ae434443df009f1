import numpy as np
import pytest

from tfpkit.accounting import (PLAN_WINDOWS, PeriodSpec, TfpSeries, decompose_period, decompose_sample,
                               solow_residual_series, subperiod_table, window_average_growth)
from tfpkit.errors import ValidationError
from tfpkit.series import PanelDataset, growth_rates
from tfpkit.synthetic import reference_economy_spec, generate_economy


def test_single_step_hand_arithmetic():
    d = decompose_period(10.0, 5.0, 5.0, 0.52)
    assert d.tfp_contribution == pytest.approx(5.0, abs=1e-12)


def test_zero_growth_gives_zero_tfp():
    p = PanelDataset.from_arrays(0, [5.0] * 4, [3.0] * 4, [2.0] * 4)
    tfp = solow_residual_series(p, 0.4, 0.6)
    np.testing.assert_array_equal(tfp.rates, 0.0)
    assert len(tfp) == 3


def test_zero_output_growth_leaves_shares_undefined():
    d = decompose_period(0.0, 0.0, 0.0, 0.52)
    assert d.contributions == (0.0, 0.0, 0.0)
    assert d.shares is None and not d.shares_defined


def test_crs_enforced_unless_overridden():
    with pytest.raises(ValidationError):
        decompose_period(5.0, 2.0, 2.0, 0.5, 0.6)
    d = decompose_period(5.0, 2.0, 2.0, 0.5, 0.6, enforce_crs=False)
    assert d.labor_contribution == pytest.approx(1.2)


def test_alpha_one_reduces_to_v_minus_k():
    panel, _ = generate_economy(reference_economy_spec(1))
    tfp = solow_residual_series(panel, 1.0, 0.0)
    v, k = growth_rates(panel.value_added), growth_rates(panel.capital)
    np.testing.assert_array_equal(tfp.rates, v.rates - k.rates)


def test_full_window_equals_sample_average():
    panel, _ = generate_economy(reference_economy_spec(3))
    full = decompose_sample(panel, 0.52)
    v, k, l = window_average_growth(panel, panel.start_year + 1, panel.end_year)
    assert full.contributions == decompose_period(v, k, l, 0.52).contributions
    tfp = solow_residual_series(panel, 0.52, 0.48)
    assert tfp.mean == pytest.approx(full.tfp_contribution, abs=1e-12)


def test_compound_averaging_uses_levels():
    p = PanelDataset.from_arrays(0, [100.0, 150.0, 100.0 * 1.2 ** 2], [10.0] * 3, [5.0] * 3)
    v, _, _ = window_average_growth(p, 1, 2, averaging="compound")
    assert v == pytest.approx(20.0)
    v, _, _ = window_average_growth(p, 1, 2, averaging="mean")
    assert v == pytest.approx((50 + (144 / 150 - 1) * 100) / 2)


def test_plan_windows_on_a_1355_1385_panel():
    panel, _ = generate_economy(reference_economy_spec(5))
    rows = subperiod_table(panel, 0.52, None, PLAN_WINDOWS)
    assert [r.period for r in rows] == list(PLAN_WINDOWS)
    for r in rows:
        assert r.averaging == "mean"


def test_period_spec_parsing_and_validation():
    spec = PeriodSpec.parse("1356-1367, 1368-1373")
    assert spec.windows == ((1356, 1367), (1368, 1373))
    assert str(spec) == "1356-1367,1368-1373"
    for bad in ("1360-1356", "1356-1367,1360-1370", "1368-1373,1356-1367", "abc", ""):
        with pytest.raises(ValidationError):
            PeriodSpec.parse(bad)
    panel, _ = generate_economy(reference_economy_spec(5))
    with pytest.raises(ValidationError):
        PeriodSpec.parse("1355-1360").check_against(panel)
    with pytest.raises(ValidationError):
        PeriodSpec.parse("1380-1390").check_against(panel)


def test_tfp_series_from_printed_rates():
    t = TfpSeries.from_rates(1356, [1.0, 2.0, 3.0, 4.0])
    assert t.mean == 2.5 and t.window_mean(1357, 1358) == 2.5
