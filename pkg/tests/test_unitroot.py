import numpy as np
import pytest

from tfpkit.errors import InsufficientDataError, ValidationError
from tfpkit.synthetic import SplitMix64
from tfpkit.unitroot import (CriticalValues, DeterministicSpec, UnitRootReport, adf_test, classify_integration,
                             cointegration_decision, default_bandwidth, default_max_lag,
                             engle_granger_residual_test, integration_order, mackinnon_critical_values,
                             newey_west_variance, pp_test, select_adf_lag)

FIXTURE = [1, 2, 4, 3, 5, 4, 6, 5, 7, 6, 8, 7]
# frozen from the rational-arithmetic oracles in oracles.py (df_tau, pp_tau)
ADF_FIXTURE = -1.867988163533004
PP_FIXTURE_BW1 = -2.117198752272461


def random_walk(n, seed):
    return np.cumsum(SplitMix64(seed).normals(n))


def ar1(n, rho, seed):
    e = SplitMix64(seed).normals(n)
    y = np.empty(n)
    y[0] = e[0]
    for t in range(1, n):
        y[t] = rho * y[t - 1] + e[t]
    return y


def test_spec_parsing():
    assert DeterministicSpec.parse("trend") is DeterministicSpec.CONSTANT_AND_TREND
    assert DeterministicSpec.parse("c") is DeterministicSpec.CONSTANT
    assert DeterministicSpec.parse("none").n_terms == 0
    with pytest.raises(ValidationError):
        DeterministicSpec.parse("quadratic")


def test_adf_and_pp_fixture():
    assert adf_test(FIXTURE, "constant", lags=0).statistic == pytest.approx(ADF_FIXTURE, abs=1e-12)
    assert pp_test(FIXTURE, "constant", bandwidth=0).statistic == adf_test(FIXTURE, "constant", 0).statistic
    assert pp_test(FIXTURE, "constant", bandwidth=1).statistic == pytest.approx(PP_FIXTURE_BW1, abs=1e-12)


def test_critical_values_match_published_footnotes():
    cv30 = mackinnon_critical_values("constant_and_trend", 30)
    for got, want in zip((cv30.one, cv30.five, cv30.ten), (-4.310, -3.568, -3.218)):
        assert abs(got - want) <= 0.02
    cv29 = mackinnon_critical_values("constant_and_trend", 29)
    assert cv29.five == pytest.approx(-3.573, abs=0.002)
    assert mackinnon_critical_values("constant_and_trend", 1e12).five == pytest.approx(-3.41, abs=0.01)


@pytest.mark.parametrize("spec", ["none", "constant", "constant_and_trend"])
def test_critical_values_ordered_and_monotone(spec):
    prev = None
    for n in (10, 15, 25, 50, 100, 500, 10_000):
        cv = mackinnon_critical_values(spec, n)
        assert cv.one < cv.five < cv.ten < 0
        if prev is not None:
            assert abs(cv.one) <= abs(prev.one) and abs(cv.five) <= abs(prev.five)
        prev = cv


def test_critical_values_clamp_small_samples():
    cv = mackinnon_critical_values("constant", 4)
    assert cv.clamped
    assert cv.five == mackinnon_critical_values("constant", 10).five
    assert not mackinnon_critical_values("constant", 10).clamped


@pytest.mark.parametrize("spec,reg", [("none", "n"), ("constant", "c"), ("constant_and_trend", "ct")])
@pytest.mark.parametrize("n", [25, 50, 100, 100_000])
def test_critical_values_near_statsmodels_surface(spec, reg, n):
    st = pytest.importorskip("statsmodels.tsa.adfvalues")
    ref = st.mackinnoncrit(N=1, regression=reg, nobs=n)
    ours = mackinnon_critical_values(spec, n)
    np.testing.assert_allclose([ours.one, ours.five, ours.ten], ref, atol=0.03)


def test_adf_matches_statsmodels_at_fixed_lag():
    st = pytest.importorskip("statsmodels.tsa.stattools")
    y = random_walk(80, 4)
    for spec, reg in (("constant", "c"), ("constant_and_trend", "ct"), ("none", "n")):
        for k in (0, 2):
            ref = st.adfuller(y, maxlag=k, regression=reg, autolag=None)[0]
            assert adf_test(y, spec, lags=k).statistic == pytest.approx(ref, rel=1e-10)


def test_decisions_follow_statistic():
    r = UnitRootReport.from_statistic("ADF", -1.693, (-4.310, -3.568, -3.218))
    assert r.decisions == {0.01: "fail_to_reject", 0.05: "fail_to_reject", 0.10: "fail_to_reject"}
    r = UnitRootReport.from_statistic("PP", -3.3, (-4.310, -3.568, -3.218))
    assert r.decisions == {0.01: "fail_to_reject", 0.05: "fail_to_reject", 0.10: "reject"}
    assert r.rejects(0.10) and not r.rejects(0.05)


def test_random_walk_not_rejected():
    r = adf_test(random_walk(200, 17), "constant")
    assert not r.rejects(0.05)
    assert r.lags <= default_max_lag(200)


def test_stationary_ar_classified_i0():
    assert classify_integration(ar1(200, 0.5, 3), "constant").order == "I0"


def test_deterministic_trend_is_i0():
    order = classify_integration(np.arange(1.0, 41.0), "constant_and_trend")
    assert order.order == "I0" and order.level == ()


def test_integration_rule():
    cv = (-4.310, -3.568, -3.218)
    lv = [UnitRootReport.from_statistic("ADF", -1.0, cv), UnitRootReport.from_statistic("PP", -1.1, cv)]
    df = [UnitRootReport.from_statistic("ADF", -5.0, cv), UnitRootReport.from_statistic("PP", -5.1, cv)]
    assert integration_order(lv, df).order == "I1"
    mixed = [lv[0], UnitRootReport.from_statistic("PP", -4.0, cv)]
    assert integration_order(mixed, df).order == "higher_or_undetermined"
    assert integration_order(df, df).order == "I0"
    assert integration_order(lv, lv).order == "higher_or_undetermined"


def test_scale_and_shift_invariance():
    y = random_walk(60, 8)
    base = adf_test(y, "constant", lags=2).statistic
    assert adf_test(3.7 * y, "constant", lags=2).statistic == pytest.approx(base, rel=1e-9)
    assert adf_test(y + 100.0, "constant", lags=2).statistic == pytest.approx(base, rel=1e-9)
    pp = pp_test(y, "constant_and_trend", 3).statistic
    assert pp_test(0.01 * y - 5, "constant_and_trend", 3).statistic == pytest.approx(pp, rel=1e-9)


def test_cointegrated_pair_detected():
    g = SplitMix64(21)
    x = np.cumsum(g.normals(200))
    y = 2 * x + g.normals(200)
    resid = y - np.polyval(np.polyfit(x, y, 1), x)
    res = engle_granger_residual_test(resid, "constant")
    assert res.cointegrated
    eg = engle_granger_residual_test(resid, "constant", engle_granger_critical_values=True)
    assert eg.critical_value_source == "engle_granger"
    assert eg.adf.critical_values.five < res.adf.critical_values.five


def test_independent_walks_mostly_not_cointegrated():
    found = 0
    for seed in range(100):
        g = SplitMix64(1000 + seed)
        x, y = np.cumsum(g.normals(200)), np.cumsum(g.normals(200))
        resid = y - np.polyval(np.polyfit(x, y, 1), x)
        found += engle_granger_residual_test(resid, "constant", 0.05, lags=1, bandwidth="auto").cointegrated
    assert found < 50


def test_cointegration_needs_both_tests():
    cv = (-4.310, -3.574, -3.222)
    adf = UnitRootReport.from_statistic("ADF", -4.999, cv)
    assert not cointegration_decision(adf, UnitRootReport.from_statistic("PP", -2.0, cv)).cointegrated


def test_bandwidth_and_long_run_variance():
    assert default_bandwidth(30) == 3
    assert default_bandwidth(100) == 4
    e = np.array([1.0, -1.0, 1.0, -1.0])
    assert newey_west_variance(e, 0) == 1.0
    assert newey_west_variance(e, 1) == pytest.approx(1.0 + 2 * 0.5 * (-3 / 4))


def test_lag_selection_is_within_range():
    y = ar1(120, 0.9, 5)
    assert 0 <= select_adf_lag(y, "constant") <= default_max_lag(120)
    assert select_adf_lag(y, "constant", max_lag=0) == 0


def test_too_short_series():
    with pytest.raises(InsufficientDataError):
        adf_test([1.0, 2.0, 1.5, 3.0], "constant_and_trend", lags=0)
    with pytest.raises(ValidationError):
        adf_test(FIXTURE, "constant", lags=-1)
    with pytest.raises(ValidationError):
        adf_test([1.0, np.nan, 2.0, 3.0, 4.0, 5.0, 6.0], "none", 0)
