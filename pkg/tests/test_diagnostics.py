import numpy as np
import pytest

from tfpkit.diagnostics import (autocorrelations, breusch_godfrey_lm, breusch_pagan_godfrey, correlogram,
                                jarque_bera, lagged_residuals, partial_autocorrelations, residual_exogeneity)
from tfpkit.errors import UndefinedStatisticError, ValidationError
from tfpkit.regression import durbin_watson, ols
from tfpkit.synthetic import SplitMix64


def normals(n, seed):
    return SplitMix64(seed).normals(n)


def ar_series(n, rho, seed):
    e = normals(n, seed)
    u = np.empty(n)
    u[0] = e[0]
    for t in range(1, n):
        u[t] = rho * u[t - 1] + e[t]
    return u


def test_bpg_detects_variance_proportional_to_x2():
    g = SplitMix64(4)
    x = 1 + 4 * np.array([g.uniform() for _ in range(200)])
    y = 1 + x + x * g.normals(200)
    assert breusch_pagan_godfrey(ols(y, x), x).reject


def test_bpg_homoskedastic_not_rejected():
    x = np.linspace(1, 5, 200)
    fit = ols(1 + x + normals(200, 6), x)
    r = breusch_pagan_godfrey(fit, x)
    assert not r.reject and r.df == (1,)


def test_bpg_zero_residuals_undefined():
    with pytest.raises(UndefinedStatisticError):
        breusch_pagan_godfrey(np.zeros(10), np.arange(10.0))


def test_bpg_drops_constant_columns():
    x = np.linspace(1, 5, 50)
    e = normals(50, 2)
    a = breusch_pagan_godfrey(e, np.column_stack([np.ones(50), x]))
    b = breusch_pagan_godfrey(e, x)
    assert a.statistic == b.statistic and a.df == (1,)


def test_bg_rejects_strong_ar1_and_accepts_white_noise():
    x = np.linspace(0, 1, 100)
    fit = ols(x + ar_series(100, 0.8, 12), x)
    assert breusch_godfrey_lm(fit, x, 1).reject
    assert durbin_watson(fit.residuals) < 1
    fit = ols(x + normals(100, 13), x)
    assert not breusch_godfrey_lm(fit, x, 2).reject
    assert abs(durbin_watson(fit.residuals) - 2) < 0.5


def test_bg_validation():
    with pytest.raises(ValidationError):
        breusch_godfrey_lm(normals(20, 1), np.arange(20.0), 0)
    with pytest.raises(ValidationError):
        breusch_godfrey_lm(normals(5, 1), np.arange(5.0), 2)


def test_lagged_residuals_zero_padded():
    np.testing.assert_array_equal(lagged_residuals(np.array([1.0, 2.0, 3.0]), 2),
                                  [[0, 0], [1, 0], [2, 1]])


def test_jarque_bera_hand_values():
    r = jarque_bera([-1, 1, -1, 1])
    assert r.statistic == pytest.approx(2 / 3, abs=1e-12)
    assert r.detail["skewness"] == 0 and r.detail["kurtosis"] == pytest.approx(1.0)
    assert jarque_bera([-1, 0, 0, 0, 0, 1]).statistic == pytest.approx(0.0, abs=1e-12)
    assert not jarque_bera(normals(500, 3)).reject


def test_jarque_bera_errors():
    with pytest.raises(ValidationError):
        jarque_bera([1.0, 2.0, 3.0])
    with pytest.raises(UndefinedStatisticError):
        jarque_bera([2.0] * 6)


def test_exogeneity_of_ols_residuals():
    x = np.column_stack([np.linspace(0, 1, 30), normals(30, 8)])
    fit = ols(x @ [1, 2] + normals(30, 9), x)
    chk = residual_exogeneity(fit, x, ("a", "b"))
    assert abs(chk.mean) < 1e-10
    assert all(abs(c) < 1e-10 for c in chk.correlations)


def test_exogeneity_two_point_and_constant_column():
    assert residual_exogeneity(np.array([1.0, -1.0]), np.array([1.0, 2.0])).correlations == (pytest.approx(-1.0),)
    assert residual_exogeneity(np.array([1.0, -1.0, 0.0]), np.ones(3)).correlations == (None,)


def test_correlogram_basics():
    c = correlogram(normals(80, 1), 10)
    assert c.acf[0] == 1.0 and c.pacf[1] == c.acf[1]
    assert np.all(np.abs(c.acf) <= 1)
    assert c.band == pytest.approx(1.96 / np.sqrt(80))
    assert c.to_csv().splitlines()[0] == "lag,acf,pacf,band"
    assert len(c.to_csv().splitlines()) == 12


def test_alternating_series():
    c = correlogram(np.array([1.0, -1.0] * 25), 3)
    assert abs(c.acf[1] + 1) <= 2 / 50


def test_ar_half_pacf():
    c = correlogram(ar_series(500, 0.5, 77), 10)
    assert c.pacf[1] == pytest.approx(0.5, abs=0.1)
    assert np.sum(np.abs(c.pacf[2:]) > c.band) <= 2


def test_correlogram_errors():
    with pytest.raises(ValidationError):
        correlogram(normals(5, 1), 5)
    with pytest.raises(UndefinedStatisticError):
        autocorrelations(np.ones(5), 2)


def test_cross_check_statsmodels():
    smd = pytest.importorskip("statsmodels.stats.diagnostic")
    sm = pytest.importorskip("statsmodels.api")
    from statsmodels.stats.stattools import jarque_bera as sm_jb
    from statsmodels.tsa.stattools import acf, pacf
    x = np.column_stack([np.linspace(0, 3, 60), normals(60, 31)])
    y = x @ [1.0, 0.5] + ar_series(60, 0.4, 32) * (1 + x[:, 0])
    fit = ols(y, x)
    res = sm.OLS(y, sm.add_constant(x)).fit()
    assert breusch_pagan_godfrey(fit, x).statistic == pytest.approx(
        smd.het_breuschpagan(res.resid, sm.add_constant(x))[0], rel=1e-9)
    p = 2
    ours = breusch_godfrey_lm(fit, x, p).statistic
    assert ours * 60 / (60 - p) == pytest.approx(smd.acorr_breusch_godfrey(res, nlags=p)[0], rel=1e-9)
    assert jarque_bera(fit.residuals).statistic == pytest.approx(sm_jb(res.resid)[0], rel=1e-10)
    e = fit.residuals
    np.testing.assert_allclose(autocorrelations(e, 8), acf(e, nlags=8, fft=False), atol=1e-12)
    np.testing.assert_allclose(partial_autocorrelations(autocorrelations(e, 8)),
                               pacf(e, nlags=8, method="ldb"), atol=1e-10)
