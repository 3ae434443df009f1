"""Dickey-Fuller family unit-root tests and the residual-based cointegration step.

Critical values come from the three-term response surface
``cv(p, n) = b_inf + b1 / n + b2 / n**2`` with MacKinnon's (1991) coefficients.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientDataError, ValidationError
from .regression import OlsFit, RegressionSpec, ols_fit
from .series import AnnualSeries

SIGNIFICANCE_LEVELS = (0.01, 0.05, 0.10)


class DeterministicSpec(str, enum.Enum):
    NONE = "none"
    CONSTANT = "constant"
    CONSTANT_AND_TREND = "constant_and_trend"

    @classmethod
    def parse(cls, value) -> "DeterministicSpec":
        if isinstance(value, cls):
            return value
        aliases = {"none": cls.NONE, "n": cls.NONE, "nc": cls.NONE,
                   "constant": cls.CONSTANT, "c": cls.CONSTANT,
                   "constant_and_trend": cls.CONSTANT_AND_TREND, "trend": cls.CONSTANT_AND_TREND,
                   "ct": cls.CONSTANT_AND_TREND}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValidationError(f"unknown deterministic spec {value!r}") from None

    @property
    def n_terms(self) -> int:
        return {"none": 0, "constant": 1, "constant_and_trend": 2}[self.value]


# (spec, number of variables) -> rows for 1%, 5%, 10%: (b_inf, b1, b2).
# n_variables=1 is the unit-root case; 2 is the Engle-Granger residual case
# with one regressor in the cointegrating equation.
_SURFACE = {
    ("none", 1): ((-2.5658, -1.960, -10.04), (-1.9393, -0.398, 0.0), (-1.6156, -0.181, 0.0)),
    ("constant", 1): ((-3.4336, -5.999, -29.25), (-2.8621, -2.738, -8.36), (-2.5671, -1.438, -4.48)),
    ("constant_and_trend", 1): ((-3.9638, -8.353, -47.44), (-3.4126, -4.039, -17.83),
                                (-3.1279, -2.418, -7.58)),
    ("constant", 2): ((-3.9001, -10.534, -30.03), (-3.3377, -5.967, -8.98), (-3.0462, -4.069, -5.73)),
    ("constant_and_trend", 2): ((-4.3266, -15.531, -34.03), (-3.7809, -9.421, -15.06),
                                (-3.4959, -7.203, -4.01)),
}

MIN_SURFACE_N = 10


@dataclass(frozen=True)
class CriticalValues:
    one: float
    five: float
    ten: float
    clamped: bool = False

    def at(self, significance: float) -> float:
        for level, value in zip(SIGNIFICANCE_LEVELS, (self.one, self.five, self.ten)):
            if math.isclose(significance, level):
                return value
        raise ValidationError(f"significance must be one of {SIGNIFICANCE_LEVELS}")

    def as_dict(self) -> dict[float, float]:
        return {0.01: self.one, 0.05: self.five, 0.10: self.ten}


def mackinnon_critical_values(spec, n_effective: float, n_variables: int = 1) -> CriticalValues:
    """Response-surface critical values for a Dickey-Fuller t-statistic.

    Sample sizes below 10 are evaluated at 10 and flagged ``clamped``.
    """
    spec = DeterministicSpec.parse(spec)
    try:
        rows = _SURFACE[(spec.value, n_variables)]
    except KeyError:
        raise ValidationError(
            f"no critical-value surface for spec={spec.value} with {n_variables} variables"
        ) from None
    clamped = n_effective < MIN_SURFACE_N
    n = float(max(n_effective, MIN_SURFACE_N))
    values = [b0 + b1 / n + b2 / (n * n) for b0, b1, b2 in rows]
    return CriticalValues(*values, clamped=clamped)


@dataclass(frozen=True)
class UnitRootReport:
    """Outcome of one ADF or PP test.

    ``lags`` is the number of lagged differences for ADF and the Newey-West
    bandwidth for PP.
    """

    test: str
    statistic: float
    lags: int
    spec: DeterministicSpec
    critical_values: CriticalValues
    n_effective: int
    series_name: str = ""

    def rejects(self, significance: float = 0.05) -> bool:
        return bool(self.statistic < self.critical_values.at(significance))

    @property
    def decisions(self) -> dict[float, str]:
        return {level: ("reject" if self.statistic < cv else "fail_to_reject")
                for level, cv in self.critical_values.as_dict().items()}

    @classmethod
    def from_statistic(cls, test: str, statistic: float, critical_values, *, spec="constant_and_trend",
                       lags: int = 0, n_effective: int = 0, series_name: str = "") -> "UnitRootReport":
        """Wrap a published statistic/critical-value pair for decision replay."""
        if not isinstance(critical_values, CriticalValues):
            critical_values = CriticalValues(*critical_values)
        return cls(test, float(statistic), lags, DeterministicSpec.parse(spec), critical_values,
                   n_effective, series_name)


def _as_array(series) -> np.ndarray:
    if isinstance(series, AnnualSeries):
        x = series.values
    else:
        x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise ValidationError("unit-root tests need a one-dimensional series")
    if np.isnan(x).any():
        raise ValidationError("series has missing values")
    return x


def _deterministic_columns(spec: DeterministicSpec, n: int) -> tuple[np.ndarray, bool]:
    """Trend column (if any) and whether an intercept is used."""
    if spec is DeterministicSpec.CONSTANT_AND_TREND:
        return np.arange(1.0, n + 1.0)[:, None], True
    return np.empty((n, 0)), spec is DeterministicSpec.CONSTANT


def _df_regression(y: np.ndarray, lags: int, spec: DeterministicSpec, start: int | None = None) -> OlsFit:
    """Regress dy_t on y_{t-1}, ``lags`` lagged differences and deterministic terms.

    ``start`` fixes the first usable index of dy (for a common lag-search
    sample); by default it is ``lags``.
    """
    dy = np.diff(y)
    start = lags if start is None else start
    target = dy[start:]
    m = target.size
    cols = [y[start:-1]]
    for j in range(1, lags + 1):
        cols.append(dy[start - j: dy.size - j])
    trend, intercept = _deterministic_columns(spec, m)
    X = np.column_stack(cols + [trend]) if trend.size else np.column_stack(cols)
    n_params = X.shape[1] + int(intercept)
    if m <= n_params + 2:
        raise InsufficientDataError(
            f"{m} usable observations are not enough for a Dickey-Fuller regression "
            f"with {n_params} parameters"
        )
    return ols_fit(RegressionSpec(target, X, intercept=intercept))


def _level_index(fit: OlsFit) -> int:
    return 1 if fit.has_intercept else 0


def default_max_lag(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def select_adf_lag(y, spec="constant_and_trend", max_lag: int | None = None) -> int:
    """Lag order minimizing AIC over ``0..max_lag`` on a common sample."""
    y = _as_array(y)
    spec = DeterministicSpec.parse(spec)
    n = y.size
    if max_lag is None:
        max_lag = default_max_lag(n)
    # keep the common sample large enough for the largest model
    while max_lag > 0 and (n - 1 - max_lag) <= (max_lag + 1 + spec.n_terms) + 2:
        max_lag -= 1
    best_lag, best_aic = 0, math.inf
    for lag in range(max_lag + 1):
        fit = _df_regression(y, lag, spec, start=max_lag)
        aic = -2.0 * fit.log_likelihood + 2.0 * fit.n_params
        if aic < best_aic - 1e-12:
            best_lag, best_aic = lag, aic
    return best_lag


def adf_test(series, spec="constant_and_trend", lags: int | str = "auto",
             max_lag: int | None = None, name: str = "") -> UnitRootReport:
    """Augmented Dickey-Fuller t-test on the coefficient of y_{t-1}."""
    y = _as_array(series)
    spec = DeterministicSpec.parse(spec)
    if lags == "auto":
        k = select_adf_lag(y, spec, max_lag)
    else:
        k = int(lags)
        if k < 0:
            raise ValidationError("lags must be nonnegative")
    fit = _df_regression(y, k, spec)
    stat = float(fit.t_statistics[_level_index(fit)])
    return UnitRootReport("ADF", stat, k, spec, mackinnon_critical_values(spec, fit.n), fit.n, name)


def default_bandwidth(n: int) -> int:
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def newey_west_variance(residuals, bandwidth: int) -> float:
    """Bartlett-kernel long-run variance, autocovariances scaled by 1/n, no demeaning."""
    e = np.asarray(residuals, dtype=float)
    n = e.size
    lrv = float(e @ e) / n
    for j in range(1, bandwidth + 1):
        weight = 1.0 - j / (bandwidth + 1.0)
        lrv += 2.0 * weight * float(e[j:] @ e[:-j]) / n
    return lrv


def pp_test(series, spec="constant_and_trend", bandwidth: int | str = "auto",
            name: str = "") -> UnitRootReport:
    """Phillips-Perron Z_tau: the DF t-ratio corrected with a Newey-West long-run variance."""
    y = _as_array(series)
    spec = DeterministicSpec.parse(spec)
    fit = _df_regression(y, 0, spec)
    n = fit.n
    if bandwidth == "auto":
        bw = default_bandwidth(n)
    else:
        bw = int(bandwidth)
        if bw < 0:
            raise ValidationError("bandwidth must be nonnegative")
    if bw >= n:
        raise InsufficientDataError("bandwidth must be smaller than the number of observations")
    idx = _level_index(fit)
    t = float(fit.t_statistics[idx])
    se = float(fit.std_errors[idx])
    e = fit.residuals
    s = math.sqrt(fit.sigma2)
    gamma0 = float(e @ e) / n
    lam2 = newey_west_variance(e, bw)
    if not lam2 > 0:
        raise InsufficientDataError("nonpositive long-run variance; try a smaller bandwidth")
    lam = math.sqrt(lam2)
    stat = math.sqrt(gamma0 / lam2) * t - 0.5 * (lam2 - gamma0) / lam * (n * se / s)
    return UnitRootReport("PP", stat, bw, spec, mackinnon_critical_values(spec, n), n, name)


@dataclass(frozen=True)
class IntegrationOrder:
    """Integration-order call together with the reports behind it."""

    order: str  # "I0", "I1" or "higher_or_undetermined"
    level: tuple[UnitRootReport, ...]
    difference: tuple[UnitRootReport, ...]
    significance: float
    note: str = ""


def integration_order(level: Sequence[UnitRootReport], difference: Sequence[UnitRootReport],
                      significance: float = 0.05) -> IntegrationOrder:
    """Apply the I(0)/I(1) rule; every test has to agree or the call is undetermined."""
    level, difference = tuple(level), tuple(difference)
    level_rej = [r.rejects(significance) for r in level]
    diff_rej = [r.rejects(significance) for r in difference]
    if level_rej and all(level_rej):
        order = "I0"
    elif level_rej and not any(level_rej) and diff_rej and all(diff_rej):
        order = "I1"
    else:
        order = "higher_or_undetermined"
    return IntegrationOrder(order, level, difference, significance)


def _is_deterministic(y: np.ndarray, spec: DeterministicSpec) -> bool:
    n = y.size
    trend, intercept = _deterministic_columns(spec, n)
    if not intercept:
        return bool(np.all(y == 0))
    if trend.size:
        resid = ols_fit(RegressionSpec(y, trend, intercept=True)).residuals
    else:
        resid = y - y.mean()
    scale = max(float(np.abs(y).max()), 1.0)
    return bool(np.abs(resid).max() <= 1e-10 * scale)


def classify_integration(series, spec="constant_and_trend", significance: float = 0.05,
                         lags: int | str = "auto", bandwidth: int | str = "auto",
                         difference_spec=None, name: str = "") -> IntegrationOrder:
    """Run ADF and PP on the level and the first difference and classify.

    A series that is exactly its deterministic component (e.g. a straight
    line under ``constant_and_trend``) is classified I0 without testing,
    since the test regressions are singular for it.
    """
    y = _as_array(series)
    spec = DeterministicSpec.parse(spec)
    diff_spec = spec if difference_spec is None else DeterministicSpec.parse(difference_spec)
    if significance not in SIGNIFICANCE_LEVELS:
        raise ValidationError(f"significance must be one of {SIGNIFICANCE_LEVELS}")
    if _is_deterministic(y, spec):
        return IntegrationOrder("I0", (), (), significance,
                                note="series equals its deterministic component")
    dy = np.diff(y)
    level = (adf_test(y, spec, lags, name=name), pp_test(y, spec, bandwidth, name=name))
    difference = (adf_test(dy, diff_spec, lags, name=f"d({name})" if name else ""),
                  pp_test(dy, diff_spec, bandwidth, name=f"d({name})" if name else ""))
    return integration_order(level, difference, significance)


@dataclass(frozen=True)
class CointegrationResult:
    adf: UnitRootReport
    pp: UnitRootReport
    significance: float
    cointegrated: bool
    critical_value_source: str = "unit_root"  # or "engle_granger"


def cointegration_decision(adf: UnitRootReport, pp: UnitRootReport, significance: float = 0.05,
                           critical_value_source: str = "unit_root") -> CointegrationResult:
    """Residuals are called stationary (cointegration) only if both tests reject."""
    both = adf.rejects(significance) and pp.rejects(significance)
    return CointegrationResult(adf, pp, significance, both, critical_value_source)


def engle_granger_residual_test(residuals, spec="constant_and_trend", significance: float = 0.05,
                                engle_granger_critical_values: bool = False, n_variables: int = 2,
                                lags: int | str = "auto", bandwidth: int | str = "auto") -> CointegrationResult:
    """ADF and PP on the residuals of a cointegrating regression.

    By default the ordinary unit-root critical values are used.  With
    ``engle_granger_critical_values=True`` the residual-based surface for
    ``n_variables`` variables in the cointegrating equation is used instead.
    """
    e = _as_array(residuals)
    spec = DeterministicSpec.parse(spec)
    if significance not in SIGNIFICANCE_LEVELS:
        raise ValidationError(f"significance must be one of {SIGNIFICANCE_LEVELS}")
    adf = adf_test(e, spec, lags, name="residuals")
    pp = pp_test(e, spec, bandwidth, name="residuals")
    source = "unit_root"
    if engle_granger_critical_values:
        source = "engle_granger"
        adf = _with_cv(adf, mackinnon_critical_values(spec, adf.n_effective, n_variables))
        pp = _with_cv(pp, mackinnon_critical_values(spec, pp.n_effective, n_variables))
    return cointegration_decision(adf, pp, significance, source)


def _with_cv(report: UnitRootReport, cv: CriticalValues) -> UnitRootReport:
    return UnitRootReport(report.test, report.statistic, report.lags, report.spec, cv,
                          report.n_effective, report.series_name)
