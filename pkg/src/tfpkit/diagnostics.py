"""Residual diagnostics: heteroskedasticity, serial correlation, normality,
residual-regressor orthogonality and correlograms."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import UndefinedStatisticError, ValidationError
from .regression import OlsFit, RegressionSpec, ols_fit


@dataclass(frozen=True)
class DiagnosticReport:
    """A test statistic with its reference distribution.

    ``distribution`` is ``"chi2"``, ``"F"`` or ``"none"`` and ``df`` holds its
    degrees of freedom.  ``reject`` is the decision at ``significance``.
    """

    name: str
    statistic: float
    distribution: str
    df: tuple[int, ...]
    p_value: float | None
    significance: float = 0.05
    detail: dict = field(default_factory=dict)

    @property
    def reject(self) -> bool | None:
        if self.p_value is None:
            return None
        return bool(self.p_value < self.significance)


def chi2_report(name: str, statistic: float, df: int, significance: float = 0.05, **detail) -> DiagnosticReport:
    p = float(stats.chi2.sf(statistic, df))
    return DiagnosticReport(name, float(statistic), "chi2", (df,), p, significance, dict(detail))


def _design_without_constants(regressors) -> np.ndarray:
    X = np.asarray(regressors, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    keep = [j for j in range(X.shape[1]) if np.ptp(X[:, j]) > 0]
    return X[:, keep]


def _residuals(fit_or_resid) -> np.ndarray:
    if isinstance(fit_or_resid, OlsFit):
        return fit_or_resid.residuals
    return np.asarray(fit_or_resid, dtype=float)


def breusch_pagan_godfrey(fit: OlsFit, regressors, significance: float = 0.05) -> DiagnosticReport:
    """LM statistic ``n * R^2`` of squared residuals on the regressors, chi2(k).

    Constant columns in ``regressors`` are ignored (the auxiliary regression
    has its own intercept).
    """
    e = _residuals(fit)
    X = _design_without_constants(regressors)
    if X.shape[0] != e.size:
        raise ValidationError("regressors do not match the residuals")
    k = X.shape[1]
    if k == 0:
        raise ValidationError("heteroskedasticity test needs at least one non-constant regressor")
    e2 = e * e
    if np.ptp(e2) == 0:
        raise UndefinedStatisticError("squared residuals have no variation")
    aux = ols_fit(RegressionSpec(e2, X, intercept=True))
    lm = e.size * aux.r_squared
    return chi2_report("Breusch-Pagan-Godfrey", lm, k, significance, n=e.size)


def lagged_residuals(e: np.ndarray, p: int) -> np.ndarray:
    """n x p matrix of e_{t-1}..e_{t-p} with presample values set to zero."""
    n = e.size
    out = np.zeros((n, p))
    for j in range(1, p + 1):
        out[j:, j - 1] = e[:-j]
    return out


def breusch_godfrey_lm(fit: OlsFit, regressors, lag_order: int = 1,
                       significance: float = 0.05) -> DiagnosticReport:
    """Serial-correlation LM test, statistic ``(n - p) * R^2`` ~ chi2(p)."""
    if lag_order < 1:
        raise ValidationError("lag order must be at least 1")
    e = _residuals(fit)
    X = _design_without_constants(regressors)
    n, p = e.size, lag_order
    if X.shape[0] != n:
        raise ValidationError("regressors do not match the residuals")
    if n <= X.shape[1] + p + 2:
        raise ValidationError("too few observations for the requested lag order")
    if not np.any(e):
        raise UndefinedStatisticError("residuals are identically zero")
    aux = ols_fit(RegressionSpec(e, np.column_stack([X, lagged_residuals(e, p)]), intercept=True))
    lm = (n - p) * aux.r_squared
    return chi2_report("Breusch-Godfrey LM", lm, p, significance, lag_order=p, n=n)


def jarque_bera(residuals, significance: float = 0.05) -> DiagnosticReport:
    e = np.asarray(_residuals(residuals), dtype=float)
    n = e.size
    if n < 4:
        raise ValidationError("Jarque-Bera needs at least four observations")
    d = e - e.mean()
    m2 = float(d @ d) / n
    if m2 == 0.0:
        raise UndefinedStatisticError("zero variance")
    skew = float(np.mean(d ** 3)) / m2 ** 1.5
    kurt = float(np.mean(d ** 4)) / m2 ** 2
    jb = n / 6.0 * (skew ** 2 + (kurt - 3.0) ** 2 / 4.0)
    return chi2_report("Jarque-Bera", jb, 2, significance, skewness=skew, kurtosis=kurt, n=n)


@dataclass(frozen=True)
class ExogeneityCheck:
    mean: float
    correlations: tuple[float | None, ...]
    names: tuple[str, ...] = ()


def residual_exogeneity(fit: OlsFit, regressors, names=()) -> ExogeneityCheck:
    """Mean of the residuals and their Pearson correlation with each regressor.

    A constant regressor gets ``None`` in place of a correlation.
    """
    e = _residuals(fit)
    X = np.asarray(regressors, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != e.size:
        raise ValidationError("regressors do not match the residuals")
    ed = e - e.mean()
    se = math.sqrt(float(ed @ ed))
    corrs = []
    for j in range(X.shape[1]):
        xd = X[:, j] - X[:, j].mean()
        sx = math.sqrt(float(xd @ xd))
        if sx == 0.0 or se == 0.0:
            corrs.append(None)
        else:
            corrs.append(float(ed @ xd) / (se * sx))
    return ExogeneityCheck(float(e.mean()), tuple(corrs), tuple(names))


@dataclass(frozen=True, eq=False)
class Correlogram:
    acf: np.ndarray
    pacf: np.ndarray
    band: float
    n: int

    @property
    def lags(self) -> np.ndarray:
        return np.arange(self.acf.size)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lag", "acf", "pacf", "band"])
        for lag, a, p in zip(self.lags, self.acf, self.pacf):
            w.writerow([int(lag), repr(float(a)), repr(float(p)), repr(self.band)])
        return buf.getvalue()


def autocorrelations(x, max_lag: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    d = x - x.mean()
    denom = float(d @ d)
    if denom == 0.0:
        raise UndefinedStatisticError("autocorrelations undefined for a constant series")
    acf = np.empty(max_lag + 1)
    acf[0] = 1.0
    for k in range(1, max_lag + 1):
        acf[k] = float(d[k:] @ d[:-k]) / denom
    return acf


def partial_autocorrelations(acf: np.ndarray) -> np.ndarray:
    """Durbin-Levinson recursion; ``pacf[0] = 1``."""
    m = acf.size - 1
    pacf = np.empty(m + 1)
    pacf[0] = 1.0
    phi = np.zeros(m + 1)
    v = 1.0
    for k in range(1, m + 1):
        num = acf[k] - float(phi[1:k] @ acf[k - 1:0:-1])
        a = num / v
        new = phi.copy()
        new[k] = a
        new[1:k] = phi[1:k] - a * phi[k - 1:0:-1]
        phi = new
        v *= 1.0 - a * a
        pacf[k] = a
    return pacf


def correlogram(residuals, max_lag: int) -> Correlogram:
    e = np.asarray(_residuals(residuals), dtype=float)
    n = e.size
    if not 1 <= max_lag < n:
        raise ValidationError("max_lag must satisfy 1 <= max_lag < n")
    acf = autocorrelations(e, max_lag)
    return Correlogram(acf, partial_autocorrelations(acf), 1.96 / math.sqrt(n), n)
