"""Cobb-Douglas estimation (unrestricted and constant-returns per-worker forms),
the Wald test of constant returns, marginal products and factor shares."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import stats

from .ar_error import Ar1Fit, fit_with_ar1
from .diagnostics import DiagnosticReport
from .errors import DomainError, UndefinedStatisticError, ValidationError
from .regression import OlsFit, RegressionSpec, ols_fit
from .series import PanelDataset, per_capita_log_panel

MIN_OBSERVATIONS = 6

Fit = Union[OlsFit, Ar1Fit]


@dataclass(frozen=True, eq=False)
class CobbDouglasFit:
    """Estimated ``Q = A K^alpha L^beta``.

    For the restricted form ``beta = 1 - alpha`` and the labor elasticity
    shares the capital elasticity's standard error.
    """

    form: str  # "restricted" or "unrestricted"
    alpha: float
    beta: float
    ln_A: float
    regression: Fit
    var_alpha: float
    var_beta: float
    cov_alpha_beta: float
    trend: float | None = None

    @property
    def elasticity_ratio(self) -> float:
        return self.alpha / self.beta

    @property
    def alpha_std_error(self) -> float:
        return math.sqrt(self.var_alpha)

    @property
    def beta_std_error(self) -> float:
        return math.sqrt(self.var_beta)

    @property
    def alpha_t(self) -> float:
        return self.alpha / self.alpha_std_error if self.var_alpha > 0 else float("nan")

    @property
    def beta_t(self) -> float:
        return self.beta / self.beta_std_error if self.var_beta > 0 else float("nan")

    @property
    def has_ar1(self) -> bool:
        return isinstance(self.regression, Ar1Fit)

    @property
    def df_resid(self) -> int:
        return self.regression.df_resid

    @property
    def returns_to_scale(self) -> float:
        return self.alpha + self.beta


def _log_levels(panel: PanelDataset):
    if not panel.is_complete:
        raise ValidationError("panel has missing labor values; interpolate first")
    if len(panel) < MIN_OBSERVATIONS:
        raise ValidationError(f"need at least {MIN_OBSERVATIONS} years of data")
    q = panel.value_added.values
    k = panel.capital.values
    l = panel.labor.values
    return np.log(q), np.log(k), np.log(l)


def _estimate(y, X, ar1: bool, method: str) -> Fit:
    spec = RegressionSpec(y, X, intercept=True)
    return fit_with_ar1(spec, method=method) if ar1 else ols_fit(spec)


def _trend(n: int) -> np.ndarray:
    return np.arange(1.0, n + 1.0)


def fit_unrestricted(panel: PanelDataset, ar1: bool = False, *, trend: bool = False,
                     method: str = "difference") -> CobbDouglasFit:
    """Regress ln Q on ln K and ln L (plus an optional time trend)."""
    lq, lk, ll = _log_levels(panel)
    cols = [lk, ll] + ([_trend(lq.size)] if trend else [])
    fit = _estimate(lq, np.column_stack(cols), ar1, method)
    b, cov = fit.coefficients, fit.cov
    return CobbDouglasFit("unrestricted", float(b[1]), float(b[2]), float(b[0]), fit,
                          float(cov[1, 1]), float(cov[2, 2]), float(cov[1, 2]),
                          float(b[3]) if trend else None)


def fit_restricted(panel: PanelDataset, ar1: bool = False, *, trend: bool = False,
                   method: str = "difference") -> CobbDouglasFit:
    """Regress ln(Q/L) on ln(K/L); ``beta = 1 - alpha``."""
    _log_levels(panel)
    lq_l, lk_l = per_capita_log_panel(panel)
    y, x = lq_l.values, lk_l.values
    cols = [x] + ([_trend(y.size)] if trend else [])
    fit = _estimate(y, np.column_stack(cols), ar1, method)
    b, cov = fit.coefficients, fit.cov
    alpha = float(b[1])
    var = float(cov[1, 1])
    return CobbDouglasFit("restricted", alpha, 1.0 - alpha, float(b[0]), fit, var, var, -var,
                          float(b[2]) if trend else None)


def wald_linear_restriction(estimates, covariance, weights, value: float) -> float:
    """Wald statistic for ``weights @ estimates == value`` (one restriction)."""
    b = np.asarray(estimates, dtype=float)
    V = np.asarray(covariance, dtype=float)
    w = np.asarray(weights, dtype=float)
    var = float(w @ V @ w)
    if not var > 0:
        raise UndefinedStatisticError("restriction has zero variance")
    gap = float(w @ b) - value
    return gap * gap / var


def wald_crs_test(fit: CobbDouglasFit, significance: float = 0.05) -> DiagnosticReport:
    """Test ``alpha + beta = 1``: W ~ chi2(1), also reported as F(1, df_resid)."""
    if fit.form != "unrestricted":
        raise ValidationError("constant returns can only be tested on an unrestricted fit")
    cov = np.array([[fit.var_alpha, fit.cov_alpha_beta], [fit.cov_alpha_beta, fit.var_beta]])
    w = wald_linear_restriction([fit.alpha, fit.beta], cov, [1.0, 1.0], 1.0)
    p = float(stats.chi2.sf(w, 1))
    df2 = fit.df_resid
    return DiagnosticReport("Wald CRS", w, "chi2", (1,), p, significance,
                            {"F": w, "F_df": (1, df2), "F_p_value": float(stats.f.sf(w, 1, df2)),
                             "sum_of_elasticities": fit.alpha + fit.beta})


@dataclass(frozen=True)
class MarginalProducts:
    capital: float
    labor: float


def marginal_products(fit: CobbDouglasFit, Q: float, K: float, L: float) -> MarginalProducts:
    """``F_K = alpha Q / K`` and ``F_L = beta Q / L`` at one point."""
    if not (Q > 0 and K > 0 and L > 0):
        raise DomainError("output and inputs must be positive")
    return MarginalProducts(fit.alpha * Q / K, fit.beta * Q / L)


@dataclass(frozen=True)
class FactorShares:
    capital: float
    labor: float
    source: str = "elasticities_under_competition"

    @property
    def total(self) -> float:
        return self.capital + self.labor

    @property
    def sums_to_one(self) -> bool:
        return math.isclose(self.total, 1.0, rel_tol=0.0, abs_tol=1e-12)


def factor_shares(fit: CobbDouglasFit) -> FactorShares:
    """Income shares equal the output elasticities under perfect competition."""
    return FactorShares(fit.alpha, fit.beta)
