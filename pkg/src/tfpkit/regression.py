"""Ordinary least squares with intercept and the Durbin-Watson statistic.

The normal equations are solved by a Cholesky factorization of the centered,
column-normalized cross-product matrix.  Designs here are small (a handful of
regressors), so conditioning is handled by centering and unit-norm scaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from .errors import InsufficientDataError, SingularDesignError, UndefinedStatisticError, ValidationError

#: reject the design when the smallest Cholesky pivot falls below this
#: fraction of the largest one
PIVOT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class RegressionSpec:
    """Dependent vector and regressor matrix; the intercept is added unless suppressed."""

    dependent: np.ndarray
    regressors: np.ndarray
    intercept: bool = True

    def __post_init__(self):
        y = np.asarray(self.dependent, dtype=float)
        X = np.asarray(self.regressors, dtype=float)
        if y.ndim != 1:
            raise ValidationError("dependent variable must be one-dimensional")
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ValidationError("regressors must be an n x k matrix matching the dependent vector")
        if not (np.isfinite(y).all() and np.isfinite(X).all()):
            raise ValidationError("regression data must be finite")
        object.__setattr__(self, "dependent", y)
        object.__setattr__(self, "regressors", X)

    @property
    def n(self) -> int:
        return self.dependent.size

    @property
    def k(self) -> int:
        return self.regressors.shape[1]

    @property
    def design(self) -> np.ndarray:
        """Full design matrix, intercept column first when present."""
        if self.intercept:
            return np.column_stack([np.ones(self.n), self.regressors])
        return self.regressors


@dataclass(frozen=True, eq=False)
class OlsFit:
    """Least-squares estimates and summary statistics.

    ``k`` counts slope regressors (the intercept excluded).  When the fit has
    an intercept, coefficient 0 is the intercept and R-squared is centered;
    otherwise R-squared is the uncentered version.
    """

    coefficients: np.ndarray
    cov: np.ndarray
    std_errors: np.ndarray
    t_statistics: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    r_squared: float
    adjusted_r_squared: float
    f_statistic: float
    ssr: float
    tss: float
    n: int
    k: int
    has_intercept: bool

    @property
    def n_params(self) -> int:
        return self.k + int(self.has_intercept)

    @property
    def df_resid(self) -> int:
        return self.n - self.n_params

    @property
    def sigma2(self) -> float:
        return self.ssr / self.df_resid

    @property
    def slopes(self) -> np.ndarray:
        return self.coefficients[1:] if self.has_intercept else self.coefficients

    @property
    def t_pvalues(self) -> np.ndarray:
        return 2.0 * stats.t.sf(np.abs(self.t_statistics), self.df_resid)

    @property
    def f_pvalue(self) -> float:
        if not np.isfinite(self.f_statistic):
            return 0.0 if self.f_statistic == np.inf else float("nan")
        return float(stats.f.sf(self.f_statistic, self.k, self.df_resid))

    @property
    def durbin_watson(self) -> float:
        return durbin_watson(self.residuals)

    @property
    def log_likelihood(self) -> float:
        n = self.n
        return -0.5 * n * (np.log(2 * np.pi) + np.log(self.ssr / n) + 1.0)


def _factor(gram: np.ndarray) -> tuple:
    try:
        cf = linalg.cho_factor(gram, lower=True, check_finite=False)
    except linalg.LinAlgError:
        raise SingularDesignError("regressor matrix is rank deficient") from None
    pivots = np.diag(cf[0]) ** 2
    if pivots.size and (not np.all(np.isfinite(pivots))
                        or pivots.min() < PIVOT_TOLERANCE * pivots.max()):
        raise SingularDesignError("regressor matrix is rank deficient")
    return cf


def ols_fit(spec: RegressionSpec) -> OlsFit:
    """Fit ``spec`` by least squares.

    Raises
    ------
    InsufficientDataError
        If there are not more observations than parameters plus one.
    SingularDesignError
        If the design (with intercept) lacks full column rank.
    """
    y, X = spec.dependent, spec.regressors
    n, k = spec.n, spec.k
    p = k + int(spec.intercept)
    if p == 0:
        raise ValidationError("regression needs at least one parameter")
    if n <= p:
        raise InsufficientDataError(f"{n} observations are not enough for {p} parameters")

    if spec.intercept:
        x_mean, y_mean = X.mean(axis=0), y.mean()
        Xc, yc = X - x_mean, y - y_mean
    else:
        Xc, yc = X, y

    if k:
        scale = np.sqrt((Xc ** 2).sum(axis=0))
        if (scale == 0).any():
            raise SingularDesignError("a regressor has no variation")
        Z = Xc / scale
        cf = _factor(Z.T @ Z)
        slopes = linalg.cho_solve(cf, Z.T @ yc, check_finite=False) / scale
        gram_inv = linalg.cho_solve(cf, np.eye(k), check_finite=False) / np.outer(scale, scale)
    else:
        slopes = np.empty(0)
        gram_inv = np.empty((0, 0))

    fitted_c = Xc @ slopes
    if spec.intercept:
        intercept = y_mean - x_mean @ slopes
        coefficients = np.concatenate([[intercept], slopes])
        fitted = y_mean + fitted_c
    else:
        coefficients = slopes
        fitted = fitted_c
    residuals = y - fitted
    ssr = float(residuals @ residuals)
    df = n - p
    s2 = ssr / df

    if spec.intercept:
        cov = np.empty((p, p))
        cov_slopes = s2 * gram_inv
        cov[1:, 1:] = cov_slopes
        cross = -cov_slopes @ x_mean
        cov[0, 1:] = cov[1:, 0] = cross
        cov[0, 0] = s2 / n + x_mean @ cov_slopes @ x_mean
        tss = float(yc @ yc)
    else:
        cov = s2 * gram_inv
        tss = float(y @ y)
    cov = 0.5 * (cov + cov.T)
    std_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = coefficients / std_errors

    if tss > 0:
        r2 = 1.0 - ssr / tss
        dof_total = n - 1 if spec.intercept else n
        adj = 1.0 - (1.0 - r2) * dof_total / df
    else:
        r2 = adj = float("nan")
    if k == 0:
        f_stat = float("nan")
    elif ssr == 0.0:
        f_stat = float("inf")
    else:
        f_stat = ((tss - ssr) / k) / s2

    return OlsFit(
        coefficients=coefficients,
        cov=cov,
        std_errors=std_errors,
        t_statistics=t_stats,
        residuals=residuals,
        fitted=fitted,
        r_squared=float(r2),
        adjusted_r_squared=float(adj),
        f_statistic=float(f_stat),
        ssr=ssr,
        tss=tss,
        n=n,
        k=k,
        has_intercept=spec.intercept,
    )


def ols(y, X, intercept: bool = True) -> OlsFit:
    """Shorthand for ``ols_fit(RegressionSpec(y, X, intercept))``."""
    return ols_fit(RegressionSpec(y, X, intercept))


def durbin_watson(residuals) -> float:
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise ValidationError("Durbin-Watson needs at least two residuals")
    denom = float(e @ e)
    if denom == 0.0:
        raise UndefinedStatisticError("Durbin-Watson is undefined for all-zero residuals")
    d = np.diff(e)
    return float(d @ d) / denom
