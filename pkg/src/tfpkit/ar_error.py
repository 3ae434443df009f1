"""Linear regression with AR(1) disturbances by iterated quasi-differencing.

``method="difference"`` is Cochrane-Orcutt (the first observation is dropped);
``method="full_sample"`` is Prais-Winsten (the first row is kept and scaled by
``sqrt(1 - rho**2)``).  Coefficients are always reported on the original,
untransformed scale: the intercept enters the transformed design as the column
``(1 - rho)`` so its coefficient is the structural intercept directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ConvergenceError, ExplosiveDisturbanceError, ValidationError
from .regression import OlsFit, RegressionSpec, durbin_watson, ols_fit

METHODS = ("difference", "full_sample")

# residual sum of squares below this fraction of the dependent variable's
# total sum of squares is treated as an exact fit
EXACT_FIT_TOLERANCE = 1e-20


@dataclass(frozen=True, eq=False)
class Ar1Fit:
    """Result of :func:`fit_with_ar1`.

    ``inner_fit`` is the OLS fit on the transformed data; its coefficients are
    the structural ones (intercept first when the spec has one).  The
    ``r_squared`` family measures the transformed-model residuals against the
    variation of the untransformed dependent variable over the estimation
    sample, counting rho as an extra parameter.
    """

    rho: float
    rho_std_error: float
    rho_t_statistic: float
    inner_fit: OlsFit
    initial_fit: OlsFit
    iterations: int
    converged: bool
    effective_n: int
    method: str
    structural_residuals: np.ndarray
    dependent_tss: float

    @property
    def coefficients(self) -> np.ndarray:
        return self.inner_fit.coefficients

    @property
    def cov(self) -> np.ndarray:
        return self.inner_fit.cov

    @property
    def std_errors(self) -> np.ndarray:
        return self.inner_fit.std_errors

    @property
    def t_statistics(self) -> np.ndarray:
        return self.inner_fit.t_statistics

    @property
    def residuals(self) -> np.ndarray:
        """Innovations: residuals of the transformed regression."""
        return self.inner_fit.residuals

    @property
    def n_params(self) -> int:
        return self.inner_fit.n_params + 1

    @property
    def df_resid(self) -> int:
        return self.effective_n - self.n_params

    @property
    def r_squared(self) -> float:
        if self.dependent_tss <= 0:
            return float("nan")
        return 1.0 - self.inner_fit.ssr / self.dependent_tss

    @property
    def adjusted_r_squared(self) -> float:
        return 1.0 - (1.0 - self.r_squared) * (self.effective_n - 1) / self.df_resid

    @property
    def f_statistic(self) -> float:
        r2 = self.r_squared
        if r2 == 1.0:
            return float("inf")
        return (r2 / (self.n_params - 1)) / ((1.0 - r2) / self.df_resid)

    @property
    def durbin_watson(self) -> float:
        return durbin_watson(self.inner_fit.residuals)


def estimate_rho(residuals) -> tuple[float, float]:
    """Regress ``e_t`` on ``e_{t-1}`` without intercept; return ``(rho, std_error)``."""
    e = np.asarray(residuals, dtype=float)
    if e.size < 3:
        raise ValidationError("need at least three residuals to estimate rho")
    lag, cur = e[:-1], e[1:]
    denom = float(lag @ lag)
    if denom == 0.0:
        return 0.0, float("nan")
    rho = float(lag @ cur) / denom
    u = cur - rho * lag
    s2 = float(u @ u) / (cur.size - 1)
    return rho, float(np.sqrt(s2 / denom))


def quasi_difference(spec: RegressionSpec, rho: float, method: str = "difference"):
    """Transform ``spec`` for a given rho.

    Returns ``(y_star, X_star)`` where ``X_star`` holds the transformed
    intercept column first (when the spec has an intercept).
    """
    if method not in METHODS:
        raise ValidationError(f"unknown AR(1) method {method!r}; expected one of {METHODS}")
    y = spec.dependent
    X = spec.design
    y_star = y[1:] - rho * y[:-1]
    X_star = X[1:] - rho * X[:-1]
    if method == "full_sample":
        w = np.sqrt(1.0 - rho * rho)
        y_star = np.concatenate([[w * y[0]], y_star])
        X_star = np.vstack([w * X[:1], X_star])
    return y_star, X_star


def _fit_given_rho(spec: RegressionSpec, rho: float, method: str) -> OlsFit:
    y_star, X_star = quasi_difference(spec, rho, method)
    return ols_fit(RegressionSpec(y_star, X_star, intercept=False))


def fit_with_ar1(
    spec: RegressionSpec,
    method: str = "difference",
    tolerance: float = 1e-8,
    max_iterations: int = 100,
) -> Ar1Fit:
    """Iterated feasible estimation of a regression with AR(1) errors.

    1. OLS on the original data.
    2. rho from regressing residual_t on residual_{t-1} (no intercept).
    3. Quasi-difference all variables with rho and refit.
    4. Recompute structural residuals, update rho, repeat until the change
       in rho is below ``tolerance``.

    Raises
    ------
    ExplosiveDisturbanceError
        If an iterate has ``|rho| >= 1``.
    ConvergenceError
        If ``max_iterations`` pass without convergence; ``.last`` holds the
        final iterate.
    """
    if method not in METHODS:
        raise ValidationError(f"unknown AR(1) method {method!r}; expected one of {METHODS}")
    if not tolerance > 0:
        raise ValidationError("tolerance must be positive")
    if max_iterations < 1:
        raise ValidationError("max_iterations must be at least 1")

    initial = ols_fit(spec)
    y, design = spec.dependent, spec.design
    offset = 1 if method == "difference" else 0
    y_eff = y[offset:]
    dep_tss = float(((y_eff - y_eff.mean()) ** 2).sum())

    def build(rho, inner, iterations, converged, exact=False):
        resid = y - design @ inner.coefficients
        e_lag = resid[:-1]
        denom = float(e_lag @ e_lag)
        se = float("nan") if exact or denom == 0 else float(np.sqrt(inner.sigma2 / denom))
        t = rho / se if se > 0 else float("nan")
        return Ar1Fit(rho=rho, rho_std_error=se, rho_t_statistic=float(t), inner_fit=inner,
                      initial_fit=initial, iterations=iterations, converged=converged,
                      effective_n=inner.n, method=method, structural_residuals=resid,
                      dependent_tss=dep_tss)

    total = float(((y - y.mean()) ** 2).sum()) if spec.intercept else float(y @ y)
    if initial.ssr <= EXACT_FIT_TOLERANCE * max(total, np.finfo(float).tiny):
        inner = _fit_given_rho(spec, 0.0, method)
        return build(0.0, inner, 0, True, exact=True)

    rho, _ = estimate_rho(initial.residuals)
    inner = None
    for iteration in range(1, max_iterations + 1):
        if not abs(rho) < 1.0:
            raise ExplosiveDisturbanceError(f"AR(1) coefficient {rho:.6g} is not stationary")
        inner = _fit_given_rho(spec, rho, method)
        resid = y - design @ inner.coefficients
        new_rho, _ = estimate_rho(resid)
        if abs(new_rho - rho) < tolerance:
            rho = new_rho
            if not abs(rho) < 1.0:
                raise ExplosiveDisturbanceError(f"AR(1) coefficient {rho:.6g} is not stationary")
            inner = _fit_given_rho(spec, rho, method)
            return build(rho, inner, iteration, True)
        rho = new_rho
    last = build(rho, inner, max_iterations, False)
    raise ConvergenceError(
        f"AR(1) iteration did not converge in {max_iterations} iterations", last=last
    )


def rho_pvalue(fit: Ar1Fit) -> float:
    return float(2.0 * stats.t.sf(abs(fit.rho_t_statistic), fit.df_resid))
