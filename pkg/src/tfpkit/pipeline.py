"""End-to-end workflow: ingest, pre-test, estimate, diagnose, account.

The report is a nested mapping of plain Python values (str, int, float,
bool, None, lists, dicts) so that every output format is a mechanical
rendering of the same data.  Quantities that cannot be computed are stored
as ``None`` and their dotted path is listed under ``undefined`` with a reason.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .accounting import PLAN_WINDOWS, AVERAGING, PeriodSpec, decompose_sample, solow_residual_series, subperiod_table
from .ar_error import EXACT_FIT_TOLERANCE, Ar1Fit, METHODS, quasi_difference
from .diagnostics import (breusch_godfrey_lm, breusch_pagan_godfrey, correlogram, jarque_bera,
                          residual_exogeneity)
from .errors import NumericError, UndefinedStatisticError, ValidationError
from .production import CobbDouglasFit, fit_restricted, fit_unrestricted, wald_crs_test
from .regression import OlsFit, RegressionSpec
from .series import (PanelDataset, compound_annual_growth, growth_rates, normalize_convention,
                     per_capita_log_panel, read_panel_csv)
from .unitroot import (SIGNIFICANCE_LEVELS, DeterministicSpec, UnitRootReport, classify_integration,
                       engle_granger_residual_test)

SCHEMA_VERSION = "1.0"
SECTIONS = ("data", "unit_root", "estimation", "diagnostics", "cointegration", "tfp", "decomposition")
RHO_WARNING = 0.9
LEVEL_KEYS = {0.01: "1%", 0.05: "5%", 0.10: "10%"}


@dataclass(frozen=True)
class PipelineConfig:
    """Options of one pipeline run.

    ``alpha`` is ``"fit"`` (use the restricted estimate) or a fixed capital
    elasticity in (0, 1).  ``periods=None`` means the five plan windows when
    they lie inside the sample.  ``trend`` adds a linear time trend to both
    production-function fits.
    """

    input: Union[str, os.PathLike, None] = None
    interpolate: bool = True
    convention: str = "arithmetic"
    spec: str = "constant_and_trend"
    significance: float = 0.05
    ar1: bool = True
    ar1_method: str = "difference"
    alpha: Union[str, float] = "fit"
    periods: Union[str, PeriodSpec, Sequence[tuple[int, int]], None] = None
    averaging: str = "mean"
    trend: bool = False
    lm_lags: int = 1
    engle_granger_critical_values: bool = False
    format: str = "text"
    out: Union[str, os.PathLike, None] = None
    sections: tuple[str, ...] = SECTIONS

    def __post_init__(self):
        object.__setattr__(self, "convention", normalize_convention(self.convention))
        object.__setattr__(self, "spec", DeterministicSpec.parse(self.spec).value)
        if self.significance not in SIGNIFICANCE_LEVELS:
            raise ValidationError(f"significance must be one of {SIGNIFICANCE_LEVELS}")
        if self.alpha != "fit":
            try:
                a = float(self.alpha)
            except (TypeError, ValueError):
                raise ValidationError("alpha must be 'fit' or a number in (0, 1)") from None
            if not 0.0 < a < 1.0:
                raise ValidationError("fixed alpha must lie in (0, 1)")
            object.__setattr__(self, "alpha", a)
        if self.averaging not in AVERAGING:
            raise ValidationError(f"averaging must be one of {AVERAGING}")
        if self.ar1_method not in METHODS:
            raise ValidationError(f"ar1 method must be one of {METHODS}")
        if self.lm_lags < 1:
            raise ValidationError("lm_lags must be at least 1")
        if self.format not in ("text", "csv", "json"):
            raise ValidationError("format must be text, csv or json")
        if isinstance(self.periods, str):
            object.__setattr__(self, "periods", PeriodSpec.parse(self.periods))
        elif self.periods is not None and not isinstance(self.periods, PeriodSpec):
            object.__setattr__(self, "periods", PeriodSpec(tuple(self.periods)))
        unknown = set(self.sections) - set(SECTIONS)
        if unknown:
            raise ValidationError(f"unknown report sections {sorted(unknown)}")

    def describe(self) -> dict:
        return {
            "input": os.path.basename(os.fspath(self.input)) if self.input is not None else None,
            "interpolate": self.interpolate,
            "convention": self.convention,
            "spec": self.spec,
            "significance": self.significance,
            "ar1": self.ar1,
            "ar1_method": self.ar1_method,
            "alpha": self.alpha,
            "periods": str(self.periods) if self.periods is not None else None,
            "averaging": self.averaging,
            "trend": self.trend,
            "lm_lags": self.lm_lags,
            "engle_granger_critical_values": self.engle_granger_critical_values,
        }


@dataclass
class PipelineReport:
    """Sections in pipeline order plus warnings and the undefined-value index."""

    config: dict
    sections: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    undefined: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "config": self.config}
        out.update(self.sections)
        out["warnings"] = self.warnings
        out["undefined"] = dict(sorted(self.undefined.items()))
        return out

    def __getitem__(self, name: str):
        return self.sections[name]

    def __contains__(self, name: str) -> bool:
        return name in self.sections

    def warning_codes(self) -> list[str]:
        return [w["code"] for w in self.warnings]


class _Recorder:
    def __init__(self, report: PipelineReport):
        self.report = report

    def num(self, path: str, x, reason: str = "not a finite number"):
        if x is None or not math.isfinite(float(x)):
            self.report.undefined[path] = reason
            return None
        return float(x)

    def missing(self, path: str, reason: str):
        self.report.undefined[path] = reason
        return None

    def warn(self, code: str, message: str) -> None:
        self.report.warnings.append({"code": code, "message": message})


# --- sections ----------------------------------------------------------------

def _data_section(rec: _Recorder, raw: PanelDataset, panel: PanelDataset, convention: str) -> dict:
    filled = [int(y) for y, m in zip(raw.years, raw.labor.missing) if m]
    if filled:
        rec.warn("interpolated_values", f"labor interpolated for years {filled}")
    series = {}
    for name in ("value_added", "labor", "capital"):
        s = getattr(panel, name)
        series[name] = {
            "first": float(s.values[0]),
            "last": float(s.values[-1]),
            "compound_growth": compound_annual_growth(s),
            "mean_growth": growth_rates(s, convention).mean(),
        }
    return {"start_year": panel.start_year, "end_year": panel.end_year, "n": len(panel),
            "interpolated_years": filled, "growth_convention": convention, "series": series}


def _unit_root_row(rec: _Recorder, path: str, r: UnitRootReport, significance: float) -> dict:
    if r.critical_values.clamped:
        rec.warn("critical_values_clamped",
                 f"{r.test} on {r.series_name or 'series'}: sample below the response-surface floor")
    return {
        "test": r.test,
        "statistic": rec.num(f"{path}.statistic", r.statistic),
        "lags": r.lags,
        "n_effective": r.n_effective,
        "critical_values": {LEVEL_KEYS[lvl]: cv for lvl, cv in r.critical_values.as_dict().items()},
        "decision": "reject" if r.rejects(significance) else "fail_to_reject",
    }


def _unit_root_section(rec: _Recorder, y_name, y, x_name, x, config: PipelineConfig) -> dict:
    out = {"spec": config.spec, "significance": config.significance, "variables": {}}
    for name, s in ((y_name, y), (x_name, x)):
        order = classify_integration(s, config.spec, config.significance, name=name)
        base = f"unit_root.variables.{name}"
        entry = {"order": order.order, "note": order.note,
                 "level": [_unit_root_row(rec, f"{base}.level.{i}", r, config.significance)
                           for i, r in enumerate(order.level)],
                 "difference": [_unit_root_row(rec, f"{base}.difference.{i}", r, config.significance)
                                for i, r in enumerate(order.difference)]}
        out["variables"][name] = entry
        if order.order != "I1":
            rec.warn("not_integrated_order_one", f"{name} classified {order.order}, not I1")
    return out


EXACT_FIT = "exact fit: residuals are numerically zero"
_INFERENCE_KEYS = ("alpha_std_error", "alpha_t", "beta_std_error", "beta_t", "f_statistic", "durbin_watson")


def _fit_block(rec: _Recorder, path: str, fit: CobbDouglasFit) -> dict:
    reg = fit.regression
    block = {
        "form": fit.form,
        "alpha": rec.num(f"{path}.alpha", fit.alpha),
        "beta": rec.num(f"{path}.beta", fit.beta),
        "ln_A": rec.num(f"{path}.ln_A", fit.ln_A),
        "alpha_std_error": rec.num(f"{path}.alpha_std_error", math.sqrt(max(fit.var_alpha, 0.0))),
        "alpha_t": rec.num(f"{path}.alpha_t", fit.alpha_t, "zero standard error"),
        "beta_std_error": rec.num(f"{path}.beta_std_error", math.sqrt(max(fit.var_beta, 0.0))),
        "beta_t": rec.num(f"{path}.beta_t", fit.beta_t, "zero standard error"),
        "elasticity_ratio": rec.num(f"{path}.elasticity_ratio", fit.elasticity_ratio),
        "trend": rec.num(f"{path}.trend", fit.trend) if fit.trend is not None else None,
        "r_squared": rec.num(f"{path}.r_squared", reg.r_squared),
        "adjusted_r_squared": rec.num(f"{path}.adjusted_r_squared", reg.adjusted_r_squared),
        "f_statistic": rec.num(f"{path}.f_statistic", reg.f_statistic, "exact fit"),
        "durbin_watson": _safe(rec, f"{path}.durbin_watson", lambda: reg.durbin_watson),
        "n": int(reg.effective_n if isinstance(reg, Ar1Fit) else reg.n),
        "df_resid": int(reg.df_resid),
    }
    exact = _is_exact(fit)
    if exact:
        # standard errors of an exact fit are rounding noise
        for key in _INFERENCE_KEYS:
            block[key] = rec.missing(f"{path}.{key}", EXACT_FIT)
    if isinstance(reg, Ar1Fit):
        block["ar1"] = {
            "method": reg.method,
            "rho": rec.num(f"{path}.ar1.rho", reg.rho),
            "rho_std_error": rec.num(f"{path}.ar1.rho_std_error", reg.rho_std_error, EXACT_FIT),
            "rho_t": rec.num(f"{path}.ar1.rho_t", reg.rho_t_statistic, EXACT_FIT),
            "iterations": reg.iterations,
            "converged": reg.converged,
        }
        if abs(reg.rho) >= RHO_WARNING:
            rec.warn("rho_near_unity", f"{fit.form} AR(1) coefficient {reg.rho:.4f} is close to one")
    return block


def _safe(rec: _Recorder, path: str, fn):
    try:
        return rec.num(path, fn())
    except NumericError as exc:
        return rec.missing(path, str(exc))


def _is_exact(fit: CobbDouglasFit) -> bool:
    reg = fit.regression
    base = reg.initial_fit if isinstance(reg, Ar1Fit) else reg
    return base.ssr <= EXACT_FIT_TOLERANCE * max(base.tss, np.finfo(float).tiny)


def _restricted_design(y: np.ndarray, x: np.ndarray, trend: bool) -> RegressionSpec:
    cols = [x] + ([np.arange(1.0, y.size + 1.0)] if trend else [])
    return RegressionSpec(y, np.column_stack(cols), intercept=True)


def _final_model(fit: CobbDouglasFit, spec: RegressionSpec) -> tuple[OlsFit, np.ndarray]:
    """Residual-bearing fit and slope regressors of the final (transformed) model."""
    reg = fit.regression
    if isinstance(reg, Ar1Fit):
        _, X_star = quasi_difference(spec, reg.rho, reg.method)
        return reg.inner_fit, X_star[:, 1:]
    return reg, spec.regressors


def _diagnostics_section(rec: _Recorder, fit: CobbDouglasFit, spec: RegressionSpec,
                         names: list[str], config: PipelineConfig) -> dict:
    reg = fit.regression
    initial = reg.initial_fit if isinstance(reg, Ar1Fit) else reg
    final, final_X = _final_model(fit, spec)
    exact = _is_exact(fit)
    reason = EXACT_FIT
    sig = config.significance

    def report(path, fn):
        if exact:
            return rec.missing(path, reason)
        try:
            r = fn()
        except NumericError as exc:
            return rec.missing(path, str(exc))
        return {"statistic": rec.num(f"{path}.statistic", r.statistic),
                "distribution": r.distribution, "df": list(r.df),
                "p_value": rec.num(f"{path}.p_value", r.p_value),
                "reject": r.reject}

    def exogeneity(path, resid):
        if exact:
            return rec.missing(path, reason)
        chk = residual_exogeneity(resid, spec.regressors, names)
        return {"mean": chk.mean,
                "correlations": {n: rec.num(f"{path}.correlations.{n}", c, "constant regressor")
                                 for n, c in zip(names, chk.correlations)}}

    def corr(path, resid):
        if exact:
            return rec.missing(path, reason)
        n = np.asarray(resid).size
        m = max(1, min(12, n // 3))
        try:
            c = correlogram(resid, m)
        except NumericError as exc:
            return rec.missing(path, str(exc))
        return {"band": c.band, "n": c.n,
                "rows": [{"lag": int(k), "acf": float(a), "pacf": float(p)}
                         for k, a, p in zip(c.lags, c.acf, c.pacf)]}

    p = config.lm_lags
    out = {
        "significance": sig,
        "heteroskedasticity": report("diagnostics.heteroskedasticity",
                                     lambda: breusch_pagan_godfrey(final, final_X, sig)),
        "serial_correlation_initial": report(
            "diagnostics.serial_correlation_initial",
            lambda: breusch_godfrey_lm(initial, spec.regressors, p, sig)),
        "serial_correlation_final": report(
            "diagnostics.serial_correlation_final",
            lambda: breusch_godfrey_lm(final, final_X, p, sig)),
        "normality": report("diagnostics.normality", lambda: jarque_bera(final.residuals, sig)),
        "exogeneity_initial": exogeneity("diagnostics.exogeneity_initial", initial.residuals),
        "exogeneity_final": exogeneity(
            "diagnostics.exogeneity_final",
            reg.structural_residuals if isinstance(reg, Ar1Fit) else reg.residuals),
        "correlogram_initial": corr("diagnostics.correlogram_initial", initial.residuals),
        "correlogram_final": corr("diagnostics.correlogram_final", final.residuals),
    }
    if out["heteroskedasticity"] and out["heteroskedasticity"]["reject"]:
        rec.warn("heteroskedasticity", "Breusch-Pagan-Godfrey rejects homoskedasticity")
    if out["serial_correlation_final"] and out["serial_correlation_final"]["reject"]:
        rec.warn("serial_correlation", "LM test rejects no serial correlation in the final model")
    if out["normality"] and out["normality"]["reject"]:
        rec.warn("non_normal_residuals", "Jarque-Bera rejects normality")
    return out


def _cointegration_section(rec: _Recorder, fit: CobbDouglasFit, config: PipelineConfig) -> dict:
    reg = fit.regression
    resid = reg.structural_residuals if isinstance(reg, Ar1Fit) else reg.residuals
    base = {"spec": config.spec, "significance": config.significance,
            "critical_value_source": "engle_granger" if config.engle_granger_critical_values else "unit_root"}
    if _is_exact(fit):
        reason = EXACT_FIT
        base.update(adf=rec.missing("cointegration.adf", reason), pp=rec.missing("cointegration.pp", reason),
                    cointegrated=rec.missing("cointegration.cointegrated", reason))
        return base
    try:
        res = engle_granger_residual_test(resid, config.spec, config.significance,
                                          config.engle_granger_critical_values)
    except NumericError as exc:
        base.update(adf=rec.missing("cointegration.adf", str(exc)), pp=rec.missing("cointegration.pp", str(exc)),
                    cointegrated=rec.missing("cointegration.cointegrated", str(exc)))
        return base
    base["adf"] = _unit_root_row(rec, "cointegration.adf", res.adf, config.significance)
    base["pp"] = _unit_root_row(rec, "cointegration.pp", res.pp, config.significance)
    base["cointegrated"] = res.cointegrated
    if not res.cointegrated:
        rec.warn("no_cointegration", "residual unit root not rejected by both ADF and PP")
    return base


def _decomposition_row(rec: _Recorder, path: str, d) -> dict:
    row = {
        "first_year": d.period[0], "last_year": d.period[1],
        "value_added_growth": d.value_added_growth, "capital_growth": d.capital_growth,
        "labor_growth": d.labor_growth,
        "capital_contribution": d.capital_contribution, "labor_contribution": d.labor_contribution,
        "tfp_contribution": d.tfp_contribution,
    }
    for name in ("capital_share", "labor_share", "tfp_share"):
        value = getattr(d, name)
        row[name] = value if value is not None else rec.missing(f"{path}.{name}", "output growth is zero")
    if not d.shares_defined:
        rec.warn("shares_undefined", f"output growth is zero over {d.period[0]}-{d.period[1]}")
    return row


# --- driver ------------------------------------------------------------------

def load_panel(config: PipelineConfig) -> tuple[PanelDataset, PanelDataset]:
    """Read the input CSV and interpolate labor gaps (when enabled)."""
    if config.input is None:
        raise ValidationError("no input file given")
    raw = read_panel_csv(config.input)
    if config.interpolate:
        return raw, raw.interpolated()
    if not raw.is_complete:
        raise ValidationError("labor has missing values and interpolation is off")
    return raw, raw


def run_pipeline(config: PipelineConfig, panel: PanelDataset | None = None) -> PipelineReport:
    """Run the configured stages and collect the report.

    A ``panel`` passed directly bypasses file ingestion (interpolation still
    applies).  Statistical outcomes such as an unrejected unit root only add
    warnings; malformed data and estimation failures raise.
    """
    if panel is None:
        raw, panel = load_panel(config)
    else:
        raw = panel
        if config.interpolate:
            panel = panel.interpolated()
        elif not panel.is_complete:
            raise ValidationError("labor has missing values and interpolation is off")
    report = PipelineReport(config.describe())
    rec = _Recorder(report)
    want = set(config.sections)
    out = report.sections

    out["data"] = _data_section(rec, raw, panel, config.convention)

    lq, lk = per_capita_log_panel(panel)
    y_name, x_name = "ln_Q_per_L", "ln_K_per_L"
    if "unit_root" in want:
        out["unit_root"] = _unit_root_section(rec, y_name, lq, x_name, lk, config)

    need_fit = want & {"estimation", "diagnostics", "cointegration"} or (
        config.alpha == "fit" and want & {"tfp", "decomposition"})
    restricted = None
    if need_fit:
        restricted = fit_restricted(panel, config.ar1, trend=config.trend, method=config.ar1_method)
    if "estimation" in want:
        est = {"restricted": _fit_block(rec, "estimation.restricted", restricted)}
        try:
            unrestricted = fit_unrestricted(panel, config.ar1, trend=config.trend, method=config.ar1_method)
        except NumericError as exc:
            rec.warn("unrestricted_fit_failed", str(exc))
            est["unrestricted"] = rec.missing("estimation.unrestricted", str(exc))
            est["wald_crs"] = rec.missing("estimation.wald_crs", str(exc))
        else:
            est["unrestricted"] = _fit_block(rec, "estimation.unrestricted", unrestricted)
            try:
                if _is_exact(unrestricted):
                    raise UndefinedStatisticError(EXACT_FIT)
                w = wald_crs_test(unrestricted, config.significance)
            except NumericError as exc:
                est["wald_crs"] = rec.missing("estimation.wald_crs", str(exc))
            else:
                est["wald_crs"] = {
                    "statistic": rec.num("estimation.wald_crs.statistic", w.statistic),
                    "p_value": rec.num("estimation.wald_crs.p_value", w.p_value),
                    "f_statistic": rec.num("estimation.wald_crs.f_statistic", w.detail["F"]),
                    "f_df": list(w.detail["F_df"]),
                    "f_p_value": rec.num("estimation.wald_crs.f_p_value", w.detail["F_p_value"]),
                    "sum_of_elasticities": w.detail["sum_of_elasticities"],
                    "reject": w.reject,
                }
                if w.reject:
                    rec.warn("crs_rejected", "Wald test rejects constant returns to scale")
        out["estimation"] = est

    spec = _restricted_design(lq.values, lk.values, config.trend)
    names = [x_name] + (["trend"] if config.trend else [])
    if "diagnostics" in want:
        out["diagnostics"] = _diagnostics_section(rec, restricted, spec, names, config)
    if "cointegration" in want:
        out["cointegration"] = _cointegration_section(rec, restricted, config)

    if want & {"tfp", "decomposition"}:
        if config.alpha == "fit":
            alpha, source = restricted.alpha, "restricted_fit"
        else:
            alpha, source = float(config.alpha), "fixed"
        beta = 1.0 - alpha
    if "tfp" in want:
        tfp = solow_residual_series(panel, alpha, beta, config.convention)
        out["tfp"] = {"alpha": alpha, "beta": beta, "alpha_source": source,
                      "convention": config.convention, "mean": tfp.mean,
                      "rows": [{"year": int(y), "growth": float(g)} for y, g in zip(tfp.years, tfp.rates)]}
    if "decomposition" in want:
        full = decompose_sample(panel, alpha, beta, config.convention, config.averaging)
        dec = {"alpha": alpha, "beta": beta, "alpha_source": source, "averaging": config.averaging,
               "convention": config.convention,
               "full_sample": _decomposition_row(rec, "decomposition.full_sample", full)}
        periods = config.periods
        if periods is None:
            candidate = PeriodSpec(PLAN_WINDOWS)
            try:
                candidate.check_against(panel)
                periods = candidate
            except ValidationError:
                rec.warn("default_periods_outside_sample",
                         "plan windows do not fit the sample; sub-period table omitted")
        if periods is not None:
            rows = subperiod_table(panel, alpha, beta, periods, config.convention, config.averaging)
            dec["periods"] = [_decomposition_row(rec, f"decomposition.periods.{i}", d)
                              for i, d in enumerate(rows)]
        else:
            dec["periods"] = []
        out["decomposition"] = dec
    for name in list(out):
        if name not in want:
            del out[name]
    return report
