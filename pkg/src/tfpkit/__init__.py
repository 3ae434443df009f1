"""Growth accounting with Cobb-Douglas estimation, unit-root pre-tests and
residual diagnostics."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, ExplosiveDisturbanceError, InsufficientDataError,
                     NumericError, SingularDesignError, TfpkitError, UndefinedStatisticError,
                     ValidationError)
from .series import (AnnualSeries, GrowthSeries, PanelDataset, compound_annual_growth, growth_rates,
                     interpolate_gaps, parse_panel_csv, per_capita_log_panel, read_panel_csv,
                     write_panel_csv)
from .regression import OlsFit, RegressionSpec, durbin_watson, ols, ols_fit
from .ar_error import Ar1Fit, fit_with_ar1
from .unitroot import (CointegrationResult, CriticalValues, DeterministicSpec, IntegrationOrder,
                       UnitRootReport, adf_test, classify_integration, engle_granger_residual_test,
                       mackinnon_critical_values, pp_test)
from .diagnostics import (Correlogram, DiagnosticReport, breusch_godfrey_lm, breusch_pagan_godfrey,
                          correlogram, jarque_bera, residual_exogeneity)
from .production import (CobbDouglasFit, factor_shares, fit_restricted, fit_unrestricted,
                         marginal_products, wald_crs_test)
from .accounting import (PLAN_WINDOWS, GrowthDecomposition, PeriodSpec, TfpSeries, decompose_period,
                         decompose_sample, solow_residual_series, subperiod_table)
from .synthetic import EconomySpec, EconomyTruth, SplitMix64, generate_economy, reference_economy_spec
from .pipeline import PipelineConfig, PipelineReport, run_pipeline
from .report import emit_report
