"""Solow-residual TFP growth and the decomposition of output growth into
capital, labor and productivity contributions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .series import GrowthSeries, PanelDataset, compound_annual_growth, growth_rates, normalize_convention

AVERAGING = ("mean", "compound")

# Five development-plan windows (year labels 1356-1385) used as default sub-periods.
PLAN_WINDOWS: tuple[tuple[int, int], ...] = (
    (1356, 1367), (1368, 1373), (1374, 1378), (1379, 1383), (1384, 1385),
)


@dataclass(frozen=True, eq=False)
class TfpSeries:
    growth: GrowthSeries

    @property
    def rates(self) -> np.ndarray:
        return self.growth.rates

    @property
    def years(self) -> np.ndarray:
        return self.growth.years

    @property
    def mean(self) -> float:
        return self.growth.mean()

    def __len__(self) -> int:
        return len(self.growth)

    @classmethod
    def from_rates(cls, start_year: int, rates: Sequence[float],
                   convention: str = "arithmetic") -> "TfpSeries":
        """Wrap already-computed yearly TFP growth rates (percent)."""
        return cls(GrowthSeries(start_year, np.asarray(rates, dtype=float), convention))

    def window_mean(self, first_year: int, last_year: int) -> float:
        return float(np.mean(self.growth.window(first_year, last_year)))


def solow_residual_series(panel: PanelDataset, alpha: float, beta: float,
                          convention: str = "arithmetic") -> TfpSeries:
    """Yearly ``tfp_t = v_t - alpha * k_t - beta * l_t`` on percent growth rates."""
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ValidationError("elasticities must be finite")
    convention = normalize_convention(convention)
    v = growth_rates(panel.value_added, convention)
    k = growth_rates(panel.capital, convention)
    l = growth_rates(panel.labor, convention)
    tfp = v.rates - alpha * k.rates - beta * l.rates
    return TfpSeries(GrowthSeries(v.start_year, tfp, convention))


@dataclass(frozen=True)
class GrowthDecomposition:
    """Contributions (percentage points) and shares (percent of output growth).

    The TFP contribution is the residual, so the three contributions add up
    to ``value_added_growth``.  Shares are ``None`` when output growth is zero.
    """

    period: tuple[int, int] | None
    value_added_growth: float
    capital_growth: float
    labor_growth: float
    alpha: float
    beta: float
    capital_contribution: float
    labor_contribution: float
    tfp_contribution: float
    capital_share: float | None
    labor_share: float | None
    tfp_share: float | None
    averaging: str = "given"
    convention: str = "arithmetic"

    @property
    def shares_defined(self) -> bool:
        return self.capital_share is not None

    @property
    def contributions(self) -> tuple[float, float, float]:
        return self.capital_contribution, self.labor_contribution, self.tfp_contribution

    @property
    def shares(self) -> tuple[float, float, float] | None:
        if not self.shares_defined:
            return None
        return self.capital_share, self.labor_share, self.tfp_share


def decompose_period(value_added_growth: float, capital_growth: float, labor_growth: float,
                     alpha: float, beta: float | None = None, *, enforce_crs: bool = True,
                     period: tuple[int, int] | None = None, averaging: str = "given",
                     convention: str = "arithmetic") -> GrowthDecomposition:
    """Split average output growth into factor contributions and a TFP residual.

    ``beta`` defaults to ``1 - alpha``.  With ``enforce_crs`` (the default) an
    explicit ``beta`` must satisfy ``alpha + beta = 1``.
    """
    if beta is None:
        beta = 1.0 - alpha
    elif enforce_crs and not math.isclose(alpha + beta, 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ValidationError(
            f"alpha + beta = {alpha + beta:.6g}; pass enforce_crs=False to decompose anyway"
        )
    v, k, l = float(value_added_growth), float(capital_growth), float(labor_growth)
    cap = alpha * k
    lab = beta * l
    tfp = v - cap - lab
    if v != 0.0:
        shares = (100.0 * cap / v, 100.0 * lab / v)
        shares = shares + (100.0 - shares[0] - shares[1],)
    else:
        shares = (None, None, None)
    return GrowthDecomposition(period, v, k, l, alpha, beta, cap, lab, tfp, *shares,
                               averaging=averaging, convention=convention)


@dataclass(frozen=True)
class PeriodSpec:
    """Sorted, disjoint ``(first_year, last_year)`` windows of growth-rate years."""

    windows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        windows = tuple((int(a), int(b)) for a, b in self.windows)
        if not windows:
            raise ValidationError("at least one window is required")
        for a, b in windows:
            if a > b:
                raise ValidationError(f"window {a}-{b} ends before it starts")
        for (a1, b1), (a2, b2) in zip(windows, windows[1:]):
            if a2 <= b1:
                raise ValidationError(f"windows {a1}-{b1} and {a2}-{b2} overlap or are unsorted")
        object.__setattr__(self, "windows", windows)

    @classmethod
    def parse(cls, text: str) -> "PeriodSpec":
        """Parse ``"a-b,c-d,..."``."""
        windows = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                a, b = part.split("-")
                windows.append((int(a), int(b)))
            except ValueError:
                raise ValidationError(f"bad period window {part!r}; expected first-last") from None
        return cls(tuple(windows))

    def check_against(self, panel: PanelDataset) -> None:
        first_rate, last_rate = panel.start_year + 1, panel.end_year
        for a, b in self.windows:
            if a < first_rate or b > last_rate:
                raise ValidationError(
                    f"window {a}-{b} outside the growth-rate years {first_rate}-{last_rate}"
                )

    def __iter__(self):
        return iter(self.windows)

    def __str__(self) -> str:
        return ",".join(f"{a}-{b}" for a, b in self.windows)


def window_average_growth(panel: PanelDataset, first_year: int, last_year: int,
                          convention: str = "arithmetic", averaging: str = "mean") -> tuple[float, float, float]:
    """Average (value added, capital, labor) growth over growth-rate years ``first..last``.

    ``mean`` averages the yearly rates; ``compound`` takes the constant rate
    linking the level in ``first_year - 1`` to the level in ``last_year``.
    """
    if averaging not in AVERAGING:
        raise ValidationError(f"averaging must be one of {AVERAGING}")
    convention = normalize_convention(convention)
    out = []
    for series in (panel.value_added, panel.capital, panel.labor):
        if averaging == "mean":
            rates = growth_rates(series, convention)
            out.append(float(np.mean(rates.window(first_year, last_year))))
        else:
            levels = series.window(first_year - 1, last_year)
            if convention == "arithmetic":
                out.append(compound_annual_growth(levels))
            else:
                out.append(100.0 * math.log(levels.values[-1] / levels.values[0]) / (len(levels) - 1))
    return tuple(out)


def subperiod_table(panel: PanelDataset, alpha: float, beta: float | None,
                    periods: PeriodSpec | Iterable[tuple[int, int]], convention: str = "arithmetic",
                    averaging: str = "mean", enforce_crs: bool = True) -> list[GrowthDecomposition]:
    """One decomposition per window, from within-window average growth rates."""
    if not isinstance(periods, PeriodSpec):
        periods = PeriodSpec(tuple(periods))
    periods.check_against(panel)
    convention = normalize_convention(convention)
    rows = []
    for a, b in periods:
        v, k, l = window_average_growth(panel, a, b, convention, averaging)
        rows.append(decompose_period(v, k, l, alpha, beta, enforce_crs=enforce_crs, period=(a, b),
                                     averaging=averaging, convention=convention))
    return rows


def decompose_sample(panel: PanelDataset, alpha: float, beta: float | None = None,
                     convention: str = "arithmetic", averaging: str = "mean",
                     enforce_crs: bool = True) -> GrowthDecomposition:
    """Decomposition over every growth-rate year of the panel."""
    return subperiod_table(panel, alpha, beta, [(panel.start_year + 1, panel.end_year)],
                           convention, averaging, enforce_crs)[0]
