"""Year-indexed series, growth-rate transforms, gap interpolation and panel I/O."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import DomainError, ValidationError

Convention = Literal["arithmetic", "logarithmic"]

CONVENTIONS: tuple[str, ...] = ("arithmetic", "logarithmic")
_CONVENTION_ALIASES = {"arithmetic": "arithmetic", "arith": "arithmetic",
                       "logarithmic": "logarithmic", "log": "logarithmic"}

CSV_HEADER = ("year", "value_added", "labor", "capital")


def normalize_convention(convention: str) -> str:
    try:
        return _CONVENTION_ALIASES[convention]
    except KeyError:
        raise ValidationError(
            f"unknown growth-rate convention {convention!r}; "
            "expected 'arithmetic' or 'logarithmic'"
        ) from None


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AnnualSeries:
    """Values for consecutive years starting at ``start_year``.

    Missing entries are stored as NaN.  Year labels are opaque integers.
    """

    start_year: int
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or values.size == 0:
            raise ValidationError("a series needs at least one value")
        if np.isinf(values).any():
            raise ValidationError("series values must be finite or missing")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self) -> int:
        return self.values.size

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    @property
    def has_missing(self) -> bool:
        return bool(self.missing.any())

    def value_at(self, year: int) -> float:
        idx = year - self.start_year
        if not 0 <= idx < len(self):
            raise ValidationError(f"year {year} outside {self.start_year}-{self.end_year}")
        return float(self.values[idx])

    def window(self, first_year: int, last_year: int) -> "AnnualSeries":
        i, j = first_year - self.start_year, last_year - self.start_year
        if i < 0 or j >= len(self) or i > j:
            raise ValidationError(
                f"window {first_year}-{last_year} outside {self.start_year}-{self.end_year}"
            )
        return AnnualSeries(first_year, self.values[i:j + 1])

    def equals(self, other: "AnnualSeries") -> bool:
        return (self.start_year == other.start_year
                and np.array_equal(self.values, other.values, equal_nan=True))


@dataclass(frozen=True, eq=False)
class GrowthSeries:
    """Per-year growth rates in percent; ``start_year`` is the first year with a rate."""

    start_year: int
    rates: np.ndarray
    convention: str = "arithmetic"

    def __post_init__(self):
        object.__setattr__(self, "rates", _frozen(self.rates))
        object.__setattr__(self, "convention", normalize_convention(self.convention))

    def __len__(self) -> int:
        return self.rates.size

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    def window(self, first_year: int, last_year: int) -> np.ndarray:
        i, j = first_year - self.start_year, last_year - self.start_year
        if i < 0 or j >= len(self) or i > j:
            raise ValidationError(
                f"window {first_year}-{last_year} outside rate years "
                f"{self.start_year}-{self.end_year}"
            )
        return self.rates[i:j + 1]

    def mean(self) -> float:
        return float(np.mean(self.rates))


def _require_positive_complete(series: AnnualSeries, what: str = "series") -> np.ndarray:
    x = series.values
    if np.isnan(x).any():
        raise ValidationError(f"{what} has missing values; interpolate first")
    if (x <= 0).any():
        raise DomainError(f"{what} must be strictly positive")
    return x


def growth_rates(series: AnnualSeries, convention: str = "arithmetic") -> GrowthSeries:
    """Year-on-year growth in percent.

    ``arithmetic`` gives ``100 * (x_t / x_{t-1} - 1)``, ``logarithmic`` gives
    ``100 * ln(x_t / x_{t-1})``.
    """
    convention = normalize_convention(convention)
    x = _require_positive_complete(series)
    if x.size < 2:
        raise ValidationError("growth rates need at least two observations")
    ratio = x[1:] / x[:-1]
    rates = 100.0 * (ratio - 1.0) if convention == "arithmetic" else 100.0 * np.log(ratio)
    return GrowthSeries(series.start_year + 1, rates, convention)


def compound_annual_growth(series: AnnualSeries) -> float:
    """Constant annual rate (percent) carrying the first value to the last."""
    if len(series) < 2:
        raise ValidationError("compound growth needs at least two observations")
    first, last = float(series.values[0]), float(series.values[-1])
    if not (first > 0 and last > 0):
        raise DomainError("compound growth needs positive endpoints")
    intervals = len(series) - 1
    return 100.0 * ((last / first) ** (1.0 / intervals) - 1.0)


def interpolate_gaps(series: AnnualSeries, method: str = "geometric") -> AnnualSeries:
    """Fill missing years from the surrounding benchmark (non-missing) years.

    Interior gaps follow a constant growth rate between the flanking
    benchmarks (``method="linear"`` uses a straight line instead).  Leading and
    trailing gaps are extrapolated with the rate implied by the nearest pair of
    benchmarks.  Benchmark values are returned unchanged.
    """
    if method not in ("geometric", "linear"):
        raise ValidationError(f"unknown interpolation method {method!r}")
    x = np.array(series.values, dtype=float)
    known = np.flatnonzero(~np.isnan(x))
    if known.size < 2:
        raise ValidationError("interpolation needs at least two benchmark values")
    if known.size == x.size:
        return series
    if method == "geometric" and (x[known] <= 0).any():
        raise DomainError("geometric interpolation needs positive benchmarks")

    def between(a: int, b: int, i: int) -> float:
        frac = (i - a) / (b - a)
        if method == "geometric":
            return x[a] * (x[b] / x[a]) ** frac
        return x[a] + (x[b] - x[a]) * frac

    out = x.copy()
    for a, b in zip(known[:-1], known[1:]):
        for i in range(a + 1, b):
            out[i] = between(a, b, i)
    a, b = known[0], known[1]
    for i in range(0, a):
        out[i] = between(a, b, i)
    a, b = known[-2], known[-1]
    for i in range(b + 1, x.size):
        out[i] = between(a, b, i)
    return AnnualSeries(series.start_year, out)


@dataclass(frozen=True, eq=False)
class PanelDataset:
    """Aligned value-added, labor and capital series.

    Only labor may carry missing entries (they are filled by
    :func:`interpolate_gaps` before estimation).
    """

    value_added: AnnualSeries
    labor: AnnualSeries
    capital: AnnualSeries

    def __post_init__(self):
        spans = {(s.start_year, len(s)) for s in (self.value_added, self.labor, self.capital)}
        if len(spans) != 1:
            raise ValidationError("value_added, labor and capital must cover the same years")
        for name in ("value_added", "capital"):
            if getattr(self, name).has_missing:
                raise ValidationError(f"{name} may not have missing values")
        for name in ("value_added", "labor", "capital"):
            vals = getattr(self, name).values
            if (vals[~np.isnan(vals)] <= 0).any():
                raise DomainError(f"{name} must be strictly positive")

    @classmethod
    def from_arrays(cls, start_year: int, value_added, labor, capital) -> "PanelDataset":
        return cls(AnnualSeries(start_year, value_added), AnnualSeries(start_year, labor),
                   AnnualSeries(start_year, capital))

    def __len__(self) -> int:
        return len(self.value_added)

    @property
    def start_year(self) -> int:
        return self.value_added.start_year

    @property
    def end_year(self) -> int:
        return self.value_added.end_year

    @property
    def years(self) -> np.ndarray:
        return self.value_added.years

    @property
    def is_complete(self) -> bool:
        return not self.labor.has_missing

    def interpolated(self, method: str = "geometric") -> "PanelDataset":
        return PanelDataset(self.value_added, interpolate_gaps(self.labor, method), self.capital)

    def window(self, first_year: int, last_year: int) -> "PanelDataset":
        return PanelDataset(self.value_added.window(first_year, last_year),
                            self.labor.window(first_year, last_year),
                            self.capital.window(first_year, last_year))

    def equals(self, other: "PanelDataset") -> bool:
        return all(getattr(self, f).equals(getattr(other, f))
                   for f in ("value_added", "labor", "capital"))


def per_capita_log_panel(panel: PanelDataset) -> tuple[AnnualSeries, AnnualSeries]:
    """Return ``(ln(Q/L), ln(K/L))`` over the panel's years."""
    q = _require_positive_complete(panel.value_added, "value_added")
    k = _require_positive_complete(panel.capital, "capital")
    l = _require_positive_complete(panel.labor, "labor")
    return (AnnualSeries(panel.start_year, np.log(q / l)),
            AnnualSeries(panel.start_year, np.log(k / l)))


# --- CSV ingestion -----------------------------------------------------------

def _parse_rows(rows: Iterable[Sequence[str]], source: str) -> PanelDataset:
    rows = iter(rows)
    try:
        header = [h.strip() for h in next(rows)]
    except StopIteration:
        raise ValidationError(f"{source}: empty file") from None
    if tuple(header) != CSV_HEADER:
        raise ValidationError(f"{source}: header must be {','.join(CSV_HEADER)}, got {','.join(header)}")
    years, q, l, k = [], [], [], []
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ValidationError(f"{source}:{lineno}: expected 4 fields, got {len(row)}")
        y_txt, q_txt, l_txt, k_txt = (c.strip() for c in row)
        try:
            year = int(y_txt)
            va = float(q_txt)
            cap = float(k_txt)
            lab = math.nan if l_txt == "" else float(int(l_txt))
        except ValueError as exc:
            raise ValidationError(f"{source}:{lineno}: {exc}") from None
        if not (math.isfinite(va) and math.isfinite(cap)):
            raise ValidationError(f"{source}:{lineno}: non-finite value")
        if years and year != years[-1] + 1:
            raise ValidationError(
                f"{source}:{lineno}: years must be consecutive and ascending "
                f"({years[-1]} followed by {year})"
            )
        years.append(year)
        q.append(va)
        l.append(lab)
        k.append(cap)
    if not years:
        raise ValidationError(f"{source}: no data rows")
    try:
        return PanelDataset.from_arrays(years[0], q, l, k)
    except ValidationError as exc:
        raise type(exc)(f"{source}: {exc}") from None


def read_panel_csv(path: str | PathLike) -> PanelDataset:
    """Read ``year,value_added,labor,capital`` rows; an empty labor cell is missing."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return _parse_rows(csv.reader(fh), str(path))
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None


def parse_panel_csv(text: str, source: str = "<string>") -> PanelDataset:
    return _parse_rows(csv.reader(io.StringIO(text)), source)


def _fmt_labor(v: float) -> str:
    if math.isnan(v):
        return ""
    if v != int(v):
        raise ValidationError("labor must hold whole persons to be written as CSV")
    return str(int(v))


def format_panel_csv(panel: PanelDataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for year, q, l, k in zip(panel.years, panel.value_added.values,
                             panel.labor.values, panel.capital.values):
        writer.writerow([int(year), repr(float(q)), _fmt_labor(l), repr(float(k))])
    return buf.getvalue()


def write_panel_csv(panel: PanelDataset, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_panel_csv(panel))
