"""Seeded Cobb-Douglas economies with known parameters.

Random numbers come from SplitMix64 with Box-Muller normals, both spelled out
here so that a generated panel is reproducible bit for bit from its seed on
any platform and in any language that implements the same recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import ValidationError
from .series import PanelDataset

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 generator (Steele, Lea and Flood 2014)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK
        self._spare: float | None = None

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform on (0, 1]: top 53 bits, shifted away from zero."""
        return ((self.next_u64() >> 11) + 1) * 2.0 ** -53

    def normal(self) -> float:
        """Standard normal by Box-Muller; the second deviate of each pair is cached."""
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1, u2 = self.uniform(), self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)])


Path = Union[float, Sequence[float]]


@dataclass(frozen=True)
class EconomySpec:
    """Parameters of a synthetic economy.

    Growth paths are arithmetic percent rates per year, either one constant
    or ``n_years - 1`` values.  The ``*_growth_sd`` fields add i.i.d. normal
    noise (percentage points) to the corresponding path.  The disturbance
    ``u_t = rho u_{t-1} + eps_t`` with ``eps ~ N(0, sigma^2)`` starts from its
    stationary distribution.
    """

    n_years: int = 31
    start_year: int = 1355
    alpha_true: float = 0.52
    ln_A0: float = 0.0
    tfp_growth: Path = 3.0
    capital_growth: Path = 2.2
    labor_growth: Path = 2.7
    tfp_growth_sd: float = 0.0
    capital_growth_sd: float = 0.0
    labor_growth_sd: float = 0.0
    rho: float = 0.0
    sigma: float = 0.0
    seed: int = 0
    initial_capital: float = 1000.0
    initial_labor: float = 50000.0

    def __post_init__(self):
        if self.n_years < 6:
            raise ValidationError("n_years must be at least 6")
        if self.sigma < 0:
            raise ValidationError("sigma must be nonnegative")
        if not abs(self.rho) < 1:
            raise ValidationError("|rho| must be below 1")
        if not 0 < self.alpha_true < 1:
            raise ValidationError("alpha_true must lie in (0, 1)")
        if not (self.initial_capital > 0 and self.initial_labor >= 1):
            raise ValidationError("initial capital and labor must be positive")
        for name in ("tfp_growth_sd", "capital_growth_sd", "labor_growth_sd"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be nonnegative")
        for name in ("tfp_growth", "capital_growth", "labor_growth"):
            self.path(name)

    def path(self, name: str) -> np.ndarray:
        value = getattr(self, name)
        arr = np.broadcast_to(np.asarray(value, dtype=float), (self.n_years - 1,)) \
            if np.ndim(value) == 0 else np.asarray(value, dtype=float)
        if arr.shape != (self.n_years - 1,):
            raise ValidationError(f"{name} needs one value or {self.n_years - 1} values")
        return np.array(arr)


@dataclass(frozen=True, eq=False)
class EconomyTruth:
    """Every latent quantity behind a generated panel."""

    alpha: float
    ln_A: np.ndarray
    disturbance: np.ndarray
    innovations: np.ndarray
    capital_growth: np.ndarray = field(repr=False)
    labor_growth: np.ndarray = field(repr=False)
    tfp_growth: np.ndarray = field(repr=False)

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha

    @property
    def tfp_log_growth(self) -> np.ndarray:
        """``100 * (ln A_t - ln A_{t-1})``."""
        return 100.0 * np.diff(self.ln_A)

    @property
    def mean_tfp_log_growth(self) -> float:
        return float(np.mean(self.tfp_log_growth))

    @property
    def mean_tfp_growth(self) -> float:
        """Mean arithmetic growth rate of A."""
        return float(np.mean(self.tfp_growth))


def generate_economy(spec: EconomySpec) -> tuple[PanelDataset, EconomyTruth]:
    """Simulate ``Q_t = A_t K_t^alpha L_t^(1-alpha) exp(u_t)``.

    Draw order (fixed): for each year after the first, one normal each for
    the capital, labor and TFP growth noise; then the disturbance innovations
    for every year.  Labor is rounded to whole persons before output is
    computed, so the panel round-trips exactly through the CSV format.
    """
    rng = SplitMix64(spec.seed)
    n = spec.n_years
    g_k, g_l, g_a = spec.path("capital_growth"), spec.path("labor_growth"), spec.path("tfp_growth")
    for t in range(n - 1):
        g_k[t] += spec.capital_growth_sd * rng.normal()
        g_l[t] += spec.labor_growth_sd * rng.normal()
        g_a[t] += spec.tfp_growth_sd * rng.normal()
    if (g_k <= -100).any() or (g_l <= -100).any() or (g_a <= -100).any():
        raise ValidationError("growth paths must keep every level positive")
    eps = spec.sigma * rng.normals(n)

    capital = spec.initial_capital * np.concatenate([[1.0], np.cumprod(1.0 + g_k / 100.0)])
    labor_raw = spec.initial_labor * np.concatenate([[1.0], np.cumprod(1.0 + g_l / 100.0)])
    labor = np.maximum(np.round(labor_raw), 1.0)
    ln_A = spec.ln_A0 + np.concatenate([[0.0], np.cumsum(np.log1p(g_a / 100.0))])

    u = np.empty(n)
    u[0] = eps[0] / math.sqrt(1.0 - spec.rho ** 2)
    for t in range(1, n):
        u[t] = spec.rho * u[t - 1] + eps[t]

    a = spec.alpha_true
    ln_q = ln_A + a * np.log(capital) + (1.0 - a) * np.log(labor) + u
    panel = PanelDataset.from_arrays(spec.start_year, np.exp(ln_q), labor, capital)
    truth = EconomyTruth(a, ln_A, u, eps, 100.0 * (capital[1:] / capital[:-1] - 1.0),
                         100.0 * (labor[1:] / labor[:-1] - 1.0), g_a)
    return panel, truth


def reference_economy_spec(seed: int, **overrides) -> EconomySpec:
    """Reference economy over 31 years: alpha 0.52, TFP ~3%/yr,
    capital ~2.2%/yr, labor ~2.7%/yr and AR(1) disturbances with rho 0.5.

    ``sigma`` is calibrated so the restricted AR(1) fit with a trend has a
    mean R-squared near 0.94 across seeds.
    """
    params = dict(n_years=31, start_year=1355, alpha_true=0.52, tfp_growth=3.0,
                  capital_growth=2.2, labor_growth=2.7, tfp_growth_sd=0.0,
                  capital_growth_sd=6.0, labor_growth_sd=4.0, rho=0.5, sigma=0.055, seed=seed)
    params.update(overrides)
    return EconomySpec(**params)
