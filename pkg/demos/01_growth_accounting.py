# %% [markdown]
# # Growth accounting from average growth rates
#
# Output growth splits into a capital term, a labor term and a residual.
# With elasticities alpha and beta = 1 - alpha:
#
#     tfp = v - alpha * k - beta * l
#
# The residual is computed last, so the three contributions always add back
# to output growth.

# %%
from tfpkit import PeriodSpec, TfpSeries, decompose_period
from tfpkit.report import format_number

d = decompose_period(5.48, 2.21, 2.65, alpha=0.52)
for name, c, s in zip(("capital", "labor", "tfp"), d.contributions, d.shares):
    print(f"{name:8s} {format_number(c):>8s} pp  {format_number(s):>8s} %")

# %% [markdown]
# ## Sub-periods
#
# Five plan windows, each with its own average growth rates
# (value added, capital, labor).

# %%
windows = {
    (1356, 1367): (0.01, 1.26, 3.80),
    (1368, 1373): (13.91, 9.43, 4.11),
    (1374, 1378): (5.49, -3.99, 2.65),
    (1379, 1383): (14.80, 6.01, 0.38),
    (1384, 1385): (13.38, -0.23, 9.49),
}
print(f"{'window':>11s} {'labor':>8s} {'capital':>8s} {'tfp':>8s}")
for (a, b), (v, k, l) in windows.items():
    row = decompose_period(v, k, l, 0.52, period=(a, b))
    print(f"{a}-{b} {row.labor_contribution:8.4f} {row.capital_contribution:8.4f} {row.tfp_contribution:8.4f}")

# %% [markdown]
# A window with almost no output growth (the first one) gives a large
# negative residual: inputs grew while output stood still.  Shares are
# undefined when output growth is exactly zero.

# %%
print(decompose_period(0.0, 1.0, 2.0, 0.52).shares)

# %% [markdown]
# ## A yearly TFP series
#
# Yearly residuals can be wrapped directly and averaged over windows.

# %%
yearly = [-3.46, -13.88, -10.50, 1.68, 1.52, 14.42, 5.67, 1.20, -5.09, -16.67,
          1.44, -5.55, -0.48, 17.36, 0.95, 1.99, -6.31, 18.05, 2.51, 9.25,
          -6.00, 8.62, 12.97, -2.82, 6.33, 19.07, 11.38, 5.58, 10.70, 8.33]
tfp = TfpSeries.from_rates(1356, yearly)
print("mean", round(tfp.mean, 3))
for a, b in PeriodSpec.parse("1356-1367,1368-1373,1374-1378,1379-1383,1384-1385"):
    print(f"{a}-{b}", round(tfp.window_mean(a, b), 3))
