"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or validation error,
3 numeric failure (singular design, non-convergence, explosive AR(1)).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import NumericError, TfpkitError, ValidationError
from .pipeline import PipelineConfig, load_panel, run_pipeline
from .report import emit_report
from .series import AnnualSeries, PanelDataset, format_panel_csv, write_panel_csv
from .synthetic import EconomySpec, generate_economy

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

STAGE_SECTIONS = {
    "run": ("data", "unit_root", "estimation", "diagnostics", "cointegration", "tfp", "decomposition"),
    "unitroot": ("data", "unit_root"),
    "estimate": ("data", "estimation"),
    "diagnose": ("data", "diagnostics"),
    "accounting": ("data", "tfp", "decomposition"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _alpha(text: str):
    if text == "fit":
        return "fit"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'fit' or a number in (0, 1)") from None


def _add_input(p):
    p.add_argument("--input", required=True, help="panel CSV (year,value_added,labor,capital)")
    p.add_argument("--no-interpolate", dest="interpolate", action="store_false",
                   help="fail on missing labor values instead of interpolating")


def _add_analysis(p):
    _add_input(p)
    p.add_argument("--convention", default="arithmetic", choices=["arithmetic", "log"])
    p.add_argument("--spec", default="trend", choices=["none", "constant", "trend"],
                   help="deterministic terms of the unit-root regressions")
    p.add_argument("--significance", type=float, default=0.05, choices=[0.01, 0.05, 0.10])
    p.add_argument("--no-ar1", dest="ar1", action="store_false", help="plain OLS, no AR(1) term")
    p.add_argument("--ar1-method", default="difference", choices=["difference", "full_sample"])
    p.add_argument("--alpha", type=_alpha, default="fit", help="'fit' or a fixed capital elasticity")
    p.add_argument("--periods", default=None, help="sub-period windows, e.g. 1356-1367,1368-1373")
    p.add_argument("--averaging", default="mean", choices=["mean", "compound"])
    p.add_argument("--trend", action="store_true", help="add a time trend to the production function")
    p.add_argument("--lm-lags", type=int, default=1, help="lag order of the serial-correlation LM test")
    p.add_argument("--eg-critical-values", action="store_true",
                   help="Engle-Granger critical values for the residual test")
    p.add_argument("--format", default="text", choices=["text", "csv", "json"])
    p.add_argument("--out", default=None, help="output file (a directory for csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tfpkit", description="Growth accounting and production-function estimation.")
    parser.add_argument("--version", action="version", version=f"tfpkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "run": "full pipeline",
        "unitroot": "ADF/PP tests and integration order",
        "estimate": "restricted and unrestricted production functions",
        "diagnose": "residual diagnostics of the restricted fit",
        "accounting": "TFP series and growth decomposition",
    }
    for name, text in helps.items():
        _add_analysis(sub.add_parser(name, help=text))

    ing = sub.add_parser("ingest", help="validate, interpolate and echo a panel CSV")
    _add_input(ing)
    ing.add_argument("--out", default=None)

    syn = sub.add_parser("synth", help="generate a synthetic panel CSV")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--n-years", type=int, default=31)
    syn.add_argument("--start-year", type=int, default=1355)
    syn.add_argument("--alpha", type=float, default=0.52, help="true capital elasticity")
    syn.add_argument("--ln-a0", type=float, default=0.0)
    syn.add_argument("--tfp-growth", type=float, default=3.0)
    syn.add_argument("--capital-growth", type=float, default=2.2)
    syn.add_argument("--labor-growth", type=float, default=2.7)
    syn.add_argument("--tfp-sd", type=float, default=0.0)
    syn.add_argument("--capital-sd", type=float, default=6.0)
    syn.add_argument("--labor-sd", type=float, default=4.0)
    syn.add_argument("--rho", type=float, default=0.5)
    syn.add_argument("--sigma", type=float, default=0.055)
    syn.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    syn.add_argument("--truth", default=None, help="also write the latent values as JSON")
    return parser


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        input=args.input, interpolate=args.interpolate, convention=args.convention, spec=args.spec,
        significance=args.significance, ar1=args.ar1, ar1_method=args.ar1_method, alpha=args.alpha,
        periods=args.periods, averaging=args.averaging, trend=args.trend, lm_lags=args.lm_lags,
        engle_granger_critical_values=args.eg_critical_values, format=args.format, out=args.out,
        sections=STAGE_SECTIONS[args.command],
    )


def _write(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _synth(args) -> None:
    spec = EconomySpec(n_years=args.n_years, start_year=args.start_year, alpha_true=args.alpha,
                       ln_A0=args.ln_a0, tfp_growth=args.tfp_growth, capital_growth=args.capital_growth,
                       labor_growth=args.labor_growth, tfp_growth_sd=args.tfp_sd,
                       capital_growth_sd=args.capital_sd, labor_growth_sd=args.labor_sd,
                       rho=args.rho, sigma=args.sigma, seed=args.seed)
    panel, truth = generate_economy(spec)
    if args.out is None:
        sys.stdout.write(format_panel_csv(panel))
    else:
        try:
            write_panel_csv(panel, args.out)
        except OSError as exc:
            raise ValidationError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    if args.truth is not None:
        doc = {"seed": args.seed, "alpha": truth.alpha, "years": [int(y) for y in panel.years],
               "ln_A": truth.ln_A.tolist(), "disturbance": truth.disturbance.tolist(),
               "innovations": truth.innovations.tolist(),
               "tfp_log_growth": truth.tfp_log_growth.tolist(),
               "mean_tfp_log_growth": truth.mean_tfp_log_growth}
        _write(json.dumps(doc, indent=2) + "\n", args.truth)


def dispatch(args) -> None:
    if args.command == "synth":
        _synth(args)
    elif args.command == "ingest":
        cfg = PipelineConfig(input=args.input, interpolate=args.interpolate)
        _, panel = load_panel(cfg)
        # interpolated labor is rounded to whole persons so the echo re-reads as input
        panel = PanelDataset(panel.value_added, AnnualSeries(panel.labor.start_year, np.round(panel.labor.values)), panel.capital)
        _write(format_panel_csv(panel), args.out)
    else:
        cfg = _config(args)
        report = run_pipeline(cfg)
        text = emit_report(report, cfg.format, cfg.out)
        if text is not None:
            sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        dispatch(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"tfpkit: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, TfpkitError) as exc:
        print(f"tfpkit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
