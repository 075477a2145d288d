"""Command-line interface: reproducible runs with machine-readable output.

Each command assembles a run report (input digest, resolved options,
results, tool version). `--json` emits the report with floats fixed at
10 significant digits, so identical invocations produce byte-identical
output. Error paths exit nonzero with a single `error:`-prefixed line.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Optional

from . import __version__
from .data import load_csv, write_csv
from .datasets import BUNDLED_NAMES, load_bundled
from .dynamics import GENERATION_DAYS, Advantage, Proportion
from .errors import VariantFitError, WindowOutOfRange
from .estimate import fit
from .crude import crude_gammas
from .forecast import forecast as forecast_band
from .inference import (
    fisher_information,
    hac_sandwich,
    interval_for_gamma,
)
from .multivariant import load_multi_csv, fit_multi, write_multi_csv
from .repro import adjusted_R, infer_variant_R, stability_region, stability_region_csv
from .simulate import SimConfig, simulate
from . import data as data_module


def _round10(value):
    """Normalize floats to 10 significant digits for stable JSON output."""
    if isinstance(value, float):
        return float(f"{value:.10g}")
    if isinstance(value, dict):
        return {k: _round10(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round10(v) for v in value]
    return value


def _emit(report: dict, as_json: bool, human_lines: list[str]) -> None:
    if as_json:
        print(json.dumps(_round10(report), indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _load_input(source: str, period_days: float):
    if source.lower() in BUNDLED_NAMES:
        series = load_bundled(source)
        digest = {"dataset": source.lower()}
    else:
        series = load_csv(source, period_days=period_days)
        with open(source, "rb") as fh:
            digest = {
                "path": source,
                "sha256": hashlib.sha256(fh.read()).hexdigest(),
            }
    return series, digest


def _variance(series, result, args):
    if getattr(args, "fisher", False):
        return fisher_information(series, result)
    return hac_sandwich(series, result, args.hac)


def _interval_dict(est) -> dict:
    return {
        "point": est.gamma.value,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "period_days": est.gamma.period_days,
        "level": est.level,
    }


def _report_header(command: str, digest: dict, options: dict) -> dict:
    return {
        "tool": "variantfit",
        "version": __version__,
        "command": command,
        "input": digest,
        "options": options,
    }


def cmd_estimate(args) -> int:
    series, digest = _load_input(args.input, args.period_days)
    result = fit(series)
    variance = _variance(series, result, args)
    per_period = interval_for_gamma(variance, result, series.period_days, args.level)
    per_gen = interval_for_gamma(variance, result, args.gen_days, args.level)
    per_week = interval_for_gamma(variance, result, 7.0, args.level)
    report = _report_header(
        "estimate",
        digest,
        {
            "period_days": series.period_days,
            "gen_days": args.gen_days,
            "variance": variance.kind,
            "level": args.level,
        },
    )
    report.update(
        {
            "fit": {
                "alpha": result.params.alpha,
                "beta": result.params.beta,
                "log_likelihood": result.log_likelihood,
                "iterations": result.iterations,
                "score_norm": result.score_norm,
            },
            "covariance": variance.matrix.tolist(),
            "advantage": {
                "per_period": _interval_dict(per_period),
                "per_generation": _interval_dict(per_gen),
                "per_week": _interval_dict(per_week),
            },
        }
    )
    pct = int(round(args.level * 100))
    lines = [
        f"alpha = {result.params.alpha:.4f}   beta = {result.params.beta:.4f}   "
        f"({variance.kind} errors, {pct}% CI)",
        f"gamma per {series.period_days:g} days: {per_period.gamma.value:.4f}  "
        f"[{per_period.ci_low:.4f}, {per_period.ci_high:.4f}]",
        f"gamma per {args.gen_days:g} days (generation): {per_gen.gamma.value:.4f}  "
        f"[{per_gen.ci_low:.4f}, {per_gen.ci_high:.4f}]",
        f"gamma per week: {per_week.gamma.value:.4f}  "
        f"[{per_week.ci_low:.4f}, {per_week.ci_high:.4f}]",
    ]
    _emit(report, args.json, lines)
    return 0


def cmd_crude(args) -> int:
    series, digest = _load_input(args.input, args.period_days)
    measures = crude_gammas(series, level=args.level)
    mean = sum(m.value for m in measures) / len(measures)
    report = _report_header(
        "crude", digest, {"period_days": series.period_days, "level": args.level}
    )
    report.update(
        {
            "measures": [
                {"t": m.t_index, "value": m.value, "ci_low": m.ci_low, "ci_high": m.ci_high}
                for m in measures
            ],
            "mean": mean,
        }
    )
    lines = ["t,value,ci_low,ci_high"]
    lines += [
        f"{m.t_index},{m.value:.6g},{m.ci_low:.6g},{m.ci_high:.6g}" for m in measures
    ]
    lines.append(f"mean,{mean:.6g},,")
    _emit(report, args.json, lines)
    return 0


def cmd_forecast(args) -> int:
    series, digest = _load_input(args.input, args.period_days)
    t_all = series.t_values
    train_through = args.train_through if args.train_through is not None else t_all[-1]
    if train_through < t_all[0] or train_through > t_all[-1]:
        raise WindowOutOfRange(
            f"--train-through {train_through} outside data range [{t_all[0]}, {t_all[-1]}]"
        )
    records = [r for r in series.records if r.t_index <= train_through]
    if args.train_from is not None:
        records = [r for r in records if r.t_index >= args.train_from]
    if len(records) < 2:
        raise WindowOutOfRange("training window has fewer than 2 records")
    train = data_module.validate_series(records, period_days=series.period_days)
    result = fit(train)
    variance = _variance(train, result, args)
    horizons = [train_through + h for h in range(1, args.horizons + 1)]
    bands = {c: forecast_band(result, variance, horizons, c) for c in args.c}
    report = _report_header(
        "forecast",
        digest,
        {
            "train_from": args.train_from,
            "train_through": train_through,
            "horizons": args.horizons,
            "c": list(args.c),
            "variance": variance.kind,
        },
    )
    report.update(
        {
            "fit": {
                "alpha": result.params.alpha,
                "beta": result.params.beta,
                "gamma_per_period": result.gamma,
            },
            "bands": [
                {
                    "c": c,
                    "rows": [
                        {"t": t, "point": p, "lower": lo, "upper": hi}
                        for t, p, lo, hi in zip(b.t_values, b.point, b.lower, b.upper)
                    ],
                }
                for c, b in bands.items()
            ],
        }
    )
    lines = [
        f"in-sample gamma per {series.period_days:g} days: {result.gamma:.4f} "
        f"(window through t={train_through}, {len(train)} records)",
        "c,t,point,lower,upper",
    ]
    for c, b in bands.items():
        for t, p, lo, hi in zip(b.t_values, b.point, b.lower, b.upper):
            lines.append(f"{c:g},{t:g},{p:.6g},{lo:.6g},{hi:.6g}")
    _emit(report, args.json, lines)
    return 0


def _parse_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise VariantFitError(f"bad --contour grid {spec!r}; expected start:stop:step") from None
    if step <= 0:
        raise VariantFitError("grid step must be positive")
    values = []
    v = start
    while v <= stop + 1e-12:
        values.append(min(max(v, 0.0), 1.0))
        v += step
    return values


def cmd_infer_r(args) -> int:
    if args.from_fit is not None:
        series, digest = _load_input(args.from_fit, args.period_days)
        result = fit(series)
        variance = _variance(series, result, args)
        gamma_est = interval_for_gamma(variance, result, args.gen_days, args.level)
    elif args.gamma_gen is not None:
        digest = {"gamma_gen": args.gamma_gen}
        point = Advantage(args.gamma_gen, args.gen_days)
        from .inference import AdvantageEstimate

        lo, hi = (args.gamma_ci if args.gamma_ci else (args.gamma_gen, args.gamma_gen))
        gamma_est = AdvantageEstimate(
            gamma=point, ci_low=lo, ci_high=hi, level=args.level
        )
    else:
        raise VariantFitError("provide --gamma-gen or --from-fit")

    report = _report_header(
        "infer-r",
        digest,
        {
            "gen_days": args.gen_days,
            "level": args.level,
            "gamma_gen": gamma_est.gamma.value,
        },
    )
    lines = []
    if args.R is not None and args.lam is not None:
        inference = infer_variant_R(
            args.R, Proportion(args.lam), gamma_est.gamma
        )
        report["inference"] = {
            "R_all": inference.R_all,
            "lambda": inference.lam.value,
            "R_variant": inference.R_variant,
            "R_incumbent": inference.R_incumbent,
        }
        lines.append(
            f"R_variant = {inference.R_variant:.6g}   "
            f"R_incumbent = {inference.R_incumbent:.6g}"
        )
    if args.contour is not None:
        grid = [Proportion(v) for v in _parse_grid(args.contour)]
        rows = stability_region(gamma_est, grid)
        csv_text = stability_region_csv(rows)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
            lines.append(f"wrote {len(rows)} contour rows to {args.out}")
        else:
            lines.append(csv_text.rstrip("\n"))
        report["contour"] = [
            {"lambda": lam, "threshold": thr, "lo": lo, "hi": hi}
            for lam, thr, lo, hi in rows
        ]
    if "inference" not in report and "contour" not in report:
        raise VariantFitError("nothing to do: pass --R/--lambda and/or --contour")
    _emit(report, args.json, lines)
    return 0


def cmd_adjusted_r(args) -> int:
    value = adjusted_R(
        args.cases, args.cases_prev, args.tested, args.tested_prev,
        gen_days=args.gen_days, period_days=args.period_days,
        exponent=args.exponent,
    )
    report = _report_header(
        "adjusted-r",
        {"cases": args.cases, "cases_prev": args.cases_prev},
        {
            "gen_days": args.gen_days,
            "period_days": args.period_days,
            "exponent": args.exponent,
        },
    )
    report["R_all"] = value
    _emit(report, args.json, [f"R_all = {value:.6g}"])
    return 0


def cmd_simulate(args) -> int:
    config = SimConfig(
        gammas=tuple(args.gamma),
        initial_proportions=_initial_simplex(args),
        sequenced=tuple([args.n] * args.t),
        seed=args.seed,
        period_days=args.period_days,
    )
    series = simulate(config, replication=args.replication)
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        if config.n_variants == 2:
            write_csv(series, out)
        else:
            write_multi_csv(series, out)
    finally:
        if args.out:
            out.close()
    return 0


def _initial_simplex(args) -> tuple[float, ...]:
    lam0 = list(args.lambda0)
    if len(lam0) == len(args.gamma):
        lam0 = [1.0 - sum(lam0)] + lam0
    return tuple(lam0)


def cmd_multi(args) -> int:
    series = load_multi_csv(args.file, period_days=args.period_days)
    with open(args.file, "rb") as fh:
        digest = {"path": args.file, "sha256": hashlib.sha256(fh.read()).hexdigest()}
    bandwidth = None if args.fisher else args.hac
    params, variance = fit_multi(series, bandwidth=bandwidth)
    from .inference import normal_quantile

    z = normal_quantile(args.level)
    scale = args.gen_days / series.period_days
    import math

    variants = []
    for j, (beta, name) in enumerate(zip(params.betas, series.variant_names[1:])):
        se = math.sqrt(max(variance.matrix[2 * j + 1, 2 * j + 1], 0.0))
        variants.append(
            {
                "variant": name,
                "gamma_per_period": math.exp(beta),
                "gamma_per_generation": math.exp(scale * beta),
                "ci_low_per_generation": math.exp(scale * (beta - z * se)),
                "ci_high_per_generation": math.exp(scale * (beta + z * se)),
            }
        )
    report = _report_header(
        "multi",
        digest,
        {
            "period_days": series.period_days,
            "gen_days": args.gen_days,
            "variance": variance.kind,
            "level": args.level,
        },
    )
    report.update(
        {
            "numeraire": series.variant_names[0],
            "variants": variants,
            "covariance": variance.matrix.tolist(),
        }
    )
    lines = [f"numeraire: {series.variant_names[0]}",
             "variant,gamma_per_period,gamma_per_gen,ci_low,ci_high"]
    for v in variants:
        lines.append(
            f"{v['variant']},{v['gamma_per_period']:.6g},{v['gamma_per_generation']:.6g},"
            f"{v['ci_low_per_generation']:.6g},{v['ci_high_per_generation']:.6g}"
        )
    _emit(report, args.json, lines)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--period-days", type=float, default=7.0,
                        help="calendar days per t_index unit for CSV input (default 7)")
    parser.add_argument("--gen-days", type=float, default=GENERATION_DAYS,
                        help="generation period in days (default 4.7)")
    parser.add_argument("--level", type=float, default=0.95,
                        help="confidence level (default 0.95)")
    parser.add_argument("--hac", type=int, default=4, metavar="K",
                        help="Parzen HAC bandwidth (default 4)")
    parser.add_argument("--fisher", action="store_true",
                        help="use the Fisher (non-robust) variance instead of HAC")
    parser.add_argument("--json", action="store_true", help="emit a JSON run report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="variantfit",
        description="Estimate the growth advantage of an emerging virus variant.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="fit the two-variant model and report intervals")
    p.add_argument("input", help=f"bundled dataset ({', '.join(BUNDLED_NAMES)}) or CSV path")
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("crude", help="model-free per-period advantage measures")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_crude)

    p = sub.add_parser("forecast", help="forecast the variant proportion with bands")
    p.add_argument("input")
    p.add_argument("--train-from", type=int, default=None,
                   help="first t_index of the training window")
    p.add_argument("--train-through", type=int, default=None,
                   help="last t_index of the training window (default: last record)")
    p.add_argument("--horizons", type=int, default=10,
                   help="number of periods to forecast ahead (default 10)")
    p.add_argument("--c", type=float, action="append", default=None,
                   help="band half-width in standard deviations; repeatable (default 2)")
    _add_common(p)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("infer-r", help="variant reproduction number / stability contour")
    p.add_argument("--R", type=float, default=None, help="aggregate reproduction number")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="current variant proportion")
    p.add_argument("--gamma-gen", type=float, default=None,
                   help="per-generation advantage")
    p.add_argument("--gamma-ci", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"), help="CI endpoints for --gamma-gen")
    p.add_argument("--from-fit", default=None,
                   help="dataset or CSV to estimate the advantage from")
    p.add_argument("--contour", default=None, metavar="START:STOP:STEP",
                   help="lambda grid for the stability-region CSV")
    p.add_argument("--out", default=None, help="write the contour CSV here")
    _add_common(p)
    p.set_defaults(func=cmd_infer_r)

    p = sub.add_parser("adjusted-r", help="test-intensity-adjusted aggregate R")
    p.add_argument("--cases", type=float, required=True)
    p.add_argument("--cases-prev", type=float, required=True)
    p.add_argument("--tested", type=float, required=True)
    p.add_argument("--tested-prev", type=float, required=True)
    p.add_argument("--exponent", type=float, default=0.7,
                   help="testing-intensity exponent (default 0.7)")
    _add_common(p)
    p.set_defaults(func=cmd_adjusted_r)

    p = sub.add_parser("simulate", help="generate a synthetic series as CSV")
    p.add_argument("--gamma", type=float, action="append", required=True,
                   help="per-period advantage; repeat for extra variants")
    p.add_argument("--lambda0", type=float, action="append", required=True,
                   help="initial proportion of each non-numeraire variant")
    p.add_argument("--n", type=int, required=True, help="sequenced count per period")
    p.add_argument("--t", type=int, required=True, help="number of periods")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replication", type=int, default=0)
    p.add_argument("--period-days", type=float, default=7.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("multi", help="fit the m-variant multinomial model")
    p.add_argument("--file", required=True, help="multi-variant CSV (t,label,count_*)")
    _add_common(p)
    p.set_defaults(func=cmd_multi)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "c", "absent") is None:
        args.c = [2.0]
    try:
        return args.func(args)
    except VariantFitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: FileNotFound: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
