"""Command-line surface: estimate on CSV data, tail tests, campaigns, samples.

Exit codes: 0 on success, 2 for parameter errors, 3 for data errors, 4 for
numerical degeneracies.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from .conddens import BH, HK, BhDensityEvaluator
from .correlation import li_indicator_correlation, li_indicator_slopes, quantile_correlation
from .errors import DataError, NumericalDegeneracyError, ParameterError
from .inference import confidence_interval, tail_tests
from .sampling import DGP_KINDS, BivariateSample, DgpSpec, RngStream, draw
from .simkit import CampaignSpec, run_coverage_campaign, run_test_campaign, true_rho

_DEFAULT_GRID = [round(0.01 * k, 2) for k in range(1, 100)]

_TIME_SERIES_NOTE = (
    "note: --time-series declares dependent data; estimates assume linear "
    "quantile functions and martingale-difference scores, which cannot be "
    "verified from the sample"
)


@dataclass
class RunConfig:
    taus: list[float]
    level: float
    density: str
    output: str
    seed: int
    compare_li: bool = False
    time_series: bool = False


def read_dataset(path: str) -> BivariateSample:
    """Strict two-column CSV reader; parse failures name the offending line."""
    xs: list[float] = []
    ys: list[float] = []
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1:
                if len(row) < 2:
                    raise DataError(f"{path} line 1: expected a two-column header")
                continue
            if not row:
                continue
            if len(row) < 2:
                raise DataError(f"{path} line {lineno}: expected two fields, got {len(row)}")
            try:
                xs.append(float(row[0]))
                ys.append(float(row[1]))
            except ValueError as exc:
                raise DataError(f"{path} line {lineno}: non-numeric value {exc}") from exc
    if len(xs) < 3:
        raise DataError(f"{path}: need at least 3 data rows, got {len(xs)}")
    return BivariateSample(np.array(xs), np.array(ys))


def _dedupe_taus(taus: list[float]) -> list[float]:
    seen: list[float] = []
    for t in taus:
        if t in seen:
            print(f"warning: duplicate tau {t} ignored", file=sys.stderr)
        else:
            seen.append(t)
    return seen


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def cmd_estimate(args) -> int:
    config = RunConfig(
        taus=_dedupe_taus(args.tau) if args.tau else list(_DEFAULT_GRID),
        level=args.level,
        density=args.density,
        output=args.output,
        seed=args.seed,
        compare_li=args.compare_li,
        time_series=args.time_series,
    )
    if config.time_series:
        print(_TIME_SERIES_NOTE, file=sys.stderr)
    sample = read_dataset(args.dataset)
    evaluator = BhDensityEvaluator(sample) if config.density == BH else None

    rows = []
    for tau in config.taus:
        estimate = quantile_correlation(sample, tau)
        row = {
            "tau": tau,
            "rho": estimate.rho_hat,
            "clipped": estimate.clipped,
            "exceeds_one": estimate.exceeds_one,
            "se": None,
            "lower": None,
            "upper": None,
            "p_value": None,
        }
        try:
            ci = confidence_interval(sample, tau, config.level, config.density, evaluator)
            row.update(se=ci.se, lower=ci.lower, upper=ci.upper, p_value=ci.p_value)
        except NumericalDegeneracyError as exc:
            # the point estimate stands; only the variance is unavailable
            print(f"warning: tau={tau}: {exc}", file=sys.stderr)
        if config.compare_li:
            for direction in ("xy", "yx"):
                row[f"li_{direction}"] = li_indicator_correlation(sample, tau, direction)
                mean_diff, prob_slope = li_indicator_slopes(sample, tau, direction)
                row[f"li_{direction}_meandiff"] = mean_diff
                row[f"li_{direction}_slope"] = prob_slope
        rows.append(row)

    if config.output == "json":
        _emit(json.dumps({"command": "estimate", "n": sample.n, "level": config.level,
                          "density": config.density, "rows": rows}))
    elif config.output == "csv":
        lines = ["tau,rho,lower,upper"]
        for row in rows:
            lo = repr(row["lower"]) if row["lower"] is not None else ""
            hi = repr(row["upper"]) if row["upper"] is not None else ""
            lines.append(f"{row['tau']!r},{row['rho']!r},{lo},{hi}")
        _emit("\n".join(lines))
    else:
        header = f"{'tau':>6} {'rho':>10} {'se':>10} {'lower':>10} {'upper':>10} {'p-value':>10}"
        if config.compare_li:
            header += f" {'li_xy':>10} {'li_yx':>10}"
        lines = [header]
        for row in rows:
            parts = [f"{row['tau']:>6.3f}", f"{row['rho']:>10.4f}"]
            for key in ("se", "lower", "upper", "p_value"):
                value = row[key]
                parts.append(f"{value:>10.4f}" if value is not None else f"{'--':>10}")
            if config.compare_li:
                parts.append(f"{row['li_xy']:>10.4f}")
                parts.append(f"{row['li_yx']:>10.4f}")
            flags = " clipped" if row["clipped"] else ""
            lines.append(" ".join(parts) + flags)
        _emit("\n".join(lines))
    return 0


def cmd_tailtest(args) -> int:
    taus = _dedupe_taus(args.tau) if args.tau else [0.05, 0.1, 0.25]
    for tau in taus:
        if not 0.0 < tau < 0.5:
            raise ParameterError(f"tail tests require 0 < tau < 0.5, got {tau}")
    if args.time_series:
        print(_TIME_SERIES_NOTE, file=sys.stderr)
    sample = read_dataset(args.dataset)
    evaluator = BhDensityEvaluator(sample) if args.density == BH else None

    rows = []
    for tau in taus:
        test_d, test_a = tail_tests(sample, tau, args.density, evaluator)
        for test in (test_d, test_a):
            rows.append(
                {
                    "tau": tau,
                    "kind": test.kind,
                    "estimate": test.estimate,
                    "se": test.se,
                    "t_stat": test.t_stat,
                    "p_value": test.p_value,
                    "degenerate": test.degenerate,
                }
            )

    if args.output == "json":
        _emit(json.dumps({"command": "tailtest", "n": sample.n, "density": args.density,
                          "rows": rows}))
    elif args.output == "csv":
        lines = ["tau,kind,estimate,t_stat,p_value"]
        for row in rows:
            t = repr(row["t_stat"]) if row["t_stat"] is not None else ""
            p = repr(row["p_value"]) if row["p_value"] is not None else ""
            lines.append(f"{row['tau']!r},{row['kind']},{row['estimate']!r},{t},{p}")
        _emit("\n".join(lines))
    else:
        lines = [f"{'tau':>6} {'kind':>4} {'estimate':>10} {'t-stat':>10} {'p-value':>10}"]
        for row in rows:
            if row["degenerate"]:
                lines.append(
                    f"{row['tau']:>6.3f} {row['kind']:>4} {row['estimate']:>10.4f}"
                    f" {'--':>10} {'--':>10} degenerate"
                )
            else:
                lines.append(
                    f"{row['tau']:>6.3f} {row['kind']:>4} {row['estimate']:>10.4f}"
                    f" {row['t_stat']:>10.3f} {row['p_value']:>10.4f}"
                )
        _emit("\n".join(lines))
    return 0


def _campaign_csv(report, kind: str) -> str:
    spec = report.spec
    lines = [
        "dgp,n,tau,method,level,reps,coverage,mean_ci_length,"
        "rejection_rate_d,rejection_rate_a,clipped_rate,error_rate"
    ]
    for row in report.rows:
        lines.append(
            ",".join(
                [
                    spec.dgp.kind,
                    str(spec.n),
                    repr(row.tau),
                    spec.density_method,
                    repr(spec.level),
                    str(spec.reps),
                    repr(row.coverage),
                    repr(row.mean_ci_length),
                    repr(row.rejection_rate_d),
                    repr(row.rejection_rate_a),
                    repr(row.clipped_rate),
                    repr(row.error_rate),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _campaign_table(report, kind: str) -> str:
    spec = report.spec
    head = (
        f"campaign: {kind}  dgp={spec.dgp.kind}  n={spec.n}  reps={spec.reps}  "
        f"density={spec.density_method}  level={spec.level}\n"
    )
    if kind == "coverage":
        lines = [head, f"{'tau':>6} {'coverage%':>10} {'length':>8} {'clipped%':>9} {'errors%':>8}"]
        for row in report.rows:
            lines.append(
                f"{row.tau:>6.3f} {100 * row.coverage:>10.1f} {row.mean_ci_length:>8.4f}"
                f" {100 * row.clipped_rate:>9.2f} {100 * row.error_rate:>8.2f}"
            )
    else:
        lines = [head, f"{'tau':>6} {'reject_D%':>10} {'reject_A%':>10} {'clipped%':>9} {'errors%':>8}"]
        for row in report.rows:
            lines.append(
                f"{row.tau:>6.3f} {100 * row.rejection_rate_d:>10.1f}"
                f" {100 * row.rejection_rate_a:>10.1f}"
                f" {100 * row.clipped_rate:>9.2f} {100 * row.error_rate:>8.2f}"
            )
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    taus = _dedupe_taus(args.tau) if args.tau else [0.1, 0.5, 0.9]
    dgp = DgpSpec(kind=args.dgp)
    spec = CampaignSpec(
        dgp=dgp,
        n=args.n,
        taus=tuple(taus),
        reps=args.reps,
        level=args.level,
        density_method=args.density,
        seed=args.seed,
    )
    if args.kind == "coverage":
        true_values = {
            tau: true_rho(dgp, tau, reps=args.true_reps, n_big=args.true_nbig,
                          seed=args.seed + 10_000_019)
            for tau in spec.taus
        }
        report = run_coverage_campaign(spec, true_values, n_jobs=args.jobs)
    else:
        report = run_test_campaign(spec, n_jobs=args.jobs)

    csv_path = f"{args.out}.csv"
    table_path = f"{args.out}.txt"
    with open(csv_path, "w") as handle:
        handle.write(_campaign_csv(report, args.kind))
    with open(table_path, "w") as handle:
        handle.write(_campaign_table(report, args.kind))
    print(f"wrote {csv_path} and {table_path}", file=sys.stderr)
    if args.output == "csv":
        _emit(_campaign_csv(report, args.kind))
    else:
        _emit(_campaign_table(report, args.kind))
    return 0


def cmd_sample(args) -> int:
    dgp = DgpSpec(kind=args.dgp)
    sample = draw(dgp, args.n, RngStream(args.seed))
    lines = ["x,y"]
    for x, y in zip(sample.xs, sample.ys):
        lines.append(f"{float(x)!r},{float(y)!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _add_common(parser, with_density=True):
    parser.add_argument("--tau", action="append", type=float,
                        help="quantile level; repeatable")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", choices=("json", "table", "csv"), default="table")
    if with_density:
        parser.add_argument("--density", choices=(BH, HK), default=BH,
                            help="conditional density strategy for standard errors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Quantile correlation estimation, tail tests, and simulations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="quantile correlations with CIs from a CSV file")
    p_est.add_argument("dataset", help="CSV file with header and two numeric columns")
    _add_common(p_est)
    p_est.add_argument("--level", type=float, default=0.95)
    p_est.add_argument("--compare-li", action="store_true",
                       help="include indicator-based quantile correlations")
    p_est.add_argument("--time-series", action="store_true")
    p_est.set_defaults(func=cmd_estimate)

    p_tail = sub.add_parser("tailtest", help="tail dependence and asymmetry tests")
    p_tail.add_argument("dataset")
    _add_common(p_tail)
    p_tail.add_argument("--level", type=float, default=0.95)
    p_tail.add_argument("--time-series", action="store_true")
    p_tail.set_defaults(func=cmd_tailtest)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo coverage or test campaigns")
    _add_common(p_sim)
    p_sim.add_argument("--dgp", choices=DGP_KINDS, required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--level", type=float, default=0.9)
    p_sim.add_argument("--kind", choices=("coverage", "tests"), default="coverage")
    p_sim.add_argument("--out", default="simout", help="output path prefix")
    p_sim.add_argument("--jobs", type=int, default=None)
    p_sim.add_argument("--true-reps", type=int, default=20,
                       help="replications for the true-value approximation")
    p_sim.add_argument("--true-nbig", type=int, default=200_000,
                       help="sample size for the true-value approximation")
    p_sim.set_defaults(func=cmd_simulate)

    p_samp = sub.add_parser("sample", help="emit a DGP sample as CSV")
    p_samp.add_argument("--dgp", choices=DGP_KINDS, required=True)
    p_samp.add_argument("--n", type=int, required=True)
    p_samp.add_argument("--seed", type=int, default=0)
    p_samp.add_argument("--out", default=None)
    p_samp.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalDegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        print("hint: check for constant columns or too few distinct values", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
