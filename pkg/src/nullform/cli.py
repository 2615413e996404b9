"""Command-line surface.

Subcommands: ttest, proptest, ftest, outliers, simulate, plot.  Human output
prints statistics at 7 significant digits; --json prints the full-precision
AnalysisReport.  Every test report carries both statistic forms and both
p-value routes.

Exit codes: 0 success, 2 usage error, 3 data/input error, 4 numeric or
domain error.  The default simulation seed comes from the NULLFORM_SEED
environment variable when the flag is absent.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .dataio import Dataset, file_digest, ingest_csv
from .diagnostics import residual_diagnostics, residual_gaps
from .errors import DataError, DomainError, NullformError, NumericError
from .linmodel import DesignMatrix, NestedSpec, f_geometry, fit, nested_f_test
from .montecarlo import Scenario, SimConfig, null_law_check, simulate_size_power
from .proportion import ProportionData, proportion_test
from .report import AnalysisReport
from .sample import Sample
from .specfun import std_normal_cdf
from .svgplot import emit_residual_plots
from .ttest import geometry, t_test

__all__ = ["run_command", "main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_SCENARIOS = {
    "t": Scenario.ONE_SAMPLE_T,
    "f": Scenario.NESTED_F,
    "proportion": Scenario.PROPORTION,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nullform",
        description=(
            "Classical tests in traditional and null-variance forms, with "
            "regression outlier diagnostics and equivalence checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_input: bool) -> None:
        p.add_argument("--alpha", type=float, default=0.05,
                       help="test level (default 0.05)")
        p.add_argument("--json", action="store_true",
                       help="print the JSON report instead of the human table")
        if with_input:
            p.add_argument("--input", required=True, help="CSV file to analyze")
            p.add_argument("--delimiter", default=",", help="CSV delimiter")
            p.add_argument("--no-header", action="store_true",
                           help="file has no header row; columns are col0, col1, ...")
            p.add_argument("--log-columns", default="",
                           help="comma-separated columns to natural-log transform")
            p.add_argument("--label-column", default=None,
                           help="text column holding observation identifiers")

    p = sub.add_parser("ttest", help="one-sample location test, both forms")
    add_common(p, with_input=True)
    p.add_argument("--mu0", type=float, required=True, help="hypothesized mean")
    p.add_argument("--column", default=None,
                   help="response column (default: first ingested column)")

    p = sub.add_parser("proptest", help="one-sample proportion test, both forms")
    add_common(p, with_input=False)
    p.add_argument("--successes", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p0", type=float, required=True, help="hypothesized proportion")
    p.add_argument("--alternative", choices=("two-sided", "less", "greater"),
                   default="two-sided")

    p = sub.add_parser("ftest", help="nested linear model F-test, both forms")
    add_common(p, with_input=True)
    p.add_argument("--response", required=True, help="response column")
    p.add_argument("--full-cols", required=True,
                   help="comma-separated predictor columns of the full model")
    p.add_argument("--reduced-cols", default="",
                   help="comma-separated prefix of --full-cols kept under H0")
    p.add_argument("--intercept", action="store_true",
                   help="prepend a constant column to both models")

    p = sub.add_parser("outliers", help="per-observation outlier diagnostics")
    add_common(p, with_input=True)
    p.add_argument("--response", required=True)
    p.add_argument("--predictors", default="",
                   help="comma-separated predictor columns (default: all others)")
    p.add_argument("--no-intercept", action="store_true",
                   help="do not prepend a constant column")

    p = sub.add_parser("simulate", help="size/power and null-law simulation")
    add_common(p, with_input=False)
    p.add_argument("--scenario", choices=sorted(_SCENARIOS), required=True)
    p.add_argument("--replicates", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="per-replicate sample size")
    p.add_argument("--effect", type=float, default=0.0)
    p.add_argument("--p1", type=int, default=1, help="reduced model columns (f scenario)")
    p.add_argument("--p2", type=int, default=1, help="tested block columns (f scenario)")
    p.add_argument("--p0", type=float, default=0.5, help="null proportion (proportion scenario)")
    p.add_argument("--seed", type=int, default=None,
                   help="64-bit seed (default: NULLFORM_SEED or 0)")

    p = sub.add_parser("plot", help="residual diagnostic panels as SVG")
    add_common(p, with_input=True)
    p.add_argument("--response", required=True)
    p.add_argument("--predictors", default="")
    p.add_argument("--no-intercept", action="store_true")
    p.add_argument("--out", required=True, help="output SVG path")

    return parser


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _load_dataset(args: argparse.Namespace, columns: tuple[str, ...] = ()) -> Dataset:
    return ingest_csv(
        args.input,
        delimiter=args.delimiter,
        header=not args.no_header,
        columns=columns,
        log_columns=tuple(_split_list(args.log_columns)),
        label_column=args.label_column,
    )


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


def _design_from(
    dataset: Dataset, predictor_names: list[str], intercept: bool
) -> DesignMatrix:
    columns: list[tuple[float, ...]] = []
    labels: list[str] = []
    if intercept:
        columns.append(tuple(1.0 for _ in range(dataset.n_rows)))
        labels.append("const")
    for name in predictor_names:
        columns.append(dataset.column(name))
        labels.append(name)
    if not columns:
        raise DomainError("the design needs at least one column")
    return DesignMatrix.from_columns(columns, labels)


def _cmd_ttest(args, argv) -> AnalysisReport:
    alpha = _check_alpha(args.alpha)
    dataset = _load_dataset(args)
    column = args.column or dataset.column_names[0]
    sample = Sample.from_iterable(dataset.column(column))
    res = t_test(sample, args.mu0)
    results = {
        "n": sample.n, "column": column, "mean": res.mean, "mu0": res.mu0,
        "s2": res.s2, "s0_2": res.s0_2, "t": res.t, "t0": res.t0,
        "r_ratio": res.r_ratio, "ssto": res.ssto, "sst": res.sst, "sse": res.sse,
        "cos2_theta": res.cos2_theta, "df": res.df,
        "p_value_t": res.p_value_t, "p_value_t0": res.p_value_t0,
        "degenerate": res.degenerate, "boundary": res.boundary,
    }
    if not res.degenerate:
        results["theta"] = geometry(sample, args.mu0).theta
    warnings = _drop_warnings(dataset)
    return AnalysisReport(
        test="ttest", command=("nullform", *argv), alpha=alpha,
        results=results,
        decisions={
            "reject_traditional": res.p_value_t <= alpha,
            "reject_null_form": res.p_value_t0 <= alpha,
        },
        input_digest=file_digest(args.input), warnings=warnings,
    )


def _cmd_proptest(args, argv) -> AnalysisReport:
    alpha = _check_alpha(args.alpha)
    res = proportion_test(ProportionData(args.successes, args.n), args.p0, alpha)
    if args.alternative == "two-sided":
        p_null, p_wald = res.p_value_null, res.p_value_wald
    elif args.alternative == "greater":
        p_null = 1.0 - std_normal_cdf(res.z_null)
        p_wald = 1.0 - std_normal_cdf(res.z_wald) if not res.wald_degenerate else (
            0.0 if res.z_wald > 0 else 1.0
        )
    else:
        p_null = std_normal_cdf(res.z_null)
        p_wald = std_normal_cdf(res.z_wald) if not res.wald_degenerate else (
            1.0 if res.z_wald > 0 else 0.0
        )
    results = {
        "successes": args.successes, "n": args.n, "p0": args.p0,
        "p_hat": res.p_hat, "z_null": res.z_null, "z_wald": res.z_wald,
        "p_value_null": p_null, "p_value_wald": p_wald,
        "ci_lower": res.ci_lower, "ci_upper": res.ci_upper,
        "alternative": args.alternative, "wald_degenerate": res.wald_degenerate,
    }
    return AnalysisReport(
        test="proptest", command=("nullform", *argv), alpha=alpha,
        results=results,
        decisions={
            "reject_null_variance_form": p_null <= alpha,
            "reject_wald_form": p_wald <= alpha,
        },
    )


def _cmd_ftest(args, argv) -> AnalysisReport:
    alpha = _check_alpha(args.alpha)
    full_names = _split_list(args.full_cols)
    reduced_names = _split_list(args.reduced_cols)
    if full_names[: len(reduced_names)] != reduced_names:
        raise DomainError(
            "--reduced-cols must be a prefix of --full-cols "
            f"(got {reduced_names} vs {full_names})"
        )
    dataset = _load_dataset(args)
    design = _design_from(dataset, full_names, args.intercept)
    p1 = len(reduced_names) + (1 if args.intercept else 0)
    spec = NestedSpec(design, p1=p1)
    y = Sample.from_iterable(dataset.column(args.response))
    res = nested_f_test(spec, y)
    geo = f_geometry(spec, y)
    n, rp1, p2 = res.dims
    results = {
        "response": args.response, "full_columns": design.labels,
        "n": n, "p1": rp1, "p2": p2,
        "sse1": res.sse1, "sse12": res.sse12, "ss2given1": res.ss2given1,
        "f_trad": res.f_trad, "f_null": res.f_null,
        "p_value_f": res.p_value_f, "p_value_beta": res.p_value_beta,
        "cos2_theta": res.cos2_theta, "saturated": res.saturated,
        "theta": geo.theta, "side_a": geo.a, "side_b": geo.b, "side_c": geo.c,
    }
    return AnalysisReport(
        test="ftest", command=("nullform", *argv), alpha=alpha,
        results=results,
        decisions={
            "reject_traditional": res.p_value_f <= alpha,
            "reject_null_form": res.p_value_beta <= alpha,
        },
        input_digest=file_digest(args.input), warnings=_drop_warnings(dataset),
    )


def _diagnostics_payload(args):
    """Shared by outliers and plot: dataset, design, table, fitted, labels."""
    dataset = _load_dataset(args)
    predictor_names = _split_list(args.predictors)
    if not predictor_names:
        predictor_names = [n for n in dataset.column_names if n != args.response]
    design = _design_from(dataset, predictor_names, not args.no_intercept)
    y = Sample.from_iterable(dataset.column(args.response))
    table = residual_diagnostics(design, y)
    fitted = fit(design, y).fitted
    labels = dataset.row_labels
    return dataset, design, table, fitted, labels


def _row_dict(row, labels):
    return {
        "index": row.index,
        "label": labels[row.index] if labels is not None else str(row.index),
        "leverage": row.leverage,
        "raw_residual": row.raw_residual,
        "standardized": row.standardized,
        "studentized": row.studentized,
        "outlier_p_value": row.outlier_p_value,
        "bonferroni_p_value": row.bonferroni_p_value,
        "gap": row.gap,
        "flagged": row.flagged,
    }


def _cmd_outliers(args, argv) -> AnalysisReport:
    alpha = _check_alpha(args.alpha)
    dataset, design, table, fitted, labels = _diagnostics_payload(args)
    ranked = residual_gaps(table)
    outliers = [
        row.index for row in table.rows
        if not row.flagged and row.outlier_p_value <= alpha
    ]
    results = {
        "response": args.response, "design_columns": design.labels,
        "n": table.n, "p": table.p, "outlier_df": table.n - table.p - 1,
        "outliers": [
            labels[i] if labels is not None else str(i) for i in outliers
        ],
        "gap_ranking": [
            {"label": labels[i] if labels is not None else str(i), "gap": g}
            for i, g in ranked
        ],
    }
    return AnalysisReport(
        test="outliers", command=("nullform", *argv), alpha=alpha,
        results=results,
        decisions={"any_outlier": bool(outliers)},
        input_digest=file_digest(args.input),
        diagnostics=tuple(_row_dict(row, labels) for row in table.rows),
        warnings=_drop_warnings(dataset),
    )


def _cmd_simulate(args, argv) -> AnalysisReport:
    alpha = _check_alpha(args.alpha)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("NULLFORM_SEED", "0"))
    scenario = _SCENARIOS[args.scenario]
    cfg = SimConfig(
        replicates=args.replicates, seed=seed, n=args.n, scenario=scenario,
        effect=args.effect, alpha=alpha, p1=args.p1, p2=args.p2, p0=args.p0,
    )
    res = simulate_size_power(cfg)
    results = {
        "scenario": scenario.value, "replicates": cfg.replicates, "n": cfg.n,
        "effect": cfg.effect, "seed": seed,
        "reject_rate_trad": res.reject_rate_trad,
        "reject_rate_null": res.reject_rate_null,
        "disagreements": res.disagreements,
    }
    if scenario is Scenario.NESTED_F:
        results["p1"], results["p2"] = cfg.p1, cfg.p2
    if scenario is Scenario.PROPORTION:
        results["p0"] = cfg.p0
    if cfg.effect == 0.0 and scenario is not Scenario.PROPORTION:
        results["ks_statistic"] = null_law_check(cfg)
        results["ks_critical_1pct"] = 1.63 / math.sqrt(cfg.replicates)
    return AnalysisReport(
        test="simulate", command=("nullform", *argv), alpha=alpha,
        results=results,
        decisions={"forms_agree_everywhere": res.disagreements == 0},
    )


def _cmd_plot(args, argv) -> AnalysisReport:
    alpha = _check_alpha(args.alpha)
    dataset, design, table, fitted, labels = _diagnostics_payload(args)
    text_labels = (
        list(labels) if labels is not None else [str(i) for i in range(table.n)]
    )
    emit_residual_plots(table, fitted, args.out, alpha=alpha, labels=text_labels)
    outliers = [
        text_labels[row.index] for row in table.rows
        if not row.flagged and row.outlier_p_value <= alpha
    ]
    return AnalysisReport(
        test="plot", command=("nullform", *argv), alpha=alpha,
        results={
            "response": args.response, "design_columns": design.labels,
            "n": table.n, "out": str(args.out), "labeled_outliers": outliers,
        },
        decisions={"any_outlier": bool(outliers)},
        input_digest=file_digest(args.input),
        warnings=_drop_warnings(dataset),
    )


def _drop_warnings(dataset: Dataset) -> tuple[str, ...]:
    if dataset.dropped_rows:
        return (f"dropped {dataset.dropped_rows} row(s) with unusable cells",)
    return ()


_DISPATCH = {
    "ttest": _cmd_ttest,
    "proptest": _cmd_proptest,
    "ftest": _cmd_ftest,
    "outliers": _cmd_outliers,
    "simulate": _cmd_simulate,
    "plot": _cmd_plot,
}


def _fmt(value) -> str:
    if value is None:
        return "--"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.7g}"
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value) if value else "(none)"
    return str(value)


def _print_human(report: AnalysisReport) -> None:
    print(f"nullform {report.test} (alpha = {_fmt(report.alpha)})")
    scalar = {
        k: v for k, v in report.results.items()
        if not (isinstance(v, list) and v and isinstance(v[0], dict))
    }
    width = max(len(k) for k in scalar) if scalar else 0
    for key, value in scalar.items():
        print(f"  {key:<{width}}  {_fmt(value)}")
    ranking = report.results.get("gap_ranking")
    if ranking:
        print("  gap ranking (largest first):")
        for entry in ranking:
            print(f"    {entry['label']:<24} {_fmt(entry['gap'])}")
    if report.diagnostics:
        print(
            f"  {'idx':>4} {'label':<20} {'leverage':>10} {'residual':>12} "
            f"{'standard.':>12} {'student.':>12} {'p_value':>10} {'gap':>10}"
        )
        for row in report.diagnostics:
            cells = [
                f"{row['index']:>4}",
                f"{row['label']:<20.20}",
                f"{_fmt(row['leverage']):>10}",
                f"{_fmt(row['raw_residual']):>12}",
                f"{_fmt(row['standardized']):>12}",
                f"{_fmt(row['studentized']):>12}",
                f"{_fmt(row['outlier_p_value']):>10}",
                f"{_fmt(row['gap']):>10}",
            ]
            flag = "  <- flagged (leverage 1)" if row["flagged"] else ""
            print("  " + " ".join(cells) + flag)
    print("decisions:")
    for key, value in report.decisions.items():
        print(f"  {key:<28} {_fmt(value)}")
    for warning in report.warnings:
        print(f"warning: {warning}")


def run_command(argv) -> int:
    """Parse argv (without the program name), run, print, return exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else EXIT_OK
    try:
        report = _DISPATCH[args.command](args, tuple(argv))
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DomainError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NullformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        _print_human(report)
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
