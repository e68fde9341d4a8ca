"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 usage or schema error,
3 computation infeasible. Reports go to stdout (or ``--out``); diagnostics
go to stderr.

Every option may also be given in a ``--config`` file of ``key = value``
lines, keys spelled like the long option without the leading dashes
(``n-countries = 20``). Command-line flags override the file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict
from pathlib import Path

from . import io as tio
from .domain import Exogenous, SumOfSample, build_panel, world_gdp
from .econometrics import (
    f_test_panel_effects,
    fixed_effects,
    hausman,
    pooled,
    random_effects,
    regression_f_test,
    t_test_equals,
    wald_joint_test,
)
from .econometrics.distributions import two_sided_t
from .econometrics.results import TestResult
from .errors import GravityError, InvalidConfig, IoError, NegativeShare, SchemaError, SectorMismatch
from .gravity import Direction, ModelParams, ModelSpec, identification_alpha, predict_trade
from .synth import GenConfig, generate_flows, generate_world, noiseless, recovery_experiment
from .tradability import index_series, relative_tradability

USAGE_ERRORS = (SchemaError, IoError, NegativeShare, SectorMismatch, InvalidConfig)
NOISELESS_TOL = 1e-6


class UsageError(Exception):
    pass


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _world_mode(value: str):
    if value in (None, "sum"):
        return SumOfSample()
    try:
        v = float(value)
    except ValueError:
        raise UsageError(f"--world-gdp must be 'sum' or a positive number, got {value!r}") from None
    return Exogenous(v)


def _load_lambdas(path: str) -> dict:
    """Tradability index from a ``country,year,index`` CSV or a ``tradability`` JSON report."""
    raw = Path(path).read_bytes() if Path(path).exists() else None
    if raw is None:
        raise IoError(f"cannot read {path}")
    if raw.lstrip()[:1] == b"{":
        try:
            doc = json.loads(raw)
            return {(r["country"], int(r["year"])): float(r["index"]) for r in doc["index"]}
        except (ValueError, KeyError, TypeError) as exc:
            raise SchemaError(f"{path}: not a tradability report ({exc})") from exc
    lambdas, report = tio.read_lambda_csv(raw)
    _note_drops(path, report)
    return lambdas


def _note_drops(path, report) -> None:
    if report.rows_dropped:
        reasons = ", ".join(f"{k}={v}" for k, v in sorted(report.drop_reasons.items()))
        print(f"{path}: dropped {report.rows_dropped} of {report.rows_read} rows ({reasons})", file=sys.stderr)


# ------------------------------------------------------------------ commands


def cmd_tradability(args) -> int:
    table = relative_tradability(tio.read_world_sectors_csv(args.world_sectors))
    series = None
    if args.country_shares:
        raw = Path(args.country_shares).read_bytes() if Path(args.country_shares).exists() else None
        if raw is None:
            raise IoError(f"cannot read {args.country_shares}")
        if raw.strip():
            shares, report = tio.read_country_sector_shares_csv(raw)
            _note_drops(args.country_shares, report)
        else:
            shares = []
        series = index_series(shares, table)
    _emit(tio.write_report(tio.TradabilityReport(table, series), args.format), args.out)
    if args.emit_plot_data:
        lines = ["sector\tratio\trelative_tradability"]
        lines += [f"{e.sector}\t{e.ratio:.10g}\t{e.relative_tradability:.10g}" for e in table]
        Path(args.emit_plot_data).write_text("\n".join(lines) + "\n")
    return 0


def _read_inputs(args):
    flows, trade_rep = tio.read_trade_csv(args.trade)
    _note_drops(args.trade, trade_rep)
    gdps, gdp_rep = tio.read_gdp_csv(args.gdp)
    _note_drops(args.gdp, gdp_rep)
    return flows, gdps, trade_rep, gdp_rep


def cmd_estimate(args) -> int:
    flows, gdps, trade_rep, gdp_rep = _read_inputs(args)
    lambdas = _load_lambdas(args.lambda_source)
    year_range = tuple(args.year_range) if args.year_range else None
    panel = build_panel(flows, gdps, lambdas, year_range, _world_mode(args.world_gdp))

    wanted = ["pooled", "fe", "re"] if args.estimator == "all" else [args.estimator]
    fits, notes = {}, []
    fitters = {"pooled": pooled, "fe": fixed_effects, "re": random_effects}
    for key in ("pooled", "fe", "re"):
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                fits[key] = fitters[key](panel, cov_type=args.cov_type)
            notes.extend(str(w.message) for w in caught)
        except GravityError as exc:
            if key in wanted:
                raise
            notes.append(f"{key}: {type(exc).__name__}: {exc}")

    labels = {"pooled": "pooled", "fe": "fixed_effects", "re": "random_effects"}
    blocks = []
    for key in ("fe", "re", "pooled"):
        if key not in wanted:
            continue
        res = fits[key]
        tests = []
        joint = wald_joint_test if key == "re" else regression_f_test
        for fn, argv in ((joint, ()), (t_test_equals, (1, 1.0)), (t_test_equals, (2, 1.0))):
            try:
                tests.append(fn(res, *argv))
            except GravityError as exc:
                notes.append(f"{labels[key]}: {fn.__name__}: {exc}")
        blocks.append(tio.ResultBlock(labels[key], res, tests))

    cross = []
    for name, fn, a, b in (
        ("hausman", hausman, "fe", "re"),
        ("f_panel_effects", f_test_panel_effects, "pooled", "fe"),
    ):
        if a in fits and b in fits:
            try:
                cross.append(fn(fits[a], fits[b]))
            except GravityError as exc:
                notes.append(f"{name}: {type(exc).__name__}: {exc}")

    rep = panel.report
    meta = {
        "n_obs": panel.n_obs,
        "n_groups": panel.group_count,
        "flows_read": trade_rep.rows_read,
        "flows_kept": rep.rows_kept,
        "assembly_drops": dict(sorted(rep.drop_reasons.items())),
        "notes": notes,
    }
    bundle = tio.ReportBundle(blocks, cross, meta)
    _emit(tio.write_report(bundle, args.format), args.out)
    if args.emit_plot_data:
        lines = ["exporter\timporter\tyear\tln_trade\tln_lambda_exporter\tln_mass"]
        for o in panel.observations():
            lines.append(
                f"{o.pair_id[0]}\t{o.pair_id[1]}\t{o.year}\t{o.ln_trade:.10g}\t"
                f"{o.ln_lambda_exporter:.10g}\t{o.ln_mass:.10g}"
            )
        Path(args.emit_plot_data).write_text("\n".join(lines) + "\n")
    return 0


def cmd_identify(args) -> int:
    flows, gdps, _, _ = _read_inputs(args)
    spec = ModelSpec(args.model)
    lambdas = _load_lambdas(args.lambda_source) if args.lambda_source else {}
    if spec is ModelSpec.TRADABILITY and args.lambda_a is None and not lambdas:
        raise UsageError("the tradability model needs --lambda or --lambda-a")
    mode = _world_mode(args.world_gdp)
    gdp = {(g.country, g.year): g.gdp for g in gdps}
    yw_cache: dict[int, float] = {}
    actual, predicted = [], []
    skipped = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for f in flows:
            ya, yb = gdp.get((f.exporter, f.year)), gdp.get((f.importer, f.year))
            if ya is None or yb is None:
                skipped += 1
                continue
            if f.year not in yw_cache:
                yw_cache[f.year] = world_gdp(gdps, f.year, mode)
            lam = args.lambda_a
            if lam is None and spec is ModelSpec.TRADABILITY:
                idx = lambdas.get((f.exporter, f.year))
                if idx is None:
                    skipped += 1
                    continue
                lam = idx / 100.0
            params = ModelParams(args.gamma_a, args.gamma_b, lam if lam is not None else 1.0)
            actual.append(f.value)
            predicted.append(predict_trade(spec, params, ya, yb, yw_cache[f.year], Direction.EXPORT_OF_A).value)
    fit = identification_alpha(actual, predicted)
    if fit.alpha == 1.0:
        t = TestResult("t_alpha_eq_1", 0.0, (fit.df_resid,), 1.0, "t")
    elif fit.std_error == 0:
        t = TestResult("t_alpha_eq_1", math.copysign(sys.float_info.max, fit.alpha - 1), (fit.df_resid,), 0.0, "t",
                       saturated=True)
    else:
        t = TestResult("t_alpha_eq_1", fit.t_vs_one, (fit.df_resid,), two_sided_t(fit.t_vs_one, fit.df_resid), "t")
    doc = {
        "model": spec.value,
        "alpha": fit.alpha,
        "std_error": fit.std_error,
        "n_obs": fit.n,
        "df_resid": fit.df_resid,
        "skipped": skipped,
    }
    if args.format == "json":
        out = tio.report_dict(doc)
        out["tests"] = tio.report_dict([t])["tests"]
        data = (json.dumps(out, separators=(",", ":")) + "\n").encode()
    else:
        data = tio.write_report(doc, "tsv") + b"\n" + tio.write_report([t], "tsv")
    _emit(data, args.out)
    return 0


def _gen_config(args) -> GenConfig:
    if args.seed is None:
        raise UsageError("--seed is required")
    return GenConfig(
        n_countries=args.n_countries,
        n_years=args.n_years,
        first_year=args.first_year,
        lambda_range=(args.lambda_min, args.lambda_max),
        gdp_log_range=(args.gdp_log_min, args.gdp_log_max),
        sigma_noise=args.sigma_noise,
        pair_effect_sigma=args.pair_effect_sigma,
        correlate_effects_with_regressors=args.correlate_effects,
        effect_correlation=args.effect_correlation,
        lambda_varies_by_year=not args.lambda_constant,
        lambda_year_sigma=args.lambda_year_sigma,
        gdp_year_sigma=args.gdp_year_sigma,
        seed=args.seed,
    ).validate()


def cmd_simulate(args) -> int:
    config = _gen_config(args)
    world = generate_world(config)
    flows = generate_flows(world)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "trade": ("trade.csv", tio.write_trade_csv(flows)),
        "gdp": ("gdp.csv", tio.write_gdp_csv(world.gdp_records())),
        "lambda": ("lambda.csv", tio.write_lambda_csv(world.lambda_index())),
    }
    for name, data in files.values():
        (out / name).write_bytes(data)
    doc = {"config": asdict(config), "files": {k: str(out / v[0]) for k, v in files.items()}, "n_flows": len(flows)}
    _emit(tio.write_report(doc, "json"), None)
    return 0


def noiseless_check(config: GenConfig) -> dict:
    """Fit pooled, FE and RE to one noiseless world; report the worst deviation from (0, 1, 1)."""
    world = generate_world(noiseless(config))
    panel = build_panel(generate_flows(world), world.gdp_records(), world.lambda_index())
    errs = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name, fn in (("pooled", pooled), ("fixed_effects", fixed_effects), ("random_effects", random_effects)):
            b = fn(panel).coefficients
            errs[name] = max(abs(b[0]), abs(b[1] - 1), abs(b[2] - 1))
    worst = max(errs.values())
    return {"max_abs_error": errs, "tolerance": NOISELESS_TOL, "passed": bool(worst < NOISELESS_TOL)}


def cmd_verify(args) -> int:
    config = _gen_config(args)
    check = noiseless_check(config)
    summary = recovery_experiment(config, args.replications)
    doc = {"noiseless": check, "recovery": summary.as_dict(), "config": asdict(config)}
    _emit(tio.write_report(doc, "json") if args.format == "json" else tio.write_report(doc, "tsv"), args.out)
    if not check["passed"]:
        print("noiseless recovery failed tolerance", file=sys.stderr)
        return 1
    return 0


# ------------------------------------------------------------------ parsing


def _add_output(p):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "tsv"), default="json")


def _add_gen(p):
    d = GenConfig()
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-countries", type=int, default=d.n_countries)
    p.add_argument("--n-years", type=int, default=d.n_years)
    p.add_argument("--first-year", type=int, default=d.first_year)
    p.add_argument("--lambda-min", type=float, default=d.lambda_range[0])
    p.add_argument("--lambda-max", type=float, default=d.lambda_range[1])
    p.add_argument("--gdp-log-min", type=float, default=d.gdp_log_range[0])
    p.add_argument("--gdp-log-max", type=float, default=d.gdp_log_range[1])
    p.add_argument("--sigma-noise", type=float, default=d.sigma_noise)
    p.add_argument("--pair-effect-sigma", type=float, default=d.pair_effect_sigma)
    p.add_argument("--correlate-effects", action="store_true")
    p.add_argument("--effect-correlation", type=float, default=d.effect_correlation)
    p.add_argument("--lambda-constant", action="store_true", help="hold each country's lambda fixed across years")
    p.add_argument("--lambda-year-sigma", type=float, default=d.lambda_year_sigma)
    p.add_argument("--gdp-year-sigma", type=float, default=d.gdp_year_sigma)


def _add_trade_inputs(p):
    p.add_argument("--trade", required=True, help="CSV exporter,importer,year,value_usd")
    p.add_argument("--gdp", required=True, help="CSV country,year,gdp_usd")
    p.add_argument("--world-gdp", default="sum", help="'sum' (sample total) or a fixed positive value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tradegravity", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tradability", help="sector tradability table and country index")
    p.add_argument("--world-sectors", required=True)
    p.add_argument("--country-shares")
    p.add_argument("--emit-plot-data", metavar="TSV")
    _add_output(p)
    p.set_defaults(func=cmd_tradability)

    p = sub.add_parser("estimate", help="panel estimation of the log-linear gravity equation")
    _add_trade_inputs(p)
    p.add_argument("--lambda", dest="lambda_source", required=True,
                   help="CSV country,year,index (0-100) or a tradability JSON report")
    p.add_argument("--estimator", choices=("fe", "re", "pooled", "all"), default="all")
    p.add_argument("--year-range", nargs=2, type=int, metavar=("FIRST", "LAST"))
    p.add_argument("--cov-type", choices=("unadjusted", "clustered"), default="unadjusted")
    p.add_argument("--emit-plot-data", metavar="TSV")
    _add_output(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("identify", help="no-intercept regression of trade on model predictions")
    _add_trade_inputs(p)
    p.add_argument("--model", choices=[m.value for m in ModelSpec], default="perfect")
    p.add_argument("--gamma-a", type=float, default=0.0)
    p.add_argument("--gamma-b", type=float, default=0.0)
    p.add_argument("--lambda-a", type=float, default=None, help="uniform tradable share in (0, 1]")
    p.add_argument("--lambda", dest="lambda_source", help="per country-year index for the tradability model")
    _add_output(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("simulate", help="write a synthetic world as CSV files")
    _add_gen(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="Monte Carlo recovery experiment")
    _add_gen(p)
    p.add_argument("--replications", type=int, default=100)
    _add_output(p)
    p.set_defaults(func=cmd_verify)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _apply_config(parser, argv, cfg: dict[str, str]):
    """Turn config entries into argv prefixes so argparse does the type conversion."""
    ns, _ = parser.parse_known_args(argv)
    sub = parser._subparsers._group_actions[0].choices[ns.command]
    by_dest = {a.dest: a for a in sub._actions if a.option_strings}
    extra = []
    for k, v in cfg.items():
        if k == "lambda":
            k = "lambda_source"
        action = by_dest.get(k)
        if action is None:
            raise UsageError(f"unknown config key {k!r} for {ns.command}")
        flag = max(action.option_strings, key=len)
        if action.nargs == 0:
            if v.lower() in ("1", "true", "yes", "on"):
                extra.append(flag)
        elif action.nargs == 2:
            extra += [flag, *v.replace(",", " ").split()]
        else:
            extra += [flag, v]
    i = argv.index(ns.command)
    return argv[: i + 1] + extra + argv[i + 1 :]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.config:
            argv = _apply_config(parser, argv, _read_config(ns.config))
            ns = parser.parse_args(argv)
        return ns.func(ns)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except USAGE_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except GravityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
