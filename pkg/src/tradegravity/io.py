"""Flat-file ingestion and report serialization.

CSV dialect: comma separated, ``.`` decimal point, no thousands separators,
LF or CRLF line endings, header on the first row. Country and sector
labels are opaque, case-sensitive tokens.

Schemas::

    trade          exporter,importer,year,value_usd
    gdp            country,year,gdp_usd
    world sectors  sector,world_gdp_share_pct,world_trade_share_pct   (percent)
    country shares country,year,sector,gdp_share                      (fraction)
    lambda         country,year,index                                 (0-100)
"""

from __future__ import annotations

import csv
import json
import math
import sys
import re
from collections import Counter
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import Any, Sequence

from .domain import CountryYearGDP, TradeFlow
from .econometrics.results import EstimationResult, TestResult
from .errors import IoError, NegativeShare, SchemaError
from .tradability import CountrySectorShares, IndexSeries, SectorRow, TradabilityTable

TRADE_HEADER = ("exporter", "importer", "year", "value_usd")
GDP_HEADER = ("country", "year", "gdp_usd")
WORLD_SECTORS_HEADER = ("sector", "world_gdp_share_pct", "world_trade_share_pct")
COUNTRY_SHARES_HEADER = ("country", "year", "sector", "gdp_share")
LAMBDA_HEADER = ("country", "year", "index")

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER = re.compile(r"[+-]?\d+")
SHARE_SUM_RANGE = (0.9, 1.1)


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_dropped: int = 0
    drop_reasons: Counter = field(default_factory=Counter)

    def drop(self, reason: str, n: int = 1) -> None:
        self.rows_dropped += n
        self.drop_reasons[reason] += n


def _read_text(source) -> str:
    try:
        if isinstance(source, (bytes, bytearray, memoryview)):
            data = bytes(source)
        elif isinstance(source, (str, Path)):
            data = Path(source).read_bytes()
        elif hasattr(source, "read"):
            data = source.read()
        else:
            raise IoError(f"cannot read from {type(source).__name__}")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise IoError(f"source is not valid UTF-8: {exc}") from exc


def _rows(source, header: Sequence[str]):
    """Yield data rows (line number, fields) after checking the header exactly."""
    text = _read_text(source)
    try:
        reader = csv.reader(StringIO(text, newline=""))
        first = next(reader, None)
        if first is None:
            raise SchemaError(f"empty file; expected header {','.join(header)}")
        got = [h.strip() for h in first]
        if got != list(header):
            missing = [h for h in header if h not in got]
            if missing:
                raise SchemaError(f"missing column(s): {', '.join(missing)}")
            raise SchemaError(f"header must be exactly {','.join(header)}, got {','.join(got)}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            yield reader.line_num, [c.strip() for c in row]
    except csv.Error as exc:
        raise SchemaError(f"malformed CSV: {exc}") from exc


def _number(s: str) -> float | None:
    return float(s) if _NUMBER.fullmatch(s) else None


def _integer(s: str) -> int | None:
    return int(s) if _INTEGER.fullmatch(s) else None


def read_trade_csv(source) -> tuple[list[TradeFlow], IngestReport]:
    report = IngestReport()
    flows, seen = [], set()
    for _, row in _rows(source, TRADE_HEADER):
        report.rows_read += 1
        if len(row) != 4:
            report.drop("wrong_field_count")
            continue
        exp, imp, ys, vs = row
        year, value = _integer(ys), _number(vs)
        if not exp or not imp:
            report.drop("empty_code")
        elif year is None:
            report.drop("bad_year")
        elif value is None or not math.isfinite(value):
            report.drop("bad_value")
        elif value < 0:
            report.drop("negative_value")
        elif exp == imp:
            report.drop("self_trade")
        elif (exp, imp, year) in seen:
            report.drop("duplicate_key")
        else:
            seen.add((exp, imp, year))
            flows.append(TradeFlow(exp, imp, year, value))
    return flows, report


def read_gdp_csv(source) -> tuple[list[CountryYearGDP], IngestReport]:
    report = IngestReport()
    out, seen = [], set()
    for _, row in _rows(source, GDP_HEADER):
        report.rows_read += 1
        if len(row) != 3:
            report.drop("wrong_field_count")
            continue
        country, ys, vs = row
        year, value = _integer(ys), _number(vs)
        if not country:
            report.drop("empty_code")
        elif year is None:
            report.drop("bad_year")
        elif value is None or not math.isfinite(value):
            report.drop("bad_value")
        elif value <= 0:
            report.drop("nonpositive_gdp")
        elif (country, year) in seen:
            report.drop("duplicate_key")
        else:
            seen.add((country, year))
            out.append(CountryYearGDP(country, year, value))
    return out, report


def read_world_sectors_csv(source) -> list[SectorRow]:
    out = []
    for line, row in _rows(source, WORLD_SECTORS_HEADER):
        if len(row) != 3 or not row[0]:
            raise SchemaError(f"line {line}: expected sector,gdp_share,trade_share")
        g, t = _number(row[1]), _number(row[2])
        if g is None or t is None or not (math.isfinite(g) and math.isfinite(t)):
            raise SchemaError(f"line {line}: shares must be decimal numbers")
        if g < 0 or t < 0:
            raise NegativeShare(f"line {line}: sector {row[0]!r} has a negative share")
        out.append(SectorRow(row[0], g, t))
    return out


def read_country_sector_shares_csv(source) -> tuple[list[CountrySectorShares], IngestReport]:
    """Group rows into one record per (country, year).

    A group whose shares do not sum to within [0.9, 1.1] is dropped whole.
    """
    report = IngestReport()
    groups: dict[tuple[str, int], dict[str, float]] = {}
    for _, row in _rows(source, COUNTRY_SHARES_HEADER):
        report.rows_read += 1
        if len(row) != 4:
            report.drop("wrong_field_count")
            continue
        country, ys, sector, vs = row
        year, share = _integer(ys), _number(vs)
        if not country or not sector:
            report.drop("empty_code")
        elif year is None:
            report.drop("bad_year")
        elif share is None or not math.isfinite(share):
            report.drop("bad_value")
        elif not 0.0 <= share <= 1.0:
            report.drop("share_out_of_unit_interval")
        elif sector in groups.get((country, year), {}):
            report.drop("duplicate_key")
        else:
            groups.setdefault((country, year), {})[sector] = share
    out = []
    lo, hi = SHARE_SUM_RANGE
    for (country, year), shares in groups.items():
        total = math.fsum(shares.values())
        if lo <= total <= hi:
            out.append(CountrySectorShares(country, year, shares))
        else:
            report.drop("share_sum_out_of_range", len(shares))
    return out, report


def read_lambda_csv(source) -> tuple[dict[tuple[str, int], float], IngestReport]:
    report = IngestReport()
    out: dict[tuple[str, int], float] = {}
    for _, row in _rows(source, LAMBDA_HEADER):
        report.rows_read += 1
        if len(row) != 3:
            report.drop("wrong_field_count")
            continue
        country, ys, vs = row
        year, value = _integer(ys), _number(vs)
        if not country:
            report.drop("empty_code")
        elif year is None:
            report.drop("bad_year")
        elif value is None or not math.isfinite(value):
            report.drop("bad_value")
        elif not 0.0 < value <= 100.0:
            report.drop("index_out_of_range")
        elif (country, year) in out:
            report.drop("duplicate_key")
        else:
            out[(country, year)] = value
    return out, report


def _csv_bytes(header: Sequence[str], rows) -> bytes:
    buf = StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().encode("utf-8")


def write_trade_csv(flows) -> bytes:
    return _csv_bytes(TRADE_HEADER, ((f.exporter, f.importer, f.year, repr(float(f.value))) for f in flows))


def write_gdp_csv(gdps) -> bytes:
    return _csv_bytes(GDP_HEADER, ((g.country, g.year, repr(float(g.gdp))) for g in gdps))


def write_lambda_csv(index: dict[tuple[str, int], float]) -> bytes:
    return _csv_bytes(LAMBDA_HEADER, ((c, y, repr(float(v))) for (c, y), v in sorted(index.items())))


# --------------------------------------------------------------------- reports


@dataclass
class TradabilityReport:
    table: TradabilityTable
    series: IndexSeries | None = None


@dataclass
class ResultBlock:
    label: str
    result: EstimationResult
    tests: list[TestResult] = field(default_factory=list)


@dataclass
class ReportBundle:
    """Several estimation results, cross-model tests, and free-form metadata."""

    blocks: list[ResultBlock]
    tests: list[TestResult] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _num(x):
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        x = math.copysign(sys.float_info.max, x)
    r = float(f"{x:.10g}")
    # rounding the saturated sentinel up would overflow
    return r if math.isfinite(r) else x


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    r = f"{x:.10g}"
    return r if math.isfinite(float(r)) else repr(x)


def _test_dict(t: TestResult) -> dict:
    d = {"name": t.name, "statistic": _num(t.statistic), "df": list(t.df), "p_value": _num(t.p_value)}
    if t.saturated:
        d["saturated"] = True
    if t.warning:
        d["warning"] = t.warning
    return d


def _result_dict(r: EstimationResult, tests=()) -> dict:
    return {
        "method": r.method.value,
        "names": list(r.names),
        "coefficients": [_num(b) for b in r.coefficients],
        "std_errors": [_num(s) for s in r.std_errors],
        "n_obs": r.n_obs,
        "n_groups": r.n_groups,
        "df_resid": r.df_resid,
        "ssr": _num(r.ssr),
        "theta": _num(r.theta),
        "sigma2_e": _num(r.sigma2_e),
        "sigma2_u": _num(r.sigma2_u),
        "cov_type": r.cov_type,
        "warnings": list(r.warnings),
        "tests": [_test_dict(t) for t in tests],
    }


def _table_dict(table: TradabilityTable) -> list[dict]:
    return [
        {
            "sector": e.sector,
            "world_gdp_share_pct": _num(e.world_gdp_share),
            "world_trade_share_pct": _num(e.world_trade_share),
            "ratio": _num(e.ratio),
            "classification": e.classification.value,
            "relative_tradability": _num(e.relative_tradability),
            "normalizer": e.is_normalizer,
        }
        for e in table
    ]


def _series_dict(series: IndexSeries) -> dict:
    return {
        "index": [
            {"country": c, "year": y, "index": _num(v), "binary_index": _num(series.binary_values.get((c, y)))}
            for (c, y), v in sorted(series.values.items())
        ],
        "averages": [
            {"country": c, "average": _num(v), "years": series.year_counts[c]}
            for c, v in sorted(series.averages.items())
        ],
    }


def _plain(obj):
    """Normalize nested metadata so it serializes deterministically."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (int, float)) or obj is None:
        return _num(obj)
    if hasattr(obj, "tolist"):
        return _plain(obj.tolist())
    return str(obj)


def report_dict(obj: Any, tests=()) -> dict:
    if isinstance(obj, EstimationResult):
        return _result_dict(obj, tests)
    if isinstance(obj, TradabilityTable):
        return {"sectors": _table_dict(obj)}
    if isinstance(obj, TradabilityReport):
        d = {"sectors": _table_dict(obj.table)}
        d.update(_series_dict(obj.series) if obj.series else {"index": [], "averages": []})
        return d
    if isinstance(obj, ReportBundle):
        return {
            "results": [dict(label=b.label, **_result_dict(b.result, b.tests)) for b in obj.blocks],
            "tests": [_test_dict(t) for t in obj.tests],
            "meta": _plain(obj.meta),
        }
    if isinstance(obj, (list, tuple)) and all(isinstance(t, TestResult) for t in obj):
        return {"tests": [_test_dict(t) for t in obj]}
    if isinstance(obj, dict):
        return _plain(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_report(obj: Any, format: str = "json", tests=()) -> bytes:
    """Serialize a result, table, test list or bundle; output is deterministic.

    Reals carry 10 significant digits in both formats.
    """
    if format == "json":
        text = json.dumps(report_dict(obj, tests), separators=(",", ":"), allow_nan=False)
        return (text + "\n").encode("utf-8")
    if format == "tsv":
        return "".join("\t".join(r) + "\n" for r in _tsv_rows(obj, tests)).encode("utf-8")
    raise ValueError(f"unknown report format {format!r}")


def _test_rows(tests) -> list[list[str]]:
    rows = [["test", "statistic", "df", "p_value"]]
    for t in tests:
        rows.append([t.name, _fmt(t.statistic), ",".join(str(d) for d in t.df), _fmt(t.p_value)])
    return rows


def _tsv_rows(obj, tests=()) -> list[list[str]]:
    if isinstance(obj, EstimationResult):
        obj = ReportBundle([ResultBlock(obj.method.value, obj, list(tests))])
    if isinstance(obj, TradabilityTable):
        obj = TradabilityReport(obj)
    if isinstance(obj, TradabilityReport):
        rows = [["sector", "world_gdp_share_pct", "world_trade_share_pct", "ratio", "result", "relative_tradability"]]
        for e in obj.table:
            rows.append([
                e.sector, _fmt(e.world_gdp_share), _fmt(e.world_trade_share),
                _fmt(e.ratio), e.classification.value, _fmt(e.relative_tradability),
            ])
        if obj.series is not None:
            rows.append([])
            rows.append(["country", "year", "index", "binary_index"])
            for (c, y), v in sorted(obj.series.values.items()):
                rows.append([c, str(y), _fmt(v), _fmt(obj.series.binary_values.get((c, y)))])
            rows.append([])
            rows.append(["country", "average_index", "years"])
            for c, v in sorted(obj.series.averages.items()):
                rows.append([c, _fmt(v), str(obj.series.year_counts[c])])
        return rows
    if isinstance(obj, ReportBundle):
        return _bundle_rows(obj)
    if isinstance(obj, (list, tuple)) and all(isinstance(t, TestResult) for t in obj):
        return _test_rows(obj)
    if isinstance(obj, dict):
        return [[str(k), _fmt(v) if isinstance(v, (int, float)) else json.dumps(_plain(v))] for k, v in obj.items()]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _bundle_rows(bundle: ReportBundle) -> list[list[str]]:
    """Side-by-side layout: one column per estimator, coefficient rows with
    standard errors beneath, then sample sizes and per-model tests."""
    blocks = bundle.blocks
    rows = [["row"] + [b.label for b in blocks]]
    names: list[str] = []
    for b in blocks:
        names.extend(n for n in b.result.names if n not in names)

    def cell(b, fn):
        try:
            return fn(b)
        except (ValueError, IndexError):
            return ""

    for n in names:
        rows.append([n] + [cell(b, lambda b: _fmt(b.result[n])) for b in blocks])
        rows.append([f"se({n})"] + [
            cell(b, lambda b: _fmt(b.result.std_errors[b.result.names.index(n)])) for b in blocks
        ])
    for label, fn in (
        ("n_obs", lambda r: str(r.n_obs)),
        ("n_groups", lambda r: str(r.n_groups)),
        ("df_resid", lambda r: str(r.df_resid)),
        ("ssr", lambda r: _fmt(r.ssr)),
        ("theta", lambda r: _fmt(r.theta)),
    ):
        rows.append([label] + [fn(b.result) for b in blocks])
    test_names: list[str] = []
    for b in blocks:
        test_names.extend(t.name for t in b.tests if t.name not in test_names)
    for tn in test_names:
        found = [{t.name: t for t in b.tests}.get(tn) for b in blocks]
        rows.append([tn] + [_fmt(t.statistic) if t else "" for t in found])
        rows.append([f"{tn} df"] + [",".join(map(str, t.df)) if t else "" for t in found])
        rows.append([f"{tn} p"] + [_fmt(t.p_value) if t else "" for t in found])
    if bundle.tests:
        rows.append([])
        rows.extend(_test_rows(bundle.tests))
    if bundle.meta:
        rows.append([])
        for k, v in bundle.meta.items():
            rows.append([str(k), _fmt(v) if isinstance(v, (int, float)) else json.dumps(_plain(v))])
    return rows
