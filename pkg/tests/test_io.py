import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, PUBLISHED_SECTORS
from tradegravity import io as tio
from tradegravity.domain import CountryYearGDP, TradeFlow
from tradegravity.econometrics import EstimationResult, Method, TestResult
from tradegravity.errors import GravityError, IoError, NegativeShare, SchemaError
from tradegravity.tradability import SectorRow, relative_tradability

TRADE_HEAD = b"exporter,importer,year,value_usd\n"


def test_read_trade_row():
    flows, rep = tio.read_trade_csv(TRADE_HEAD + b"USA,CHN,2005,1000000.0\n")
    assert flows == [TradeFlow("USA", "CHN", 2005, 1e6)]
    assert rep.rows_read == 1 and rep.rows_dropped == 0


@pytest.mark.parametrize(
    "row, reason",
    [
        (b"USA,USA,2005,5.0", "self_trade"),
        (b"USA,CHN,2005,-3", "negative_value"),
        (b"USA,CHN,20x5,3", "bad_year"),
        (b"USA,CHN,2005,1,000", "wrong_field_count"),
        (b"USA,CHN,2005,1_000", "bad_value"),
        (b"USA,CHN,2005,nan", "bad_value"),
        (b",CHN,2005,1", "empty_code"),
    ],
)
def test_read_trade_drops(row, reason):
    flows, rep = tio.read_trade_csv(TRADE_HEAD + row + b"\n")
    assert flows == [] and rep.drop_reasons == {reason: 1}


def test_read_trade_crlf_and_duplicates():
    data = TRADE_HEAD.replace(b"\n", b"\r\n") + b"A,B,2000,1\r\nA,B,2000,2\r\nB,A,2000,0\r\n"
    flows, rep = tio.read_trade_csv(data)
    assert [f.value for f in flows] == [1.0, 0.0]
    assert rep.drop_reasons == {"duplicate_key": 1}


def test_read_trade_header_errors():
    with pytest.raises(SchemaError, match="value_usd"):
        tio.read_trade_csv(b"exporter,importer,year,value\nA,B,2000,1\n")
    with pytest.raises(SchemaError):
        tio.read_trade_csv(b"")


def test_unreadable_source(tmp_path):
    with pytest.raises(IoError):
        tio.read_trade_csv(tmp_path / "missing.csv")
    with pytest.raises(IoError):
        tio.read_trade_csv(b"\xff\xfe\x00garbage")


def test_read_gdp():
    data = b"country,year,gdp_usd\nJPN,2003,4.3e12\nJPN,2003,5e12\nDEU,2003,0\n"
    gdps, rep = tio.read_gdp_csv(data)
    assert gdps == [CountryYearGDP("JPN", 2003, 4.3e12)]
    assert rep.drop_reasons == {"duplicate_key": 1, "nonpositive_gdp": 1}
    assert rep.rows_read == 3


def test_read_world_sectors_fixture():
    rows = tio.read_world_sectors_csv(DATA / "world_sectors.csv")
    assert rows[0] == SectorRow("Agriculture", 3.35, 5.61)
    assert rows[-1] == SectorRow("Services", 68.37, 21.43)
    assert [r.sector for r in rows] == [t[0] for t in PUBLISHED_SECTORS]


def test_read_world_sectors_negative():
    with pytest.raises(NegativeShare):
        tio.read_world_sectors_csv(b"sector,world_gdp_share_pct,world_trade_share_pct\nX,-1,2\n")


def test_read_world_sectors_malformed():
    with pytest.raises(SchemaError):
        tio.read_world_sectors_csv(b"sector,world_gdp_share_pct,world_trade_share_pct\nX,abc,2\n")


SHARES_HEAD = b"country,year,sector,gdp_share\n"


def test_country_shares_grouping():
    groups, rep = tio.read_country_sector_shares_csv(SHARES_HEAD + b"A,2000,Agriculture,0.4\nA,2000,Services,0.6\n")
    assert len(groups) == 1 and groups[0].shares == {"Agriculture": 0.4, "Services": 0.6}


def test_country_shares_bad_sum():
    groups, rep = tio.read_country_sector_shares_csv(SHARES_HEAD + b"A,2000,Agriculture,0.2\nA,2000,Services,0.3\n")
    assert groups == [] and rep.drop_reasons == {"share_sum_out_of_range": 2}


def test_country_shares_out_of_unit_interval():
    groups, rep = tio.read_country_sector_shares_csv(SHARES_HEAD + b"A,2000,Services,1.2\n")
    assert groups == [] and rep.drop_reasons == {"share_out_of_unit_interval": 1}


def test_read_lambda_csv():
    lam, rep = tio.read_lambda_csv(b"country,year,index\nA,2000,7.5\nB,2000,0\n")
    assert lam == {("A", 2000): 7.5}
    assert rep.drop_reasons == {"index_out_of_range": 1}


def test_csv_writers_round_trip():
    flows = [TradeFlow("A", "B", 2000, 0.1 + 0.2), TradeFlow("B", "A", 2001, 1e-300)]
    back, _ = tio.read_trade_csv(tio.write_trade_csv(flows))
    assert back == flows
    gdps = [CountryYearGDP("A", 2000, 1.2345678901234567e13)]
    assert tio.read_gdp_csv(tio.write_gdp_csv(gdps))[0] == gdps
    lam = {("A", 2000): 7.123456789012345}
    assert tio.read_lambda_csv(tio.write_lambda_csv(lam))[0] == lam


def published_fe():
    return EstimationResult(
        Method.FIXED_EFFECTS, ("const", "ln_lambda_exporter", "ln_mass"),
        np.array([-4.4434, 0.9573, 1.0178]), np.diag([0.3798, 0.1039, 0.0130]) ** 2,
        6624, 1555, 100.0, 5067,
    )


def test_report_json_coefficients():
    out = tio.write_report(published_fe())
    assert b'"coefficients":[-4.4434,0.9573,1.0178]' in out
    assert b'"tests":[]' in out
    doc = json.loads(out)
    assert doc["n_obs"] == 6624 and doc["n_groups"] == 1555
    assert doc["std_errors"] == [0.3798, 0.1039, 0.013]


def test_report_deterministic():
    t = [TestResult("hausman", 12.3456789012345, (2,), 0.002, "chi2")]
    assert tio.write_report(published_fe(), tests=t) == tio.write_report(published_fe(), tests=t)
    assert tio.write_report(published_fe(), "tsv", t) == tio.write_report(published_fe(), "tsv", t)


def test_report_tradability_table():
    rows = tio.read_world_sectors_csv(DATA / "world_sectors.csv")
    doc = json.loads(tio.write_report(relative_tradability(rows)))
    assert [s["classification"] for s in doc["sectors"]] == [r[4] for r in PUBLISHED_SECTORS]
    tsv = tio.write_report(relative_tradability(rows), "tsv").decode().splitlines()
    assert tsv[0].split("\t")[-1] == "relative_tradability" and len(tsv) == 9


def test_report_rejects_unknown():
    with pytest.raises(TypeError):
        tio.write_report(object())
    with pytest.raises(ValueError):
        tio.write_report(published_fe(), "xml")


reals = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300)


@settings(max_examples=100)
@given(coefs=st.lists(reals, min_size=1, max_size=4), stat=reals, p=st.floats(0, 1))
def test_report_round_trip(coefs, stat, p):
    k = len(coefs)
    r = EstimationResult(Method.POOLED, tuple(f"b{i}" for i in range(k)), np.array(coefs), np.eye(k), 10, 2, 1.0, 5)
    t = TestResult("x", stat, (1, 2), p, "F")
    doc = json.loads(tio.write_report(r, tests=[t]))

    def same(a, b):
        return a == b or abs(a - b) <= 5e-10 * abs(b)

    assert all(same(a, b) for a, b in zip(doc["coefficients"], coefs))
    assert same(doc["tests"][0]["statistic"], stat) and same(doc["tests"][0]["p_value"], p)
    # the serialized value already has 10 significant digits, so a second pass is exact
    assert doc["coefficients"] == [float(f"{c:.10g}") for c in coefs]


@settings(max_examples=200)
@given(data=st.binary(max_size=300))
def test_ingestion_never_crashes(data):
    for reader in (tio.read_trade_csv, tio.read_gdp_csv, tio.read_world_sectors_csv,
                   tio.read_country_sector_shares_csv, tio.read_lambda_csv):
        for payload in (data, TRADE_HEAD + data, SHARES_HEAD + data):
            try:
                reader(payload)
            except GravityError:
                pass


@settings(max_examples=200)
@given(text=st.text(alphabet=st.sampled_from(list("AB,.-+e0123456789\n\r\" x")), max_size=200))
def test_trade_reader_reports_every_row(text):
    try:
        flows, rep = tio.read_trade_csv(TRADE_HEAD + text.encode())
    except GravityError:
        return
    assert rep.rows_read >= rep.rows_dropped
    assert len(flows) == rep.rows_read - rep.rows_dropped


def test_saturated_sentinel_survives_json_and_tsv():
    import sys
    from tradegravity.econometrics import TestResult
    t = TestResult("f_slopes", sys.float_info.max, (2, 10), 0.0, "F", saturated=True)
    doc = json.loads(tio.write_report(tio.ReportBundle([], [t])).decode())
    assert doc["tests"][0]["statistic"] == sys.float_info.max
    tsv = tio.write_report(tio.ReportBundle([], [t]), format="tsv").decode()
    assert repr(sys.float_info.max) in tsv
