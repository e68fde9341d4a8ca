import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PUBLISHED_SECTORS
from tradegravity.errors import DivisionByZeroShare, EmptyTable, SectorMismatch
from tradegravity.tradability import (
    Classification,
    CountrySectorShares,
    SectorRow,
    binary_index,
    classify,
    country_index,
    index_series,
    relative_tradability,
    sector_ratio,
    table_from_ratios,
)


def test_sector_ratio_agriculture():
    assert sector_ratio(SectorRow("Agriculture", 3.35, 5.61)) == pytest.approx(1.6746, abs=5e-5)


def test_sector_ratio_services():
    assert sector_ratio(SectorRow("Services", 68.37, 21.43)) == pytest.approx(0.3134, abs=5e-5)


def test_sector_ratio_equal_shares():
    assert sector_ratio(SectorRow("x", 5, 5)) == 1.0


def test_sector_ratio_zero_gdp():
    with pytest.raises(DivisionByZeroShare):
        sector_ratio(SectorRow("x", 0, 5))


@pytest.mark.parametrize(
    "ratio, expected",
    [(1.67, Classification.TRADABLE), (0.72, Classification.NON_TRADABLE), (1.0, Classification.NON_TRADABLE)],
)
def test_classify(ratio, expected):
    assert classify(ratio) is expected


def test_relative_tradability_from_printed_ratio_column(sector_rows):
    # the normalization applied to the rounded ratio column reproduces the printed RT column
    table = table_from_ratios(sector_rows, [r[3] for r in PUBLISHED_SECTORS])
    expected = [12.32, 5.31, 80.81, 4.43, 53.21, 6.72, 100.00, 2.29]
    for e, want, (*_, printed) in zip(table, expected, PUBLISHED_SECTORS):
        assert e.relative_tradability == pytest.approx(want, abs=0.005)
        assert e.relative_tradability == pytest.approx(printed, abs=0.05)


def test_relative_tradability_from_shares(sector_rows):
    # oracle: each ratio divided by the textile ratio 6.17 / 0.46, times 100
    top = 6.17 / 0.46
    table = relative_tradability(sector_rows)
    for e, (s, g, t, *_) in zip(table, PUBLISHED_SECTORS):
        assert e.relative_tradability == pytest.approx(100 * (t / g) / top, rel=1e-12)
    assert table.normalizer().sector == "Textiles and clothing"
    assert [e.classification.value for e in table] == [r[4] for r in PUBLISHED_SECTORS]


def test_relative_tradability_single_sector():
    (e,) = relative_tradability([SectorRow("only", 2.0, 3.0)])
    assert e.relative_tradability == 100.0 and e.is_normalizer


def test_relative_tradability_ties_first_wins():
    rows = [SectorRow(s, 1.0, 2.0) for s in "abc"]
    table = relative_tradability(rows)
    assert [e.relative_tradability for e in table] == [100.0] * 3
    assert [e.is_normalizer for e in table] == [True, False, False]


def test_relative_tradability_empty():
    with pytest.raises(EmptyTable):
        relative_tradability([])


def _printed_table(sector_rows):
    t = relative_tradability(sector_rows)
    from dataclasses import replace

    return type(t)(tuple(replace(e, relative_tradability=r[5]) for e, r in zip(t, PUBLISHED_SECTORS)))


def test_country_index_world_aggregate(sector_rows):
    # hand sum: (3.35*12.36 + 10*5.32 + 1.68*80.84 + 1.87*4.42 + 4.57*53.25 + 7.77*6.73 + 0.46*100 + 68.37*2.31) / 100
    oracle = (41.406 + 53.2 + 135.8112 + 8.2654 + 243.3525 + 52.2921 + 46.0 + 157.9347) / 100
    shares = CountrySectorShares("WLD", 2000, {r[0]: r[1] / 100 for r in PUBLISHED_SECTORS})
    assert country_index(shares, _printed_table(sector_rows)) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(7.38, abs=0.005)


def test_country_index_bounds(sector_rows):
    table = relative_tradability(sector_rows)
    assert country_index(CountrySectorShares("X", 1, {"Textiles and clothing": 1.0}), table) == 100
    assert country_index(CountrySectorShares("X", 1, {"Services": 1.0}), table) == pytest.approx(
        table.relative()["Services"]
    )


def test_country_index_unknown_sector(sector_rows):
    with pytest.raises(SectorMismatch):
        country_index(CountrySectorShares("X", 1, {"Mining": 1.0}), relative_tradability(sector_rows))


def test_binary_index(sector_rows):
    table = relative_tradability(sector_rows)
    s = CountrySectorShares("X", 1, {"Agriculture": 0.25, "Services": 0.75})
    assert binary_index(s, table) == pytest.approx(25.0)


def test_index_series(sector_rows):
    table = relative_tradability(sector_rows)
    rt = table.relative()
    a = {"Agriculture": 0.5, "Services": 0.5}
    shares = [CountrySectorShares("X", y, a) for y in range(2000, 2010)]
    shares += [CountrySectorShares("Y", 2000, {"Textiles and clothing": 0.06, "Services": 0.94})]
    shares += [CountrySectorShares("Y", 2002, {"Textiles and clothing": 0.08, "Services": 0.92})]
    s = index_series(shares, table)
    single = 0.5 * rt["Agriculture"] + 0.5 * rt["Services"]
    assert s.averages["X"] == pytest.approx(single)
    assert s.year_counts == {"X": 10, "Y": 2}
    y0, y2 = s.values[("Y", 2000)], s.values[("Y", 2002)]
    assert s.averages["Y"] == pytest.approx((y0 + y2) / 2)


def test_index_series_mean_of_two():
    table = table_from_ratios([SectorRow("a", 1, 1), SectorRow("b", 1, 1)], [6.0, 100.0])
    # RT(a) = 6, RT(b) = 100; indices 6 and 8 by construction
    s = index_series(
        [CountrySectorShares("Z", 1, {"a": 1.0}), CountrySectorShares("Z", 2, {"a": 92 / 94, "b": 2 / 94})], table
    )
    assert s.values[("Z", 1)] == pytest.approx(6)
    assert s.values[("Z", 2)] == pytest.approx(8)
    assert s.averages["Z"] == pytest.approx(7)


positive = st.floats(0.01, 100, allow_nan=False)


@settings(max_examples=60)
@given(
    shares=st.lists(st.tuples(positive, positive), min_size=1, max_size=8),
    c=st.floats(0.01, 100),
)
def test_scale_invariance(shares, c):
    rows = [SectorRow(f"s{i}", g, t) for i, (g, t) in enumerate(shares)]
    scaled = [SectorRow(r.sector, r.world_gdp_share, c * r.world_trade_share) for r in rows]
    a, b = relative_tradability(rows), relative_tradability(scaled)
    for x, y in zip(a, b):
        assert x.relative_tradability == pytest.approx(y.relative_tradability, rel=1e-9, abs=1e-9)


@settings(max_examples=60)
@given(
    sectors=st.lists(st.tuples(positive, positive), min_size=2, max_size=8),
    weights=st.lists(st.floats(0.0, 1.0), min_size=8, max_size=8),
    bump=st.floats(0.0, 50.0),
)
def test_index_bounds_and_monotonicity(sectors, weights, bump):
    rows = [SectorRow(f"s{i}", g, t) for i, (g, t) in enumerate(sectors)]
    table = relative_tradability(rows)
    w = weights[: len(rows)]
    if sum(w) == 0:
        w[0] = 1.0
    total = sum(w)
    shares = CountrySectorShares("X", 1, {r.sector: wi / total for r, wi in zip(rows, w)})
    rts = [e.relative_tradability for e in table]
    idx = country_index(shares, table)
    assert min(rts) - 1e-9 <= idx <= max(rts) + 1e-9

    from dataclasses import replace

    # raise one sector's RT; the index must not fall
    j = 0
    bumped = type(table)(tuple(
        replace(e, relative_tradability=e.relative_tradability + bump) if i == j else e for i, e in enumerate(table)
    ))
    assert country_index(shares, bumped) >= idx - 1e-9


@settings(max_examples=60)
@given(sectors=st.lists(st.tuples(positive, positive), min_size=1, max_size=8))
def test_tradable_implies_rt_above_floor(sectors):
    table = relative_tradability([SectorRow(f"s{i}", g, t) for i, (g, t) in enumerate(sectors)])
    top = max(e.ratio for e in table)
    for e in table:
        assert 0 <= e.relative_tradability <= 100
        if e.classification is Classification.TRADABLE:
            assert e.relative_tradability > 100 / top * (1 - 1e-12)
