"""Sector tradability ratios, relative tradability and the country tradability index.

A sector's ratio is its share of world trade over its share of world GDP.
Relative tradability rescales the ratios so the most tradable sector scores
100, and a country's index is its GDP-share-weighted mean of relative
tradabilities (0-100 scale).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DivisionByZeroShare, EmptyTable, SectorMismatch


class Classification(enum.Enum):
    TRADABLE = "Tradable"
    NON_TRADABLE = "Non-tradable"


@dataclass(frozen=True)
class SectorRow:
    sector: str
    world_gdp_share: float
    world_trade_share: float


@dataclass(frozen=True)
class SectorTradability:
    sector: str
    world_gdp_share: float
    world_trade_share: float
    ratio: float
    classification: Classification
    relative_tradability: float
    is_normalizer: bool = False


@dataclass(frozen=True)
class TradabilityTable:
    entries: tuple[SectorTradability, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def sectors(self) -> list[str]:
        return [e.sector for e in self.entries]

    def relative(self) -> dict[str, float]:
        return {e.sector: e.relative_tradability for e in self.entries}

    def normalizer(self) -> SectorTradability:
        return next(e for e in self.entries if e.is_normalizer)


@dataclass(frozen=True)
class CountrySectorShares:
    country: str
    year: int
    shares: Mapping[str, float]


@dataclass
class IndexSeries:
    values: dict[tuple[str, int], float]
    averages: dict[str, float]
    year_counts: dict[str, int]
    binary_values: dict[tuple[str, int], float] = field(default_factory=dict)


def sector_ratio(row: SectorRow) -> float:
    if row.world_gdp_share <= 0:
        raise DivisionByZeroShare(f"sector {row.sector!r} has no GDP share")
    return row.world_trade_share / row.world_gdp_share


def classify(ratio: float) -> Classification:
    # ratio exactly 1 is non-tradable: traded share must exceed produced share
    return Classification.TRADABLE if ratio > 1 else Classification.NON_TRADABLE


def relative_tradability(rows: Iterable[SectorRow]) -> TradabilityTable:
    rows = list(rows)
    if not rows:
        raise EmptyTable("no sector rows")
    ratios = [sector_ratio(r) for r in rows]
    return table_from_ratios(rows, ratios)


def table_from_ratios(rows: Sequence[SectorRow], ratios: Sequence[float]) -> TradabilityTable:
    """Normalize precomputed ratios; the first sector holding the maximum gets exactly 100."""
    if not rows:
        raise EmptyTable("no sector rows")
    top = max(range(len(ratios)), key=lambda i: (ratios[i], -i))
    top_ratio = ratios[top]
    entries = []
    for i, (r, q) in enumerate(zip(rows, ratios)):
        if i == top:
            rt = 100.0
        elif top_ratio > 0:
            rt = 100.0 * q / top_ratio
        else:
            rt = 100.0
        entries.append(
            SectorTradability(r.sector, r.world_gdp_share, r.world_trade_share, q, classify(q), rt, i == top)
        )
    return TradabilityTable(tuple(entries))


def country_index(shares: CountrySectorShares, table: TradabilityTable) -> float:
    """GDP-share-weighted sum of relative tradabilities for one country-year."""
    rt = table.relative()
    unknown = sorted(set(shares.shares) - set(rt))
    if unknown:
        raise SectorMismatch(f"sectors not in tradability table: {', '.join(unknown)}")
    return math.fsum(w * rt[s] for s, w in shares.shares.items())


def binary_index(shares: CountrySectorShares, table: TradabilityTable) -> float:
    """Alternative index: percent of GDP produced in sectors classified Tradable."""
    cls = {e.sector: e.classification for e in table}
    unknown = sorted(set(shares.shares) - set(cls))
    if unknown:
        raise SectorMismatch(f"sectors not in tradability table: {', '.join(unknown)}")
    return 100.0 * math.fsum(w for s, w in shares.shares.items() if cls[s] is Classification.TRADABLE)


def index_series(all_shares: Iterable[CountrySectorShares], table: TradabilityTable) -> IndexSeries:
    values: dict[tuple[str, int], float] = {}
    binary: dict[tuple[str, int], float] = {}
    for s in all_shares:
        values[(s.country, s.year)] = country_index(s, table)
        binary[(s.country, s.year)] = binary_index(s, table)
    per_country: dict[str, list[float]] = {}
    for (c, _), v in sorted(values.items()):
        per_country.setdefault(c, []).append(v)
    averages = {c: math.fsum(v) / len(v) for c, v in per_country.items()}
    counts = {c: len(v) for c, v in per_country.items()}
    return IndexSeries(values, averages, counts, binary)
