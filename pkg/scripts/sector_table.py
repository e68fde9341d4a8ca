"""Print the sector tradability table and the world-aggregate index.

Usage: python scripts/sector_table.py [WORLD_SECTORS_CSV]

Defaults to the eight-sector fixture in tests/data. Shows ratios and
relative tradability recomputed from the shares next to the binary
(tradable-sectors-only) index, so rounding in published tables is easy to
spot.
"""

import sys
from pathlib import Path

from tradegravity.io import read_world_sectors_csv
from tradegravity.tradability import CountrySectorShares, binary_index, country_index, relative_tradability

DEFAULT = Path(__file__).resolve().parent.parent / "tests" / "data" / "world_sectors.csv"


def main(path):
    rows = read_world_sectors_csv(Path(path).read_bytes())
    table = relative_tradability(rows)
    print(f"{'sector':36s} {'gdp%':>6s} {'trade%':>7s} {'ratio':>8s} {'RT':>7s}  class")
    for e in table:
        mark = " *" if e.is_normalizer else ""
        print(f"{e.sector:36s} {e.world_gdp_share:6.2f} {e.world_trade_share:7.2f} "
              f"{e.ratio:8.4f} {e.relative_tradability:7.2f}  {e.classification.value}{mark}")
    world = CountrySectorShares("WLD", 0, {r.sector: r.world_gdp_share / 100 for r in rows})
    print(f"\nworld index (continuous): {country_index(world, table):.4f}")
    print(f"world index (binary):     {binary_index(world, table):.4f}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else DEFAULT)
