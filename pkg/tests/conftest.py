import numpy as np
import pytest

from tradegravity.domain import PanelDataset
from tradegravity.tradability import SectorRow

DATA = __import__("pathlib").Path(__file__).parent / "data"

# published world sector table as printed: sector, GDP share %, trade share %, ratio, result, relative tradability
PUBLISHED_SECTORS = [
    ("Agriculture", 3.35, 5.61, 1.67, "Tradable", 12.36),
    ("Non-manufacturing industry", 10.00, 7.20, 0.72, "Non-tradable", 5.32),
    ("Chemicals", 1.68, 18.40, 10.95, "Tradable", 80.84),
    ("Food, beverages and tobacco", 1.87, 1.12, 0.60, "Non-tradable", 4.42),
    ("Machinery and transport equipment", 4.57, 32.99, 7.21, "Tradable", 53.25),
    ("Other manufacturing", 7.77, 7.08, 0.91, "Non-tradable", 6.73),
    ("Textiles and clothing", 0.46, 6.17, 13.55, "Tradable", 100.00),
    ("Services", 68.37, 21.43, 0.31, "Non-tradable", 2.31),
]


@pytest.fixture
def sector_rows():
    return [SectorRow(s, g, t) for s, g, t, *_ in PUBLISHED_SECTORS]


def random_panel(rng, n_groups=8, max_t=6, k=2, min_t=1, balanced=False, effects_sigma=1.0, noise=0.3):
    """Unbalanced panel with group effects; at least one group has two or more rows."""
    sizes = np.full(n_groups, max_t) if balanced else rng.integers(min_t, max_t + 1, size=n_groups)
    sizes[0] = max(sizes[0], 2)
    labels = np.repeat(np.arange(n_groups), sizes)
    n = labels.size
    X = rng.normal(size=(n, k)) + rng.normal(size=(n_groups, k))[labels]
    beta = rng.normal(size=k)
    y = 0.7 + X @ beta + effects_sigma * rng.normal(size=n_groups)[labels] + noise * rng.normal(size=n)
    return PanelDataset.from_arrays(labels.tolist(), y, X)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
