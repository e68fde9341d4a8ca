"""Tradability index, gravity-equation predictions and panel estimation of bilateral trade."""

from .domain import (
    CountryYearGDP,
    Exogenous,
    PanelDataset,
    PanelObservation,
    SumOfSample,
    TradeFlow,
    build_panel,
    world_gdp,
)
from .gravity import (
    Direction,
    ModelParams,
    ModelSpec,
    identification_alpha,
    log_design_row,
    predict_trade,
)
from .tradability import (
    Classification,
    CountrySectorShares,
    SectorRow,
    TradabilityTable,
    classify,
    country_index,
    index_series,
    relative_tradability,
    sector_ratio,
)

__version__ = "0.1.0"
