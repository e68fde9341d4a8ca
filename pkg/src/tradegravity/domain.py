"""Core value types and assembly of the log-linear estimation panel."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyPanel, InvalidWorldGDP, MissingYear

REGRESSOR_NAMES = ("ln_lambda_exporter", "ln_mass")


@dataclass(frozen=True, slots=True)
class CountryYearGDP:
    country: str
    year: int
    gdp: float


@dataclass(frozen=True, slots=True)
class TradeFlow:
    exporter: str
    importer: str
    year: int
    value: float


@dataclass(frozen=True, slots=True)
class PanelObservation:
    pair_id: tuple[str, str]
    year: int
    ln_trade: float
    ln_lambda_exporter: float
    ln_mass: float


@dataclass(frozen=True)
class SumOfSample:
    """World GDP is the sum of the sample countries' GDP in that year."""


@dataclass(frozen=True)
class Exogenous:
    """World GDP supplied from outside the sample (e.g. a WDI world total)."""

    value: float


WorldGDPMode = SumOfSample | Exogenous


@dataclass
class AssemblyReport:
    rows_read: int = 0
    rows_kept: int = 0
    drop_reasons: Counter = field(default_factory=Counter)

    @property
    def rows_dropped(self) -> int:
        return self.rows_read - self.rows_kept

    def drop(self, reason: str) -> None:
        self.drop_reasons[reason] += 1


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PanelDataset:
    """Stacked panel in column form.

    ``groups[i]`` is an integer code into ``pair_ids``; ``X`` holds the
    regressors without an intercept column, in ``regressor_names`` order.
    Observations are sorted by (group, year).
    """

    groups: np.ndarray
    pair_ids: tuple
    years: np.ndarray
    y: np.ndarray
    X: np.ndarray
    regressor_names: tuple[str, ...] = REGRESSOR_NAMES
    report: AssemblyReport | None = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "y", _readonly(np.asarray(self.y, dtype=float)))
        object.__setattr__(self, "groups", _readonly(np.asarray(self.groups, dtype=np.intp)))
        object.__setattr__(self, "years", _readonly(np.asarray(self.years, dtype=np.int64)))
        n = self.y.shape[0]
        if self.X.shape[0] != n or self.groups.shape[0] != n or self.years.shape[0] != n:
            raise ValueError("panel columns have inconsistent lengths")
        if self.X.shape[1] != len(self.regressor_names):
            raise ValueError("regressor_names does not match the number of columns in X")
        if n and (self.groups.min() < 0 or self.groups.max() >= len(self.pair_ids)):
            raise ValueError("group code out of range")

    @classmethod
    def from_arrays(cls, labels: Sequence, y, X, years=None, regressor_names=None):
        """Build a panel from arbitrary hashable group labels (used by tests and the simulator)."""
        labels = list(labels)
        uniq = sorted(set(labels))
        code = {lab: i for i, lab in enumerate(uniq)}
        groups = np.array([code[lab] for lab in labels], dtype=np.intp)
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if years is None:
            years = np.zeros(len(labels), dtype=np.int64)
            for g in range(len(uniq)):
                idx = np.flatnonzero(groups == g)
                years[idx] = np.arange(idx.size)
        if regressor_names is None:
            regressor_names = (
                REGRESSOR_NAMES if X.shape[1] == 2 else tuple(f"x{j + 1}" for j in range(X.shape[1]))
            )
        return cls(groups, tuple(uniq), years, y, X, tuple(regressor_names))

    @property
    def n_obs(self) -> int:
        return int(self.y.shape[0])

    @property
    def group_count(self) -> int:
        return int(np.unique(self.groups).size)

    def group_sizes(self) -> np.ndarray:
        return np.bincount(self.groups, minlength=len(self.pair_ids))

    def observations(self) -> list[PanelObservation]:
        if self.X.shape[1] != 2:
            raise ValueError("observations() needs the two-regressor gravity layout")
        return [
            PanelObservation(self.pair_ids[g], int(t), float(v), float(a), float(b))
            for g, t, v, a, b in zip(self.groups, self.years, self.y, self.X[:, 0], self.X[:, 1])
        ]


def world_gdp(gdps: Iterable[CountryYearGDP], year: int, mode: WorldGDPMode = SumOfSample()) -> float:
    """World GDP for ``year`` under the chosen mode."""
    values = [g.gdp for g in gdps if g.year == year]
    if not values:
        raise MissingYear(f"no GDP records for year {year}")
    if isinstance(mode, Exogenous):
        if not (mode.value > 0 and math.isfinite(mode.value)):
            raise InvalidWorldGDP(f"exogenous world GDP must be positive, got {mode.value}")
        return float(mode.value)
    return float(math.fsum(values))


def build_panel(
    flows: Iterable[TradeFlow],
    gdps: Iterable[CountryYearGDP],
    lambdas: Mapping[tuple[str, int], float],
    year_range: tuple[int, int] | None = None,
    world_mode: WorldGDPMode = SumOfSample(),
) -> PanelDataset:
    """Assemble the estimation panel in log form.

    Parameters
    ----------
    flows : iterable of TradeFlow
    gdps : iterable of CountryYearGDP
        The sample; with ``SumOfSample`` world GDP per year is their sum.
    lambdas : mapping (country, year) -> tradability index on the 0-100 scale
    year_range : (first, last), inclusive, optional
    world_mode : SumOfSample() or Exogenous(value)

    Returns
    -------
    PanelDataset
        One row per usable flow, ``y = ln(value)``,
        ``X = [ln(index / 100), ln(Y_a * Y_b / Y_w)]``. The ``report``
        attribute counts dropped rows by reason.
    """
    gdp_by_key: dict[tuple[str, int], float] = {}
    for g in gdps:
        if g.gdp > 0 and math.isfinite(g.gdp):
            gdp_by_key.setdefault((g.country, g.year), g.gdp)
    by_year: dict[int, list[float]] = {}
    for (_, year), v in gdp_by_key.items():
        by_year.setdefault(year, []).append(v)
    if isinstance(world_mode, Exogenous):
        if not (world_mode.value > 0 and math.isfinite(world_mode.value)):
            raise InvalidWorldGDP(f"exogenous world GDP must be positive, got {world_mode.value}")
        yw = {year: float(world_mode.value) for year in by_year}
    else:
        yw = {year: math.fsum(sorted(vals)) for year, vals in by_year.items()}

    report = AssemblyReport()
    rows: dict[tuple[str, str, int], tuple[float, float, float]] = {}
    for f in flows:
        report.rows_read += 1
        if year_range is not None and not (year_range[0] <= f.year <= year_range[1]):
            report.drop("out_of_year_range")
            continue
        if f.exporter == f.importer:
            report.drop("self_trade")
            continue
        if not (f.value > 0 and math.isfinite(f.value)):
            report.drop("nonpositive_value")
            continue
        ya = gdp_by_key.get((f.exporter, f.year))
        yb = gdp_by_key.get((f.importer, f.year))
        if ya is None or yb is None:
            report.drop("missing_gdp")
            continue
        lam = lambdas.get((f.exporter, f.year))
        if lam is None:
            report.drop("missing_lambda")
            continue
        if not (lam > 0 and math.isfinite(lam)):
            report.drop("nonpositive_lambda")
            continue
        key = (f.exporter, f.importer, f.year)
        if key in rows:
            report.drop("duplicate_flow")
            continue
        rows[key] = (
            math.log(f.value),
            math.log(lam / 100.0),
            math.log(ya) + math.log(yb) - math.log(yw[f.year]),
        )
        report.rows_kept += 1

    if not rows:
        raise EmptyPanel("no observation survived panel assembly")

    keys = sorted(rows)
    pair_ids = tuple(sorted({(e, i) for e, i, _ in keys}))
    code = {p: k for k, p in enumerate(pair_ids)}
    groups = np.fromiter((code[(e, i)] for e, i, _ in keys), dtype=np.intp, count=len(keys))
    years = np.fromiter((t for _, _, t in keys), dtype=np.int64, count=len(keys))
    vals = np.array([rows[k] for k in keys], dtype=float)
    return PanelDataset(groups, pair_ids, years, vals[:, 0], vals[:, 1:], REGRESSOR_NAMES, report)
