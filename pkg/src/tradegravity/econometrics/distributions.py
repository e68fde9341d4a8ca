"""Upper-tail probabilities of the chi-squared, F and Student-t distributions.

All three reduce to regularized incomplete gamma / beta functions:

    chi2_k:   Q(k/2, x/2)
    F(d1,d2): I_{d2/(d2 + d1 x)}(d2/2, d1/2)
    t_v:      I_{v/(v + t^2)}(v/2, 1/2) / 2   for t >= 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from ..errors import InvalidDistribution


def _check_df(*dfs):
    for d in dfs:
        if not (isinstance(d, (int, float)) and d > 0 and math.isfinite(d)):
            raise InvalidDistribution(f"degrees of freedom must be positive and finite, got {d!r}")


@dataclass(frozen=True)
class ChiSquared:
    df: float

    def __post_init__(self):
        _check_df(self.df)


@dataclass(frozen=True)
class FisherF:
    df1: float
    df2: float

    def __post_init__(self):
        _check_df(self.df1, self.df2)


@dataclass(frozen=True)
class StudentT:
    df: float

    def __post_init__(self):
        _check_df(self.df)


Distribution = ChiSquared | FisherF | StudentT


def tail_probability(dist: Distribution, x: float) -> float:
    """P(X > x) under ``dist``."""
    if math.isnan(x):
        raise ValueError("x is NaN")
    if isinstance(dist, ChiSquared):
        if x < 0:
            raise ValueError("chi-squared tail needs x >= 0")
        if math.isinf(x):
            return 0.0
        return float(special.gammaincc(dist.df / 2.0, x / 2.0))
    if isinstance(dist, FisherF):
        if x < 0:
            raise ValueError("F tail needs x >= 0")
        if math.isinf(x):
            return 0.0
        d1, d2 = dist.df1, dist.df2
        # pick the argument away from 1 to keep precision in the far tail
        if d1 * x > d2:
            return float(special.betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)))
        return float(1.0 - special.betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d2 + d1 * x)))
    if isinstance(dist, StudentT):
        if math.isinf(x):
            return 0.0 if x > 0 else 1.0
        v = dist.df
        t2 = x * x
        if t2 > v:
            half = 0.5 * float(special.betainc(v / 2.0, 0.5, v / (v + t2)))
        else:
            half = 0.5 * (1.0 - float(special.betainc(0.5, v / 2.0, t2 / (v + t2))))
        return half if x >= 0 else 1.0 - half
    raise InvalidDistribution(f"unknown distribution {dist!r}")


def two_sided_t(t: float, df: float) -> float:
    return min(1.0, 2.0 * tail_probability(StudentT(df), abs(t)))
