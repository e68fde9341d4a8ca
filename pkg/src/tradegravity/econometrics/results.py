from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Method(enum.Enum):
    OLS = "ols"
    POOLED = "pooled"
    FIXED_EFFECTS = "fixed_effects"
    RANDOM_EFFECTS = "random_effects"


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """Coefficients and fit statistics of one estimator.

    When ``has_intercept`` is set, coefficient 0 is the intercept and the
    remaining entries are the slopes.
    """

    method: Method
    names: tuple[str, ...]
    coefficients: np.ndarray
    covariance: np.ndarray
    n_obs: int
    n_groups: int
    ssr: float
    df_resid: int
    has_intercept: bool = True
    tss: float = float("nan")
    theta: float | None = None
    sigma2_e: float | None = None
    sigma2_u: float | None = None
    cov_type: str = "unadjusted"
    warnings: tuple[str, ...] = ()

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    @property
    def slope_slice(self) -> slice:
        return slice(1, None) if self.has_intercept else slice(0, None)

    @property
    def slopes(self) -> np.ndarray:
        return self.coefficients[self.slope_slice]

    @property
    def slope_names(self) -> tuple[str, ...]:
        return self.names[self.slope_slice]

    @property
    def slope_covariance(self) -> np.ndarray:
        s = self.slope_slice
        return self.covariance[s, s]

    @property
    def saturated(self) -> bool:
        """True when the fit is exact to rounding, so test statistics are unbounded."""
        return self.ssr == 0 or (self.tss > 0 and self.ssr <= 1e-20 * self.tss)

    def __getitem__(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # keep pytest from collecting this

    name: str
    statistic: float
    df: tuple[int, ...]
    p_value: float
    distribution: str
    saturated: bool = False
    warning: str | None = None
    extra: dict = field(default_factory=dict)

    def rejects(self, level: float = 0.05) -> bool:
        return self.p_value < level
