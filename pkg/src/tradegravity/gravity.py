"""Gravity-equation trade predictions and the identification regression."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegressor, LogDomainError, NegativePredictionWarning


class ModelSpec(enum.Enum):
    PERFECT_SPECIALIZATION = "perfect"
    IMPERFECT_UNIFORM = "imperfect-uniform"
    IMPERFECT_PAIR = "imperfect-pair"
    TRADABILITY = "tradability"


class Direction(enum.Enum):
    EXPORT_OF_A = "export"
    IMPORT_OF_A = "import"


@dataclass(frozen=True)
class ModelParams:
    gamma_a: float = 0.0
    gamma_b: float = 0.0
    lambda_a: float = 1.0
    lambda_b: float = 1.0

    def __post_init__(self):
        for name in ("gamma_a", "gamma_b"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for name in ("lambda_a", "lambda_b"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")


@dataclass(frozen=True)
class GravityPrediction:
    direction: Direction
    value: float
    negative: bool = False


def predict_trade(
    spec: ModelSpec,
    params: ModelParams,
    gdp_a: float,
    gdp_b: float,
    gdp_world: float,
    direction: Direction = Direction.EXPORT_OF_A,
) -> GravityPrediction:
    """Predicted bilateral trade between countries a and b.

    Only the tradability model distinguishes direction: a's exports scale
    with its own tradable share, its imports with b's.
    """
    if not (gdp_a > 0 and gdp_b > 0 and gdp_world > 0):
        raise ValueError("GDP values must be positive")
    if gdp_a * gdp_b > gdp_world**2:
        warnings.warn("Y_a * Y_b exceeds Y_w**2; check the world GDP definition", stacklevel=2)
    mass = gdp_a * gdp_b / gdp_world
    if spec is ModelSpec.PERFECT_SPECIALIZATION:
        scale = 1.0
    elif spec is ModelSpec.IMPERFECT_UNIFORM:
        scale = 1.0 - params.gamma_a
    elif spec is ModelSpec.IMPERFECT_PAIR:
        scale = params.gamma_b - params.gamma_a
    elif direction is Direction.EXPORT_OF_A:
        scale = params.lambda_a
    else:
        scale = params.lambda_b
    value = scale * mass
    negative = value < 0
    if negative:
        warnings.warn(
            f"negative prediction {value:g}: gamma_b < gamma_a", NegativePredictionWarning, stacklevel=2
        )
    return GravityPrediction(direction, value, negative)


def log_design_row(gdp_a: float, gdp_b: float, gdp_world: float, lambda_a: float) -> np.ndarray:
    """Regressors ``[1, ln lambda_a, ln(Y_a Y_b / Y_w)]`` of the log-linear gravity equation."""
    for name, v in (("Y_a", gdp_a), ("Y_b", gdp_b), ("Y_w", gdp_world), ("lambda_a", lambda_a)):
        if not v > 0:
            raise LogDomainError(f"{name} must be strictly positive, got {v}")
    return np.array(
        [1.0, math.log(lambda_a), math.log(gdp_a) + math.log(gdp_b) - math.log(gdp_world)]
    )


def multiplicative_prediction(coefficients, row) -> float:
    """``exp(b0) * lambda**b1 * mass**b2``, the level form of the log-linear equation."""
    return math.exp(float(np.dot(coefficients, row)))


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    std_error: float
    n: int
    ssr: float
    df_resid: int

    @property
    def t_vs_one(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.alpha == 1 else math.copysign(math.inf, self.alpha - 1)
        return (self.alpha - 1.0) / self.std_error


def identification_alpha(actual, predicted) -> AlphaResult:
    """No-intercept least-squares slope of observed on model-predicted trade.

    A slope of one means the model's level is right; below one means it
    over-predicts trade.
    """
    x = np.asarray(predicted, dtype=float)
    y = np.asarray(actual, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("actual and predicted must be matching 1-d sequences")
    if x.size < 2:
        raise DegenerateRegressor("need at least two matched pairs")
    sxx = float(x @ x)
    if sxx == 0 or not math.isfinite(sxx):
        raise DegenerateRegressor("all predictions are zero")
    alpha = float(x @ y) / sxx
    resid = y - alpha * x
    ssr = float(resid @ resid)
    df = x.size - 1
    se = math.sqrt(ssr / df / sxx)
    return AlphaResult(alpha, se, int(x.size), ssr, df)
