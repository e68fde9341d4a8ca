"""Panel estimators, hypothesis tests and their numerical layer."""

from .distributions import ChiSquared, FisherF, StudentT, tail_probability
from .inference import (
    f_test_panel_effects,
    hausman,
    regression_f_test,
    t_test_equals,
    wald_joint_test,
)
from .linalg import ols
from .panel import (
    fixed_effects,
    pooled,
    quasi_demeaned_fit,
    random_effects,
    variance_components,
    within_transform,
)
from .results import EstimationResult, Method, TestResult

__all__ = [
    "ChiSquared", "FisherF", "StudentT", "tail_probability",
    "f_test_panel_effects", "hausman", "regression_f_test", "t_test_equals", "wald_joint_test",
    "ols",
    "fixed_effects", "pooled", "quasi_demeaned_fit", "random_effects", "variance_components",
    "within_transform",
    "EstimationResult", "Method", "TestResult",
]
