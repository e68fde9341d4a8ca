"""Hypothesis tests on fitted panel models."""

from __future__ import annotations

import sys

import numpy as np

from ..errors import IncompatibleResults, InconsistentInputs, SingularCovariance
from .distributions import ChiSquared, FisherF, tail_probability, two_sided_t
from .results import EstimationResult, TestResult

SATURATED = sys.float_info.max


def _saturated(name: str, df: tuple[int, ...], dist: str) -> TestResult:
    return TestResult(name, SATURATED, df, 0.0, dist, saturated=True, warning="exact fit; statistic unbounded")


def hausman(fe: EstimationResult, re: EstimationResult) -> TestResult:
    """Hausman statistic comparing fixed and random effects slopes.

    Falls back to a pseudo-inverse, with a warning, when ``V_FE - V_RE`` is
    not positive definite.
    """
    if fe.slope_names != re.slope_names or fe.slopes.shape != re.slopes.shape:
        raise IncompatibleResults(f"slopes differ: {fe.slope_names} vs {re.slope_names}")
    d = fe.slopes - re.slopes
    V = fe.slope_covariance - re.slope_covariance
    V = 0.5 * (V + V.T)
    k = d.size
    warning = None
    eig = np.linalg.eigvalsh(V)
    if eig.size and eig.min() > 1e-12 * max(abs(eig.max()), np.finfo(float).tiny):
        H = float(d @ np.linalg.solve(V, d))
    else:
        warning = "V_FE - V_RE is not positive definite; used pseudo-inverse"
        H = float(d @ np.linalg.pinv(V) @ d)
    if not np.any(d):
        H = 0.0
    p = tail_probability(ChiSquared(k), H) if H >= 0 else 1.0
    return TestResult("hausman", H, (k,), p, "chi2", warning=warning)


def f_test_panel_effects(pooled: EstimationResult, fe: EstimationResult) -> TestResult:
    """F test that all pair effects are equal (pooled OLS is adequate)."""
    G = fe.n_groups
    if G < 2:
        raise InconsistentInputs("need at least two groups for a panel-effects test")
    if pooled.n_obs != fe.n_obs or pooled.slope_names != fe.slope_names:
        raise InconsistentInputs("pooled and fixed-effects fits are not on the same panel")
    tol = 1e-9 * max(pooled.ssr, 1.0)
    if pooled.ssr < fe.ssr - tol:
        raise InconsistentInputs(f"pooled SSR {pooled.ssr} below fixed-effects SSR {fe.ssr}")
    df = (G - 1, fe.df_resid)
    diff = max(pooled.ssr - fe.ssr, 0.0)
    if fe.ssr == 0:
        if diff == 0:
            return TestResult("f_panel_effects", 0.0, df, 1.0, "F")
        return _saturated("f_panel_effects", df, "F")
    F = (diff / (G - 1)) / (fe.ssr / fe.df_resid)
    return TestResult("f_panel_effects", F, df, tail_probability(FisherF(*df), F), "F")


def _slope_quadratic(result: EstimationResult, name: str) -> float:
    b = result.slopes
    V = result.slope_covariance
    if not np.any(b):
        return 0.0
    try:
        c = np.linalg.cholesky(V)
    except np.linalg.LinAlgError:
        raise SingularCovariance(f"{name}: slope covariance is singular") from None
    z = np.linalg.solve(c, b)
    return float(z @ z)


def regression_f_test(result: EstimationResult) -> TestResult:
    """Joint F test that every slope is zero, df ``(k_slopes, df_resid)``."""
    k = result.slopes.size
    if k == 0:
        raise InconsistentInputs("no slopes to test")
    df = (k, result.df_resid)
    if result.saturated:
        return _saturated("f_slopes", df, "F")
    F = _slope_quadratic(result, "f_slopes") / k
    return TestResult("f_slopes", F, df, tail_probability(FisherF(*df), F), "F")


def wald_joint_test(result: EstimationResult) -> TestResult:
    """Chi-squared Wald test that every slope is zero."""
    k = result.slopes.size
    if k == 0:
        raise InconsistentInputs("no slopes to test")
    if result.saturated:
        return _saturated("wald_slopes", (k,), "chi2")
    W = _slope_quadratic(result, "wald_slopes")
    return TestResult("wald_slopes", W, (k,), tail_probability(ChiSquared(k), W), "chi2")


def t_test_equals(result: EstimationResult, index: int | str, hypothesized: float) -> TestResult:
    """Two-sided t test of one coefficient against ``hypothesized``."""
    i = result.names.index(index) if isinstance(index, str) else int(index)
    b = float(result.coefficients[i])
    se = float(result.std_errors[i])
    name = f"t_{result.names[i]}_eq_{hypothesized:g}"
    df = (result.df_resid,)
    if b == hypothesized:
        return TestResult(name, 0.0, df, 1.0, "t")
    if se == 0:
        return TestResult(name, float(np.copysign(SATURATED, b - hypothesized)), df, 0.0, "t", saturated=True)
    t = (b - hypothesized) / se
    warning = "exact fit; standard error reflects rounding only" if result.saturated else None
    return TestResult(name, t, df, two_sided_t(t, result.df_resid), "t", warning=warning)
