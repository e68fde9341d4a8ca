"""Pooled, within (fixed effects) and Swamy-Arora random effects estimators."""

from __future__ import annotations

import warnings
from dataclasses import replace

import numpy as np

from ..domain import PanelDataset
from ..errors import CollinearWithinGroups, TooFewGroups, VarianceComponentWarning
from .linalg import first_dependent_column, ols
from .results import EstimationResult, Method


def _names(panel: PanelDataset) -> tuple[str, ...]:
    return ("const",) + tuple(panel.regressor_names)


def group_means(values: np.ndarray, groups: np.ndarray, n_groups: int) -> np.ndarray:
    """Per-group means of a 1-d or 2-d (column-wise) array."""
    counts = np.bincount(groups, minlength=n_groups).astype(float)
    safe = np.where(counts > 0, counts, 1.0)
    if values.ndim == 1:
        return np.bincount(groups, weights=values, minlength=n_groups) / safe
    out = np.empty((n_groups, values.shape[1]))
    for j in range(values.shape[1]):
        out[:, j] = np.bincount(groups, weights=values[:, j], minlength=n_groups) / safe
    return out


def within_transform(panel: PanelDataset) -> tuple[np.ndarray, np.ndarray]:
    """Subtract group means from every regressor and the response."""
    G = len(panel.pair_ids)
    xbar = group_means(panel.X, panel.groups, G)
    ybar = group_means(panel.y, panel.groups, G)
    return panel.X - xbar[panel.groups], panel.y - ybar[panel.groups]


def pooled(panel: PanelDataset, cov_type: str = "unadjusted") -> EstimationResult:
    X = np.column_stack([np.ones(panel.n_obs), panel.X])
    clusters = panel.groups if cov_type == "clustered" else None
    return ols(
        X, panel.y, True, _names(panel), clusters=clusters, method=Method.POOLED, n_groups=panel.group_count
    )


def fixed_effects(panel: PanelDataset, cov_type: str = "unadjusted") -> EstimationResult:
    """Within estimator.

    Slopes come from OLS on group-demeaned data. The intercept is the grand
    mean of ``y - X b``; it and its standard error are obtained by adding the
    grand means back before the fit, which leaves the slopes unchanged.
    Residual degrees of freedom are ``n_obs - n_groups - k``.
    """
    G = panel.group_count
    k = panel.X.shape[1]
    if panel.group_sizes().max() < 2:
        raise CollinearWithinGroups("every group is a singleton; no within variation")
    Xd, yd = within_transform(panel)
    bad = first_dependent_column(Xd)
    if bad is not None:
        raise CollinearWithinGroups(
            f"regressor {panel.regressor_names[bad]!r} has no independent within-group variation"
        )
    df = panel.n_obs - G - k
    if df <= 0:
        raise CollinearWithinGroups(f"no residual degrees of freedom (n={panel.n_obs}, groups={G}, k={k})")
    Z = np.column_stack([np.ones(panel.n_obs), Xd + panel.X.mean(axis=0)])
    clusters = panel.groups if cov_type == "clustered" else None
    res = ols(
        Z, yd + panel.y.mean(), True, _names(panel),
        df_resid=df, clusters=clusters, method=Method.FIXED_EFFECTS, n_groups=G,
    )
    return replace(res, tss=float(yd @ yd))


def quasi_demeaned_fit(
    panel: PanelDataset, theta, method: Method = Method.RANDOM_EFFECTS, cov_type: str = "unadjusted"
) -> EstimationResult:
    """OLS of ``y - theta_g ybar_g`` on ``[1 - theta_g, X - theta_g Xbar_g]``.

    ``theta`` is a scalar or one value per group code. ``theta = 0`` is pooled
    OLS; ``theta -> 1`` approaches the within estimator.
    """
    G = len(panel.pair_ids)
    th = np.broadcast_to(np.asarray(theta, dtype=float), (G,))
    tho = th[panel.groups]
    xbar = group_means(panel.X, panel.groups, G)
    ybar = group_means(panel.y, panel.groups, G)
    ys = panel.y - tho * ybar[panel.groups]
    Xs = np.column_stack([1.0 - tho, panel.X - tho[:, None] * xbar[panel.groups]])
    clusters = panel.groups if cov_type == "clustered" else None
    return ols(Xs, ys, True, _names(panel), clusters=clusters, method=method, n_groups=panel.group_count)


def variance_components(panel: PanelDataset) -> tuple[float, float, list[str]]:
    """Swamy-Arora estimates ``(sigma2_e, sigma2_u)``.

    ``sigma2_e`` from the within residuals; ``sigma2_u`` from the between
    regression on group means, less ``sigma2_e / T_h`` with ``T_h`` the
    harmonic mean group size (exact for balanced panels). Negative
    ``sigma2_u`` is clamped to zero.
    """
    k = panel.X.shape[1]
    G = panel.group_count
    if G <= k + 1:
        raise TooFewGroups(f"between regression needs more than {k + 1} groups, have {G}")
    fe = fixed_effects(panel)
    sigma2_e = fe.ssr / fe.df_resid

    sizes = panel.group_sizes()
    present = sizes > 0
    xbar = group_means(panel.X, panel.groups, len(panel.pair_ids))[present]
    ybar = group_means(panel.y, panel.groups, len(panel.pair_ids))[present]
    between = ols(np.column_stack([np.ones(G), xbar]), ybar, True)
    sigma2_between = between.ssr / (G - k - 1)
    t_harm = G / float(np.sum(1.0 / sizes[present]))
    sigma2_u = sigma2_between - sigma2_e / t_harm
    notes = []
    if sigma2_u < 0:
        notes.append(f"negative sigma2_u estimate {sigma2_u:.6g} clamped to 0")
        warnings.warn(notes[-1], VarianceComponentWarning, stacklevel=3)
        sigma2_u = 0.0
    return sigma2_e, sigma2_u, notes


def random_effects(
    panel: PanelDataset,
    variance_components_override: tuple[float, float] | None = None,
    cov_type: str = "unadjusted",
) -> EstimationResult:
    """Feasible GLS random effects with per-group quasi-demeaning.

    ``theta_g = 1 - sqrt(s2e / (s2e + T_g s2u))``, so unbalanced panels get a
    different transform per group. Pass ``variance_components_override``
    as ``(sigma2_e, sigma2_u)`` to use known components instead of the
    Swamy-Arora estimates.
    """
    if variance_components_override is None:
        s2e, s2u, notes = variance_components(panel)
    else:
        s2e, s2u = map(float, variance_components_override)
        notes = []
        if s2e < 0 or s2u < 0:
            raise ValueError("variance components must be nonnegative")
    sizes = panel.group_sizes().astype(float)
    denom = s2e + sizes * s2u
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(denom > 0, 1.0 - np.sqrt(np.where(denom > 0, s2e / denom, 1.0)), 0.0)
    res = quasi_demeaned_fit(panel, theta, cov_type=cov_type)
    present = sizes > 0
    return replace(
        res,
        theta=float(theta[present].mean()),
        sigma2_e=s2e,
        sigma2_u=s2u,
        warnings=tuple(notes),
    )
