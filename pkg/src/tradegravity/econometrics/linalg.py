"""Dense least squares via Householder QR."""

from __future__ import annotations

import numpy as np
from scipy import linalg as sla

from ..errors import SingularDesign
from .results import EstimationResult, Method

RANK_TOL = 1e-10


def first_dependent_column(X: np.ndarray, tol: float = RANK_TOL) -> int | None:
    """Index of the first column that is (numerically) spanned by the ones before it.

    Uses the rule: singular values below ``tol * s_max`` count as zero.
    """
    X = np.asarray(X, dtype=float)
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    if s[-1] > tol * s[0]:
        return None
    smax = s[0]
    for j in range(1, X.shape[1] + 1):
        sj = np.linalg.svd(X[:, :j], compute_uv=False)
        if sj[-1] <= tol * smax:
            return j - 1
    return X.shape[1] - 1


def ols(
    X,
    y,
    intercept_included: bool = True,
    names=None,
    *,
    df_resid: int | None = None,
    clusters=None,
    method: Method = Method.OLS,
    n_groups: int = 0,
) -> EstimationResult:
    """Least-squares fit of ``y`` on the columns of ``X``.

    Parameters
    ----------
    X : array, shape (n, k)
        Design matrix. If ``intercept_included`` the first column is the constant.
    y : array, shape (n,)
    df_resid : int, optional
        Residual degrees of freedom; defaults to ``n - k``. Panel estimators
        pass their own count (e.g. ``n - G - k`` after demeaning).
    clusters : array of group codes, optional
        If given, the covariance is cluster-robust by these groups.

    Raises
    ------
    SingularDesign
        If ``X`` is rank deficient; ``.column`` names the first offending column.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if n <= k:
        raise SingularDesign(k - 1, f"need more observations than columns (n={n}, k={k})")
    bad = first_dependent_column(X)
    if bad is not None:
        raise SingularDesign(bad)

    Q, R = np.linalg.qr(X, mode="reduced")
    beta = sla.solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    df = n - k if df_resid is None else int(df_resid)
    Rinv = sla.solve_triangular(R, np.eye(k))
    bread = Rinv @ Rinv.T
    if clusters is None:
        cov = ssr / df * bread
        cov_type = "unadjusted"
    else:
        codes = np.unique(np.asarray(clusters), return_inverse=True)[1]
        G = int(codes.max()) + 1
        scores = np.zeros((G, k))
        np.add.at(scores, codes, X * resid[:, None])
        meat = scores.T @ scores
        scale = G / (G - 1) * (n - 1) / df if G > 1 else 1.0
        cov = scale * bread @ meat @ bread
        cov_type = "clustered"
    cov = 0.5 * (cov + cov.T)

    if intercept_included:
        tss = float(((y - y.mean()) ** 2).sum())
    else:
        tss = float(y @ y)
    if names is None:
        names = (("const",) if intercept_included else ()) + tuple(
            f"x{j + 1}" for j in range(k - int(intercept_included))
        )
    return EstimationResult(
        method=method,
        names=tuple(names),
        coefficients=beta,
        covariance=cov,
        n_obs=n,
        n_groups=n_groups,
        ssr=ssr,
        df_resid=df,
        has_intercept=intercept_included,
        tss=tss,
        cov_type=cov_type,
    )
