"""scikit-learn style wrappers around the evaluator and the growth harness.

These compose with ``sklearn.pipeline`` and ``sklearn.base.clone``: all
configuration lives in constructor parameters, fitted state in trailing
underscore attributes.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_complex_array, check_positive, check_q, check_v_values
from .core import QParameter, Tolerance, zeta_q, zeta_q_single
from .growth import ScanRow, ScanSpec, fit_mu, resolve_regressor, scan_vertical

__all__ = ["QZetaEvaluator", "VerticalLineScanner", "GrowthExponentRegressor"]

SCAN_COLUMNS = ("v", "log_abs", "arg", "pole_margin", "skipped", "bound_log", "terms_used")


class QZetaEvaluator(TransformerMixin, BaseEstimator):
    """Map evaluation points to ``(log|zeta_q|, arg zeta_q)``.

    Parameters
    ----------
    q : float, default=0.5
    single : bool, default=False
        If True each sample is a single ``s`` and the one-variable function
        zeta_q(s) = zeta_q(s, s - 1) is evaluated; otherwise samples are
        ``(s, t)`` pairs.
    method : {"auto", "direct", "continuation"}, default="auto"
        Ignored when ``single`` is True.
    N : int or None, default=None
        Continuation truncation point; None picks it per sample.
    rel_tol : float, default=1e-10
    max_terms : int, default=10**7
    """

    def __init__(self, q=0.5, single=False, method="auto", N=None, rel_tol=1e-10,
                 max_terms=10**7):
        self.q = q
        self.single = single
        self.method = method
        self.N = N
        self.rel_tol = rel_tol
        self.max_terms = max_terms

    def fit(self, X=None, y=None):
        self.q_param_ = QParameter(check_q(self.q))
        self.tol_ = Tolerance(check_positive(self.rel_tol, "rel_tol"), self.max_terms)
        if self.method not in ("auto", "direct", "continuation"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.N is not None and int(self.N) < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        self.n_features_in_ = 1 if self.single else 2
        return self

    def evaluate(self, X):
        """Full :class:`~qzeta.core.EvalResult` per sample."""
        check_is_fitted(self, "q_param_")
        Z = check_complex_array(X, self.n_features_in_)
        if self.single:
            return [zeta_q_single(self.q_param_, z[0], self.tol_) for z in Z]
        return [
            zeta_q(self.q_param_, s, t, self.tol_, method=self.method, N=self.N)
            for s, t in Z
        ]

    def transform(self, X):
        results = self.evaluate(X)
        return np.array([[r.log_value.log_abs, r.log_value.arg] for r in results])


class VerticalLineScanner(TransformerMixin, BaseEstimator):
    """Turn a grid of heights ``v`` into scan rows along ``s = sigma + i v``.

    ``transform`` returns an array whose columns follow :data:`SCAN_COLUMNS`.
    """

    def __init__(self, q=0.5, sigma=2.0, single=True, re_t=None, im_t=None,
                 epsilon=1e-3, rel_tol=1e-10, n_jobs=1):
        self.q = q
        self.sigma = sigma
        self.single = single
        self.re_t = re_t
        self.im_t = im_t
        self.epsilon = epsilon
        self.rel_tol = rel_tol
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        self.q_param_ = QParameter(check_q(self.q))
        check_positive(self.epsilon, "epsilon")
        self.tol_ = Tolerance(check_positive(self.rel_tol, "rel_tol"))
        if not self.single and self.re_t is None:
            raise ValueError("re_t is required unless single=True")
        return self

    def spec(self, v):
        check_is_fitted(self, "q_param_")
        return ScanSpec(
            q_param=self.q_param_,
            sigma=float(self.sigma),
            v_values=tuple(check_v_values(v)),
            single=self.single,
            re_t=self.re_t,
            im_t=self.im_t,
            epsilon=self.epsilon,
            tol=self.tol_,
        )

    def scan(self, v):
        return scan_vertical(self.spec(v), n_jobs=self.n_jobs)

    def transform(self, X):
        rows = self.scan(X)
        return np.array([[getattr(r, c) for c in SCAN_COLUMNS] for r in rows], dtype=float)


class GrowthExponentRegressor(RegressorMixin, BaseEstimator):
    """Least-squares growth exponent of ``log|zeta_q|`` along a vertical line.

    ``fit(v, log_abs)`` regresses on ``log v`` (sigma >= 1) or on ``v``
    (sigma < 1) unless ``regressor`` forces one of them. NaN targets (skipped
    rows) are dropped before fitting.
    """

    def __init__(self, sigma=2.0, regressor="auto"):
        self.sigma = sigma
        self.regressor = regressor

    def fit(self, X, y):
        v = np.asarray(X, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if v.shape != y.shape:
            raise ValueError(f"X and y lengths differ: {v.shape[0]} != {y.shape[0]}")
        rows = [
            ScanRow(vi, yi, 0.0, 1.0, not np.isfinite(yi), 0.0, 0) for vi, yi in zip(v, y)
        ]
        return self._fit_rows(rows)

    def fit_rows(self, rows):
        return self._fit_rows(list(rows))

    def _fit_rows(self, rows):
        est = fit_mu(rows, self.sigma, self.regressor)
        self.regressor_ = est.regressor
        self.slope_ = est.slope
        self.intercept_ = est.intercept
        self.residual_rms_ = est.residual_rms
        self.n_points_ = est.n_points
        self.estimate_ = est
        return self

    def predict(self, X):
        check_is_fitted(self, "slope_")
        v = np.abs(np.asarray(X, dtype=float).ravel())
        x = np.log(v) if self.regressor_ == "log_v" else v
        return self.intercept_ + self.slope_ * x

    @property
    def resolved_regressor(self):
        return resolve_regressor(self.sigma, self.regressor)
