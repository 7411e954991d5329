"""Growth of |zeta_q| along vertical lines s = sigma + i v.

For fixed q, sigma and Re t the expected upper bounds as |v| grows are

    O(1)                                   Re t > 0
    O(|v|)                                 Re t = 0
    O(exp(-Re t * (1 + pi/2) * |v|))       Re t < 0

with unknown implicit constants. :func:`check_bound` therefore fits the
constant on the smaller-|v| half of a scan and checks the larger-|v| half
against it with one decade of slack. :func:`estimate_mu` is a least-squares
surrogate for the growth exponent: slope of log|zeta_q| against log v when
sigma >= 1, and against v itself when sigma < 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import QParameter, Tolerance, as_qparam, epsilon_margin, zeta_q, zeta_q_single
from .exceptions import InsufficientDataError, QZetaError

__all__ = [
    "Regime",
    "ScanSpec",
    "ScanRow",
    "BoundReport",
    "MuEstimate",
    "regime_for",
    "bound_log",
    "scan_vertical",
    "check_bound",
    "fit_mu",
    "estimate_mu",
]

logger = logging.getLogger(__name__)

_SLOPE_GROWTH = 1.0 + math.pi / 2.0
BOUND_SLACK = math.log(10.0)
MIN_BOUND_ROWS = 8
MIN_MU_ROWS = 12


class Regime(str, Enum):
    BOUNDED = "bounded"  # Re t > 0
    LINEAR = "linear"  # Re t = 0
    EXPONENTIAL = "exponential"  # Re t < 0


def regime_for(re_t):
    if re_t > 0:
        return Regime.BOUNDED
    if re_t == 0:
        return Regime.LINEAR
    return Regime.EXPONENTIAL


def bound_log(v, re_t):
    """Log of the regime bound at |v|, without its constant."""
    v = abs(float(v))
    regime = regime_for(re_t)
    if regime is Regime.BOUNDED:
        return 0.0
    if regime is Regime.LINEAR:
        return math.log(v)
    return -re_t * _SLOPE_GROWTH * v


@dataclass(frozen=True)
class ScanSpec:
    """A vertical line to sample.

    With ``single=True`` the function sampled is zeta_q(s) = zeta_q(s, s - 1) and
    ``re_t`` is ignored (it equals sigma - 1). Otherwise t = re_t + i * im_t,
    where ``im_t=None`` makes t move with s (Im t = v).
    """

    q_param: QParameter
    sigma: float
    v_values: tuple
    single: bool = True
    re_t: float | None = None
    im_t: float | None = None
    epsilon: float = 1e-3
    tol: Tolerance = field(default_factory=Tolerance)
    method: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "q_param", as_qparam(self.q_param))
        v = tuple(float(x) for x in self.v_values)
        if not v:
            raise ValueError("v_values must not be empty")
        if any(x <= 0 for x in v) or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("v_values must be positive and strictly increasing")
        object.__setattr__(self, "v_values", v)
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.single and self.re_t is None:
            raise ValueError("re_t is required unless single=True")

    @property
    def effective_re_t(self):
        return self.sigma - 1.0 if self.single else float(self.re_t)

    @property
    def regime(self):
        return regime_for(self.effective_re_t)

    def point(self, v):
        """(s, t) on the line at height v."""
        s = complex(self.sigma, v)
        if self.single:
            return s, s - 1.0
        return s, complex(self.re_t, v if self.im_t is None else self.im_t)


@dataclass(frozen=True)
class ScanRow:
    v: float
    log_abs: float
    arg: float
    pole_margin: float
    skipped: bool
    bound_log: float
    terms_used: int
    failed: bool = False

    @property
    def usable(self):
        return not (self.skipped or self.failed)


@dataclass(frozen=True)
class BoundReport:
    max_ratio_log: float
    violations: int
    fitted_constant: float
    n_calibration: int
    n_verification: int


@dataclass(frozen=True)
class MuEstimate:
    """Least-squares growth exponent; an empirical surrogate, not the infimum itself."""

    sigma: float
    slope: float
    intercept: float
    regressor: str
    residual_rms: float
    n_points: int


def _scan_row(spec, v):
    s, t = spec.point(v)
    re_t = spec.effective_re_t
    blog = bound_log(v, re_t)
    if spec.single:
        margin = epsilon_margin(spec.q_param, s, -1)
    else:
        margin = epsilon_margin(spec.q_param, t, 0)
    if margin <= spec.epsilon:
        return ScanRow(v, math.nan, math.nan, margin, True, blog, 0)
    try:
        if spec.single:
            res = zeta_q_single(spec.q_param, s, spec.tol)
        else:
            res = zeta_q(spec.q_param, s, t, spec.tol, method=spec.method)
    except QZetaError as exc:
        logger.warning("row v=%r failed: %s", v, exc)
        return ScanRow(v, math.nan, math.nan, margin, True, blog, 0, failed=True)
    return ScanRow(
        v=v,
        log_abs=res.log_value.log_abs,
        arg=res.log_value.arg,
        pole_margin=margin,
        skipped=False,
        bound_log=blog,
        terms_used=res.terms_used,
    )


def scan_vertical(spec, n_jobs=1):
    """Evaluate the line at every ``spec.v_values`` entry; rows come back ordered by v.

    Rows whose epsilon-margin is at most ``spec.epsilon`` are skipped without
    evaluation. Evaluator errors mark the row ``failed`` and the scan continues.
    """
    if n_jobs == 1:
        return [_scan_row(spec, v) for v in spec.v_values]
    from joblib import Parallel, delayed

    return list(Parallel(n_jobs=n_jobs)(delayed(_scan_row)(spec, v) for v in spec.v_values))


def check_bound(rows, regime=None):
    """Fit the regime constant on the lower half of the usable rows, check the upper half.

    ``fitted_constant`` is the maximum of ``log_abs - bound_log`` over the
    calibration half. A verification row is a violation when it exceeds
    ``bound_log + fitted_constant + ln 10``. ``max_ratio_log`` is the largest
    excess of ``log_abs - bound_log`` over the fitted constant on the
    verification half.
    """
    usable = sorted((r for r in rows if r.usable), key=lambda r: r.v)
    if len(usable) < MIN_BOUND_ROWS:
        raise InsufficientDataError(
            f"check_bound needs at least {MIN_BOUND_ROWS} unskipped rows, got {len(usable)}"
        )
    if regime is not None:
        regime = Regime(regime)
        expected = {Regime.BOUNDED: lambda r: r.bound_log == 0.0,
                    Regime.LINEAR: lambda r: r.bound_log == math.log(abs(r.v)),
                    Regime.EXPONENTIAL: lambda r: r.bound_log > 0.0}[regime]
        if not all(expected(r) for r in usable):
            raise ValueError(f"rows do not carry {regime.value}-regime bounds")
    half = len(usable) // 2
    calibration, verification = usable[:half], usable[half:]
    constant = max(r.log_abs - r.bound_log for r in calibration)
    excess = [r.log_abs - r.bound_log - constant for r in verification]
    return BoundReport(
        max_ratio_log=max(excess),
        violations=sum(e > BOUND_SLACK for e in excess),
        fitted_constant=constant,
        n_calibration=len(calibration),
        n_verification=len(verification),
    )


def resolve_regressor(sigma, regressor="auto"):
    if regressor == "auto":
        return "log_v" if sigma >= 1.0 else "linear_v"
    if regressor not in ("log_v", "linear_v"):
        raise ValueError(f"regressor must be auto, log_v or linear_v, got {regressor!r}")
    return regressor


def fit_mu(rows, sigma, regressor="auto"):
    """Ordinary least squares of log|zeta_q| against log v or v over the usable rows."""
    regressor = resolve_regressor(sigma, regressor)
    usable = [r for r in rows if r.usable]
    if len(usable) < MIN_MU_ROWS:
        raise InsufficientDataError(
            f"estimate_mu needs at least {MIN_MU_ROWS} unskipped rows, got {len(usable)}"
        )
    v = np.array([abs(r.v) for r in usable])
    y = np.array([r.log_abs for r in usable])
    x = np.log(v) if regressor == "log_v" else v
    xc = x - x.mean()
    yc = y - math.fsum(y) / len(y)
    slope = float(np.dot(xc, yc) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    return MuEstimate(
        sigma=float(sigma),
        slope=slope,
        intercept=intercept,
        regressor=regressor,
        residual_rms=float(np.sqrt(np.mean(resid * resid))),
        n_points=len(usable),
    )


def estimate_mu(spec, regressor="auto", n_jobs=1):
    return fit_mu(scan_vertical(spec, n_jobs=n_jobs), spec.sigma, regressor)
