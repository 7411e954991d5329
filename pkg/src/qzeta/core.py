"""Evaluation of the two-variable q-zeta function

    zeta_q(s, t) = sum_{m >= 1} q^{m t} / [m]_q^s,    [m]_q = (1 - q^m) / (1 - q),

and of its one-variable specialisation zeta_q(s) = zeta_q(s, s - 1).

Two evaluation routes are provided. :func:`zeta_q_direct` sums the defining
series (Re t > 0 only). :func:`zeta_q_continued` uses the finite-N split

    (1 - q)^{-s} zeta_q(s, t) = sum_{m=1}^{N-1} q^{m t} / (1 - q^m)^s
        + sum_{r >= 0} binom(r + s - 1, r) q^{N (t + r)} / (1 - q^{t + r}),

which holds for every positive integer N and every t off the pole lattice.

Both routes first run in double precision (numpy, log-domain terms, compensated
accumulation). Each run also estimates its own rounding error. The continuation
can cancel heavily: its pieces may reach exp(2 |v|) while the value stays O(1).
When the estimate misses the requested tolerance, the same sum is repeated in
mpmath at a working precision sized from the observed cancellation.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import mpmath
import numpy as np

from .complex_kernel import LogComplex, bernoulli_even, complex_expm1, complex_pow
from .exceptions import BudgetExceededError, PoleProximityError

__all__ = [
    "QParameter",
    "Tolerance",
    "Method",
    "EvalResult",
    "LatticeKind",
    "PoleLattice",
    "as_qparam",
    "q_integer",
    "choose_n",
    "epsilon_margin",
    "zeta_q_direct",
    "zeta_q_continued",
    "zeta_q_single",
    "zeta_q",
    "pole_points",
    "classical_zeta",
    "POLE_MARGIN",
]

logger = logging.getLogger(__name__)

POLE_MARGIN = 1e-10
_EPS = float(np.finfo(float).eps)
# log-magnitude beyond which accumulation moves to a common exponent
_LOG_SWITCH = 600.0
_CHUNK = 4096
_MAX_DPS = 5000
_AUTO_DIRECT_MIN_RE_T = 0.1


@dataclass(frozen=True)
class QParameter:
    """The base q in (0, 1), with ``log q`` and ``1 - q`` precomputed."""

    q: float
    log_q: float = field(init=False, repr=False, compare=False)
    one_minus_q: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise ValueError(f"q must lie strictly inside (0, 1), got {self.q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "log_q", math.log(q))
        object.__setattr__(self, "one_minus_q", 1.0 - q)

    @property
    def period(self):
        """Imaginary spacing 2 pi / |log q| of the pole lattices."""
        return 2.0 * math.pi / -self.log_q


def as_qparam(q):
    return q if isinstance(q, QParameter) else QParameter(q)


@dataclass(frozen=True)
class Tolerance:
    rel_tol: float = 1e-10
    max_terms: int = 10**7

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if int(self.max_terms) < 1:
            raise ValueError(f"max_terms must be at least 1, got {self.max_terms!r}")
        object.__setattr__(self, "max_terms", int(self.max_terms))


class Method(str, Enum):
    DIRECT = "direct"
    CONTINUATION = "continuation"


@dataclass(frozen=True)
class EvalResult:
    """Outcome of one evaluation.

    ``tail_bound`` is a rigorous bound on the magnitude of the discarded series
    tail (absolute, in the units of the returned value; ``inf`` only when the
    value itself is beyond double range). ``error_estimate`` is a heuristic
    bound on accumulated rounding, relative to ``|value|``. ``precision`` is
    the number of decimal digits the final pass worked with.
    """

    value: complex | None
    log_value: LogComplex
    terms_used: int
    tail_bound: float
    pole_margin: float
    method: Method
    precision: int = 16
    error_estimate: float = 0.0

    @property
    def rel_tail_bound(self):
        if self.log_value.is_zero:
            return 0.0 if self.tail_bound == 0 else math.inf
        if self.tail_bound == 0:
            return 0.0
        return math.exp(math.log(self.tail_bound) - self.log_value.log_abs)


def q_integer(q, m):
    """The q-integer [m]_q = (1 - q^m) / (1 - q)."""
    qp = as_qparam(q)
    m = int(m)
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    return -math.expm1(m * qp.log_q) / qp.one_minus_q


def choose_n(q, re_t, abs_v):
    """Truncation point N = floor(-(1 + pi/2) / (max(Re t, 0) + 1) * |v| / log q), at least 1."""
    qp = as_qparam(q)
    if not abs_v > 0:
        raise ValueError(f"abs_v must be positive, got {abs_v!r}")
    x = -(1.0 + math.pi / 2.0) / (max(float(re_t), 0.0) + 1.0) * float(abs_v) / qp.log_q
    return max(1, math.floor(x))


def epsilon_margin(q, t, r_min=0):
    """Exact value of inf_{r >= r_min} |1 - q^{t + r}|.

    Terms with |q^{t+r}| >= 2 are at least 1 away from zero and are skipped. The
    scan stops once the lower bound 1 - q^{Re t + r} for every later term
    reaches the running minimum (capped at 1, the limit of the sequence).
    """
    qp = as_qparam(q)
    t = complex(t)
    r_min = int(r_min)
    if r_min not in (-1, 0):
        raise ValueError(f"r_min must be -1 or 0, got {r_min}")
    # first r with (Re t + r) log q < log 2
    r = max(r_min, math.floor(math.log(2.0) / qp.log_q - t.real) + 1)
    best = 1.0
    while True:
        x = (t + r) * qp.log_q
        best = min(best, abs(complex_expm1(x)))
        if -math.expm1((t.real + r + 1) * qp.log_q) >= best:
            return best
        r += 1


# ---------------------------------------------------------------------------
# pole lattices


class LatticeKind(str, Enum):
    TWO_VARIABLE = "two_variable"
    SINGLE_VARIABLE = "single_variable"


@dataclass(frozen=True)
class PoleLattice:
    """Poles of zeta_q(s, t) in t, or of zeta_q(s) in s.

    two_variable:    t in Z_{<=0} + 2 pi i Z / log q
    single_variable: s in 1 + 2 pi i Z / log q, and Z_{<=0} + 2 pi i Z_{!=0} / log q
    """

    q_param: QParameter
    kind: LatticeKind = LatticeKind.TWO_VARIABLE

    def __post_init__(self):
        object.__setattr__(self, "q_param", as_qparam(self.q_param))
        object.__setattr__(self, "kind", LatticeKind(self.kind))

    def point(self, a, k):
        # + 0.0 folds the k = 0 ordinate -0.0 into 0.0
        return complex(a, 2.0 * math.pi * k / self.q_param.log_q + 0.0)

    def nearest(self, z):
        """Nearest lattice point to ``z`` and its distance."""
        z = complex(z)
        # Im = 2 pi k / log q, so k = Im * log q / (2 pi)
        k0 = round(z.imag * self.q_param.log_q / (2.0 * math.pi))
        a0 = min(0, round(z.real))
        candidates = []
        if self.kind is LatticeKind.TWO_VARIABLE:
            candidates = [self.point(a0, k0)]
        else:
            candidates.append(self.point(1, k0))
            for k in (k0 - 1, k0, k0 + 1):
                if k != 0:
                    candidates.append(self.point(a0, k))
        best = min(candidates, key=lambda p: abs(z - p))
        return best, abs(z - best)


def pole_points(lattice, window):
    """Lattice points inside the closed rectangle ``(re0, re1, im0, im1)``, sorted by (re, im)."""
    re0, re1, im0, im1 = (float(x) for x in window)
    if not (re0 < re1 and im0 < im1):
        raise ValueError(f"window must satisfy re0 < re1 and im0 < im1, got {window!r}")
    step = lattice.q_param.period
    # Im = -step * k
    k_lo = math.ceil(-im1 / step)
    k_hi = math.floor(-im0 / step)
    ks = [k for k in range(k_lo, k_hi + 1) if im0 <= -step * k <= im1]
    reals = [a for a in range(math.ceil(re0), min(0, math.floor(re1)) + 1)]
    points = []
    if lattice.kind is LatticeKind.TWO_VARIABLE:
        points = [lattice.point(a, k) for a in reals for k in ks]
    else:
        if re0 <= 1.0 <= re1:
            points.extend(lattice.point(1, k) for k in ks)
        points.extend(lattice.point(a, k) for a in reals for k in ks if k != 0)
    return sorted(points, key=lambda z: (z.real, z.imag))


def _check_two_variable_margin(qp, t):
    margin = epsilon_margin(qp, t, 0)
    if margin <= POLE_MARGIN:
        nearest, _ = PoleLattice(qp, LatticeKind.TWO_VARIABLE).nearest(t)
        raise PoleProximityError(
            f"t = {t!r} is within margin {margin:.3g} of the pole t = {nearest!r}",
            nearest,
            margin,
        )
    return margin


def _check_single_variable_distance(qp, s):
    nearest, dist = PoleLattice(qp, LatticeKind.SINGLE_VARIABLE).nearest(s)
    if dist <= POLE_MARGIN:
        raise PoleProximityError(
            f"s = {s!r} is within {dist:.3g} of the pole s = {nearest!r}", nearest, dist
        )


# ---------------------------------------------------------------------------
# double-precision accumulation


def _np_expm1(z):
    x, y = z.real, z.imag
    half = np.sin(0.5 * y)
    return (np.expm1(x) * np.cos(y) - 2.0 * half * half) + 1j * (np.exp(x) * np.sin(y))


def _np_log1m_exp(x):
    """A logarithm of 1 - exp(x), overflow-free for large Re x."""
    out = np.empty_like(x)
    big = x.real > 1.0
    # 1 - e^x = e^x (e^-x - 1) when |e^x| is large
    out[big] = x[big] + np.log(_np_expm1(-x[big]))
    with np.errstate(divide="ignore"):
        out[~big] = np.log(-_np_expm1(x[~big]))
    return out


class _ScaledSum:
    """Compensated sum of exp(w_k) for complex log-terms w_k.

    Terms are stored relative to exp(scale). The scale stays at zero while all
    log-magnitudes are within +-600, and otherwise tracks the largest term.
    """

    def __init__(self):
        self.scale = None
        self.re = 0.0
        self.im = 0.0
        self.abs_sum = 0.0
        self.err_sum = 0.0

    def _rescale(self, new_scale):
        f = math.exp(self.scale - new_scale)
        self.re *= f
        self.im *= f
        self.abs_sum *= f
        self.err_sum *= f
        self.scale = new_scale

    def prepare(self, logs):
        """Fix the scale for a chunk and return its scaled terms."""
        live = np.isfinite(logs.real)
        if not live.any():
            return np.zeros(logs.shape, dtype=complex)
        top = float(logs.real[live].max())
        if self.scale is None:
            self.scale = top if abs(top) > _LOG_SWITCH else 0.0
        elif top > self.scale + _LOG_SWITCH:
            self._rescale(top)
        terms = np.zeros(logs.shape, dtype=complex)
        terms[live] = np.exp(logs[live] - self.scale)
        return terms

    def add(self, terms, cost):
        mags = np.abs(terms)
        self.re = math.fsum(np.append(terms.real, self.re))
        self.im = math.fsum(np.append(terms.imag, self.im))
        self.abs_sum += float(mags.sum())
        self.err_sum += float((mags * cost).sum())

    @property
    def total(self):
        return complex(self.re, self.im)

    def log_total(self):
        """(log |sum|, arg sum) including the scale; log |sum| = -inf for an exact zero."""
        z = self.total
        if z == 0 or self.scale is None:
            return -math.inf, 0.0
        return math.log(abs(z)) + self.scale, math.atan2(z.imag, z.real)

    def log_abs_sum(self):
        if self.abs_sum == 0 or self.scale is None:
            return -math.inf
        return math.log(self.abs_sum) + self.scale

    def rel_error(self):
        """Heuristic rounding error relative to |sum| (inf when the sum is zero)."""
        z = abs(self.total)
        if z == 0:
            return 0.0 if self.abs_sum == 0 else math.inf
        return 4.0 * _EPS * self.err_sum / z


@dataclass
class _Raw:
    """Unnormalised outcome of one summation pass."""

    log_abs: float
    arg: float
    log_abs_sum: float  # log of sum |term|
    rel_error: float
    terms: int
    log_tail: float  # log of tail bound, same units as the sum
    precision: int


def _finite_part_double(acc, qp, s, t, n_terms):
    """sum_{m=1}^{n_terms} q^{m t} (1 - q^m)^{-s} into ``acc``."""
    for start in range(1, n_terms + 1, _CHUNK):
        m = np.arange(start, min(n_terms, start + _CHUNK - 1) + 1, dtype=float)
        l1mq = np.log(-np.expm1(m * qp.log_q))
        a = m * qp.log_q * t
        b = s * l1mq
        w = a - b
        acc.add(acc.prepare(w), np.abs(a) + np.abs(b) + 8.0)


def _continuation_double(qp, s, base, shift, n, tol, removable):
    """Double-precision pass of the continuation split (without the (1-q)^s factor).

    ``t = base + shift`` with integer ``shift``; exponents t + r are formed as
    base + (shift + r) so that they stay exact near a removable singularity.
    """
    t = base + shift
    acc = _ScaledSum()
    _finite_part_double(acc, qp, s, t, n - 1)

    q_n_log = n * qp.log_q
    s_minus_1 = abs(s - 1.0)
    log_b = 0j
    r0 = 0
    while True:
        r = np.arange(r0, r0 + _CHUNK, dtype=float)
        if r0 + _CHUNK - 1 > tol.max_terms:
            raise BudgetExceededError(
                f"continuation series needs more than max_terms={tol.max_terms} terms"
            )
        with np.errstate(divide="ignore", invalid="ignore"):
            # s + (r - 1) keeps the integer part exact near s in Z_{<=0}
            factors = np.where(r == 0, 1.0 + 0j, (s + (r - 1.0)) / np.where(r == 0, 1.0, r))
            log_f = np.log(factors)
        log_bs = log_b + np.cumsum(log_f)
        tr = base + (shift + r)
        log_denom = _np_log1m_exp(tr * qp.log_q)
        with np.errstate(invalid="ignore"):
            w = log_bs + q_n_log * tr - log_denom
        dead = np.isneginf(log_bs.real)
        w[dead] = complex(-np.inf, 0.0)
        if removable is not None and r0 <= removable[0] < r0 + _CHUNK:
            w[removable[0] - r0] = cmath.log(removable[1])
        bad = np.isneginf(log_denom.real) & ~dead
        if removable is not None:
            bad &= r != removable[0]
        if bad.any():
            raise PoleProximityError(
                "denominator 1 - q^(t+r) vanished", complex(tr[bad][0]), 0.0
            )

        terms = acc.prepare(w)
        cost = (
            r
            + np.abs(log_bs.real)
            + np.abs(log_bs.imag)
            + np.abs(q_n_log * tr)
            + 8.0
        )
        cost[dead] = 0.0
        # stopping rule: geometric majorant of the term ratio
        re_tr = tr.real
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            rho = (
                (1.0 + s_minus_1 / (r + 1.0))
                * math.exp(q_n_log)
                * (1.0 + np.exp(re_tr * qp.log_q))
                / -np.expm1((re_tr + 1.0) * qp.log_q)
            )
        valid = (re_tr + 1.0 > 0.0) & (rho < 1.0)
        prefix = acc.total + np.cumsum(terms)
        mags = np.abs(terms)
        with np.errstate(invalid="ignore", divide="ignore"):
            tail = np.where(valid, mags * rho / (1.0 - rho), np.inf)
        tail[dead & valid] = 0.0
        ok = valid & (tail <= tol.rel_tol * np.abs(prefix))
        if removable is not None:
            # the term after a removable zero is not governed by the ratio bound
            ok &= r != removable[0] - 1
        if ok.any():
            k = int(np.argmax(ok))
            acc.add(terms[: k + 1], cost[: k + 1])
            r_stop = r0 + k
            log_tail = math.log(tail[k]) + acc.scale if tail[k] > 0 else -math.inf
            break
        acc.add(terms, cost)
        log_b = log_bs[-1]
        r0 += _CHUNK

    log_abs, arg = acc.log_total()
    return _Raw(
        log_abs=log_abs,
        arg=arg,
        log_abs_sum=acc.log_abs_sum(),
        rel_error=acc.rel_error(),
        terms=(n - 1) + r_stop + 1,
        log_tail=log_tail,
        precision=16,
    )


def _direct_double(qp, s, t, tol):
    acc = _ScaledSum()
    sigma = s.real
    log_1mq = math.log(qp.one_minus_q)
    log_geo = -math.log(-math.expm1(t.real * qp.log_q))
    start = 1
    while True:
        if start > tol.max_terms:
            raise BudgetExceededError(
                f"direct sum needs more than max_terms={tol.max_terms} terms"
            )
        stop = min(tol.max_terms, start + _CHUNK - 1)
        m = np.arange(start, stop + 1, dtype=float)
        log_qint = np.log(-np.expm1(m * qp.log_q)) - log_1mq
        a = m * qp.log_q * t
        b = s * log_qint
        w = a - b
        terms = acc.prepare(w)
        cost = np.abs(a) + np.abs(b) + 8.0
        # tail after m: q^{(m+1) Re t} / (1 - q^{Re t}) * sup_{k>m} [k]_q^{-sigma}
        if sigma >= 0:
            log_sup = -sigma * (np.log(-np.expm1((m + 1.0) * qp.log_q)) - log_1mq)
        else:
            log_sup = np.full(m.shape, sigma * log_1mq)
        log_tail = (m + 1.0) * t.real * qp.log_q + log_geo + log_sup - acc.scale
        prefix = np.abs(acc.total + np.cumsum(terms))
        with np.errstate(divide="ignore"):
            ok = log_tail <= math.log(tol.rel_tol) + np.log(prefix)
        if ok.any():
            k = int(np.argmax(ok))
            acc.add(terms[: k + 1], cost[: k + 1])
            m_stop = start + k
            tail = float(log_tail[k]) + acc.scale
            break
        acc.add(terms, cost)
        start = stop + 1

    log_abs, arg = acc.log_total()
    return _Raw(
        log_abs=log_abs,
        arg=arg,
        log_abs_sum=acc.log_abs_sum(),
        rel_error=acc.rel_error(),
        terms=m_stop,
        log_tail=tail,
        precision=16,
    )


# ---------------------------------------------------------------------------
# extended-precision passes (mpmath)


def _mp_log_abs(x):
    return -math.inf if x == 0 else float(mpmath.log(x))


def _mp_raw(total, abs_sum, cost, tail, terms, dps):
    rel_error = math.inf
    if total != 0:
        rel_error = float(abs_sum * cost * mpmath.mpf(10) ** (2 - dps) / abs(total))
    elif abs_sum == 0:
        rel_error = 0.0
    return _Raw(
        log_abs=_mp_log_abs(abs(total)),
        arg=float(mpmath.arg(total)) if total != 0 else 0.0,
        log_abs_sum=_mp_log_abs(abs_sum),
        rel_error=rel_error,
        terms=terms,
        log_tail=_mp_log_abs(tail),
        precision=dps,
    )


def _continuation_mp(qp, s, base, shift, n, tol, removable, dps):
    with mpmath.workdps(dps):
        q = mpmath.mpf(qp.q)
        lq = mpmath.log(q)
        s_ = mpmath.mpc(s)
        base_ = mpmath.mpc(base)
        t_ = base_ + shift
        total = mpmath.mpc(0)
        abs_sum = mpmath.mpf(0)
        qm = mpmath.mpf(1)
        tlq = t_ * lq
        for m in range(1, n):
            qm *= q
            term = mpmath.exp(m * tlq - s_ * mpmath.log1p(-qm))
            total += term
            abs_sum += abs(term)

        q_n = q**n
        q_n_float = math.exp(n * qp.log_q)
        head = mpmath.exp(n * tlq)  # q^{N t}
        b = mpmath.mpc(1)
        s_minus_1 = abs(s - 1.0)
        rel = mpmath.mpf(tol.rel_tol)
        r = 0
        tail = mpmath.mpf(0)
        while True:
            if r > tol.max_terms:
                raise BudgetExceededError(
                    f"continuation series needs more than max_terms={tol.max_terms} terms"
                )
            if removable is not None and r == removable[0]:
                term = mpmath.mpc(removable[2](dps))
            elif b == 0:
                term = mpmath.mpc(0)
            else:
                tr = base_ + (shift + r)
                term = b * head / -mpmath.expm1(tr * lq)
            total += term
            abs_sum += abs(term)
            re_tr = base.real + shift + r
            if re_tr + 1.0 > 0.0 and not (removable is not None and r == removable[0] - 1):
                rho = (
                    (1.0 + s_minus_1 / (r + 1.0))
                    * q_n_float
                    * (1.0 + math.exp(re_tr * qp.log_q))
                    / -math.expm1((re_tr + 1.0) * qp.log_q)
                )
                if rho < 1.0:
                    tail = abs(term) * rho / (1.0 - rho)
                    if tail <= rel * abs(total):
                        break
            r += 1
            b *= (s_ + (r - 1)) / r
            head *= q_n
        cost = n * abs(t_ * lq) + abs(s) * 40 + r + 10
        return _mp_raw(total, abs_sum, mpmath.mpf(cost), tail, (n - 1) + r + 1, dps)


def _direct_mp(qp, s, t, tol, dps):
    with mpmath.workdps(dps):
        q = mpmath.mpf(qp.q)
        lq = mpmath.log(q)
        s_ = mpmath.mpc(s)
        t_ = mpmath.mpc(t)
        l1q = mpmath.log1p(-q)
        sigma = s.real
        geo = 1 / -mpmath.expm1(t.real * lq)
        rel = mpmath.mpf(tol.rel_tol)
        total = mpmath.mpc(0)
        abs_sum = mpmath.mpf(0)
        qm = mpmath.mpf(1)
        m = 0
        while True:
            m += 1
            if m > tol.max_terms:
                raise BudgetExceededError(
                    f"direct sum needs more than max_terms={tol.max_terms} terms"
                )
            qm *= q
            term = mpmath.exp(m * t_ * lq - s_ * (mpmath.log1p(-qm) - l1q))
            total += term
            abs_sum += abs(term)
            if sigma >= 0:
                sup = ((1 - qm * q) / (1 - q)) ** (-sigma)
            else:
                sup = (1 - q) ** sigma
            tail = mpmath.exp((m + 1) * t.real * lq) * geo * sup
            if tail <= rel * abs(total):
                break
        cost = m * abs(t) * abs(qp.log_q) + abs(s) * 40 + 10
        return _mp_raw(total, abs_sum, mpmath.mpf(cost), tail, m, dps)


def _refine(raw, tol, run_mp, label):
    """Repeat a pass in mpmath until its rounding estimate meets ``tol``."""
    if raw.rel_error <= tol.rel_tol:
        return raw
    if math.isfinite(raw.log_abs) and math.isfinite(raw.log_abs_sum):
        kappa_digits = max(0.0, (raw.log_abs_sum - raw.log_abs) / math.log(10))
    else:
        kappa_digits = 16.0
    dps = int(16 + kappa_digits - math.log10(tol.rel_tol) + 10)
    while True:
        if dps > _MAX_DPS:
            raise BudgetExceededError(
                f"{label}: cancellation needs more than {_MAX_DPS} working digits"
            )
        logger.debug("%s: escalating to %d digits (estimate %.3g)", label, dps, raw.rel_error)
        raw = run_mp(dps)
        if raw.rel_error <= tol.rel_tol:
            return raw
        if math.isfinite(raw.log_abs):
            kappa_digits = (raw.log_abs_sum - raw.log_abs) / math.log(10)
        needed = int(kappa_digits - math.log10(tol.rel_tol) + 20)
        dps = max(2 * dps, needed)


def _result(raw, extra_log, extra_arg, margin, method):
    """Apply the prefactor exp(extra_log + i extra_arg) and package an EvalResult."""
    if raw.log_abs == -math.inf:
        log_value = LogComplex(-math.inf, 0.0)
    else:
        log_value = LogComplex(raw.log_abs + extra_log, raw.arg + extra_arg)
    value = log_value.to_complex() if log_value.is_representable else None
    log_tail = raw.log_tail + extra_log
    if log_tail == -math.inf:
        tail = 0.0
    elif log_tail > 709.0:
        tail = math.inf
    else:
        tail = math.exp(log_tail)
    return EvalResult(
        value=value,
        log_value=log_value,
        terms_used=raw.terms,
        tail_bound=tail,
        pole_margin=margin,
        method=method,
        precision=raw.precision,
        error_estimate=raw.rel_error,
    )


def _as_tol(tol):
    return Tolerance() if tol is None else tol


def zeta_q_direct(q, s, t, tol=None):
    """Sum the defining series sum_m q^{m t} [m]_q^{-s} (requires Re t > 0)."""
    qp = as_qparam(q)
    s, t = complex(s), complex(t)
    tol = _as_tol(tol)
    if not t.real > 0:
        raise ValueError(f"direct summation needs Re(t) > 0, got t = {t!r}")
    margin = epsilon_margin(qp, t, 0)
    raw = _direct_double(qp, s, t, tol)
    raw = _refine(raw, tol, lambda dps: _direct_mp(qp, s, t, tol, dps), "direct")
    return _result(raw, 0.0, 0.0, margin, Method.DIRECT)


def _continued(qp, s, base, shift, n, tol, margin, removable=None):
    n = int(n)
    if n < 1:
        raise ValueError(f"N must be a positive integer, got {n}")
    if n - 1 > tol.max_terms:
        raise BudgetExceededError(f"N - 1 = {n - 1} exceeds max_terms={tol.max_terms}")
    raw = _continuation_double(qp, s, base, shift, n, tol, removable)
    raw = _refine(
        raw,
        tol,
        lambda dps: _continuation_mp(qp, s, base, shift, n, tol, removable, dps),
        "continuation",
    )
    log_1mq = math.log(qp.one_minus_q)
    # (1 - q)^s = exp(s log(1 - q))
    return _result(raw, s.real * log_1mq, s.imag * log_1mq, margin, Method.CONTINUATION)


def zeta_q_continued(q, s, t, N, tol=None):
    """Evaluate zeta_q(s, t) through the continuation split at truncation point ``N``."""
    qp = as_qparam(q)
    s, t = complex(s), complex(t)
    tol = _as_tol(tol)
    margin = _check_two_variable_margin(qp, t)
    return _continued(qp, s, t, 0, N, tol, margin)


def _direct_terms_needed(qp, s, t, tol):
    """Rough count of terms the direct sum needs; used only for routing."""
    # q^{M Re t} ~ rel_tol, padded for the [m]_q^{-sigma} factor
    pad = abs(s.real) * -math.log(qp.one_minus_q)
    return (math.log(tol.rel_tol) - pad - 5.0) / (t.real * qp.log_q)


def zeta_q_single(q, s, tol=None):
    """Evaluate zeta_q(s) = zeta_q(s, s - 1).

    Re s > 1 uses direct summation, otherwise the continuation with
    N = choose_n(q, Re s - 1, max(|Im s|, 1)). When Re s is so close to 1 that
    the direct sum would exceed the term budget, the continuation is used.
    """
    qp = as_qparam(q)
    s = complex(s)
    tol = _as_tol(tol)
    _check_single_variable_distance(qp, s)
    margin = epsilon_margin(qp, s, -1)
    t = s - 1.0
    if s.real > 1.0 and _direct_terms_needed(qp, s, t, tol) <= tol.max_terms:
        raw = _direct_double(qp, s, t, tol)
        raw = _refine(raw, tol, lambda dps: _direct_mp(qp, s, t, tol, dps), "direct")
        return _result(raw, 0.0, 0.0, margin, Method.DIRECT)

    removable = None
    if s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real):
        # s = -k: the pole of 1/(1 - q^{t+r}) at r = k + 1 meets a zero of the
        # binomial; the term's limit is (-1)^(k+1) / ((k + 1) log q)
        k = int(-s.real)
        value = (-1) ** (k + 1) / ((k + 1) * qp.log_q)

        def exact(dps, k=k):
            with mpmath.workdps(dps):
                return (-1) ** (k + 1) / ((k + 1) * mpmath.log(mpmath.mpf(qp.q)))

        removable = (k + 1, value, exact)
    n = choose_n(qp, s.real - 1.0, max(abs(s.imag), 1.0))
    return _continued(qp, s, s, -1, n, tol, margin, removable)


def zeta_q(q, s, t, tol=None, method="auto", N=None):
    """Evaluate zeta_q(s, t), choosing the route.

    ``method="auto"`` sums directly when Re t > 0.1, otherwise uses the
    continuation with ``N`` (default ``choose_n(q, Re t, max(|Im s|, 1))``).
    """
    qp = as_qparam(q)
    s, t = complex(s), complex(t)
    method = str(getattr(method, "value", method))
    if method not in ("auto", "direct", "continuation"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "direct" if t.real > _AUTO_DIRECT_MIN_RE_T else "continuation"
    if method == "direct":
        return zeta_q_direct(qp, s, t, tol)
    if N is None:
        N = choose_n(qp, t.real, max(abs(s.imag), 1.0))
    return zeta_q_continued(qp, s, t, N, tol)


# ---------------------------------------------------------------------------
# classical zeta (reference for the q -> 1 limit)

_EM_TERMS = 40
# B_{2k} / (2k)!, k = 1.._EM_TERMS
_EM_COEFFS = tuple(
    b / math.factorial(2 * k) for k, b in enumerate(bernoulli_even(_EM_TERMS), start=1)
)


def classical_zeta(s):
    """Riemann zeta(s) for Re s > -1, s != 1, by Euler-Maclaurin summation.

    The correction series is stopped once the Backlund-type remainder bound
    |s + 2K + 1| / (Re s + 2K + 1) * |T_{K+1}| falls below 1e-16 |zeta(s)|.
    """
    s = complex(s)
    if abs(s - 1.0) <= POLE_MARGIN:
        raise PoleProximityError(f"zeta(s) has a pole at s = 1; got s = {s!r}", 1 + 0j, abs(s - 1))
    if not s.real > -1.0:
        raise ValueError(f"classical_zeta is implemented for Re(s) > -1, got {s!r}")
    n = max(20, math.ceil(abs(s.imag) / 2.0) + 10)
    re_terms = []
    im_terms = []
    for k in range(1, n):
        z = complex_pow(k, -s)
        re_terms.append(z.real)
        im_terms.append(z.imag)
    n_pow = complex_pow(n, -s)
    head = n * n_pow / (s - 1.0) + 0.5 * n_pow
    re_terms.append(head.real)
    im_terms.append(head.imag)
    # T_k = B_{2k}/(2k)! * s (s+1) ... (s+2k-2) * n^{-s-2k+1}
    rising = s
    power = n_pow / n
    base = complex(math.fsum(re_terms), math.fsum(im_terms))
    for k in range(1, _EM_TERMS):
        term = _EM_COEFFS[k - 1] * rising * power
        re_terms.append(term.real)
        im_terms.append(term.imag)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= n * n
        nxt = _EM_COEFFS[k] * rising * power
        bound = abs(s + 2 * k + 1) / (s.real + 2 * k + 1) * abs(nxt)
        if bound <= 1e-16 * abs(base):
            break
    return complex(math.fsum(re_terms), math.fsum(im_terms))

