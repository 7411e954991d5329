"""Complex-arithmetic primitives: log-gamma, real-base powers, generalized
binomial coefficients and an overflow-safe polar value type.

Plain Python ``complex`` plays the role of a rectangular complex value; the
:class:`LogComplex` type carries values whose magnitude does not fit a double.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import GammaPoleError

__all__ = [
    "LogComplex",
    "wrap_angle",
    "log_gamma",
    "complex_pow",
    "complex_expm1",
    "general_binomial",
    "binomial_product",
    "near_nonpositive_integer",
    "bernoulli_even",
]

# log(max finite double) is ~709.78; stay a little inside it
_MAX_LOG = 709.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_GAMMA_POLE_TOL = 1e-12
_BINOMIAL_POLE_TOL = 1e-8
# Stirling is applied at |w| >= _STIRLING_MIN with Re w >= 1
_STIRLING_MIN = 15.0


def bernoulli_even(kmax):
    """B_2, B_4, ..., B_{2 kmax} as exact fractions (Akiyama-Tanigawa)."""
    nmax = 2 * kmax
    a = [Fraction(0)] * (nmax + 1)
    out = []
    for m in range(nmax + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


# B_{2k} / (2k (2k-1)), k = 1..10
_STIRLING_COEFFS = tuple(
    float(b / ((2 * k) * (2 * k - 1)))
    for k, b in enumerate(bernoulli_even(10), start=1)
)


def wrap_angle(theta):
    """Map an angle to the half-open interval (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    if -math.pi < theta <= math.pi:
        return theta
    wrapped = math.remainder(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as ``exp(log_abs) * exp(1j * arg)``.

    Zero is represented by ``log_abs == -inf`` (and ``arg == 0``).
    """

    log_abs: float
    arg: float

    def __post_init__(self):
        if math.isnan(self.log_abs) or self.log_abs == math.inf:
            raise ValueError(f"log_abs must be finite or -inf, got {self.log_abs!r}")
        object.__setattr__(self, "log_abs", float(self.log_abs))
        if self.log_abs == -math.inf:
            object.__setattr__(self, "arg", 0.0)
        else:
            object.__setattr__(self, "arg", wrap_angle(float(self.arg)))

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"cannot represent non-finite value {z!r}")
        if z == 0:
            return cls(-math.inf, 0.0)
        # hypot-based log avoids overflow in |z|^2
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    @classmethod
    def from_log(cls, w):
        """Build from a complex logarithm ``w`` (any branch)."""
        w = complex(w)
        return cls(w.real, w.imag)

    @property
    def is_zero(self):
        return self.log_abs == -math.inf

    @property
    def is_representable(self):
        """True when the value converts to a finite double-precision complex."""
        return self.log_abs <= _MAX_LOG

    def to_complex(self):
        if self.is_zero:
            return 0j
        if not self.is_representable:
            raise OverflowError(f"|value| = exp({self.log_abs:.6g}) exceeds double range")
        return cmath.rect(math.exp(self.log_abs), self.arg)

    def __complex__(self):
        return self.to_complex()

    def __abs__(self):
        return math.exp(self.log_abs) if self.is_representable else math.inf

    def conjugate(self):
        return LogComplex(self.log_abs, -self.arg if self.arg != math.pi else math.pi)

    def __mul__(self, other):
        other = _as_logcomplex(other)
        if self.is_zero or other.is_zero:
            return LogComplex(-math.inf, 0.0)
        return LogComplex(self.log_abs + other.log_abs, self.arg + other.arg)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_logcomplex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogComplex")
        if self.is_zero:
            return self
        return LogComplex(self.log_abs - other.log_abs, self.arg - other.arg)

    def isclose(self, other, rel_tol=1e-12):
        """Relative closeness measured in the complex plane, overflow-free."""
        other = _as_logcomplex(other)
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        scale = max(self.log_abs, other.log_abs)
        a = cmath.rect(math.exp(self.log_abs - scale), self.arg)
        b = cmath.rect(math.exp(other.log_abs - scale), other.arg)
        return abs(a - b) <= rel_tol * max(abs(a), abs(b))


def _as_logcomplex(x):
    if isinstance(x, LogComplex):
        return x
    return LogComplex.from_complex(x)


def near_nonpositive_integer(z, tol):
    """Return the non-positive integer within ``tol`` of ``z``, else None."""
    z = complex(z)
    n = round(z.real)
    if n <= 0 and abs(z - n) <= tol:
        return int(n)
    return None


def log_gamma(z):
    """Continuous-branch logarithm of the gamma function.

    The imaginary part is the branch that is continuous on the plane cut along
    the non-positive real axis and zero on the positive real axis, which is
    *not* in general the principal logarithm of ``Gamma(z)``.

    Parameters
    ----------
    z : complex
        Argument, not within 1e-12 of a non-positive integer.

    Returns
    -------
    complex
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"log_gamma argument must be finite, got {z!r}")
    n = near_nonpositive_integer(z, _GAMMA_POLE_TOL)
    if n is not None:
        raise GammaPoleError(f"log_gamma has a pole at {n}; argument {z!r} is too close")
    if z.imag == 0.0 and z.real > 0.0:
        return complex(math.lgamma(z.real), 0.0)

    if abs(z.imag) >= _STIRLING_MIN:
        shift = max(0, math.ceil(1.0 - z.real))
    else:
        shift = max(0, math.ceil(_STIRLING_MIN - z.real))
    w = z + shift
    # principal logs of z+k sum to the continuous branch off the negative axis
    corr_re = []
    corr_im = []
    for k in range(shift):
        lk = cmath.log(z + k)
        corr_re.append(lk.real)
        corr_im.append(lk.imag)
    correction = complex(math.fsum(corr_re), math.fsum(corr_im))
    return _stirling(w) - correction


def _stirling(w):
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    for c in reversed(_STIRLING_COEFFS):
        series = series * inv2 + c
    series *= inv
    return (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + series


def complex_pow(base, exponent):
    """``base ** exponent`` for a positive real base, via the real logarithm."""
    base = float(base)
    if not base > 0.0 or not math.isfinite(base):
        raise ValueError(f"complex_pow needs a finite positive base, got {base!r}")
    return cmath.exp(complex(exponent) * math.log(base))


def complex_expm1(z):
    """``exp(z) - 1`` without cancellation for small ``|z|``."""
    z = complex(z)
    x, y = z.real, z.imag
    if y == 0.0:
        return complex(math.expm1(x), 0.0)
    half_sin = math.sin(0.5 * y)
    re = math.expm1(x) * math.cos(y) - 2.0 * half_sin * half_sin
    im = math.exp(x) * math.sin(y)
    return complex(re, im)


def binomial_product(s, r):
    """``binom(r + s - 1, r)`` as the finite product ``prod_j (s + j) / (j + 1)``.

    Accumulated as a sum of logarithms so large ``r`` cannot overflow.
    """
    s = complex(s)
    r = int(r)
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    log_re = []
    arg = 0.0
    for j in range(r):
        factor = (s + j) / (j + 1)
        if factor == 0:
            return LogComplex(-math.inf, 0.0)
        log_re.append(math.log(abs(factor)))
        arg += math.atan2(factor.imag, factor.real)
    return LogComplex(math.fsum(log_re), wrap_angle(arg) if r else 0.0)


def general_binomial(s, r):
    """Generalized binomial coefficient ``binom(r + s - 1, r)``.

    Computed as ``exp(lgamma(r + s) - lgamma(r + 1) - lgamma(s))``. When ``s``
    lies within 1e-8 of a non-positive integer the exact finite product is used
    instead, since the gamma ratio degenerates to 0/0 there.

    Returns
    -------
    LogComplex
        Exactly one for ``r == 0``.
    """
    s = complex(s)
    r = int(r)
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if r == 0:
        return LogComplex(0.0, 0.0)
    if near_nonpositive_integer(s, _BINOMIAL_POLE_TOL) is not None:
        return binomial_product(s, r)
    w = log_gamma(r + s) - math.lgamma(r + 1) - log_gamma(s)
    return LogComplex.from_log(w)
