import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import binom_product, rel_err
from qzeta import GammaPoleError, LogComplex, complex_pow, general_binomial, log_gamma
from qzeta.complex_kernel import (
    binomial_product,
    bernoulli_even,
    complex_expm1,
    near_nonpositive_integer,
    wrap_angle,
)
from shape_grids import binomial_log_ratios

finite = st.floats(min_value=-40, max_value=40, allow_nan=False, allow_infinity=False)


# ----------------------------------------------------------------- log_gamma

@pytest.mark.parametrize(
    "z, expected",
    [(1, 0.0), (0.5, 0.5 * math.log(math.pi)), (5, math.log(24.0))],
)
def test_log_gamma_examples(z, expected):
    w = log_gamma(z)
    assert w.real == pytest.approx(expected, rel=1e-14, abs=1e-15)
    assert w.imag == 0.0


LG_GRID = [complex(x, y)
           for x in (-20.7, -5.5, -2.3, -0.4, 0.25, 0.9, 1.7, 3.0, 7.5, 20.1, 80.0, 300.0)
           for y in (-250.0, -30.0, -3.0, -0.5, 0.0, 0.5, 3.0, 14.0, 16.0, 30.0, 250.0)]


@pytest.mark.parametrize("z", LG_GRID)
def test_log_gamma_against_mpmath(z):
    with mp.workdps(40):
        ref = complex(mp.loggamma(mp.mpc(z)))
    got = log_gamma(z)
    # relative error on the complex logarithm; absolute near the zeros of log Gamma
    assert abs(got - ref) <= 1e-12 * max(abs(ref), 1.0)


@given(x=finite, y=st.floats(min_value=0.01, max_value=60) | st.floats(min_value=-60, max_value=-0.01))
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    lhs = log_gamma(z + 1) - log_gamma(z)
    assert abs(lhs - cmath.log(z)) <= 1e-11 * max(abs(log_gamma(z)), 1.0)


@given(x=st.floats(min_value=-30, max_value=30), y=st.floats(min_value=1e-6, max_value=60))
def test_log_gamma_conjugation(x, y):
    z = complex(x, y)
    if near_nonpositive_integer(z, 1e-9) is not None:
        return
    assert log_gamma(z.conjugate()) == pytest.approx(log_gamma(z).conjugate(), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("z", [0, -1, -7, -3 + 1e-13, complex(-2, 5e-13)])
def test_log_gamma_pole_error(z):
    with pytest.raises(GammaPoleError):
        log_gamma(z)


def test_log_gamma_rejects_nonfinite():
    with pytest.raises(ValueError):
        log_gamma(complex(math.inf, 0))


def test_log_gamma_near_pole_is_large_but_finite():
    w = log_gamma(-3 + 1e-9)
    assert math.isfinite(w.real) and w.real > 15


def test_bernoulli_numbers():
    from fractions import Fraction
    assert bernoulli_even(4) == [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30)]


# ----------------------------------------------------------------- complex_pow

def test_complex_pow_examples():
    assert complex_pow(2, 0) == 1
    assert complex_pow(0.5, 1) == pytest.approx(0.5, rel=1e-15)
    period = 2 * math.pi / math.log(0.5)
    for k in (-3, -1, 1, 2, 5):
        assert abs(complex_pow(0.5, 1j * period * k) - 1) < 1e-14


@given(base=st.floats(min_value=1e-3, max_value=1e3), x=finite, y=finite)
def test_complex_pow_matches_mpmath(base, x, y):
    with mp.workdps(30):
        ref = complex(mp.power(mp.mpf(base), mp.mpc(x, y)))
    assert rel_err(complex_pow(base, complex(x, y)), ref) <= 1e-13 * max(1.0, abs(math.log(base) * complex(x, y)))


@pytest.mark.parametrize("base", [0.0, -1.0, math.inf, math.nan])
def test_complex_pow_domain_error(base):
    with pytest.raises(ValueError):
        complex_pow(base, 1j)


@given(x=st.floats(min_value=-5, max_value=5), y=st.floats(min_value=-5, max_value=5))
def test_complex_expm1(x, y):
    z = complex(x, y)
    with mp.workdps(30):
        ref = complex(mp.expm1(mp.mpc(z)))
    assert abs(complex_expm1(z) - ref) <= 1e-15 * max(abs(ref), 1e-300) * 8 + 1e-300


def test_complex_expm1_small_argument():
    z = complex(1e-12, 1e-12)
    assert rel_err(complex_expm1(z), complex(1e-12, 1e-12) + z * z / 2) < 1e-10


# ----------------------------------------------------------------- general_binomial

def test_binomial_r0_is_exactly_one():
    for s in (0, 2 + 3j, -4, complex(0.3, 1e5)):
        b = general_binomial(s, 0)
        assert b.log_abs == 0.0 and b.arg == 0.0
        assert b.to_complex() == 1


def test_binomial_examples():
    assert general_binomial(2, 7).to_complex() == pytest.approx(8, rel=1e-13)
    expected = (-3 + 15j) / 2
    assert rel_err(general_binomial(2 + 3j, 2).to_complex(), expected) < 1e-13


BINOM_S = [complex(x, y) for x in (-7.5, -2.2, -0.5, 0.1, 1.0, 2.0, 5.3) for y in (-40.0, -2.5, 0.0, 1.0, 12.0)]


@pytest.mark.parametrize("s", BINOM_S)
def test_binomial_product_oracle(s):
    for r in range(0, 31):
        ref = binom_product(s, r)
        got = general_binomial(s, r)
        if ref == 0:
            assert got.is_zero
        else:
            assert got.isclose(ref, rel_tol=1e-10), (s, r)


@pytest.mark.parametrize("s", [0, -1, -3, -3 + 1e-9, complex(-5, 1e-10)])
def test_binomial_near_nonpositive_integer_uses_product(s):
    for r in range(0, 12):
        ref = binom_product(s, r)
        got = general_binomial(s, r)
        if abs(ref) < 1e-300:
            assert got.is_zero or abs(got) < 1e-6
        else:
            assert got.isclose(ref, rel_tol=1e-10)


@given(x=finite, y=finite, r=st.integers(min_value=0, max_value=400))
def test_binomial_conjugation(x, y, r):
    s = complex(x, y)
    a = general_binomial(s, r)
    b = general_binomial(s.conjugate(), r)
    if a.is_zero:
        assert b.is_zero
    else:
        assert b.isclose(a.conjugate(), rel_tol=1e-10)


@given(x=finite, y=finite, r=st.integers(min_value=1, max_value=400))
def test_binomial_pascal_recurrence(x, y, r):
    s = complex(x, y)
    prev = general_binomial(s, r - 1)
    cur = general_binomial(s, r)
    factor = (r + s - 1) / r
    if prev.is_zero or factor == 0:
        assert cur.is_zero or abs(cur) < 1e-6 * max(abs(prev), 1.0)
        return
    assert cur.isclose(prev * LogComplex.from_complex(factor), rel_tol=1e-10)


def test_binomial_large_arguments_do_not_overflow():
    b = general_binomial(complex(2.0, 500.0), 2000)
    assert b.log_abs > 709  # beyond double range, still finite in log form
    assert b.isclose(binomial_product(complex(2.0, 500.0), 2000), rel_tol=1e-9)


def test_binomial_negative_r_rejected():
    with pytest.raises(ValueError):
        general_binomial(1.5, -1)
    with pytest.raises(ValueError):
        binomial_product(1.5, -1)


def test_binomial_log_ratio_is_bounded():
    """The binomial never exceeds its Stirling-shape majorant on the grid.

    The majorant is loose by a factor that varies by hundreds of orders of
    magnitude across the grid, so only the one-sided bound is asserted here;
    the median-relative form is exercised by the acceptance suite.
    """
    ratios = np.array([x[3] for x in binomial_log_ratios()])
    assert np.all(np.isfinite(ratios))
    assert ratios.max() < 0.0


# ----------------------------------------------------------------- LogComplex

def test_wrap_angle():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(0.25) == 0.25
    with pytest.raises(ValueError):
        wrap_angle(math.inf)


@given(theta=st.floats(min_value=-1e6, max_value=1e6))
def test_logcomplex_arg_normalized(theta):
    z = LogComplex(0.0, theta)
    assert -math.pi < z.arg <= math.pi
    assert abs(cmath.exp(1j * z.arg) - cmath.exp(1j * theta)) < 1e-9


@given(x=st.floats(min_value=-1e150, max_value=1e150), y=st.floats(min_value=-1e150, max_value=1e150))
def test_logcomplex_round_trip(x, y):
    z = complex(x, y)
    w = LogComplex.from_complex(z).to_complex()
    if z == 0:
        assert w == 0
    else:
        assert abs(w - z) <= 1e-12 * abs(z)


def test_logcomplex_zero_and_overflow():
    zero = LogComplex.from_complex(0)
    assert zero.is_zero and zero.to_complex() == 0 and abs(zero) == 0.0
    big = LogComplex(800.0, 1.0)
    assert not big.is_representable
    assert abs(big) == math.inf
    with pytest.raises(OverflowError):
        big.to_complex()
    with pytest.raises(ValueError):
        LogComplex(math.nan, 0.0)
    with pytest.raises(ValueError):
        LogComplex.from_complex(complex(math.inf, 0))


def test_logcomplex_arithmetic():
    a = LogComplex.from_complex(3 + 4j)
    b = LogComplex.from_complex(-1 + 2j)
    assert (a * b).isclose((3 + 4j) * (-1 + 2j), rel_tol=1e-14)
    assert (a / b).isclose((3 + 4j) / (-1 + 2j), rel_tol=1e-14)
    assert (a * 0).is_zero
    with pytest.raises(ZeroDivisionError):
        a / 0
    assert a.conjugate().isclose(3 - 4j, rel_tol=1e-15)
    assert LogComplex(1000.0, 0.5).isclose(LogComplex(1000.0 + 1e-14, 0.5), rel_tol=1e-12)
    assert not LogComplex(1000.0, 0.5).isclose(LogComplex(1000.0, 0.6), rel_tol=1e-12)
