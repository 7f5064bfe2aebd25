"""Exact number field: arithmetic, comparisons, floor/mod, lattice gcd."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gaborbox.errors import ContextMismatch, NotOnLattice
from gaborbox.exactnum import (
    RATIONAL,
    ExactReal,
    floor_div,
    lattice_gcd,
    mod,
    pi_context,
    rat,
    square_free_decompose,
    surd_context,
)

PI = pi_context()
SQRT2 = surd_context(2)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)
small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


# -- construction and contexts ----------------------------------------------

def test_rational_context_rejects_tau_coefficient():
    with pytest.raises(ContextMismatch):
        ExactReal(RATIONAL, F(1), F(1))


def test_mixing_two_irrational_contexts_fails():
    x = PI.num(0, 1)
    y = SQRT2.num(0, 1)
    with pytest.raises(ContextMismatch):
        x + y


def test_rational_mixes_into_any_context():
    x = PI.num(1, F(1, 2))  # 1 + pi/2
    y = rat(F(3, 4))
    assert (x + y).x0 == F(7, 4)
    assert (x + y).x1 == F(1, 2)


def test_surd_context_normalizes_square_factor():
    # sqrt(8) = 2*sqrt(2): both contexts must compare equal
    assert surd_context(8) == surd_context(2)


def test_square_free_decompose():
    assert square_free_decompose(8) == (2, 2)
    assert square_free_decompose(12) == (2, 3)
    assert square_free_decompose(49) == (7, 1)
    assert square_free_decompose(1) == (1, 1)
    assert square_free_decompose(97) == (1, 97)


# -- field operations --------------------------------------------------------

@given(x0=fractions, x1=fractions, y0=fractions, y1=fractions)
def test_addition_is_coefficientwise(x0, x1, y0, y1):
    s = PI.num(x0, x1) + PI.num(y0, y1)
    assert (s.x0, s.x1) == (x0 + y0, x1 + y1)


@given(x0=fractions, x1=fractions, q=fractions)
def test_rational_scaling(x0, x1, q):
    prod = PI.num(x0, x1) * rat(q)
    assert (prod.x0, prod.x1) == (x0 * q, x1 * q)


def test_surd_product_closes_in_field():
    # (1 + sqrt2)(3 - 2 sqrt2) = 3 - 2 sqrt2 + 3 sqrt2 - 4 = -1 + sqrt2
    p = SQRT2.num(1, 1) * SQRT2.num(3, -2)
    assert (p.x0, p.x1) == (F(-1), F(1))


def test_pi_times_pi_is_rejected():
    # pi^2 leaves the linear model Q + Q*pi
    with pytest.raises(ValueError):
        PI.num(0, 1) * PI.num(0, 1)


def test_surd_division():
    # 1/(1+sqrt2) = sqrt2 - 1
    q = rat(1) / SQRT2.num(1, 1)
    assert (q.x0, q.x1) == (F(-1), F(1))


def test_pi_division_by_irrational_rejected():
    with pytest.raises(ValueError):
        rat(1) / PI.num(0, 1)


# -- sign, order, ratio ------------------------------------------------------

def test_sign_certifies_tight_pi_combinations():
    # 355/113 is famously close to pi (about 2.7e-7 above it)
    assert PI.num(F(355, 113), -1).sign() == 1
    assert PI.num(F(-355, 113), 1).sign() == -1
    assert PI.num(0, 0).sign() == 0


def test_sign_certifies_tight_surd_combinations():
    # 99/70 > sqrt2 by about 7e-5
    assert SQRT2.num(F(99, 70), -1).sign() == 1
    assert SQRT2.num(F(-99, 70), 1).sign() == -1


@given(x0=small_fractions, x1=small_fractions)
def test_sign_matches_float(x0, x1):
    v = PI.num(x0, x1)
    approx = float(x0) + float(x1) * 3.141592653589793
    if abs(approx) > 1e-9:
        assert v.sign() == (1 if approx > 0 else -1)


def test_ratio_detects_rational_quotients():
    x = PI.num(2, 3)  # 2 + 3 pi
    assert x.ratio(PI.num(F(2, 5), F(3, 5))) == F(5)
    assert x.ratio(PI.num(1, 1)) is None
    assert rat(0).ratio(PI.num(0, 1)) == 0


def test_comparison_total_order():
    vals = [PI.num(0, 1), rat(3), PI.num(0, F(1, 2)), rat(F(22, 7))]
    ordered = sorted(vals)
    assert [float(v) for v in ordered] == sorted(float(v) for v in vals)


# -- floor_div / mod ---------------------------------------------------------

@given(t=fractions, a=fractions.filter(lambda q: q > 0))
def test_floor_div_rational_matches_fraction_floor(t, a):
    assert floor_div(rat(t), rat(a)) == (t / a).__floor__()


@given(k=st.integers(-40, 40), num=st.integers(1, 30), den=st.integers(1, 30))
def test_floor_div_exact_multiples_of_pi(k, num, den):
    a = PI.num(0, F(num, den))
    t = k * a
    # t = k*a exactly: floor must be k even though the quotient is irrational-over-irrational
    assert floor_div(t, a) == k
    assert mod(t, a).is_zero()


@given(x0=small_fractions, x1=small_fractions,
       a0=small_fractions, a1=small_fractions)
@settings(max_examples=300)
def test_floor_div_defining_inequality(x0, x1, a0, a1):
    a = PI.num(a0, a1)
    if a.sign() <= 0:
        a = -a
    if a.sign() == 0:
        return
    t = PI.num(x0, x1)
    k = floor_div(t, a)
    assert (t - k * a).sign() >= 0
    assert (t - (k + 1) * a).sign() < 0


def test_mod_lands_in_window():
    a = PI.num(0, F(1, 4))
    t = PI.num(23, F(-11, 2))
    r = mod(t, a)
    assert r.sign() >= 0
    assert (r - a).sign() < 0


# -- lattice gcd -------------------------------------------------------------

def test_lattice_gcd_pulls_integer_gcd():
    r = PI.num(0, F(1, 17))
    assert lattice_gcd(6 * r, 15 * r, r) == 3 * r


def test_lattice_gcd_rejects_off_lattice_input():
    r = rat(F(1, 17))
    with pytest.raises(NotOnLattice):
        lattice_gcd(rat(F(1, 2)), rat(F(3, 17)), r)


# -- rendering ---------------------------------------------------------------

def test_render_roundtrips_common_shapes():
    assert rat(F(13, 17)).render() == "13/17"
    assert PI.num(0, F(1, 4)).render() == "1/4*pi"
    assert PI.num(23, F(-11, 2)).render() == "23-11/2*pi"
    assert SQRT2.num(1, 1).render() == "1+sqrt(2)"


def test_float_conversion_close():
    assert abs(float(PI.num(0, F(1, 4))) - 0.7853981633974483) < 1e-15
