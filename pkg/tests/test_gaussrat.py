from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from workbench.algebra.gaussrat import GaussRat


small_rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=20
)
gauss = st.builds(GaussRat, small_rationals, small_rationals)


def test_basic_arithmetic():
    i = GaussRat.i()
    assert i * i == GaussRat(-1)
    assert (GaussRat(1, 2) * GaussRat(1, -2)) == GaussRat(5)
    assert GaussRat(3, 4) - GaussRat(3, 4) == GaussRat(0)
    assert not GaussRat(0)
    assert GaussRat(Fraction(1, 2)) + GaussRat(Fraction(1, 2)) == GaussRat(1)


def test_division_and_pow():
    z = GaussRat(2, 1)
    assert z / z == GaussRat(1)
    assert z ** -1 == GaussRat(1) / z
    assert z**3 == z * z * z
    with pytest.raises(ZeroDivisionError):
        z / GaussRat(0)


def test_string_round_trip():
    z = GaussRat(Fraction(-3, 7), Fraction(5, 11))
    re, im = z.to_strings()
    assert GaussRat.from_strings(re, im) == z


def test_complex_conversion():
    assert complex(GaussRat(1, 2)) == 1 + 2j


@given(gauss, gauss, gauss)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(gauss)
def test_field_inverse(a):
    if a:
        assert a * (GaussRat(1) / a) == GaussRat(1)


@given(gauss, gauss)
def test_exact_subtraction(a, b):
    assert (a + b) - b == a
