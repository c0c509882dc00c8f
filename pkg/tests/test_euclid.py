import random
from fractions import Fraction

import pytest
import sympy

from workbench.algebra.euclid import (
    canonical_scale,
    content_in,
    gcd_poly,
    is_squarefree,
    monomial_variables,
    resultant,
    resultant_univariate,
)
from workbench.algebra.gaussrat import GaussRat
from workbench.algebra.poly import SparsePoly, random_poly
from workbench.errors import InvalidInput

from conftest import to_sympy, variables


def test_resultant_quadratic_vs_linear():
    # Res_T(T^2 + (1 + L^2), 2T) = 4(1 + L^2), by the 3x3 Sylvester determinant
    L, T = variables(2)
    f = T**2 + (1 + L**2)
    g = 2 * T
    assert resultant(f, g, var=1) == 4 * (1 + L**2)


def test_resultant_two_linear_sign_convention():
    # Sylvester rows of the first argument first: Res_T(T - a, T - b) = a - b
    a, b, T = variables(3)
    assert resultant(T - a, T - b, var=2) == a - b


def test_resultant_discriminant_shape():
    # Res_T(T^4 + T^2 + L^2, 4T^3 + 2T) = 256 L^2 (L^2 - 1/4)^2
    L, T = variables(2)
    f = T**4 + T**2 + L**2
    r = resultant(f, f.partial_derivative(1), var=1)
    expected = (L**2 * (L**2 - Fraction(1, 4)) ** 2).scale(256)
    assert r == expected


def _sympy_sylvester_det(f, g, Ls):
    """Independent oracle: the Sylvester determinant with f rows on top."""
    fc = [to_sympy(c, (Ls,)) for c in f.coeffs_in(1)]
    gc = [to_sympy(c, (Ls,)) for c in g.coeffs_in(1)]
    n, m = len(fc) - 1, len(gc) - 1
    size = n + m
    rows = []
    for i in range(m):
        rows.append([0] * i + list(reversed(fc)) + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + list(reversed(gc)) + [0] * (size - m - 1 - i))
    return sympy.expand(sympy.Matrix(rows).det())


def test_resultant_against_sylvester_determinant_oracle(rng):
    Ls, Ts = sympy.symbols("L T")
    checked = 0
    for _ in range(25):
        f = random_poly(rng, 2, 3, max_terms=4, coeff_range=3)
        g = random_poly(rng, 2, 3, max_terms=4, coeff_range=3)
        if not f or not g or f.degree_in(1) < 1 or g.degree_in(1) < 1:
            continue
        ours = resultant(f, g, var=1)
        assert to_sympy(ours, (Ls, Ts)) == _sympy_sylvester_det(f, g, Ls)
        # sympy's resultant agrees up to the orientation sign
        theirs = sympy.expand(
            sympy.resultant(to_sympy(f, (Ls, Ts)), to_sympy(g, (Ls, Ts)), Ts)
        )
        assert to_sympy(ours, (Ls, Ts)) in (theirs, sympy.expand(-theirs))
        checked += 1
    assert checked >= 10


def test_resultant_degree_zero_convention():
    L, T = variables(2)
    c = L**2 + 1  # constant in T
    g = T**3 + L
    assert resultant(c, g, var=1) == c**3
    assert resultant(g, c, var=1) == c**3
    assert resultant(c, c, var=1) == SparsePoly.one(2)
    with pytest.raises(InvalidInput):
        resultant(SparsePoly.zero(2), SparsePoly.zero(2), var=1)


def test_resultant_vanishes_iff_common_factor(rng):
    # zero resultant exactly when the gcd is nonconstant
    for _ in range(40):
        a = random_poly(rng, 2, 2, max_terms=3, coeff_range=2)
        b = random_poly(rng, 2, 2, max_terms=3, coeff_range=2)
        c = random_poly(rng, 2, 2, max_terms=3, coeff_range=2)
        if not a or not b or not c:
            continue
        f, g = a * c, b * c
        if f.degree_in(1) == 0 or g.degree_in(1) == 0:
            continue
        res = resultant(f, g, var=1)
        gcd = gcd_poly(f, g, 1)
        # zero resultant exactly when the gcd has positive main-variable degree
        assert (not res) == (gcd.degree_in(1) > 0)
        if c.degree_in(1) > 0:
            assert not res


def test_gcd_examples():
    x0, x1, x2 = variables(3)
    assert gcd_poly(x0**2 - x1**2, x0 - x1, 0) == x0 - x1
    assert gcd_poly(x0**2 + x1, x0 - x1, 0).is_constant()
    # coprime pair over the w-field: gcd must be constant
    w1 = SparsePoly.variable(3, 5)
    w2 = SparsePoly.variable(4, 5)
    x0, x1, x2 = (SparsePoly.variable(i, 5) for i in range(3))
    f = x0**2 + x1**2 + x2**2
    g = 2 * w1 * x1**2 + 2 * w2 * x2**2
    assert gcd_poly(f, g, 0).is_constant()


def test_gcd_against_sympy(rng):
    xs = sympy.symbols("x0 x1")
    for _ in range(25):
        a = random_poly(rng, 2, 2, max_terms=3, coeff_range=3, gaussian=False)
        b = random_poly(rng, 2, 2, max_terms=3, coeff_range=3, gaussian=False)
        c = random_poly(rng, 2, 2, max_terms=3, coeff_range=3, gaussian=False)
        if not a or not b or not c:
            continue
        ours = gcd_poly(a * c, b * c, 0)
        theirs = sympy.gcd(to_sympy(a * c, xs), to_sympy(b * c, xs))
        # compare up to a constant: the quotient of the two gcds is constant
        q = sympy.simplify(to_sympy(ours, xs) / theirs)
        assert q.is_constant()


def test_content_and_canonical_scale():
    x0, x1 = variables(2)
    p = (x1**2 + x1) * x0**2 + (x1**3 + x1**2) * x0
    c = content_in(p, 0)
    assert c == x1**2 + x1
    q = canonical_scale(3 * x0 + 6 * x1)
    assert q.terms[max(q.terms)] == GaussRat(1)


def test_squarefree_and_monomial_checks():
    x0, x1, x2 = variables(3)
    assert is_squarefree(x0 * x1 + x2**2)
    assert not is_squarefree((x0 + x1) ** 2 * x2)
    assert monomial_variables(x0**2 * x1) == [0, 1]
    assert monomial_variables(x0 + x1) == []


def test_resultant_univariate_alias():
    t = SparsePoly.variable(0, 1)
    r = resultant_univariate(t**2 - 1, t - 1)
    assert not r  # shared root => zero resultant
