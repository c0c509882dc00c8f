import cmath
import math

import numpy as np
import pytest

from workbench.algebra.gaussrat import GaussRat
from workbench.algebra.poly import SparsePoly
from workbench.expsum import ExpSumFn, eval_poly_on_tuple
from workbench.nevanlinna import MeroFn

from conftest import variables


def z():
    return SparsePoly.variable(0, 1)


def test_exact_zero_grouping():
    ez = ExpSumFn.from_mero(MeroFn.unit(z()))
    s = ez + ExpSumFn.constant(1) - ExpSumFn.constant(1) - ez
    assert s.is_zero()
    # distinct exponents never cancel
    s2 = ez - ExpSumFn.from_mero(MeroFn.unit(2 * z()))
    assert not s2.is_zero()


def test_rational_normalization():
    t = z()
    a = ExpSumFn.from_terms([(t, t - 1, SparsePoly.zero(1))])
    b = ExpSumFn.from_terms([(t * (t + 2), (t - 1) * (t + 2), SparsePoly.zero(1))])
    assert a.terms == b.terms  # common factors cancel exactly


def test_eval_and_derivative():
    t = z()
    f = ExpSumFn.from_terms([(t**2, SparsePoly.one(1), 3 * t)])  # z^2 e^{3z}
    d = f.derivative()  # (2z + 3z^2) e^{3z}
    for w in (0.5 + 0.2j, -1 + 1j):
        expected = (2 * w + 3 * w**2) * cmath.exp(3 * w)
        assert d.eval(w) == pytest.approx(expected, rel=1e-12)


def test_poly_evaluation_on_tuple():
    x0, x1, x2 = variables(3)
    G = x0**2 + x1**2 + x2**2
    one = MeroFn.constant(1)
    t = MeroFn.from_poly(z())
    i_const = MeroFn.constant(GaussRat(0, 1))
    got = eval_poly_on_tuple(G, (one, t, i_const)).as_polynomial()
    assert got == z() ** 2  # 1 + t^2 - 1
    got = eval_poly_on_tuple(G, (one, t, MeroFn.from_poly(z() + 1))).as_polynomial()
    assert got == 2 * z() ** 2 + 2 * z() + 2


def test_binomial_zero_lattice():
    es = ExpSumFn.constant(1) + ExpSumFn.from_mero(MeroFn.unit(z()))
    zeros = es.zeros_in_disk(10.0)
    lattice = sorted(round(w.imag / math.pi) for w, _ in zeros)
    assert lattice == [-3, -1, 1, 3]
    assert all(m == 1 for _, m in zeros)
    for w, _ in zeros:
        assert abs(es.eval(w)) < 1e-10


def test_scaled_exponent_lattice():
    # 1 + e^{2z}: zeros at i pi (2k+1) / 2
    two_z = z().scale(2)
    es = ExpSumFn.constant(1) + ExpSumFn.from_mero(MeroFn.unit(two_z))
    zeros = es.zeros_in_disk(7.0)
    lattice = sorted(round(2 * w.imag / math.pi) for w, _ in zeros)
    assert lattice == [-3, -1, 1, 3] or lattice == [-5, -3, -1, 1, 3, 5]
    for w, _ in zeros:
        assert abs(es.eval(w)) < 1e-10


def test_unsupported_zero_structure():
    ez = ExpSumFn.from_mero(MeroFn.unit(z()))
    e2 = ExpSumFn.from_mero(MeroFn.unit(z() ** 2))
    trinomial = ExpSumFn.constant(1) + ez + e2
    assert trinomial.zeros_in_disk(3.0) is None


def test_log_abs_overflow_safe():
    big = ExpSumFn.from_mero(MeroFn.unit(z().scale(5)))
    s = big + ExpSumFn.constant(1)
    vals = s.log_abs(np.array([200.0 + 0j]))
    assert np.isfinite(vals).all()
    assert vals[0] == pytest.approx(1000.0, rel=1e-9)


def test_as_mero_round_trip():
    t = z()
    f = MeroFn(scalar=GaussRat("2/3"), factors=[(t - 1, 2)], exp_part=t)
    back = ExpSumFn.from_mero(f).as_mero()
    assert back == f
