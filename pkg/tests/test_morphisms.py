import pytest

from workbench.algebra.gaussrat import GaussRat
from workbench.algebra.poly import SparsePoly, random_poly
from workbench.errors import InvalidInput, NonProperIntersection
from workbench.morphisms import (
    PowerMorphism,
    euler_identity_check,
    general_position_check,
    intersection_points,
    jacobian_det,
    pushforward_curve,
    transversality_check,
)

from conftest import variables


def sphere():
    x0, x1, x2 = variables(3)
    return x0**2 + x1**2 + x2**2


def std_morphism():
    x0, x1, x2 = variables(3)
    return PowerMorphism.build(x0, x1, sphere())


def test_build_and_exponents():
    m = std_morphism()
    assert m.degrees == (1, 1, 2)
    assert m.exponents == (2, 2, 1)
    x0, x1, x2 = variables(3)
    with pytest.raises(InvalidInput):
        PowerMorphism.build(x0, x1, x0**2 + x1**2)  # common zero (0,0,1)


def test_jacobian_examples():
    m = std_morphism()
    x0, x1, x2 = variables(3)
    assert jacobian_det(m, reduced=True) == 2 * x2
    full = jacobian_det(m, reduced=False)
    assert full == 8 * x0 * x1 * x2
    # reduced divides full; the quotient is a monomial times a constant
    quotient = full.exact_div(jacobian_det(m, reduced=True))
    assert len(quotient.terms) == 1
    ident = PowerMorphism.build(x0, x1, x2)
    assert jacobian_det(ident, reduced=True) == SparsePoly.one(3)


def test_euler_identities_exact():
    assert euler_identity_check(std_morphism())
    x0, x1, x2 = variables(3)
    assert euler_identity_check(PowerMorphism.build(x0, x1, x2))


def test_euler_identities_randomized(rng):
    # the acceptance suite raises the count to >= 100
    count = 0
    while count < 25:
        comps = [
            random_poly(rng, 3, 0, max_terms=4, coeff_range=3,
                        homogeneous_degree=rng.randrange(1, 4))
            for _ in range(3)
        ]
        if any(not c or c.is_constant() for c in comps):
            continue
        m = PowerMorphism.build(*comps, check_finite=False)
        assert euler_identity_check(m)
        count += 1


def test_reduced_divides_full_randomized(rng):
    count = 0
    while count < 10:
        comps = [
            random_poly(rng, 3, 0, max_terms=3, coeff_range=2,
                        homogeneous_degree=rng.randrange(1, 3))
            for _ in range(3)
        ]
        if any(not c or c.is_constant() for c in comps):
            continue
        m = PowerMorphism.build(*comps, check_finite=False)
        red = jacobian_det(m, reduced=True)
        full = jacobian_det(m, reduced=False)
        if not red:
            count += 1
            continue
        assert red.divides(full)
        count += 1


def test_intersection_points_exact_corner():
    x0, x1, x2 = variables(3)
    pts = intersection_points(x0, x1)
    assert len(pts) == 1
    assert pts[0].exact == (GaussRat(0), GaussRat(0), GaussRat(1))
    with pytest.raises(NonProperIntersection):
        intersection_points(x0 * x1, x1 * x2)


def test_general_position_examples():
    x0, x1, x2 = variables(3)
    assert general_position_check([x0, x1, x2])
    rep = general_position_check([x0, x1, x0 + x1])
    assert not rep
    assert rep.violations[0].point.coords[2] == 1
    assert general_position_check([sphere(), x0, x1, x2])


def test_transversality_examples():
    x0, x1, x2 = variables(3)
    recs = transversality_check(x0, x1)
    assert [r.verdict for r in recs] == ["transversal"]
    assert recs[0].minor == 1
    # tangency of a line with a conic at an exact point
    recs = transversality_check(x1, x1 * x2 - x0**2)
    assert [r.verdict for r in recs] == ["tangential"]
    recs = transversality_check(sphere(), x0)
    assert len(recs) == 2 and all(r.verdict == "transversal" for r in recs)


def test_pushforward_example():
    m = std_morphism()
    x0, x1, x2 = variables(3)
    A = pushforward_curve(m, x2)
    # equality up to a constant: the image is the line y0 + y1 - y2 = 0
    assert A == x0 + x1 - x2 or A == -(x0 + x1 - x2)
    comp = m.apply_to_polys(m.powered_components(), A)
    # pullback vanishes on [x2 = 0] to order exactly 2
    assert comp == x2**2 or comp == -(x2**2)


def test_pushforward_identity():
    x0, x1, x2 = variables(3)
    ident = PowerMorphism.build(x0, x1, x2)
    Z = x0 + x1 + x2
    assert pushforward_curve(ident, Z) == Z
    Z2 = x0**2 + x1**2 + 3 * x2**2
    assert pushforward_curve(ident, Z2) == Z2


def test_pushforward_contracted_raises():
    x0, x1, x2 = variables(3)
    degenerate = PowerMorphism.build(x0, x1, x0 + x1, check_finite=False)
    with pytest.raises(InvalidInput):
        pushforward_curve(degenerate, x2)


def test_pushforward_soundness_random(rng):
    # (A o pi) reduces to zero modulo Z for every emitted A
    x0, x1, x2 = variables(3)
    m = std_morphism()
    for Z in (x2, x0 + x2, x0 + x1 + 2 * x2):
        A = pushforward_curve(m, Z)
        comp = m.apply_to_polys(m.powered_components(), A)
        assert Z.divides(comp)
