"""Division, gcd, and resultant machinery for exact sparse polynomials.

Everything here is fraction-free: pseudo-division plus the subresultant
sequence keep all intermediate values inside the coefficient domain, and
determinants use Bareiss elimination with exact divisions.  The resultant
sign convention is fixed once and for all as the determinant of the
Sylvester matrix with the rows of the first argument on top.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InvalidInput
from .gaussrat import GaussRat
from .poly import SparsePoly


def coeff_exact_div(a, b):
    """Exact division in the coefficient domain (field or nested polynomials)."""
    if isinstance(a, GaussRat):
        return a / (b if isinstance(b, GaussRat) else GaussRat.coerce(b))
    if isinstance(a, (int, Fraction)):
        return GaussRat(a) / GaussRat.coerce(b)
    return a.exact_div(b)


def _one_like(x):
    if isinstance(x, GaussRat):
        return GaussRat(1)
    if isinstance(x, SparsePoly):
        return SparsePoly.one(x.num_vars)
    return x.one()


# ---------------------------------------------------------------------------
# pseudo-division
# ---------------------------------------------------------------------------

def pseudo_rem(f: SparsePoly, g: SparsePoly, var: int) -> SparsePoly:
    """Pseudo-remainder of f by g with respect to one variable.

    Satisfies lc(g)^(deg f - deg g + 1) * f = q*g + rem with deg_var rem <
    deg_var g, entirely within the coefficient domain.
    """
    rem, _, _ = pseudo_divmod(f, g, var)
    return rem


def pseudo_divmod(f: SparsePoly, g: SparsePoly, var: int):
    """Return (rem, quot, e) with lc(g)^e * f = quot*g + rem.

    The exponent is normalized to the classical e = deg f - deg g + 1
    (topping up with leading-coefficient factors when sparse cancellation
    skips degrees), which the subresultant divisions rely on.
    """
    dg = g.degree_in(var)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    df = f.degree_in(var)
    lc = g.leading_coeff_in(var)
    rem = f
    quot = SparsePoly.zero(f.num_vars)
    e = 0
    x = SparsePoly.variable(var, f.num_vars)
    while rem and rem.degree_in(var) >= dg:
        dr = rem.degree_in(var)
        lead = rem.leading_coeff_in(var)
        shift = lead * x ** (dr - dg)
        rem = rem * lc - shift * g
        quot = quot * lc + shift
        e += 1
    if df >= dg:
        target = df - dg + 1
        if e < target:
            factor = lc ** (target - e)
            rem = rem * factor
            quot = quot * factor
            e = target
    return rem, quot, e


# ---------------------------------------------------------------------------
# gcd via content/primitive-part recursion + subresultant PRS
# ---------------------------------------------------------------------------

def _occurring_vars(*polys: SparsePoly) -> list[int]:
    n = polys[0].num_vars
    return [v for v in range(n) if any(p.degree_in(v) > 0 for p in polys)]


def canonical_scale(p: SparsePoly) -> SparsePoly:
    """Scale so the lexicographically leading coefficient is 1."""
    if not p:
        return p
    lead = p.terms[max(p.terms)]
    if isinstance(lead, GaussRat):
        return p.scale(GaussRat(1) / lead)
    # nested coefficients: recurse into the lex-leading scalar
    return p  # nested polys are left primitive instead

def content_in(p: SparsePoly, var: int) -> SparsePoly:
    """gcd of the coefficients of p viewed in ``var`` (a var-free polynomial)."""
    coeffs = [c for c in p.coeffs_in(var) if c]
    return gcd_many(coeffs)


def primitive_part_in(p: SparsePoly, var: int) -> SparsePoly:
    if not p:
        return p
    c = content_in(p, var)
    if c.is_constant():
        return canonical_scale(p)
    return canonical_scale(p.exact_div(c))


def _subresultant_last(f: SparsePoly, g: SparsePoly, var: int) -> SparsePoly:
    """Last nonzero element of the subresultant PRS of f, g in ``var``.

    Inputs must be primitive in ``var`` with deg f >= deg g >= 1.
    """
    one = SparsePoly.one(f.num_vars)
    delta = f.degree_in(var) - g.degree_in(var)
    beta = -one if delta % 2 == 0 else one
    psi = -one
    while True:
        rem = pseudo_rem(f, g, var)
        if not rem:
            return g
        rem = rem.exact_div(beta)
        d_new = g.degree_in(var) - rem.degree_in(var)
        lc = g.leading_coeff_in(var)
        if delta == 0:
            psi_new = psi
        else:
            num = (-lc) ** delta
            psi_new = num.exact_div(psi ** (delta - 1)) if delta > 1 else num
        beta = (-lc) * psi_new**d_new
        f, g, psi, delta = g, rem, psi_new, d_new
        if g.degree_in(var) == 0:
            # one more pseudo-division would only produce zero
            return g


def gcd_poly(f: SparsePoly, g: SparsePoly, main_var: int | None = None) -> SparsePoly:
    """A gcd of two exact polynomials, canonically scaled.

    The result is primitive in the main variable; it is a constant (the
    polynomial 1) exactly when f and g are coprime over the fraction field
    of the remaining variables.
    """
    if not f and not g:
        return SparsePoly.zero(f.num_vars)
    if not f:
        return canonical_scale(g)
    if not g:
        return canonical_scale(f)
    occ = _occurring_vars(f, g)
    if not occ:
        return SparsePoly.one(f.num_vars)
    if main_var is None or main_var not in occ:
        main_var = occ[0]
    if f.degree_in(main_var) == 0 or g.degree_in(main_var) == 0:
        # one input is free of the main variable: gcd divides both contents
        cf = f if f.degree_in(main_var) == 0 else content_in(f, main_var)
        cg = g if g.degree_in(main_var) == 0 else content_in(g, main_var)
        return gcd_poly(cf, cg)
    cf, cg = content_in(f, main_var), content_in(g, main_var)
    pf = f.exact_div(cf) if not cf.is_constant() else f
    pg = g.exact_div(cg) if not cg.is_constant() else g
    cont = gcd_poly(cf, cg)
    if pf.degree_in(main_var) < pg.degree_in(main_var):
        pf, pg = pg, pf
    last = _subresultant_last(pf, pg, main_var)
    if last.degree_in(main_var) == 0:
        return canonical_scale(cont)
    return canonical_scale(cont * primitive_part_in(last, main_var))


def gcd_many(polys: list[SparsePoly]) -> SparsePoly:
    if not polys:
        raise ValueError("gcd of empty list")
    acc = polys[0]
    for p in polys[1:]:
        if acc.is_constant() and acc:
            break
        acc = gcd_poly(acc, p)
    return canonical_scale(acc)


def is_squarefree(p: SparsePoly) -> bool:
    """True when p has no repeated factor (characteristic zero test)."""
    occ = _occurring_vars(p)
    if not occ:
        return True
    g = p
    for v in occ:
        if g.is_constant():
            break
        g = gcd_poly(g, p.partial_derivative(v))
    return g.is_constant()


def monomial_variables(p: SparsePoly) -> list[int]:
    """Variables that divide p (i.e. appear in every term)."""
    return [v for v in range(p.num_vars) if p and p.min_degree_in(v) >= 1]


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def bareiss_determinant(matrix: list[list], one):
    """Fraction-free determinant of a square matrix over an integral domain."""
    n = len(matrix)
    if n == 0:
        return one
    zero = one - one
    m = [row[:] for row in matrix]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            pivot = next((r for r in range(k + 1, n) if m[r][k]), None)
            if pivot is None:
                return zero
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = coeff_exact_div(val, prev)
            m[i][k] = zero
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f_coeffs: list, g_coeffs: list, zero):
    """Sylvester matrix from ascending coefficient lists (f rows on top)."""
    n = len(f_coeffs) - 1
    m = len(g_coeffs) - 1
    size = n + m
    fd = list(reversed(f_coeffs))
    gd = list(reversed(g_coeffs))
    rows = []
    for i in range(m):
        rows.append([zero] * i + fd + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + gd + [zero] * (size - m - 1 - i))
    return rows


def resultant(f: SparsePoly, g: SparsePoly, var: int) -> SparsePoly:
    """Resultant of f and g with respect to one variable.

    Computed as the determinant of the Sylvester matrix with the rows of f
    first, which fixes the sign convention.  The result is a polynomial in
    the remaining variables (with ``var`` no longer occurring).  Degree-zero
    inputs follow the leading-power convention Res(c, g) = c^deg(g).
    """
    if not f and not g:
        raise InvalidInput("resultant requires inputs not both zero")
    if not f or not g:
        return SparsePoly.zero(f.num_vars)
    n, m = f.degree_in(var), g.degree_in(var)
    if n == 0 and m == 0:
        return SparsePoly.one(f.num_vars)
    if n == 0:
        return f**m
    if m == 0:
        return g**n
    fc = f.coeffs_in(var)
    gc = g.coeffs_in(var)
    zero = SparsePoly.zero(f.num_vars)
    mat = sylvester_matrix(fc, gc, zero)
    return bareiss_determinant(mat, SparsePoly.one(f.num_vars))


def resultant_univariate(f: SparsePoly, g: SparsePoly, var: int = 0) -> SparsePoly:
    """Spec-facing alias: resultant of two polynomials viewed in one variable."""
    return resultant(f, g, var)
