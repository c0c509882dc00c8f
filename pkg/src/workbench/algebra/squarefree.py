"""Squarefree factorization (Yun's method) over the Gaussian rationals.

Works for univariate polynomials directly and for multivariate ones by
running Yun with respect to a main variable and recursing on the content.
The returned factors are pairwise coprime, squarefree, canonically scaled,
and multiply back to the input up to a nonzero constant.
"""

from __future__ import annotations

from .euclid import canonical_scale, content_in, gcd_poly, _occurring_vars
from .poly import SparsePoly


def _yun(f: SparsePoly, var: int) -> list[tuple[SparsePoly, int]]:
    """Yun's algorithm; ``f`` must be primitive with respect to ``var``."""
    df = f.partial_derivative(var)
    a = gcd_poly(f, df, var)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.partial_derivative(var)
    out: list[tuple[SparsePoly, int]] = []
    i = 1
    while b.degree_in(var) > 0:
        g = gcd_poly(b, d, var)
        if g.degree_in(var) > 0:
            out.append((canonical_scale(g), i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.partial_derivative(var)
        i += 1
    return out


def squarefree_decompose(f: SparsePoly) -> list[tuple[SparsePoly, int]]:
    """Squarefree decomposition: list of (factor, multiplicity).

    The product of factor^multiplicity equals f up to a nonzero constant;
    factors are pairwise coprime and squarefree.  Raises on the zero
    polynomial; constants decompose into the empty list.
    """
    if not f:
        raise ValueError("cannot decompose the zero polynomial")
    occ = _occurring_vars(f)
    if not occ:
        return []
    var = occ[0]
    cont = content_in(f, var)
    prim = f if cont.is_constant() else f.exact_div(cont)
    out = _yun(prim, var)
    if not cont.is_constant():
        out.extend(squarefree_decompose(cont))
    return out


def squarefree_part(f: SparsePoly) -> SparsePoly:
    """Product of the distinct squarefree factors of f (multiplicities dropped)."""
    acc = SparsePoly.one(f.num_vars)
    for factor, _ in squarefree_decompose(f):
        acc = acc * factor
    return canonical_scale(acc)
