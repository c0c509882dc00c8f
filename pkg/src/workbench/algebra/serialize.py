"""Structured-text (JSON) formats for exact polynomials.

Polynomial document:
    {"vars": n, "terms": [{"exp": [e0,...], "re": "p/q", "im": "r/s"}, ...]}

Exponents are non-negative integers and coefficient strings are exact
rationals.  The Laurent variant is tagged {"laurent": true} and permits
negative exponents (two variables).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .gaussrat import GaussRat
from .laurent import LaurentBivar
from .poly import SparsePoly


def poly_to_doc(p: SparsePoly) -> dict:
    terms = []
    for expo in sorted(p.terms):
        c = p.terms[expo]
        if not isinstance(c, GaussRat):
            raise TypeError("only GaussRat-coefficient polynomials serialize")
        re, im = c.to_strings()
        terms.append({"exp": list(expo), "re": re, "im": im})
    return {"vars": p.num_vars, "terms": terms}


def poly_from_doc(doc: dict) -> SparsePoly:
    if doc.get("laurent"):
        raise ValueError("Laurent document passed where a polynomial was expected")
    n = int(doc["vars"])
    terms = {}
    for t in doc["terms"]:
        expo = tuple(int(e) for e in t["exp"])
        coeff = GaussRat(Fraction(t["re"]), Fraction(t.get("im", "0")))
        if coeff:
            terms[expo] = coeff
    return SparsePoly(n, terms)


def laurent_to_doc(p: LaurentBivar) -> dict:
    terms = []
    for expo in sorted(p.terms):
        re, im = p.terms[expo].to_strings()
        terms.append({"exp": list(expo), "re": re, "im": im})
    return {"vars": 2, "laurent": True, "terms": terms}


def laurent_from_doc(doc: dict) -> LaurentBivar:
    if not doc.get("laurent"):
        raise ValueError("expected a Laurent-tagged document")
    terms = {}
    for t in doc["terms"]:
        e0, e1 = (int(e) for e in t["exp"])
        coeff = GaussRat(Fraction(t["re"]), Fraction(t.get("im", "0")))
        if coeff:
            terms[(e0, e1)] = coeff
    return LaurentBivar(terms)


def load_poly(path: str) -> SparsePoly:
    with open(path) as fh:
        return poly_from_doc(json.load(fh))


def dump_poly(p: SparsePoly, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(poly_to_doc(p), fh, indent=2)
        fh.write("\n")
