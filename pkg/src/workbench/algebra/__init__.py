"""Exact algebra kernel: Gaussian-rational sparse polynomials and friends."""

from .gaussrat import GaussRat
from .poly import SparsePoly, arith, random_poly
from .laurent import LaurentBivar
from .euclid import (
    canonical_scale,
    content_in,
    gcd_many,
    gcd_poly,
    is_squarefree,
    monomial_variables,
    primitive_part_in,
    pseudo_rem,
    resultant,
    resultant_univariate,
)
from .squarefree import squarefree_decompose, squarefree_part
from .roots import (
    AlgebraicRoots,
    LinearFormFactorization,
    RootEnclosure,
    cauchy_root_bound,
    factor_linear_forms,
    roots_certified,
)
from .certificates import NullstellensatzCertificate, nullstellensatz_certificate
from .serialize import (
    dump_poly,
    laurent_from_doc,
    laurent_to_doc,
    load_poly,
    poly_from_doc,
    poly_to_doc,
)

__all__ = [
    "GaussRat",
    "SparsePoly",
    "arith",
    "LaurentBivar",
    "AlgebraicRoots",
    "RootEnclosure",
    "LinearFormFactorization",
    "NullstellensatzCertificate",
    "random_poly",
    "canonical_scale",
    "content_in",
    "gcd_many",
    "gcd_poly",
    "is_squarefree",
    "monomial_variables",
    "primitive_part_in",
    "pseudo_rem",
    "resultant",
    "resultant_univariate",
    "squarefree_decompose",
    "squarefree_part",
    "roots_certified",
    "factor_linear_forms",
    "cauchy_root_bound",
    "nullstellensatz_certificate",
    "poly_to_doc",
    "poly_from_doc",
    "laurent_to_doc",
    "laurent_from_doc",
    "load_poly",
    "dump_poly",
]
