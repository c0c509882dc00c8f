"""Finite sums of rational-times-exponential terms, with exact zero testing.

The factored meromorphic class is closed under products but not sums; the
objects here pick up the slack wherever a sum is unavoidable (evaluating a
polynomial on a tuple of class functions, verifying linear identities,
enumerating zero lattices of unit binomials).  A term is num/den * exp(q)
with exact univariate polynomial data; grouping is by the exact exponent
polynomial.  Sums of terms whose exponents differ by nonzero constants are
never conflated: distinct algebraic exponent values give linearly
independent exponentials, so the exact zero test groups by the full
exponent and requires every group to cancel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra.euclid import gcd_poly
from .algebra.gaussrat import GaussRat
from .algebra.poly import SparsePoly
from .algebra.roots import roots_certified
from .errors import InvalidInput
from .nevanlinna import MeroFn, _complex_coeffs_desc


def _zero1() -> SparsePoly:
    return SparsePoly.zero(1)


def _one1() -> SparsePoly:
    return SparsePoly.one(1)


@dataclass(frozen=True)
class ExpSumFn:
    """sum_k num_k/den_k * exp(q_k) with exact univariate polynomial data."""

    terms: tuple[tuple[SparsePoly, SparsePoly, SparsePoly], ...]

    @staticmethod
    def from_terms(terms) -> "ExpSumFn":
        grouped: dict[SparsePoly, tuple[SparsePoly, SparsePoly]] = {}
        for num, den, q in terms:
            if not den:
                raise ZeroDivisionError("zero denominator")
            if not num:
                continue
            if q in grouped:
                n0, d0 = grouped[q]
                grouped[q] = (n0 * den + num * d0, d0 * den)
            else:
                grouped[q] = (num, den)
        cleaned = []
        for q, (num, den) in grouped.items():
            if not num:
                continue
            g = gcd_poly(num, den, 0)
            if g.degree_in(0) > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            # normalize the denominator monic, folding the unit into num
            lead = den.terms[max(den.terms)]
            if lead != GaussRat(1):
                den = den.scale(GaussRat(1) / lead)
                num = num.scale(GaussRat(1) / lead)
            cleaned.append((num, den, q))
        cleaned.sort(key=lambda t: (t[2].sort_key(), t[0].sort_key(), t[1].sort_key()))
        return ExpSumFn(tuple(cleaned))

    @staticmethod
    def zero() -> "ExpSumFn":
        return ExpSumFn(())

    @staticmethod
    def constant(c) -> "ExpSumFn":
        c = GaussRat.coerce(c)
        if not c:
            return ExpSumFn.zero()
        return ExpSumFn.from_terms([(SparsePoly.constant(c, 1), _one1(), _zero1())])

    @staticmethod
    def from_mero(f: MeroFn) -> "ExpSumFn":
        """Convert a factored class function; poles become denominators."""
        if f.is_zero():
            return ExpSumFn.zero()
        num = SparsePoly.constant(f.scalar, 1)
        den = _one1()
        for p, m in f.factors:
            if m > 0:
                num = num * p**m
            else:
                den = den * p ** (-m)
        return ExpSumFn.from_terms([(num, den, f.exp_part)])

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        """Exact: every exponent group must cancel identically."""
        return not self.terms

    def is_entire(self) -> bool:
        return all(den.is_constant() for _, den, _ in self.terms)

    def as_polynomial(self) -> SparsePoly | None:
        if not self.terms:
            return _zero1()
        if len(self.terms) == 1:
            num, den, q = self.terms[0]
            if den.is_constant() and not q:
                return num.scale(GaussRat(1) / den.constant_value())
        return None

    def as_mero(self) -> MeroFn | None:
        """Single-term sums live in the factored class."""
        if not self.terms:
            return MeroFn.constant(0)
        if len(self.terms) == 1:
            num, den, q = self.terms[0]
            factors = [(num, 1)] if not num.is_constant() else []
            scalar = num.constant_value() if num.is_constant() else GaussRat(1)
            if not den.is_constant():
                factors.append((den, -1))
            else:
                scalar = scalar / den.constant_value()
            return MeroFn(scalar=scalar, factors=factors, exp_part=q)
        return None

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "ExpSumFn") -> "ExpSumFn":
        return ExpSumFn.from_terms(list(self.terms) + list(other.terms))

    def __neg__(self):
        return ExpSumFn(tuple((-n, d, q) for n, d, q in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "ExpSumFn") -> "ExpSumFn":
        out = []
        for n1, d1, q1 in self.terms:
            for n2, d2, q2 in other.terms:
                out.append((n1 * n2, d1 * d2, q1 + q2))
        return ExpSumFn.from_terms(out)

    def scale_poly(self, p: SparsePoly) -> "ExpSumFn":
        return ExpSumFn.from_terms([(n * p, d, q) for n, d, q in self.terms])

    def __pow__(self, k: int) -> "ExpSumFn":
        if k < 0:
            raise InvalidInput("negative powers of exp-sums are not closed")
        out = ExpSumFn.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "ExpSumFn":
        out = []
        for n, d, q in self.terms:
            dn, dd, dq = (p.partial_derivative(0) for p in (n, d, q))
            out.append((dn * d - n * dd + n * d * dq, d * d, q))
        return ExpSumFn.from_terms(out)

    # -- evaluation ---------------------------------------------------------------

    def eval(self, z: complex) -> complex:
        acc = 0j
        for n, d, q in self.terms:
            acc += complex(n.eval([z])) / complex(d.eval([z])) * cmath.exp(complex(q.eval([z])))
        return acc

    def eval_array(self, zs: np.ndarray) -> np.ndarray:
        acc = np.zeros(np.shape(zs), dtype=complex)
        for n, d, q in self.terms:
            nv = np.polyval(_complex_coeffs_desc(n), zs)
            dv = np.polyval(_complex_coeffs_desc(d), zs)
            qv = np.polyval(_complex_coeffs_desc(q), zs) if q else 0.0
            acc = acc + nv / dv * np.exp(qv)
        return acc

    def log_abs(self, zs: np.ndarray) -> np.ndarray:
        # scale out the dominant exponential growth to avoid overflow
        if not self.terms:
            return np.full(np.shape(zs), -np.inf)
        qvals = [
            np.real(np.polyval(_complex_coeffs_desc(q), zs)) if q else np.zeros(np.shape(zs))
            for _, _, q in self.terms
        ]
        qmax = np.maximum.reduce(qvals)
        acc = np.zeros(np.shape(zs), dtype=complex)
        for (n, d, q), qv in zip(self.terms, qvals):
            nv = np.polyval(_complex_coeffs_desc(n), zs)
            dv = np.polyval(_complex_coeffs_desc(d), zs)
            phase = np.polyval(_complex_coeffs_desc(q), zs) if q else 0.0
            acc = acc + nv / dv * np.exp(phase - qmax)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(acc)) + qmax

    # -- zero sets -------------------------------------------------------------------

    def zeros_in_disk(self, r: float) -> list[tuple[complex, int]] | None:
        """Exact zero enumeration where the structure allows it.

        Polynomials use certified enclosures.  Sums whose terms are
        constants times integer powers of a single unit exp(D) with a
        degree-one exponent D reduce to a polynomial p(w): each nonzero
        root w0 of p contributes the lattice D(z) = log w0 + 2 pi i k with
        the root's multiplicity.  Returns None when the sum has no
        supported closed form.
        """
        p = self.as_polynomial()
        if p is not None:
            if not p:
                raise InvalidInput("identically zero")
            out = []
            for root in roots_certified(p).roots:
                if abs(root.center) <= r:
                    out.append((root.center, root.multiplicity))
            return out
        reduced = self._as_unit_polynomial()
        if reduced is None:
            return None
        poly_w, D = reduced
        alpha = complex(D.coeffs_in(0)[1].constant_value())
        beta = complex(D.coeffs_in(0)[0].constant_value())
        out = []
        for root in roots_certified(poly_w).roots:
            w0 = root.center
            if root.exact is not None and not root.exact:
                continue  # w = 0 has no preimage under the unit
            w0log = cmath.log(w0)
            for k in _lattice_range(alpha, beta, w0log, r):
                z = (w0log + 2j * math.pi * k - beta) / alpha
                if abs(z) <= r:
                    out.append((z, root.multiplicity))
        return sorted(out, key=lambda t: (t[0].real, t[0].imag))

    def _as_unit_polynomial(self) -> tuple[SparsePoly, SparsePoly] | None:
        """Recognize sum_k c_k exp(m_k D) with constants c_k, integers m_k.

        Returns (p, D) with p(w) = sum c_k w^{m_k - min m} and D linear, or
        None.  Exponent remainders that are nonzero constants would scale
        coefficients by transcendental units, so only exact multiples count.
        """
        if len(self.terms) < 2:
            return None
        if not all(n.is_constant() and d.is_constant() for n, d, _ in self.terms):
            return None
        base = self.terms[0][2]
        diffs = [q - base for _, _, q in self.terms]
        if any(d.degree_in(0) > 1 for d in diffs):
            return None
        nonzero = [d for d in diffs if d]
        if not nonzero or any(d.degree_in(0) < 1 for d in nonzero):
            return None
        D0 = nonzero[0]
        lead0 = D0.coeffs_in(0)[1].constant_value()
        ratios: list[Fraction] = []
        for d in diffs:
            if not d:
                ratios.append(Fraction(0))
                continue
            ratio = d.coeffs_in(0)[1].constant_value() / lead0
            if not ratio.is_rational():
                return None
            if d != D0.scale(ratio):
                return None
            ratios.append(ratio.re)
        denom = math.lcm(*(f.denominator for f in ratios))
        D = D0.scale(GaussRat(Fraction(1, denom)))
        powers = [int(f * denom) for f in ratios]
        shift = min(powers)
        terms = {}
        for (n, d, _), m in zip(self.terms, powers):
            key = (m - shift,)
            c = n.constant_value() / d.constant_value()
            terms[key] = terms.get(key, GaussRat(0)) + c
        poly_w = SparsePoly(1, terms)
        if not poly_w or poly_w.degree_in(0) < 1:
            return None
        return poly_w, D


def _lattice_range(alpha: complex, beta: complex, w0: complex, r: float):
    bound = (abs(alpha) * r + abs(w0) + abs(beta)) / (2 * math.pi) + 2
    k0 = int(bound)
    return range(-k0, k0 + 1)


def eval_poly_on_tuple(P: SparsePoly, fns: tuple) -> ExpSumFn:
    """P(f_0, .., f_{k-1}) for class functions / exp-sums, exactly."""
    comps = [f if isinstance(f, ExpSumFn) else ExpSumFn.from_mero(f) for f in fns]
    if P.num_vars != len(comps):
        raise InvalidInput("component count does not match the polynomial arity")
    acc = ExpSumFn.zero()
    for expo, c in P.terms.items():
        term = ExpSumFn.constant(c)
        for f, e in zip(comps, expo):
            if e:
                term = term * f**e
        acc = acc + term
    return acc
