"""Sparse multivariate polynomials with exact coefficients.

Terms are stored as a map from exponent tuples (length = number of
variables, entries >= 0) to nonzero coefficients.  Coefficients are
Gaussian rationals by default, but every operation that only needs ring
arithmetic (+, -, *, zero test) works unchanged for nested coefficient
rings such as polynomials over polynomials; this is what lets resultants
and subresultant sequences run over Q(i)[y1,...,yk].
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .gaussrat import GaussRat

Expo = tuple[int, ...]


def _coerce_coeff(c):
    if isinstance(c, GaussRat):
        return c
    if isinstance(c, (int, Fraction)):
        return GaussRat(c)
    return c  # nested ring element


class SparsePoly:
    """An exact sparse polynomial in ``num_vars`` variables.

    Instances are treated as immutable values: no method mutates ``terms``
    after construction, so sharing is safe.
    """

    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Expo, object] | None = None):
        clean: dict[Expo, object] = {}
        if terms:
            for expo, coeff in terms.items():
                expo = tuple(expo)
                if len(expo) != num_vars:
                    raise ValueError(
                        f"exponent {expo} has length {len(expo)}, expected {num_vars}"
                    )
                if any(e < 0 for e in expo):
                    raise ValueError(f"negative exponent in {expo}")
                coeff = _coerce_coeff(coeff)
                if coeff:
                    clean[expo] = coeff
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(value, num_vars: int) -> "SparsePoly":
        return SparsePoly(num_vars, {(0,) * num_vars: value})

    @staticmethod
    def zero(num_vars: int) -> "SparsePoly":
        return SparsePoly(num_vars, {})

    @staticmethod
    def one(num_vars: int) -> "SparsePoly":
        return SparsePoly.constant(1, num_vars)

    @staticmethod
    def variable(index: int, num_vars: int) -> "SparsePoly":
        expo = tuple(1 if j == index else 0 for j in range(num_vars))
        return SparsePoly(num_vars, {expo: GaussRat(1)})

    @staticmethod
    def monomial(expo: Iterable[int], coeff=1, num_vars: int | None = None) -> "SparsePoly":
        expo = tuple(expo)
        return SparsePoly(num_vars if num_vars is not None else len(expo), {expo: coeff})

    # -- predicates ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in expo) for expo in self.terms)

    def constant_value(self):
        """The coefficient of the constant term (zero if absent)."""
        zero_expo = (0,) * self.num_vars
        if set(self.terms) - {zero_expo}:
            raise ValueError("polynomial is not constant")
        return self.terms.get(zero_expo, GaussRat(0))

    def is_homogeneous(self) -> bool:
        degs = {sum(expo) for expo in self.terms}
        return len(degs) <= 1

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(expo) for expo in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(expo[var] for expo in self.terms)

    def min_degree_in(self, var: int) -> int:
        if not self.terms:
            return 0
        return min(expo[var] for expo in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _check_compatible(self, other: "SparsePoly"):
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"incompatible variable counts {self.num_vars} != {other.num_vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = SparsePoly.constant(other, self.num_vars)
        self._check_compatible(other)
        terms = dict(self.terms)
        for expo, coeff in other.terms.items():
            if expo in terms:
                s = terms[expo] + coeff
                if s:
                    terms[expo] = s
                else:
                    del terms[expo]
            else:
                terms[expo] = coeff
        return SparsePoly(self.num_vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = SparsePoly.constant(other, self.num_vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(other)
        self._check_compatible(other)
        terms: dict[Expo, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if expo in terms:
                    s = terms[expo] + prod
                    if s:
                        terms[expo] = s
                    else:
                        del terms[expo]
                elif prod:
                    terms[expo] = prod
        return SparsePoly(self.num_vars, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        c = _coerce_coeff(c)
        if not c:
            return SparsePoly.zero(self.num_vars)
        return SparsePoly(self.num_vars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = SparsePoly.one(self.num_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = SparsePoly.constant(other, self.num_vars)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num_vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus ------------------------------------------------------------

    def partial_derivative(self, var: int) -> "SparsePoly":
        """Formal partial derivative with respect to variable ``var``."""
        if var < 0 or var >= self.num_vars:
            raise ValueError(f"variable index {var} out of range")
        terms: dict[Expo, object] = {}
        for expo, coeff in self.terms.items():
            e = expo[var]
            if e == 0:
                continue
            new = list(expo)
            new[var] = e - 1
            terms[tuple(new)] = coeff * e
        return SparsePoly(self.num_vars, terms)

    # -- evaluation / substitution --------------------------------------------

    def eval(self, values):
        """Evaluate at a point.

        ``values`` is a sequence of length ``num_vars``; entries may be
        complex numbers, GaussRat, or any ring elements supporting + and *.
        Coefficients are converted via complex() when the point is numeric.
        """
        if len(values) != self.num_vars:
            raise ValueError("wrong number of values")
        numeric = all(isinstance(v, (int, float, complex)) for v in values)
        total = None
        for expo, coeff in self.terms.items():
            term = complex(coeff) if numeric and isinstance(coeff, GaussRat) else coeff
            for v, e in zip(values, expo):
                if e:
                    term = term * v**e
            total = term if total is None else total + term
        if total is None:
            return 0j if numeric else GaussRat(0)
        return total

    def eval_exact(self, values: Iterable[GaussRat]) -> GaussRat:
        values = [GaussRat.coerce(v) for v in values]
        acc = GaussRat(0)
        for expo, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, expo):
                if e:
                    term = term * v**e
            acc = acc + term
        return acc

    def substitute_var(self, var: int, value) -> "SparsePoly":
        """Substitute an exact constant (GaussRat) or SparsePoly for one variable.

        The result keeps the same variable count; the substituted variable
        simply no longer occurs.
        """
        if isinstance(value, (int, Fraction, GaussRat)):
            value = SparsePoly.constant(value, self.num_vars)
        acc = SparsePoly.zero(self.num_vars)
        for expo, coeff in self.terms.items():
            rest = list(expo)
            e = rest[var]
            rest[var] = 0
            term = SparsePoly(self.num_vars, {tuple(rest): coeff})
            if e:
                term = term * value**e
            acc = acc + term
        return acc

    def drop_var(self, var: int) -> "SparsePoly":
        """Remove a variable that no longer occurs, reducing num_vars by one."""
        if self.degree_in(var) > 0:
            raise ValueError(f"variable {var} still occurs")
        terms = {}
        for expo, coeff in self.terms.items():
            terms[expo[:var] + expo[var + 1 :]] = coeff
        return SparsePoly(self.num_vars - 1, terms)

    def insert_var(self, position: int) -> "SparsePoly":
        """Add a fresh (unused) variable at ``position``."""
        terms = {}
        for expo, coeff in self.terms.items():
            terms[expo[:position] + (0,) + expo[position:]] = coeff
        return SparsePoly(self.num_vars + 1, terms)

    def permute_vars(self, perm: Iterable[int]) -> "SparsePoly":
        """Relabel variables: new variable i is old variable perm[i]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.num_vars)):
            raise ValueError("not a permutation")
        terms = {}
        for expo, coeff in self.terms.items():
            terms[tuple(expo[p] for p in perm)] = coeff
        return SparsePoly(self.num_vars, terms)

    # -- univariate views ------------------------------------------------------

    def coeffs_in(self, var: int) -> list["SparsePoly"]:
        """Coefficient list (ascending) of the polynomial viewed in one variable.

        Each coefficient is a SparsePoly in the same ambient variables with
        ``var`` not occurring.
        """
        deg = self.degree_in(var)
        if deg < 0:
            return []
        buckets: list[dict] = [dict() for _ in range(deg + 1)]
        for expo, coeff in self.terms.items():
            rest = list(expo)
            e = rest[var]
            rest[var] = 0
            buckets[e][tuple(rest)] = coeff
        return [SparsePoly(self.num_vars, b) for b in buckets]

    @staticmethod
    def from_coeffs_in(var: int, coeffs: list["SparsePoly"], num_vars: int) -> "SparsePoly":
        acc = SparsePoly.zero(num_vars)
        x = SparsePoly.variable(var, num_vars)
        for e, c in enumerate(coeffs):
            if c:
                acc = acc + c * x**e
        return acc

    def leading_coeff_in(self, var: int) -> "SparsePoly":
        deg = self.degree_in(var)
        if deg < 0:
            return SparsePoly.zero(self.num_vars)
        return self.coeffs_in(var)[deg]

    # -- exact division ---------------------------------------------------------

    def _lex_leading(self) -> Expo:
        return max(self.terms)

    def exact_div(self, other: "SparsePoly") -> "SparsePoly":
        """Exact quotient self / other; raises ValueError if not divisible."""
        if isinstance(other, (int, Fraction, GaussRat)):
            other = SparsePoly.constant(other, self.num_vars)
        self._check_compatible(other)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        from .euclid import coeff_exact_div

        rem = self
        quot: dict[Expo, object] = {}
        lead_e = other._lex_leading()
        lead_c = other.terms[lead_e]
        while rem:
            e = rem._lex_leading()
            diff = tuple(a - b for a, b in zip(e, lead_e))
            if any(d < 0 for d in diff):
                raise ValueError("not exactly divisible")
            q = coeff_exact_div(rem.terms[e], lead_c)
            quot[diff] = q
            rem = rem - SparsePoly(self.num_vars, {diff: q}) * other
        return SparsePoly(self.num_vars, quot)

    def divides(self, other: "SparsePoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    # -- presentation -------------------------------------------------------------

    def sort_key(self):
        """A deterministic total-order key (used for canonical output)."""
        return tuple(sorted((e, str(c)) for e, c in self.terms.items()))

    def to_string(self, names: list[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.num_vars)]
        parts = []
        for expo in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            coeff = self.terms[expo]
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(expo)
                if e
            )
            cs = str(coeff)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                else:
                    cs = f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs
                    parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({cs})" if "+" in cs[1:] or "-" in cs[1:] else cs)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __str__ = to_string

    def __repr__(self):
        return f"SparsePoly({self.num_vars}, {self})"


def poly_ring_vars(num_vars: int) -> list[SparsePoly]:
    """Convenience: the list of variable polynomials x0..x_{n-1}."""
    return [SparsePoly.variable(i, num_vars) for i in range(num_vars)]


def arith(p: SparsePoly, q: SparsePoly | None, op: str, k: int | None = None) -> SparsePoly:
    """Dispatcher form of the ring operations: op in {add, mul, pow}.

    pow ignores q and takes the exponent k, which must be non-negative.
    """
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "pow":
        if k is None or not isinstance(k, int) or k < 0:
            raise ValueError("pow needs a non-negative integer exponent")
        return p**k
    raise ValueError(f"unknown op {op!r}")


def random_poly(rng, num_vars: int, max_degree: int, max_terms: int = 6,
                coeff_range: int = 5, gaussian: bool = True,
                homogeneous_degree: int | None = None) -> SparsePoly:
    """Small random polynomial generator for the test suites."""
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        if homogeneous_degree is not None:
            cuts = sorted(rng.randrange(0, homogeneous_degree + 1) for _ in range(num_vars - 1))
            expo = []
            prev = 0
            for c in cuts:
                expo.append(c - prev)
                prev = c
            expo.append(homogeneous_degree - prev)
            expo = tuple(expo)
        else:
            expo = tuple(rng.randrange(0, max_degree + 1) for _ in range(num_vars))
        re = rng.randrange(-coeff_range, coeff_range + 1)
        im = rng.randrange(-coeff_range, coeff_range + 1) if gaussian else 0
        if re == 0 and im == 0:
            re = 1
        terms[expo] = GaussRat(re, im)
    return SparsePoly(num_vars, terms)
