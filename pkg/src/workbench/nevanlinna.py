"""Nevanlinna functionals on a concrete closed class of meromorphic functions.

The class is scalar * prod_k p_k(z)^{m_k} * exp(Q(z)) with exact Gaussian
rational data: polynomial factors with integer (possibly negative)
multiplicities and a polynomial exponent.  It is closed under product,
quotient and integer powers, and the zero/pole divisor is fully determined
by the factored form, which makes counting functions exact.  Proximity and
characteristic functions are computed by adaptive trapezoid quadrature on
the circle (spectrally accurate away from the kink set of log+).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra.euclid import canonical_scale, gcd_poly
from .algebra.gaussrat import GaussRat
from .algebra.poly import SparsePoly
from .algebra.roots import AlgebraicRoots, RootEnclosure, roots_certified
from .algebra.squarefree import squarefree_decompose
from .errors import InvalidInput, QuadratureError

INFINITY = float("inf")

_ROOT_CACHE: dict[SparsePoly, AlgebraicRoots] = {}


def _roots_cached(p: SparsePoly) -> AlgebraicRoots:
    got = _ROOT_CACHE.get(p)
    if got is None:
        got = roots_certified(p)
        _ROOT_CACHE[p] = got
    return got


def _univar(p: SparsePoly) -> SparsePoly:
    if p.num_vars != 1:
        raise InvalidInput("expected a univariate polynomial")
    return p


def _complex_coeffs_desc(p: SparsePoly) -> np.ndarray:
    deg = max(p.degree_in(0), 0)
    out = np.zeros(deg + 1, dtype=complex)
    for expo, c in p.terms.items():
        out[deg - expo[0]] = complex(c)
    return out


class MeroFn:
    """A meromorphic function scalar * prod p_k^{m_k} * exp(Q).

    Canonical form: factor polynomials are squarefree, pairwise coprime,
    monic, non-constant, with nonzero multiplicities; the scalar absorbs
    all constants.  The zero scalar represents the zero function.
    """

    __slots__ = ("scalar", "factors", "exp_part", "_divisor")

    def __init__(self, scalar=1, factors: Iterable[tuple[SparsePoly, int]] = (),
                 exp_part: SparsePoly | None = None):
        scalar = GaussRat.coerce(scalar)
        exp_part = exp_part if exp_part is not None else SparsePoly.zero(1)
        _univar(exp_part)
        canon: dict[SparsePoly, int] = {}
        if scalar:
            for poly, mult in factors:
                poly = _univar(poly)
                mult = int(mult)
                if mult == 0:
                    continue
                if not poly:
                    raise InvalidInput("zero polynomial factor with nonzero multiplicity")
                if poly.is_constant():
                    scalar = scalar * poly.constant_value() ** mult
                    continue
                # squarefree factors come back canonically scaled; the unit
                # dropped relative to the original poly moves into the scalar
                for sq, k in squarefree_decompose(poly):
                    canon[sq] = canon.get(sq, 0) + k * mult
                scalar = scalar * _unit_of_decomposition(poly) ** mult
            canon = {p: m for p, m in _coprime_refine(canon).items() if m}
        else:
            canon = {}
            exp_part = SparsePoly.zero(1)
        object.__setattr__(self, "scalar", scalar)
        object.__setattr__(
            self, "factors",
            tuple(sorted(canon.items(), key=lambda kv: (kv[0].degree_in(0), kv[0].sort_key())))
        )
        object.__setattr__(self, "exp_part", exp_part if scalar else SparsePoly.zero(1))
        object.__setattr__(self, "_divisor", None)

    def __setattr__(self, *a):
        raise AttributeError("MeroFn is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(c) -> "MeroFn":
        return MeroFn(scalar=c)

    @staticmethod
    def from_poly(p: SparsePoly) -> "MeroFn":
        if not p:
            return MeroFn(scalar=0)
        return MeroFn(scalar=1, factors=[(p, 1)])

    @staticmethod
    def unit(exp_poly: SparsePoly) -> "MeroFn":
        """The zero-free function exp(Q)."""
        return MeroFn(scalar=1, exp_part=exp_poly)

    # -- basic structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.scalar

    def is_constant(self) -> bool:
        return not self.factors and self.exp_part.degree_in(0) <= 0

    def constant_value(self) -> GaussRat:
        """Exact value of a constant function; requires a constant exp part too.

        exp(c) for c != 0 is transcendental, so only exp part 0 yields an
        exact Gaussian rational.
        """
        if not self.is_constant():
            raise InvalidInput("function is not constant")
        if self.exp_part:
            raise InvalidInput("constant has a transcendental exp factor")
        return self.scalar

    def __eq__(self, other):
        if not isinstance(other, MeroFn):
            return NotImplemented
        return (self.scalar == other.scalar and self.factors == other.factors
                and self.exp_part == other.exp_part)

    def __hash__(self):
        return hash((self.scalar, self.factors, self.exp_part))

    # -- arithmetic ------------------------------------------------------------

    def __mul__(self, other: "MeroFn") -> "MeroFn":
        if self.is_zero() or other.is_zero():
            return MeroFn(scalar=0)
        return MeroFn(
            scalar=self.scalar * other.scalar,
            factors=list(self.factors) + list(other.factors),
            exp_part=self.exp_part + other.exp_part,
        )

    def __truediv__(self, other: "MeroFn") -> "MeroFn":
        return self * other.inverse()

    def inverse(self) -> "MeroFn":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return MeroFn(
            scalar=GaussRat(1) / self.scalar,
            factors=[(p, -m) for p, m in self.factors],
            exp_part=-self.exp_part,
        )

    def __pow__(self, k: int) -> "MeroFn":
        if not isinstance(k, int):
            raise InvalidInput("powers of class functions must be integers")
        if k == 0:
            return MeroFn(scalar=1)
        if k < 0:
            return self.inverse() ** (-k)
        return MeroFn(
            scalar=self.scalar**k,
            factors=[(p, m * k) for p, m in self.factors],
            exp_part=self.exp_part.scale(k),
        )

    # -- divisor / evaluation -----------------------------------------------------

    def divisor(self) -> list[tuple[RootEnclosure, int]]:
        """Zero/pole divisor: (enclosure, signed multiplicity) per point."""
        if self._divisor is None:
            out = []
            for poly, mult in self.factors:
                for root in _roots_cached(poly).roots:
                    out.append((root, mult))
            object.__setattr__(self, "_divisor", out)
        return self._divisor

    def zero_multiplicities(self) -> list[int]:
        return [m for _, m in self.divisor() if m > 0]

    def min_zero_multiplicity(self) -> int | None:
        mults = self.zero_multiplicities()
        return min(mults) if mults else None

    def eval(self, z: complex) -> complex:
        if self.is_zero():
            return 0j
        acc = complex(self.scalar)
        for poly, mult in self.factors:
            acc *= complex(poly.eval([z])) ** mult
        if self.exp_part:
            acc *= np.exp(complex(self.exp_part.eval([z])))
        return acc

    def log_abs(self, zs: np.ndarray) -> np.ndarray:
        """log |f| on an array of sample points (vectorized, -inf at zeros)."""
        if self.is_zero():
            return np.full(np.shape(zs), -INFINITY)
        acc = np.full(np.shape(zs), math.log(abs(complex(self.scalar))) if self.scalar else -INFINITY)
        with np.errstate(divide="ignore"):
            for poly, mult in self.factors:
                vals = np.polyval(_complex_coeffs_desc(poly), zs)
                acc = acc + mult * np.log(np.abs(vals))
            if self.exp_part:
                acc = acc + np.real(np.polyval(_complex_coeffs_desc(self.exp_part), zs))
        return acc

    def leading_coeff_log_abs_at_zero(self) -> float:
        """log |c0| where f(z) = c0 z^v (1 + O(z)) at the origin."""
        if self.is_zero():
            raise InvalidInput("zero function")
        total = math.log(abs(complex(self.scalar)))
        for poly, mult in self.factors:
            c0 = poly.eval_exact([GaussRat(0)])
            if c0:
                total += mult * math.log(abs(complex(c0)))
            else:
                # squarefree factor: simple root at 0, use p'(0)
                d0 = poly.partial_derivative(0).eval_exact([GaussRat(0)])
                total += mult * math.log(abs(complex(d0)))
        total += float(self.exp_part.eval_exact([GaussRat(0)]).re)
        return total

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = [str(self.scalar)]
        for p, m in self.factors:
            parts.append(f"({p})^{m}" if m != 1 else f"({p})")
        if self.exp_part:
            parts.append(f"exp({self.exp_part})")
        return " * ".join(parts)

    __repr__ = __str__


def _unit_of_decomposition(poly: SparsePoly) -> GaussRat:
    """The constant u with poly = u * prod(canonical squarefree factors)."""
    prod = SparsePoly.one(1)
    for sq, k in squarefree_decompose(poly):
        prod = prod * sq**k
    # both poly and prod share the same monomial support up to a scalar
    lead = max(poly.terms)
    return poly.terms[lead] / prod.terms[lead]


def _coprime_refine(canon: dict[SparsePoly, int]) -> dict[SparsePoly, int]:
    """Split factors until pairwise coprime (gcd-free basis), exactly."""
    work = [(p, m) for p, m in canon.items() if m]
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                p, mp = work[i]
                q, mq = work[j]
                if p == q:
                    work[i] = (p, mp + mq)
                    del work[j]
                    changed = True
                    break
                g = gcd_poly(p, q, 0)
                if g.degree_in(0) > 0:
                    pg = canonical_scale(p.exact_div(g))
                    qg = canonical_scale(q.exact_div(g))
                    repl = [(g, mp + mq)]
                    if pg.degree_in(0) > 0:
                        repl.append((pg, mp))
                    if qg.degree_in(0) > 0:
                        repl.append((qg, mq))
                    work = [w for k, w in enumerate(work) if k not in (i, j)] + repl
                    changed = True
                    break
            if changed:
                break
    out: dict[SparsePoly, int] = {}
    for p, m in work:
        out[p] = out.get(p, 0) + m
    return {p: m for p, m in out.items() if m}


def mero_arith(f: MeroFn, g: MeroFn | None, op: str, k: int | None = None) -> MeroFn:
    """Spec-facing arithmetic dispatcher: op in {mul, div, pow}."""
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    if op == "pow":
        if k is None or not isinstance(k, int):
            raise InvalidInput("pow requires an integer exponent")
        return f**k
    raise InvalidInput(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# logarithmic derivative
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogDerivative:
    """f'/f as an exact rational function num/den (den = product of factors)."""

    num: SparsePoly
    den: SparsePoly

    def eval(self, z: complex) -> complex:
        return complex(self.num.eval([z])) / complex(self.den.eval([z]))

    def log_abs(self, zs: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            nv = np.polyval(_complex_coeffs_desc(self.num), zs)
            dv = np.polyval(_complex_coeffs_desc(self.den), zs)
            return np.log(np.abs(nv)) - np.log(np.abs(dv))

    def pole_enclosures(self) -> list[RootEnclosure]:
        """Poles are exactly the distinct roots of the factor product (all simple)."""
        if self.den.is_constant():
            return []
        return list(_roots_cached(canonical_scale(self.den)).roots)

    def zero_enclosures(self) -> AlgebraicRoots:
        return roots_certified(self.num)


def log_derivative(f: MeroFn) -> LogDerivative:
    """Exact f'/f = sum m_k p_k'/p_k + Q' for a nonzero class function."""
    if f.is_zero():
        raise InvalidInput("logarithmic derivative of the zero function")
    den = SparsePoly.one(1)
    for p, _ in f.factors:
        den = den * p
    num = SparsePoly.zero(1)
    for p, m in f.factors:
        other = den.exact_div(p)
        num = num + (p.partial_derivative(0) * other).scale(m)
    num = num + f.exp_part.partial_derivative(0) * den
    return LogDerivative(num, den)


# ---------------------------------------------------------------------------
# evaluation grid
# ---------------------------------------------------------------------------

_CIRCLE_TOL = 1e-9
_PERTURB = 1e-6


@dataclass(frozen=True)
class RadiusGrid:
    """Log-spaced evaluation radii, kept clear of divisor moduli."""

    points: tuple[float, ...]
    quadrature_order: int = 256

    @staticmethod
    def log_spaced(r_min: float, r_max: float, count: int,
                   quadrature_order: int = 256) -> "RadiusGrid":
        if r_min <= 0 or r_max <= r_min or count < 2:
            raise InvalidInput("need 0 < r_min < r_max and count >= 2")
        pts = np.exp(np.linspace(math.log(r_min), math.log(r_max), count))
        return RadiusGrid(tuple(float(p) for p in pts), quadrature_order)

    def perturbed_for(self, fns: Sequence[MeroFn]) -> "RadiusGrid":
        """Nudge any point that collides with a zero/pole modulus."""
        moduli = []
        for f in fns:
            for root, _ in f.divisor():
                moduli.append(abs(root.center))
        pts = []
        for p in self.points:
            q = p
            for _ in range(100):
                if all(abs(q - m) > _CIRCLE_TOL * max(1.0, q) for m in moduli):
                    break
                q *= 1.0 + _PERTURB
            pts.append(q)
        return RadiusGrid(tuple(pts), self.quadrature_order)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def circle_average(logabs: Callable[[np.ndarray], np.ndarray], r: float,
                   abs_tol: float = 1e-8, rel_tol: float = 1e-9,
                   start_order: int = 256, max_order: int = 1 << 21,
                   positive_part: bool = True) -> tuple[float, float]:
    """Adaptive trapezoid average of (log+|f|) over the circle |z| = r.

    Doubles the node count until two successive refinements agree within
    max(abs_tol, rel_tol * |value|); returns (value, error_estimate).
    Raises QuadratureError with the best estimate when the cap is reached.
    """
    n = start_order
    theta = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    vals = logabs(r * np.exp(1j * theta))
    if positive_part:
        vals = np.maximum(vals, 0.0)
    vals = np.nan_to_num(vals, neginf=0.0 if positive_part else -1e30)
    est = float(np.mean(vals))
    hits = 0
    while n < max_order:
        theta_new = theta + math.pi / n
        new_vals = logabs(r * np.exp(1j * theta_new))
        if positive_part:
            new_vals = np.maximum(new_vals, 0.0)
        new_vals = np.nan_to_num(new_vals, neginf=0.0 if positive_part else -1e30)
        est_new = 0.5 * (est + float(np.mean(new_vals)))
        err = abs(est_new - est)
        theta = np.sort(np.concatenate([theta, theta_new]))
        n *= 2
        # resample on the full refined grid to keep the running mean exact
        est = est_new
        if err <= max(abs_tol, rel_tol * abs(est)):
            hits += 1
            if hits >= 2:
                return est, err
        else:
            hits = 0
    raise QuadratureError(
        f"quadrature did not converge at r={r}", best_estimate=est, error_estimate=err
    )


# ---------------------------------------------------------------------------
# the functionals
# ---------------------------------------------------------------------------

def _check_radius(f: MeroFn, r: float, which: str = "both"):
    for root, mult in f.divisor():
        if which == "pole" and mult > 0:
            continue
        if abs(abs(root.center) - r) <= _CIRCLE_TOL * max(1.0, r):
            raise InvalidInput(
                f"divisor point at |z|={abs(root.center)} sits on the circle r={r}; "
                "perturb the grid (RadiusGrid.perturbed_for)"
            )


def counting_N(f: MeroFn, target: str, r: float, trunc: float = INFINITY) -> float:
    """Counting function of zeros or poles inside radius r, truncated at ``trunc``.

    N = sum over divisor points 0 < |z| <= r of min(mult, trunc) log(r/|z|)
    plus min(mult at 0, trunc) log r.
    """
    if target not in ("zero", "pole"):
        raise InvalidInput("target must be 'zero' or 'pole'")
    if f.is_zero():
        raise InvalidInput("counting function of the zero function")
    _check_radius(f, r)
    sign = 1 if target == "zero" else -1
    total = 0.0
    for root, mult in f.divisor():
        m = sign * mult
        if m <= 0:
            continue
        m = min(m, trunc)
        rho = abs(root.center)
        if rho <= _CIRCLE_TOL:
            total += m * math.log(r)
        elif rho <= r:
            total += m * math.log(r / rho)
    return total


def proximity_m(f: MeroFn, r: float, abs_tol: float = 1e-8) -> float:
    """Circle average of log+ |f|."""
    if f.is_zero():
        return 0.0
    _check_radius(f, r)
    value, _ = circle_average(f.log_abs, r, abs_tol=abs_tol)
    return value


def characteristic_T(f, r: float, abs_tol: float = 1e-8) -> float:
    """Nevanlinna characteristic.

    For a single class function: T = m(infinity, r) + N(poles, r).  For a
    tuple (projective curve given by components without common zeros) the
    circle average of log max_i |f_i|.
    """
    if isinstance(f, MeroFn):
        return proximity_m(f, r, abs_tol) + counting_N(f, "pole", r)
    fns = list(f)
    if all(g.is_zero() for g in fns):
        raise InvalidInput("all components vanish")
    _validate_no_common_zeros(fns)
    for g in fns:
        if not g.is_zero():
            # individual zeros on the circle are harmless under log-max;
            # only poles would poison the average
            _check_radius(g, r, which="pole")

    def logmax(zs):
        acc = None
        for g in fns:
            if g.is_zero():
                continue
            vals = g.log_abs(zs)
            acc = vals if acc is None else np.maximum(acc, vals)
        return acc

    value, _ = circle_average(logmax, r, abs_tol=abs_tol, positive_part=False)
    return value


def _zero_poly(f: MeroFn) -> SparsePoly:
    acc = SparsePoly.one(1)
    for p, m in f.factors:
        if m > 0:
            acc = acc * p
    return acc


def _validate_no_common_zeros(fns: Sequence[MeroFn]):
    polys = []
    for g in fns:
        if g.is_zero():
            continue
        polys.append(_zero_poly(g))
    if not polys:
        return
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant():
            return
        g = gcd_poly(g, p, 0)
    if not g.is_constant():
        raise InvalidInput("tuple components share a zero (not a reduced representation)")


def gcd_counting(f: MeroFn, g: MeroFn, r: float) -> float:
    """Counting function of common zeros with min-of-multiplicities weights.

    Matching is exact: the factor polynomials of both functions are reduced
    to a gcd-free basis over Q(i), so any shared root lives in a shared
    basis factor.
    """
    if f.is_zero() or g.is_zero():
        raise InvalidInput("gcd counting needs nonzero functions")
    _check_radius(f, r)
    _check_radius(g, r)
    basis = _coprime_refine({p: 1 for p, m in list(f.factors) + list(g.factors) if m != 0})

    def mult_in(fn: MeroFn, q: SparsePoly) -> int:
        total = 0
        for p, m in fn.factors:
            if m > 0 and q.divides(p):
                total += m
        return total

    total = 0.0
    for q in basis:
        vf = mult_in(f, q)
        vg = mult_in(g, q)
        m = min(vf, vg)
        if m <= 0:
            continue
        for root in _roots_cached(q).roots:
            rho = abs(root.center)
            if rho <= _CIRCLE_TOL:
                total += m * math.log(r)
            elif rho <= r:
                total += m * math.log(r / rho)
    return total


def log_derivative_T(ld: LogDerivative, r: float, abs_tol: float = 1e-8) -> float:
    """Characteristic of f'/f: proximity plus the (simple) pole counting."""
    for root in ld.pole_enclosures():
        if abs(abs(root.center) - r) <= _CIRCLE_TOL * max(1.0, r):
            raise InvalidInput(f"pole of f'/f on the circle r={r}; perturb the grid")
    m, _ = circle_average(ld.log_abs, r, abs_tol=abs_tol)
    n = 0.0
    for root in ld.pole_enclosures():
        rho = abs(root.center)
        if rho <= _CIRCLE_TOL:
            n += math.log(r)
        elif rho <= r:
            n += math.log(r / rho)
    return m + n


def jensen_log_average(p: SparsePoly, r: float) -> float:
    """Exact circle average of log|p| for a univariate polynomial (Jensen)."""
    if not p:
        raise InvalidInput("zero polynomial")
    lead = p.terms[max(p.terms)]
    total = math.log(abs(complex(lead)))
    for root in _roots_cached(canonical_scale(p)).roots:
        total += root.multiplicity * math.log(max(r, abs(root.center)))
    return total


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def mero_to_doc(f: MeroFn) -> dict:
    from .algebra import serialize

    re, im = f.scalar.to_strings()
    return {
        "scalar": {"re": re, "im": im},
        "factors": [
            {"poly": serialize.poly_to_doc(p), "mult": m} for p, m in f.factors
        ],
        "exp": serialize.poly_to_doc(f.exp_part),
    }


def mero_from_doc(doc: dict) -> MeroFn:
    from .algebra import serialize

    sc = doc.get("scalar", {"re": "1", "im": "0"})
    scalar = GaussRat.from_strings(sc.get("re", "1"), sc.get("im", "0"))
    factors = [
        (serialize.poly_from_doc(t["poly"]), int(t["mult"]))
        for t in doc.get("factors", [])
    ]
    exp_doc = doc.get("exp")
    exp_part = serialize.poly_from_doc(exp_doc) if exp_doc else SparsePoly.zero(1)
    return MeroFn(scalar=scalar, factors=factors, exp_part=exp_part)
