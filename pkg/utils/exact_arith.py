import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import mpmath
from sympy import Poly, Symbol

from utils.constants import Comparison
from utils.errors import IndeterminateRootSetError, InputError, NotRealOnCircleError

LOGGER = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction]

U = Symbol("u")
T = Symbol("t")

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """
    Parses an integer or 'p/q' string into a reduced Fraction.

    Input:
        text (str): e.g. '3', '-7/33'.

    Output:
        Fraction: The value in lowest terms with positive denominator.
    """
    match = _RATIONAL_RE.match(text)
    if not match:
        raise InputError(f"malformed rational '{text.strip()}'")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InputError(f"zero denominator in '{text.strip()}'")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# --- Gaussian rationals ---

@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value), Fraction(0))

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = GaussianRational(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        if self.im == 0:
            return format_rational(self.re)
        return f"({format_rational(self.re)}{'+' if self.im >= 0 else '-'}{format_rational(abs(self.im))}i)"


I = GaussianRational(0, 1)
ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def circle_point(u: Fraction) -> GaussianRational:
    """Exact e^{iθ} for θ = 2·arctan(u): ((1−u²) + 2iu)/(1+u²)."""
    u = Fraction(u)
    d = 1 + u * u
    return GaussianRational((1 - u * u) / d, 2 * u / d)


# --- Laurent polynomials ---

@dataclass(frozen=True)
class LaurentPolynomial:
    """
    Finite sum Σ c_k t^k with Gaussian-rational coefficients.

    Stored as a sorted tuple of (exponent, coefficient) pairs with no zero coefficients,
    so structural equality is mathematical equality.
    """
    terms: Tuple[Tuple[int, GaussianRational], ...] = ()

    @classmethod
    def from_dict(cls, coefficients: Dict[int, object]) -> "LaurentPolynomial":
        cleaned = {}
        for exponent, value in coefficients.items():
            value = GaussianRational.coerce(value)
            if value:
                cleaned[int(exponent)] = value
        return cls(tuple(sorted(cleaned.items())))

    @classmethod
    def monomial(cls, exponent: int, coefficient=1) -> "LaurentPolynomial":
        return cls.from_dict({exponent: coefficient})

    @classmethod
    def from_poly(cls, poly: Poly, shift: int = 0) -> "LaurentPolynomial":
        """Converts a sympy polynomial in one variable with rational coefficients, multiplied by t^shift."""
        return cls.from_dict({k[0] + shift: sympy_to_fraction(c) for k, c in poly.terms()})

    @property
    def coefficients(self) -> Dict[int, GaussianRational]:
        return dict(self.terms)

    def coefficient(self, exponent: int) -> GaussianRational:
        return self.coefficients.get(exponent, ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def max_exponent(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def is_real(self) -> bool:
        return all(c.is_real() for _, c in self.terms)

    def __add__(self, other):
        other = _as_laurent(other)
        merged = self.coefficients
        for e, c in other.terms:
            merged[e] = merged.get(e, ZERO) + c
        return LaurentPolynomial.from_dict(merged)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        product: Dict[int, GaussianRational] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                product[e1 + e2] = product.get(e1 + e2, ZERO) + c1 * c2
        return LaurentPolynomial.from_dict(product)

    __rmul__ = __mul__

    def bar(self) -> "LaurentPolynomial":
        return LaurentPolynomial.from_dict({-e: c.conj() for e, c in self.terms})

    def is_bar_symmetric(self) -> bool:
        return self == self.bar()

    def substitute_power(self, n: int) -> "LaurentPolynomial":
        """Returns p(t^n)."""
        result: Dict[int, GaussianRational] = {}
        for e, c in self.terms:
            result[e * n] = result.get(e * n, ZERO) + c
        return LaurentPolynomial.from_dict(result)

    def evaluate(self, z) -> GaussianRational:
        z = GaussianRational.coerce(z)
        total = ZERO
        for e, c in self.terms:
            total = total + c * (z ** e)
        return total

    def render(self, variable: str = "t") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "" if e == 0 else (variable if e == 1 else f"{variable}^{e}")
            if c.is_real():
                magnitude = abs(c.re)
                sign = "-" if c.re < 0 else "+"
                coeff = "" if (magnitude == 1 and mono) else format_rational(magnitude)
            else:
                sign, coeff = "+", repr(c)
            body = f"{coeff}*{mono}" if coeff and mono else (coeff or mono)
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _as_laurent(value) -> LaurentPolynomial:
    if isinstance(value, LaurentPolynomial):
        return value
    return LaurentPolynomial.monomial(0, value)


def laurent_bar(p: LaurentPolynomial) -> LaurentPolynomial:
    return p.bar()


def sympy_to_fraction(value) -> Fraction:
    """Converts a sympy Integer/Rational (or ground-domain element) to Fraction."""
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    return Fraction(int(value))


def _binomial_row(n: int, unit: GaussianRational) -> List[GaussianRational]:
    # coefficients of (1 + unit·u)^n, lowest degree first
    return [math.comb(n, k) * unit ** k for k in range(n + 1)]


def _multiply_rows(a: List[GaussianRational], b: List[GaussianRational]) -> List[GaussianRational]:
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def integer_poly(coefficients_low_first: List[Fraction], variable: Symbol = U) -> Poly:
    """Clears denominators with their lcm (a positive factor) and returns a Poly over ZZ."""
    den = 1
    for c in coefficients_low_first:
        den = math.lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coefficients_low_first]
    return Poly(list(reversed(ints)) or [0], variable, domain="ZZ")


def circle_to_tangent(p: LaurentPolynomial) -> Poly:
    """
    Transfers a bar-symmetric Laurent polynomial to the tangent half-angle chart.

    Input:
        p (LaurentPolynomial): Satisfies p = bar(p), so p(e^{iθ}) is real.

    Output:
        Poly: q(u) over ZZ with q(tan(θ/2)) = c·(1+u²)^m·p(e^{iθ}) for θ in (−π, π),
        where m = max exponent of p and c > 0 is the denominator-clearing factor.
        Roots of p at θ = π appear as a drop in the degree of q.
    """
    if not p.is_bar_symmetric():
        raise NotRealOnCircleError()
    m = p.max_exponent()
    total = [ZERO] * (2 * m + 1)
    for j, a in p.terms:
        # t^j (1+u²)^m = (1+iu)^{m+j} (1−iu)^{m−j}
        row = _multiply_rows(_binomial_row(m + j, I), _binomial_row(m - j, -I))
        for k, c in enumerate(row):
            total[k] = total[k] + a * c
    if any(not c.is_real() for c in total):
        raise NotRealOnCircleError()
    return integer_poly([c.re for c in total])


# --- Real root isolation ---

def poly_coefficients(poly: Poly) -> List[Fraction]:
    """Highest degree first, as Fractions."""
    return [sympy_to_fraction(c) for c in poly.all_coeffs()]


def horner(coefficients: List[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coefficients:
        acc = acc * x + c
    return acc


def interval_context(bits: int) -> mpmath.MPIntervalContext:
    """Fresh mpmath interval context at the given working precision."""
    iv = mpmath.MPIntervalContext()
    iv.prec = bits
    return iv


def iv_rational(iv: mpmath.MPIntervalContext, x: Number):
    x = Fraction(x)
    return iv.mpf(x.numerator) / x.denominator


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class SturmChain:
    """Sturm sequence of a squarefree integer polynomial, evaluated exactly at rationals."""

    def __init__(self, poly: Poly):
        self.poly = poly
        self.chain = [poly_coefficients(s) for s in poly.sturm()]
        self.head = self.chain[0]

    def value(self, x: Fraction) -> Fraction:
        return horner(self.head, x)

    def variations(self, x: Fraction) -> int:
        signs = [s for s in (_sign(horner(c, x)) for c in self.chain) if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count_half_open(self, a: Fraction, b: Fraction) -> int:
        """Number of distinct roots in (a, b]."""
        return self.variations(a) - self.variations(b)

    def count_closed(self, a: Fraction, b: Fraction) -> int:
        return self.count_half_open(a, b) + (1 if self.value(a) == 0 else 0)


def squarefree_integer_part(p: Poly) -> Poly:
    """Primitive squarefree part with positive leading coefficient."""
    if p.is_zero:
        raise IndeterminateRootSetError()
    q = p
    if not q.domain.is_ZZ:
        _, q = q.clear_denoms(convert=True)
    q = q.sqf_part()
    _, q = q.primitive()
    if q.LC() < 0:
        q = -q
    return q


def cauchy_bound(p: Poly) -> Fraction:
    coefficients = poly_coefficients(p)
    lead = abs(coefficients[0])
    if len(coefficients) == 1:
        return Fraction(1)
    return 1 + max(abs(c) for c in coefficients[1:]) / lead


@dataclass(frozen=True)
class RealAlgebraic:
    """
    A real root of a squarefree integer polynomial, located by an isolating interval.

    The closed interval [lo, hi] contains exactly one root of poly and neither endpoint is a root.
    """
    poly: Poly
    lo: Fraction
    hi: Fraction
    _chain: Optional[SturmChain] = field(default=None, compare=False, hash=False, repr=False)

    @classmethod
    def from_rational(cls, value: Number) -> "RealAlgebraic":
        value = Fraction(value)
        poly = Poly([value.denominator, -value.numerator], U, domain="ZZ")
        return cls(poly, value - 1, value + 1)

    def chain(self) -> SturmChain:
        if self._chain is None:
            object.__setattr__(self, "_chain", SturmChain(self.poly))
        return self._chain

    def width(self) -> Fraction:
        return self.hi - self.lo

    def rational_value(self) -> Optional[Fraction]:
        """Exact value when the root is rational, else None."""
        for factor, _ in self.poly.factor_list()[1]:
            if factor.degree() == 1:
                a, b = poly_coefficients(factor)
                r = -b / a
                if self.lo < r < self.hi:
                    return r
        return None

    def refine(self) -> "RealAlgebraic":
        mid = (self.lo + self.hi) / 2
        chain = self.chain()
        value_mid = chain.value(mid)
        if value_mid == 0:
            quarter = self.width() / 4
            return RealAlgebraic(self.poly, mid - quarter, mid + quarter, self._chain)
        if _sign(chain.value(self.lo)) != _sign(value_mid):
            return RealAlgebraic(self.poly, self.lo, mid, self._chain)
        return RealAlgebraic(self.poly, mid, self.hi, self._chain)

    def refined_below(self, width: Fraction) -> "RealAlgebraic":
        current = self
        while current.width() > width:
            current = current.refine()
        return current

    def compare_rational(self, x: Number) -> Comparison:
        """Compares this number against a rational x."""
        x = Fraction(x)
        if x <= self.lo:
            return Comparison.GREATER
        if x >= self.hi:
            return Comparison.LESS
        chain = self.chain()
        vx = chain.value(x)
        if vx == 0:
            return Comparison.EQUAL
        if _sign(vx) == _sign(chain.value(self.lo)):
            return Comparison.GREATER
        return Comparison.LESS

    def to_float(self) -> float:
        approx = self.refined_below(Fraction(1, 2 ** 60))
        return float((approx.lo + approx.hi) / 2)

    def render(self) -> str:
        coefficients = ", ".join(str(int(c)) for c in self.poly.all_coeffs())
        return f"root of [{coefficients}] in [{format_rational(self.lo)}, {format_rational(self.hi)}]"


def _shift_off_roots(chain: SturmChain, a: Fraction, b: Fraction) -> Fraction:
    # a point strictly inside (a, b) that is not a root
    m = (a + b) / 2
    while chain.value(m) == 0:
        m = (a + m) / 2
    return m


def _isolate_open(chain: SturmChain, a: Fraction, b: Fraction) -> List[Tuple[Fraction, Fraction]]:
    # a, b are not roots
    found = []
    stack = [(a, b, chain.count_half_open(a, b))]
    while stack:
        lo, hi, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            found.append((lo, hi))
            continue
        mid = _shift_off_roots(chain, lo, hi)
        left = chain.count_half_open(lo, mid)
        stack.append((mid, hi, count - left))
        stack.append((lo, mid, left))
    return sorted(found)


def _endpoint_radius(chain: SturmChain, r: Fraction, start: Fraction) -> Fraction:
    h = start
    while True:
        if chain.value(r - h) != 0 and chain.value(r + h) != 0 and chain.count_half_open(r - h, r + h) == 1:
            return h
        h /= 2


def sturm_isolate(p: Poly, lo: Number, hi: Number) -> List[RealAlgebraic]:
    """
    Isolates the distinct real roots of p in the closed range [lo, hi].

    Input:
        p (Poly): Integer (or rational) polynomial in one variable, not identically zero.
        lo, hi: Rational bounds of the range.

    Output:
        list[RealAlgebraic]: One entry per distinct root, pairwise-disjoint intervals, increasing.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    base = squarefree_integer_part(p)
    if base.degree() <= 0 or lo > hi:
        return []
    chain = SturmChain(base)
    start = (hi - lo) / 4 if hi > lo else Fraction(1)
    roots: List[Tuple[Fraction, Fraction]] = []
    a, b = lo, hi
    if chain.value(lo) == 0:
        h = _endpoint_radius(chain, lo, start)
        roots.append((lo - h, lo + h))
        a = lo + h
    if hi != lo and chain.value(hi) == 0:
        h = _endpoint_radius(chain, hi, start)
        roots.append((hi - h, hi + h))
        b = hi - h
    if a < b:
        roots.extend(_isolate_open(chain, a, b))
    roots.sort()
    LOGGER.debug("sturm_isolate degree=%d roots=%d", base.degree(), len(roots))
    return [RealAlgebraic(base, r_lo, r_hi, chain) for r_lo, r_hi in roots]


def count_roots_closed(p: Poly, lo: Fraction, hi: Fraction) -> int:
    base = squarefree_integer_part(p)
    if base.degree() <= 0:
        return 0
    return SturmChain(base).count_closed(lo, hi)


def alg_compare(a: RealAlgebraic, b: RealAlgebraic) -> Comparison:
    """
    Exact trichotomy of two real algebraic numbers.

    Equality holds iff gcd(a.poly, b.poly) has a root in the overlap of the two
    isolating intervals; otherwise both intervals are refined until disjoint.
    """
    common = None
    while True:
        if a.hi <= b.lo:
            return Comparison.LESS
        if b.hi <= a.lo:
            return Comparison.GREATER
        if common is None:
            common = a.poly.gcd(b.poly)
        if common.degree() > 0:
            overlap_lo, overlap_hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if count_roots_closed(common, overlap_lo, overlap_hi) > 0:
                return Comparison.EQUAL
        a, b = a.refine(), b.refine()


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """
    Rational with the smallest denominator strictly inside (lo, hi).

    Walks the Stern-Brocot tree through continued fraction expansions.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    floor_lo = math.floor(lo)
    if floor_lo + 1 < hi:
        return Fraction(floor_lo + 1)
    if lo == floor_lo:
        return floor_lo + Fraction(1, math.floor(1 / (hi - floor_lo)) + 1)
    return floor_lo + 1 / simplest_between(1 / (hi - floor_lo), 1 / (lo - floor_lo))


def rational_between(a: RealAlgebraic, b: RealAlgebraic) -> Fraction:
    """Simplest rational strictly between a < b."""
    while a.hi > b.lo:
        a, b = a.refine(), b.refine()
    if a.hi == b.lo:
        return a.hi
    return simplest_between(a.hi, b.lo)
