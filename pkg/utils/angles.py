import functools
import logging
import math
import re
from fractions import Fraction
from typing import Optional

import mpmath
import sympy
from sympy import Poly, Symbol, cyclotomic_poly, totient

from utils.config_utils import Settings, load_settings
from utils.constants import Comparison
from utils.errors import AngleError, PrecisionCeilingError
from utils.exact_arith import (
    T, U, LaurentPolynomial, RealAlgebraic, alg_compare, cauchy_bound, circle_to_tangent,
    count_roots_closed, format_rational, horner, poly_coefficients, squarefree_integer_part, sturm_isolate,
)
from utils.logging_utils import log_precision_escalation

LOGGER = logging.getLogger(__name__)

W = Symbol("w")

_ANGLE_RE = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<coef>\d+(?:\s*/\s*\d+)?)?\s*\*?\s*(?:pi|π)\s*(?:/\s*(?P<den>\d+))?\s*$",
    re.IGNORECASE,
)


def format_pi(r: Fraction) -> str:
    """Renders rπ as 'aπ/b'."""
    r = Fraction(r)
    if r == 0:
        return "0"
    sign = "-" if r < 0 else ""
    num, den = abs(r.numerator), r.denominator
    head = "π" if num == 1 else f"{num}π"
    return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"


def cyclotomic_tangent_poly(order: int) -> Poly:
    """Tangent half-angle polynomial whose roots are tan(θ/2) for the primitive order-th roots e^{iθ} (order ≥ 3)."""
    return _cyclotomic_tangent_poly(order)


@functools.lru_cache(maxsize=512)
def _cyclotomic_tangent_poly(order: int) -> Poly:
    phi = int(totient(order))
    laurent = LaurentPolynomial.from_poly(Poly(cyclotomic_poly(order, T), T, domain="QQ"), shift=-(phi // 2))
    return squarefree_integer_part(circle_to_tangent(laurent))


@functools.lru_cache(maxsize=4096)
def tangent_of_pi(r: Fraction) -> RealAlgebraic:
    """
    Exact tan(rπ/2) for r in (0, 2), r ≠ 1.

    The roots of the cyclotomic tangent polynomial are ordered like the angles in (−π, π),
    so the right root is picked by its rank among the primitive angles.
    """
    r = Fraction(r)
    half = r / 2
    order, j = half.denominator, half.numerator
    q = _cyclotomic_tangent_poly(order)
    bound = cauchy_bound(q)
    roots = sturm_isolate(q, -bound, bound)
    signed = sorted(Fraction(k, order) - (1 if Fraction(k, order) > Fraction(1, 2) else 0)
                    for k in range(1, order) if math.gcd(k, order) == 1)
    target = half - (1 if half > Fraction(1, 2) else 0)
    return roots[signed.index(target)]


def _rational_pi_of_tangent(u: RealAlgebraic) -> Optional[Fraction]:
    # a tangent of e^{iθ} with θ = rπ; e^{iθ} then has degree φ(d) ≤ 2·deg over Q
    minimal = minimal_root(u)
    value = minimal.rational_value()
    if value == 0:
        return Fraction(0)
    n = minimal.poly.degree()
    for order in range(3, 2 * (2 * n) ** 2 + 7):
        if int(totient(order)) > 2 * n:
            continue
        q = _cyclotomic_tangent_poly(order)
        if not q.to_field().rem(minimal.poly.to_field()).is_zero:
            continue
        for k in range(1, order):
            if math.gcd(k, order) != 1:
                continue
            r = Fraction(2 * k, order)
            if alg_compare(tangent_of_pi(r), minimal) is Comparison.EQUAL:
                return r
    return None


def minimal_root(u: RealAlgebraic) -> RealAlgebraic:
    """Same number with its irreducible defining polynomial."""
    if u.poly.degree() == 1:
        return u
    for factor, _ in u.poly.factor_list()[1]:
        if factor.degree() >= 1 and count_roots_closed(factor, u.lo, u.hi) == 1:
            factor = squarefree_integer_part(factor)
            return RealAlgebraic(factor, u.lo, u.hi)
    return u


def negate_root(u: RealAlgebraic) -> RealAlgebraic:
    coefficients = u.poly.all_coeffs()
    degree = len(coefficients) - 1
    flipped = [c if (degree - k) % 2 == 0 else -c for k, c in enumerate(coefficients)]
    poly = Poly(flipped, U, domain="ZZ")
    if poly.LC() < 0:
        poly = -poly
    return RealAlgebraic(poly, -u.hi, -u.lo)


def _mpf_to_fraction(x) -> Fraction:
    p, q = mpmath.libmp.to_rational(x._mpf_)
    return Fraction(p, q)


def _multiple_angle_parts(n: int, var: Symbol):
    # (1 + i·var)^n = R + i·I
    real = sum(math.comb(n, k) * (-1) ** (k // 2) * var ** k for k in range(0, n + 1, 2))
    imag = sum(math.comb(n, k) * (-1) ** ((k - 1) // 2) * var ** k for k in range(1, n + 1, 2))
    return real, imag


def _scaled_tangent_poly(u: RealAlgebraic, p: int, q: int) -> Poly:
    # v = tan(φ'/2) with q·φ'/2 ≡ p·θ/2 (mod π), θ = 2·atan(u)
    r_p, i_p = _multiple_angle_parts(p, W)
    r_q, i_q = _multiple_angle_parts(q, U)
    relation = sympy.expand(i_q * r_p - r_q * i_p)
    defining = u.poly.as_expr().subs(U, W)
    result = sympy.resultant(defining, relation, W)
    return squarefree_integer_part(Poly(result, U))


@functools.total_ordering
class Angle:
    """
    An exact point θ = 2π·winding + position with position in [0, 2π).

    The position is either a rational multiple of π (pi_multiple in [0, 2)) or an
    algebraic tangent u = tan(position/2), which is never 0 and never a root-of-unity tangent.
    """
    __slots__ = ("winding", "pi_multiple", "tangent")

    def __init__(self, winding: int = 0, pi_multiple: Optional[Fraction] = None,
                 tangent: Optional[RealAlgebraic] = None):
        if (pi_multiple is None) == (tangent is None):
            raise AngleError("angle needs exactly one of pi_multiple or tangent")
        self.winding = int(winding)
        self.pi_multiple = None if pi_multiple is None else Fraction(pi_multiple)
        self.tangent = tangent

    # --- construction ---

    @classmethod
    def from_pi(cls, r) -> "Angle":
        r = Fraction(r)
        winding = math.floor(r / 2)
        return cls(winding, pi_multiple=r - 2 * winding)

    @classmethod
    def zero(cls) -> "Angle":
        return cls(0, pi_multiple=Fraction(0))

    @classmethod
    def from_tangent(cls, u, winding: int = 0) -> "Angle":
        """
        Angle with tan(position/2) = u; u > 0 lands in (0, π), u < 0 in (π, 2π).

        Tangents of rational multiples of π are converted to the exact rational form.
        """
        if not isinstance(u, RealAlgebraic):
            u = RealAlgebraic.from_rational(u)
        r = _rational_pi_of_tangent(u)
        if r is not None:
            return cls(winding, pi_multiple=r)
        return cls(winding, tangent=u)

    @classmethod
    def algebraic(cls, u: RealAlgebraic, winding: int = 0) -> "Angle":
        """Trusted constructor for tangents known not to come from roots of unity."""
        return cls(winding, tangent=u)

    # --- inspection ---

    def is_rational_pi(self) -> bool:
        return self.pi_multiple is not None

    def total_pi(self) -> Optional[Fraction]:
        """θ/π when θ is a rational multiple of π, else None."""
        if self.pi_multiple is None:
            return None
        return 2 * self.winding + self.pi_multiple

    def is_zero_mod_2pi(self) -> bool:
        return self.pi_multiple == 0

    def position(self) -> "Angle":
        return Angle(0, self.pi_multiple, self.tangent)

    def region(self) -> int:
        # 0: [0, π), 1: π, 2: (π, 2π)
        if self.pi_multiple is not None:
            if self.pi_multiple < 1:
                return 0
            return 1 if self.pi_multiple == 1 else 2
        return 0 if self.tangent.compare_rational(0) is Comparison.GREATER else 2

    def position_tangent(self) -> RealAlgebraic:
        """tan(position/2); undefined at position π."""
        if self.pi_multiple is None:
            return self.tangent
        if self.pi_multiple == 0:
            return RealAlgebraic.from_rational(0)
        if self.pi_multiple == 1:
            raise AngleError("tangent half-angle chart excludes π")
        return tangent_of_pi(self.pi_multiple)

    # --- order ---

    def compare(self, other: "Angle") -> Comparison:
        if self.winding != other.winding:
            return Comparison.LESS if self.winding < other.winding else Comparison.GREATER
        if self.pi_multiple is not None and other.pi_multiple is not None:
            if self.pi_multiple == other.pi_multiple:
                return Comparison.EQUAL
            return Comparison.LESS if self.pi_multiple < other.pi_multiple else Comparison.GREATER
        a, b = self.region(), other.region()
        if a != b:
            return Comparison.LESS if a < b else Comparison.GREATER
        return alg_compare(self.position_tangent(), other.position_tangent())

    def __eq__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        return self.compare(other) is Comparison.EQUAL

    def __lt__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        return self.compare(other) is Comparison.LESS

    __hash__ = None

    # --- arithmetic ---

    def shifted(self, turns: int) -> "Angle":
        return Angle(self.winding + turns, self.pi_multiple, self.tangent)

    def __neg__(self) -> "Angle":
        if self.pi_multiple is not None:
            return Angle.from_pi(-self.total_pi())
        return Angle(-self.winding - 1, tangent=negate_root(self.tangent))

    def scaled(self, factor, settings: Optional[Settings] = None) -> "Angle":
        """
        Returns θ·factor for a rational factor.

        Rational multiples of π scale exactly. Algebraic angles go through the multiple-angle
        relation tan(q·x) = tan(p·y) and a resultant; the right root is bracketed with mpmath
        at doubling precision until a Sturm count leaves a single candidate.
        """
        factor = Fraction(factor)
        if factor == 0:
            return Angle.zero()
        if self.pi_multiple is not None:
            return Angle.from_pi(self.total_pi() * factor)
        if factor < 0:
            return (-self).scaled(-factor, settings)
        if factor == 1:
            return self
        return _scale_algebraic(self, factor, settings or load_settings())

    def to_float(self) -> float:
        if self.pi_multiple is not None:
            return float(self.total_pi()) * math.pi
        half = math.atan(self.tangent.to_float())
        if half < 0:
            half += math.pi
        return 2 * math.pi * self.winding + 2 * half

    def render(self) -> str:
        if self.pi_multiple is not None:
            return format_pi(self.total_pi())
        body = f"2·atan({self.tangent.render()})"
        if self.winding:
            return f"{format_pi(Fraction(2 * self.winding))} + {body}"
        return body

    def __repr__(self):
        return f"Angle({self.render()})"


def _scale_algebraic(angle: Angle, factor: Fraction, settings: Settings) -> Angle:
    u = minimal_root(angle.tangent)
    target = _scaled_tangent_poly(u, factor.numerator, factor.denominator)
    bits = settings.precision_start_bits
    while bits <= settings.precision_ceiling_bits:
        u = u.refined_below(Fraction(1, 2 ** bits))
        mp = mpmath.MPContext()
        mp.prec = bits + 32
        mid = mp.mpf(u.lo.numerator) / u.lo.denominator / 2 + mp.mpf(u.hi.numerator) / u.hi.denominator / 2
        half = mp.atan(mid)
        if half < 0:
            half += mp.pi
        total = (mp.pi * angle.winding + half) * factor.numerator / factor.denominator
        slack = (abs(factor) + 1) * (mp.mpf(u.hi.numerator) / u.hi.denominator
                                     - mp.mpf(u.lo.numerator) / u.lo.denominator + mp.ldexp(1, -bits)) * 4
        turns_lo = int(mp.floor((total - slack) / mp.pi))
        turns_hi = int(mp.floor((total + slack) / mp.pi))
        if turns_lo == turns_hi:
            rest_lo = total - slack - mp.pi * turns_lo
            rest_hi = total + slack - mp.pi * turns_lo
            quarter = mp.pi / 2
            if rest_lo > 0 and rest_hi < mp.pi and (rest_hi < quarter or rest_lo > quarter):
                margin = mp.ldexp(1, -bits)
                v_lo = mp.tan(rest_lo)
                v_hi = mp.tan(rest_hi)
                lo = _mpf_to_fraction(v_lo - margin * (1 + abs(v_lo)))
                hi = _mpf_to_fraction(v_hi + margin * (1 + abs(v_hi)))
                values = poly_coefficients(target)
                if horner(values, lo) != 0 and horner(values, hi) != 0 and count_roots_closed(target, lo, hi) == 1:
                    return Angle.algebraic(RealAlgebraic(target, lo, hi), winding=turns_lo)
        bits *= 2
        log_precision_escalation(bits, "algebraic angle scaling")
    raise PrecisionCeilingError(f"could not bracket {angle.render()} scaled by {format_rational(factor)}")


def parse_angle(text: str) -> Angle:
    """
    Parses 'p/q pi', 'pi/3', '-2pi', '7/33*pi' or '0' into an exact Angle.

    Input:
        text (str): Angle as a rational multiple of π.

    Output:
        Angle: Exact angle.
    """
    stripped = text.strip()
    if re.fullmatch(r"[+-]?0+", stripped):
        return Angle.zero()
    match = _ANGLE_RE.match(stripped)
    if not match:
        raise AngleError(f"cannot parse angle '{stripped}' (expected a rational multiple of pi, e.g. '7/33 pi')")
    coefficient = Fraction(1)
    if match.group("coef"):
        num, _, den = match.group("coef").replace(" ", "").partition("/")
        if den and int(den) == 0:
            raise AngleError(f"zero denominator in angle '{stripped}'")
        coefficient = Fraction(int(num), int(den) if den else 1)
    if match.group("den"):
        if int(match.group("den")) == 0:
            raise AngleError(f"zero denominator in angle '{stripped}'")
        coefficient /= int(match.group("den"))
    if match.group("sign") == "-":
        coefficient = -coefficient
    return Angle.from_pi(coefficient)
