import bisect
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import QQ, Poly, cyclotomic_poly, totient
from sympy.polys.matrices import DomainMatrix

from utils.angles import Angle, minimal_root
from utils.config_utils import Settings, load_settings
from utils.constants import Comparison, Parity
from utils.errors import AngleError, DimensionMismatchError, InputError
from utils.exact_arith import (
    T, U, ONE, LaurentPolynomial, RealAlgebraic, cauchy_bound, circle_point, circle_to_tangent,
    count_roots_closed, format_rational, horner, poly_coefficients, rational_between, sturm_isolate,
)
from utils.herm_sig import Z, CyclotomicMatrix, signature_antihermitian, signature_cyclotomic, signature_exact, symmetric_signature
from utils.logging_utils import log_profile

LOGGER = logging.getLogger(__name__)

RING = QQ[T]


# --- Seifert matrices ---

@dataclass(frozen=True)
class SeifertMatrix:
    """Square rational matrix A with parity ε = (−1)^{q+1}."""
    entries: Tuple[Tuple[Fraction, ...], ...]
    parity: Parity = Parity.ODD_Q

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], parity: Parity = Parity.ODD_Q) -> "SeifertMatrix":
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise DimensionMismatchError(f"Seifert matrix must be square, got {n} rows of lengths {[len(r) for r in rows]}")
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows), Parity(parity))

    @classmethod
    def zero(cls, n: int, parity: Parity = Parity.ODD_Q) -> "SeifertMatrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)), parity)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def epsilon(self) -> int:
        return self.parity.epsilon

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def rows(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "SeifertMatrix":
        n = self.dimension
        return SeifertMatrix(tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)), self.parity)

    def scaled(self, factor) -> "SeifertMatrix":
        factor = Fraction(factor)
        return SeifertMatrix(tuple(tuple(factor * x for x in row) for row in self.entries), self.parity)

    def __neg__(self) -> "SeifertMatrix":
        return self.scaled(-1)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def symmetrized(self) -> List[List[Fraction]]:
        """A + Aᵀ."""
        n = self.dimension
        return [[self.entries[i][j] + self.entries[j][i] for j in range(n)] for i in range(n)]

    def intersection_form(self) -> List[List[Fraction]]:
        """A − εAᵀ."""
        n, eps = self.dimension, self.epsilon
        return [[self.entries[i][j] - eps * self.entries[j][i] for j in range(n)] for i in range(n)]

    def form_is_nonsingular(self) -> bool:
        if self.dimension == 0:
            return True
        form = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in self.intersection_form()],
                            (self.dimension, self.dimension), QQ)
        return form.det() != 0


@dataclass(frozen=True)
class SignTuple:
    entries: Tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise InputError("sign tuple must be nonempty")
        if any(s not in (1, -1) for s in self.entries):
            raise InputError(f"sign tuple entries must be ±1, got {self.entries}")
        object.__setattr__(self, "entries", tuple(int(s) for s in self.entries))

    @classmethod
    def uniform(cls, r: int) -> "SignTuple":
        """(sgn r, …, sgn r) of length |r|."""
        if r == 0:
            raise InputError("uniform sign tuple needs r ≠ 0")
        return cls((1 if r > 0 else -1,) * abs(r))

    @property
    def n_alpha(self) -> int:
        return sum(self.entries)

    def __len__(self):
        return len(self.entries)

    def __neg__(self) -> "SignTuple":
        return SignTuple(tuple(-s for s in self.entries))


def _check_parity(*matrices: SeifertMatrix):
    parities = {m.parity for m in matrices}
    if len(parities) > 1:
        raise InputError("Seifert matrices have different parities")


def eps_transpose(A: SeifertMatrix) -> SeifertMatrix:
    return A.transpose().scaled(A.epsilon)


def block_sum(*matrices: SeifertMatrix) -> SeifertMatrix:
    """Block diagonal sum; all summands share one parity."""
    if not matrices:
        raise InputError("block sum of nothing")
    _check_parity(*matrices)
    n = sum(m.dimension for m in matrices)
    rows = [[Fraction(0)] * n for _ in range(n)]
    offset = 0
    for m in matrices:
        for i in range(m.dimension):
            for j in range(m.dimension):
                rows[offset + i][offset + j] = m.entries[i][j]
        offset += m.dimension
    return SeifertMatrix.from_rows(rows, matrices[0].parity)


def reparam_matrix(A: SeifertMatrix, alpha: SignTuple) -> SeifertMatrix:
    """
    Seifert matrix i_α A of |α| parallel copies.

    Input:
        A (SeifertMatrix): Base matrix.
        alpha (SignTuple): Orientation of each copy.

    Output:
        SeifertMatrix: Blocks A above the diagonal, εAᵀ below, and A or εAᵀ on the diagonal per sign.
    """
    n, r = A.dimension, len(alpha)
    upper, lower = A.entries, eps_transpose(A).entries
    rows = [[Fraction(0)] * (n * r) for _ in range(n * r)]
    for p in range(r):
        for q in range(r):
            if p < q or (p == q and alpha.entries[p] == 1):
                block = upper
            else:
                block = lower
            for i in range(n):
                for j in range(n):
                    rows[p * n + i][q * n + j] = block[i][j]
    return SeifertMatrix.from_rows(rows, A.parity)


def parallel_copies(A: SeifertMatrix, r: int) -> SeifertMatrix:
    """i_r A; r = 0 gives the empty matrix."""
    if r == 0:
        return SeifertMatrix.zero(0, A.parity)
    return reparam_matrix(A, SignTuple.uniform(r))


def eta(a: int, phi: Angle) -> int:
    """
    Step function of period 2π: a+1−2k on (2π(k−1)/a, 2πk/a), a−2k at 2πk/a, 0 at 0.
    """
    if a == 0:
        return 0
    if a < 0:
        return eta(-a, -phi)
    position = phi.position()
    if position.is_zero_mod_2pi():
        return 0
    if position.is_rational_pi():
        x = position.pi_multiple * a / 2
        if x.denominator == 1:
            return a - 2 * int(x)
        k = math.floor(x) + 1
        return a + 1 - 2 * k
    k = 1 + sum(1 for m in range(1, a) if Angle.from_pi(Fraction(2 * m, a)) < position)
    return a + 1 - 2 * k


# --- Alexander polynomials ---

@dataclass(frozen=True)
class AlexanderPolynomial:
    laurent: LaurentPolynomial
    normalized: bool = False

    def is_zero(self) -> bool:
        return self.laurent.is_zero()

    def normalize(self) -> "AlexanderPolynomial":
        """Representative with lowest exponent 0 and leading coefficient 1."""
        if self.is_zero():
            return AlexanderPolynomial(self.laurent, True)
        shift = -self.laurent.min_exponent()
        lead = self.laurent.coefficient(self.laurent.max_exponent())
        coefficients = {e + shift: c / lead for e, c in self.laurent.terms}
        return AlexanderPolynomial(LaurentPolynomial.from_dict(coefficients), True)

    def substitute(self, n: int) -> "AlexanderPolynomial":
        return AlexanderPolynomial(self.laurent.substitute_power(n))

    def is_symmetric(self) -> bool:
        """Δ(t) ≐ Δ(1/t) up to units."""
        return alexander_equivalent(self, AlexanderPolynomial(self.laurent.substitute_power(-1)))

    def render(self) -> str:
        return self.laurent.render("t")


def _ring_matrix(rows) -> DomainMatrix:
    n = len(rows)
    return DomainMatrix([[RING.from_sympy(x) for x in row] for row in rows], (n, n), RING)


def _ring_to_poly(element) -> Poly:
    return Poly(RING.to_sympy(element), T, domain="QQ")


def _sym(x: Fraction):
    return sympy.Rational(x.numerator, x.denominator)


def alexander(A: SeifertMatrix) -> AlexanderPolynomial:
    """
    Δ_A(t) = det(tA − εAᵀ).

    Input:
        A (SeifertMatrix): Any square rational matrix with parity.

    Output:
        AlexanderPolynomial: Exact determinant, not normalized.
    """
    n, eps = A.dimension, A.epsilon
    if n == 0:
        return AlexanderPolynomial(LaurentPolynomial.monomial(0, 1))
    rows = [[T * _sym(A.entries[i][j]) - eps * _sym(A.entries[j][i]) for j in range(n)] for i in range(n)]
    det = _ring_to_poly(_ring_matrix(rows).det())
    return AlexanderPolynomial(LaurentPolynomial.from_poly(det))


def alexander_substitute(delta: AlexanderPolynomial, n: int) -> AlexanderPolynomial:
    return delta.substitute(n)


def alexander_equivalent(first: AlexanderPolynomial, second: AlexanderPolynomial) -> bool:
    """Equality up to units c·t^k of Q[t, t⁻¹]."""
    return first.normalize().laurent == second.normalize().laurent


# --- Signature evaluation ---

def _sigma_rational_tangent(A: SeifertMatrix, u: Fraction) -> Tuple[int, int]:
    w = circle_point(u)
    a, b = ONE - w, ONE - w.conj()
    n, eps = A.dimension, A.epsilon
    rows = [[a * A.entries[i][j] + b * (eps * A.entries[j][i]) for j in range(n)] for i in range(n)]
    if eps == 1:
        return signature_exact(rows)
    return signature_antihermitian(rows)


def _sigma_root_of_unity(A: SeifertMatrix, k: int, d: int, settings: Optional[Settings] = None) -> Tuple[int, int]:
    # θ = 2πk/d with gcd(k, d) = 1 and 0 < k < d
    n = A.dimension
    if A.epsilon == 1:
        # (1−ζ)A + (1−ζ⁻¹)Aᵀ over Q(ζ_d)
        rows = [[Poly((1 - Z) * _sym(A.entries[i][j]) + (1 - Z ** (d - 1)) * _sym(A.entries[j][i]), Z, domain="QQ")
                 for j in range(n)] for i in range(n)]
        return signature_cyclotomic(CyclotomicMatrix.build(d, k, rows), settings)
    # i·M = 2·sin(θ/2)·(sA + s⁻¹Aᵀ) with s = e^{iθ/2} a (2d)-th root of unity
    order = 2 * d
    rows = [[Poly(Z * _sym(A.entries[i][j]) + Z ** (order - 1) * _sym(A.entries[j][i]), Z, domain="QQ")
             for j in range(n)] for i in range(n)]
    return signature_cyclotomic(CyclotomicMatrix.build(order, k, rows), settings)


class _RealRootField:
    """Q(u) for a real algebraic u, with exact signs by isolating-interval refinement."""

    def __init__(self, root: RealAlgebraic):
        self.root = root
        self.modulus = root.poly.set_domain(QQ)

    def element(self, value: Fraction, u_power: int = 0) -> Poly:
        return Poly(_sym(Fraction(value)) * U ** u_power, U, domain="QQ").rem(self.modulus)

    def is_zero(self, x):
        return x.is_zero

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return (x * y).rem(self.modulus)

    def inv(self, x):
        return x.invert(self.modulus)

    def conj(self, x):
        return x

    def magnitude(self, x):
        return 0

    def sign(self, x) -> int:
        root = self.root
        while count_roots_closed(x, root.lo, root.hi) > 0:
            root = root.refine()
        self.root = root
        return 1 if horner(poly_coefficients(x), root.lo) > 0 else -1


def _sigma_algebraic(A: SeifertMatrix, u: RealAlgebraic, positive: bool) -> Tuple[int, int]:
    """
    σ at θ = 2·atan(u) for an irrational algebraic u.

    With S = A + Aᵀ and N = A − Aᵀ, σ equals sgn(u)·σ(uS − iN) for ε=+1 and sgn(u)·σ(S + iuN)
    for ε=−1; the hermitian matrix X + iY is signed through its real form [[X, −Y], [Y, X]].
    """
    field = _RealRootField(minimal_root(u))
    n = A.dimension
    S = A.symmetrized()
    N = [[A.entries[i][j] - A.entries[j][i] for j in range(n)] for i in range(n)]
    if A.epsilon == 1:
        X = [[field.element(S[i][j], 1) for j in range(n)] for i in range(n)]
        Y = [[field.element(-N[i][j]) for j in range(n)] for i in range(n)]
    else:
        X = [[field.element(S[i][j]) for j in range(n)] for i in range(n)]
        Y = [[field.element(N[i][j], 1) for j in range(n)] for i in range(n)]
    real_form = [X[i] + [-y for y in Y[i]] for i in range(n)] + [Y[i] + X[i] for i in range(n)]
    signature, rank = symmetric_signature(real_form, field)
    return (signature // 2 if positive else -(signature // 2)), rank // 2


def branched_signature(A: SeifertMatrix, k: int, d: int, settings: Optional[Settings] = None) -> int:
    """
    σ_A(2πk/d), the signature of the d-fold branched cover eigenspace.

    Input:
        A (SeifertMatrix): Seifert matrix.
        k (int): Eigenvalue index, taken mod d.
        d (int): Cover order, d ≥ 1.

    Output:
        int: Exact signature via cyclotomic elimination.
    """
    if d <= 0:
        raise AngleError(f"branched cover order must be positive, got d={d}")
    k %= d
    g = math.gcd(k, d)
    k, d = k // g, d // g
    if k == 0 or A.dimension == 0:
        return 0
    return _sigma_root_of_unity(A, k, d, settings)[0]


def sigma_at(A: SeifertMatrix, theta: Angle, settings: Optional[Settings] = None) -> int:
    """
    σ_A(θ) at an exactly representable angle.

    Rational multiples of π go through cyclotomic elimination, rational tangents through
    Gaussian-rational elimination, other algebraic angles are read off the profile.
    """
    position = theta.position()
    if position.is_zero_mod_2pi() or A.dimension == 0:
        return 0
    if position.is_rational_pi():
        half = position.pi_multiple / 2
        return branched_signature(A, half.numerator, half.denominator, settings)
    value = position.tangent.rational_value()
    if value is not None:
        return _sigma_rational_tangent(A, value)[0]
    return signature_profile(A, settings).value_at(position)


# --- Profiles ---

@dataclass(frozen=True)
class SignatureProfile:
    """
    Piecewise-constant φ ↦ σ_A(φ) on [0, 2π).

    Arc i runs from breakpoints[i] to breakpoints[i+1] (the last one wraps through 2π).
    jumps[i] is the jump function at breakpoints[i]: right − left, except 0 at θ ≡ 0.
    """
    dimension: int
    parity: Parity
    generic_rank: int
    breakpoints: Tuple[Angle, ...]
    interval_values: Tuple[int, ...]
    interval_ranks: Tuple[int, ...]
    point_values: Tuple[Optional[int], ...]
    jumps: Tuple[int, ...]
    base_value: int = 0

    def is_constant(self) -> bool:
        return not self.breakpoints

    def has_nonzero_jump(self) -> bool:
        return any(self.jumps)

    def breakpoint_index(self, theta: Angle) -> Optional[int]:
        position = theta.position()
        i = bisect.bisect_left(self.breakpoints, position)
        if i < len(self.breakpoints) and self.breakpoints[i] == position:
            return i
        return None

    def arc_index(self, theta: Angle) -> Optional[int]:
        """Arc containing a non-breakpoint angle; None for a constant profile."""
        if not self.breakpoints:
            return None
        i = bisect.bisect_right(self.breakpoints, theta.position()) - 1
        return i if i >= 0 else len(self.breakpoints) - 1

    def value_at(self, theta: Angle) -> int:
        index = self.breakpoint_index(theta)
        if index is not None:
            value = self.point_values[index]
            if value is None:
                raise AngleError(f"no point value recorded at {theta.render()}")
            return value
        if theta.position().is_zero_mod_2pi():
            return 0
        arc = self.arc_index(theta)
        return self.base_value if arc is None else self.interval_values[arc]

    def jump_at(self, theta: Angle) -> int:
        if theta.position().is_zero_mod_2pi():
            return 0
        index = self.breakpoint_index(theta)
        return 0 if index is None else self.jumps[index]

    def left_values(self) -> Tuple[int, ...]:
        return tuple(self.interval_values[i - 1] for i in range(len(self.interval_values)))

    def arcs(self) -> List[Tuple[float, float, int]]:
        """Arcs over [0, 2π) as float triples (start, end, value), for plotting."""
        full = 2 * math.pi
        if not self.breakpoints:
            return [(0.0, full, self.base_value)]
        points = [b.to_float() for b in self.breakpoints]
        arcs = []
        if points[0] > 0:
            arcs.append((0.0, points[0], self.interval_values[-1]))
        for i, start in enumerate(points):
            end = points[i + 1] if i + 1 < len(points) else full
            arcs.append((start, end, self.interval_values[i]))
        return arcs


def _cyclotomic_order(g: Poly) -> int:
    monic = g.monic()
    degree = monic.degree()
    for d in range(1, 2 * degree * degree + 7):
        if int(totient(d)) == degree and Poly(cyclotomic_poly(d, T), T, domain="QQ") == monic:
            return d
    raise InputError(f"cyclotomic factor of unexpected order: {g.as_expr()}")


def _candidate_angles(P: Poly) -> List[Angle]:
    # unit-circle zeros of P, plus θ = 0
    candidates = [Angle.zero()]
    for g, _ in P.factor_list()[1]:
        if g.degree() <= 0 or (g.degree() == 1 and g.TC() == 0):
            continue
        if g.monic().is_cyclotomic:
            d = _cyclotomic_order(g)
            candidates.extend(Angle.from_pi(Fraction(2 * j, d)) for j in range(1, d) if math.gcd(j, d) == 1)
            continue
        laurent = LaurentPolynomial.from_poly(g)
        tangent = circle_to_tangent(laurent * laurent.bar())
        if tangent.degree() <= 0:
            continue
        bound = cauchy_bound(tangent)
        candidates.extend(Angle.from_tangent(root) for root in sturm_isolate(tangent, -bound, bound))
    unique = sorted(candidates, key=functools.cmp_to_key(_angle_cmp))
    return [a for i, a in enumerate(unique) if i == 0 or a != unique[i - 1]]


def _angle_cmp(a: Angle, b: Angle) -> int:
    c = a.compare(b)
    return -1 if c is Comparison.LESS else (1 if c is Comparison.GREATER else 0)


def _arc_sample(start: Angle, end: Optional[Angle]) -> Fraction:
    """A rational tangent strictly inside the arc (start, end); end None means 2π."""
    end_tangent = RealAlgebraic.from_rational(0) if end is None else (
        None if end.region() == 1 else end.position_tangent())
    region = start.region()
    if region == 0:
        low = start.position_tangent()
        if end is not None and end.region() == 0:
            return rational_between(low, end_tangent)
        return Fraction(math.floor(low.hi) + 1)
    if region == 1:
        return Fraction(math.floor(end_tangent.lo) - 1)
    return rational_between(start.position_tangent(), end_tangent)


def _point_value(A: SeifertMatrix, angle: Angle, settings: Optional[Settings]) -> int:
    if angle.is_zero_mod_2pi():
        return 0
    if angle.is_rational_pi():
        half = angle.pi_multiple / 2
        return _sigma_root_of_unity(A, half.numerator, half.denominator, settings)[0]
    return _sigma_algebraic(A, angle.tangent, angle.region() == 0)[0]


def _generic_breakpoint_poly(A: SeifertMatrix) -> Tuple[int, Optional[Poly]]:
    # T(t) = t·M(t) = t(1−t)A + ε(t−1)Aᵀ; rank on the circle is the top nonvanishing charpoly coefficient
    n, eps = A.dimension, A.epsilon
    rows = [[(T - T ** 2) * _sym(A.entries[i][j]) + eps * (T - 1) * _sym(A.entries[j][i]) for j in range(n)]
            for i in range(n)]
    coefficients = _ring_matrix(rows).charpoly()
    rank = max((k for k, c in enumerate(coefficients) if c), default=0)
    if rank == 0:
        return 0, None
    return rank, _ring_to_poly(coefficients[rank])


def _build_profile(A: SeifertMatrix, settings: Optional[Settings] = None) -> SignatureProfile:
    n = A.dimension
    rank, P = _generic_breakpoint_poly(A) if n else (0, None)
    if P is None:
        profile = SignatureProfile(n, A.parity, 0, (), (), (), (), (), 0)
        log_profile(n, A.parity.value, 0)
        return profile

    # 1. candidates and one exact sample per arc
    candidates = _candidate_angles(P)
    LOGGER.debug("profile candidates=%d generic_rank=%d", len(candidates), rank)
    values, ranks = [], []
    for i, start in enumerate(candidates):
        end = candidates[i + 1] if i + 1 < len(candidates) else None
        sig, arc_rank = _sigma_rational_tangent(A, _arc_sample(start, end))
        values.append(sig)
        ranks.append(arc_rank)

    # 2. drop candidates whose one-sided values agree
    kept = [i for i in range(len(candidates)) if values[i] != values[i - 1]]
    if not kept:
        profile = SignatureProfile(n, A.parity, rank, (), (), (), (), (), values[0])
        log_profile(n, A.parity.value, 0)
        return profile

    breakpoints = tuple(candidates[i] for i in kept)
    interval_values = tuple(values[i] for i in kept)
    interval_ranks = tuple(ranks[i] for i in kept)
    jumps = tuple(0 if candidates[i].is_zero_mod_2pi() else values[i] - values[i - 1] for i in kept)
    point_values = tuple(_point_value(A, b, settings) for b in breakpoints)
    profile = SignatureProfile(n, A.parity, rank, breakpoints, interval_values, interval_ranks,
                               point_values, jumps, 0)
    log_profile(n, A.parity.value, sum(1 for j in jumps if j))
    return profile


@functools.lru_cache(maxsize=256)
def _cached_profile(A: SeifertMatrix, settings: Settings) -> SignatureProfile:
    return _build_profile(A, settings)


def signature_profile(A: SeifertMatrix, settings: Optional[Settings] = None) -> SignatureProfile:
    """
    Certified profile of φ ↦ σ_A(φ) on [0, 2π).

    Input:
        A (SeifertMatrix): Seifert matrix with parity.
        settings (Settings): Precision settings, loaded from the environment when omitted.

    Output:
        SignatureProfile: Breakpoints in increasing order with arc values, point values and jumps.
    """
    return _cached_profile(A, settings or load_settings())


def delta_at(A: SeifertMatrix, theta: Angle, settings: Optional[Settings] = None) -> int:
    """Jump function δ_A(θ); 0 off breakpoints and at every multiple of 2π."""
    if theta.is_zero_mod_2pi() or A.dimension == 0:
        return 0
    return signature_profile(A, settings).jump_at(theta)


def render_matrix(A: SeifertMatrix) -> str:
    return "\n".join(" ".join(format_rational(x) for x in row) for row in A.entries)
