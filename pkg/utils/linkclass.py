import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from utils.angles import Angle
from utils.config_utils import Settings
from utils.constants import Parity
from utils.errors import HypothesisViolationError, InputError, SingularMeridianError
from utils.logging_utils import log_family_check
from utils.seifert_core import (
    SeifertMatrix, SignTuple, block_sum, delta_at, eps_transpose, parallel_copies, reparam_matrix,
    signature_profile,
)
from utils.surgery import TypeVector, rational_inverse

LOGGER = logging.getLogger(__name__)

ODD_BASE = ((1, 1), (0, 1))
EVEN_BASE = ((1, 1, 0, 0), (0, 0, 1, 0), (0, -1, 0, 1), (0, 0, 0, 1))


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


# --- Complexity ---

@dataclass(frozen=True)
class MeridianMatrix:
    """Columns express the meridians in a basis of H₁ of the exterior modulo torsion."""
    entries: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "MeridianMatrix":
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if rational_inverse(entries) is None:
            raise SingularMeridianError("meridian matrix is singular")
        return cls(entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)


def complexity_of_type(B: MeridianMatrix, tau: TypeVector) -> int:
    """
    Complexity of type τ: lcm of the reduced denominators of τᵀB⁻¹.

    Input:
        B (MeridianMatrix): Meridian coordinates.
        tau (TypeVector): Link type.

    Output:
        int: Positive complexity.
    """
    if not isinstance(B, MeridianMatrix):
        B = MeridianMatrix.from_rows(B)
    if not isinstance(tau, TypeVector):
        tau = TypeVector(tuple(tau))
    if len(tau) != B.dimension:
        raise InputError(f"type of length {len(tau)} for a {B.dimension}x{B.dimension} meridian matrix")
    inverse = rational_inverse(B.entries)
    if inverse is None:
        raise SingularMeridianError("meridian matrix is singular")
    n = B.dimension
    row = [sum((tau.entries[i] * inverse[i][j] for i in range(n)), Fraction(0)) for j in range(n)]
    return math.lcm(*(x.denominator for x in row))


# --- Links at matrix level ---

@dataclass(frozen=True)
class LinkClass:
    """
    A link of type τ and complexity c given by a Seifert matrix.

    The matrix is i_k(base) ⊕ 0_padding with k = copies kept implicit; jump queries read the
    base profile: δ^τ_L(θ) = sgn(c)·δ_base(θ·k/c).
    """
    tau: TypeVector
    complexity: int
    base: SeifertMatrix
    copies: int = 1
    padding: int = 0

    def __post_init__(self):
        if self.complexity == 0:
            raise InputError("complexity must be nonzero")
        if self.copies < 1:
            raise InputError(f"copies must be positive, got {self.copies}")

    @classmethod
    def knot(cls, A: SeifertMatrix, complexity: int = 1) -> "LinkClass":
        return cls(TypeVector((1,)), complexity, A)

    @property
    def parity(self) -> Parity:
        return self.base.parity

    @property
    def is_knot(self) -> bool:
        return len(self.tau) == 1

    def materialize(self) -> SeifertMatrix:
        """Explicit Seifert matrix i_k(base) ⊕ 0."""
        matrix = self.base if self.copies == 1 else parallel_copies(self.base, self.copies)
        if self.padding:
            matrix = block_sum(matrix, SeifertMatrix.zero(self.padding, self.parity))
        return matrix

    def scaled_copies(self, r: int) -> "LinkClass":
        """(r·c, i_r A): the same link with its surface replaced by r parallel copies."""
        if r < 1:
            raise InputError(f"copy factor must be positive, got {r}")
        if self.padding:
            return LinkClass(self.tau, self.complexity * r, self.materialize(), r)
        return LinkClass(self.tau, self.complexity * r, self.base, self.copies * r)

    def reverse_mirror(self) -> "LinkClass":
        return LinkClass(self.tau, self.complexity, -self.base, self.copies, self.padding)

    def with_positive_complexity(self) -> "LinkClass":
        """Equivalent description with c > 0, using δ_{εAᵀ}(θ) = −δ_A(−θ)."""
        if self.complexity > 0:
            return self
        return LinkClass(self.tau, -self.complexity, eps_transpose(self.materialize()))

    def delta(self, theta: Angle, settings: Optional[Settings] = None) -> int:
        return link_delta(self, theta, settings)


def period_knot(base: SeifertMatrix, k: int, n: int) -> LinkClass:
    """
    Knot J with c(J) = |n| and δ_J(θ) = sgn(n)·δ_{i_k A}(θ/n).

    Its explicit Seifert matrix is i_k A ⊕ 0_{|n|−1}.
    """
    if n == 0:
        raise InputError("period knot needs n ≠ 0")
    return LinkClass(TypeVector((1,)), n, base, copies=k, padding=abs(n) - 1)


def link_delta(L: LinkClass, theta: Angle, settings: Optional[Settings] = None) -> int:
    """
    Jump function of type τ: sgn(c)·δ_A(θ/c).

    Input:
        L (LinkClass): Link at matrix level.
        theta (Angle): Any exact angle; windings beyond 2π are kept through the division by c.

    Output:
        int: Exact jump.
    """
    if theta.is_zero_mod_2pi() and theta.winding == 0:
        return 0
    reparametrized = theta.scaled(Fraction(L.copies, L.complexity), settings)
    return _sign(L.complexity) * delta_at(L.base, reparametrized, settings)


def period(L: LinkClass) -> Angle:
    """2π|c|, a period of θ ↦ link_delta(L, θ)."""
    return Angle.from_pi(2 * abs(L.complexity))


def breakpoints_in_period(L: LinkClass, settings: Optional[Settings] = None) -> List[Angle]:
    """Angles in [0, 2π|c|) where the jump function is nonzero, in increasing order."""
    profile = signature_profile(L.base, settings)
    factor = Fraction(abs(L.complexity), L.copies)
    found = []
    for b, jump in zip(profile.breakpoints, profile.jumps):
        if not jump:
            continue
        position = b if L.complexity > 0 else (-b).position()
        for m in range(L.copies):
            found.append(position.shifted(m).scaled(factor, settings))
    return sorted(found)


def parallel_delta(L: LinkClass, alpha: SignTuple, theta: Angle, settings: Optional[Settings] = None) -> int:
    """
    Jump function of i_α L, checked against sgn(n_α)·δ_L(n_α θ).

    Input:
        L (LinkClass): Link.
        alpha (SignTuple): Parallel copies with orientations.
        theta (Angle): Exact angle.

    Output:
        int: δ^τ_{i_α L}(θ).
    """
    A = L.materialize()
    n_alpha = alpha.n_alpha
    if n_alpha == 0 and not A.form_is_nonsingular():
        raise HypothesisViolationError()
    copied = LinkClass(L.tau, L.complexity, reparam_matrix(A, alpha))
    left = link_delta(copied, theta, settings)
    right = _sign(n_alpha) * link_delta(L, theta.scaled(n_alpha, settings), settings) if n_alpha else 0
    if left != right:
        raise HypothesisViolationError(
            f"parallel copy formula disagrees at {theta.render()}: {left} != {right}")
    return right


# --- Connected sums and satellites ---

@dataclass(frozen=True)
class CsumStars:
    """Free blocks of the connected-sum matrix; absent blocks are zero."""
    top: Optional[Sequence[Sequence[object]]] = None
    left: Optional[Sequence[Sequence[object]]] = None
    center: Optional[Sequence[Sequence[object]]] = None


def csum_matrix_q1(A1: SeifertMatrix, A2: SeifertMatrix, c: int, stars: Optional[CsumStars] = None) -> SeifertMatrix:
    """
    Seifert matrix of the connected sum of two knots of complexity c in dimension 3.

    Generators are ordered as those of A1, those of A2, then y_1..y_{c−1} and x_1..x_{c−1}.
    The y-x block has −i/c on and right of the diagonal and (c−i)/c left of it; the x-y block
    has (c−j)/c on and right of the diagonal and −j/c left of it. Star blocks default to zero.
    """
    if c < 1:
        raise InputError(f"complexity must be at least 1, got {c}")
    if A1.parity is not Parity.ODD_Q or A2.parity is not Parity.ODD_Q:
        raise InputError("the classical connected-sum matrix needs odd-q Seifert matrices")
    stars = stars or CsumStars()
    head = A1.dimension + A2.dimension
    extra = c - 1
    size = head + 2 * extra
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(A1.dimension):
        for j in range(A1.dimension):
            rows[i][j] = A1.entries[i][j]
    for i in range(A2.dimension):
        for j in range(A2.dimension):
            rows[A1.dimension + i][A1.dimension + j] = A2.entries[i][j]

    y0, x0 = head, head + extra
    for i in range(1, c):
        for j in range(1, c):
            rows[y0 + i - 1][x0 + j - 1] = Fraction(c - i, c) if j < i else Fraction(-i, c)
            rows[x0 + i - 1][y0 + j - 1] = Fraction(-j, c) if j < i else Fraction(c - j, c)

    def place(block, row0, col0, shape, name):
        if block is None:
            return
        if len(block) != shape[0] or any(len(r) != shape[1] for r in block):
            raise InputError(f"star block {name} must be {shape[0]}x{shape[1]}")
        for i, r in enumerate(block):
            for j, value in enumerate(r):
                rows[row0 + i][col0 + j] = Fraction(value)

    place(stars.top, 0, y0, (head, extra), "top")
    place(stars.left, y0, 0, (extra, head), "left")
    place(stars.center, y0, y0, (extra, extra), "center")
    return SeifertMatrix.from_rows(rows, Parity.ODD_Q)


def _equalize(L1: LinkClass, L2: LinkClass) -> Tuple[LinkClass, LinkClass, int]:
    L1, L2 = L1.with_positive_complexity(), L2.with_positive_complexity()
    c = math.lcm(L1.complexity, L2.complexity)
    return L1.scaled_copies(c // L1.complexity), L2.scaled_copies(c // L2.complexity), c


def connected_sum(L1: LinkClass, L2: LinkClass, classical: bool = True,
                  stars: Optional[CsumStars] = None) -> LinkClass:
    """
    Connected sum at matrix level, after equalizing complexities to their lcm.

    Odd parity with classical=True uses the explicit 1-link matrix (knots only);
    otherwise the block sum of the two Seifert matrices.
    """
    if L1.tau != L2.tau or L1.parity is not L2.parity:
        raise InputError("connected sum needs equal types and parities")
    L1, L2, c = _equalize(L1, L2)
    A1, A2 = L1.materialize(), L2.materialize()
    if classical and L1.parity is Parity.ODD_Q:
        if not (L1.is_knot and L2.is_knot):
            raise InputError("the classical connected-sum matrix is defined for knots")
        return LinkClass(L1.tau, c, csum_matrix_q1(A1, A2, c, stars))
    return LinkClass(L1.tau, c, block_sum(A1, A2))


def csum_delta(L1: LinkClass, L2: LinkClass, theta: Angle, classical: bool = True,
               stars: Optional[CsumStars] = None, settings: Optional[Settings] = None) -> int:
    """Jump function of the connected sum, equal to δ_{L1}(θ) + δ_{L2}(θ)."""
    return link_delta(connected_sum(L1, L2, classical, stars), theta, settings)


def satellite_delta(J: LinkClass, K_prime: LinkClass, r: int, theta: Angle,
                    settings: Optional[Settings] = None) -> int:
    """
    Jump function of the satellite with companion K' and winding number r.

    Computed from A ⊕ i_r B and checked against δ_J(θ) + sgn(r)·δ_K'(rθ).
    """
    if not (J.is_knot and K_prime.is_knot):
        raise InputError("satellite formula takes knots")
    if J.complexity != 1 or K_prime.complexity != 1:
        raise InputError("satellite formula takes knots of complexity 1")
    if J.parity is not K_prime.parity:
        raise InputError("satellite pattern and companion have different parities")
    A = J.materialize()
    matrix = A if r == 0 else block_sum(A, parallel_copies(K_prime.materialize(), r))
    value = link_delta(LinkClass(J.tau, 1, matrix), theta, settings)
    expected = link_delta(J, theta, settings)
    if r:
        expected += _sign(r) * link_delta(K_prime, theta.scaled(r, settings), settings)
    if value != expected:
        raise HypothesisViolationError(f"satellite formula disagrees at {theta.render()}: {value} != {expected}")
    return value


def split_union_delta(K: LinkClass, a: int, b: int, theta: Angle, settings: Optional[Settings] = None) -> int:
    """Type-(a, b) jump function of the split union K ⊔ −K, from i_a A ⊕ i_b(−A)."""
    tau = TypeVector((a, b))
    A = K.materialize()
    matrix = block_sum(parallel_copies(A, a), parallel_copies(-A, b))
    return link_delta(LinkClass(tau, K.complexity, matrix), theta, settings)


def kawauchi_torsion_test(K: LinkClass, settings: Optional[Settings] = None) -> bool:
    """True iff δ_K(2θ) = 2δ_K(θ) can hold everywhere, which forces δ_K ≡ 0."""
    if not K.is_knot:
        raise InputError("torsion test takes a knot")
    return not signature_profile(K.base, settings).has_nonzero_jump()


# --- Independent family ---

class FamilyCheck(BaseModel):
    prime: int = Field(description="The prime p_j the claim is about.")
    claim: str = Field(description="'nonzero' or 'vanish'.")
    theta: str = Field(description="The angle checked, as a rational multiple of π.")
    value: int = Field(description="δ_K at theta.")
    passed: bool


class FamilyReport(BaseModel):
    parity: Parity
    primes: List[int]
    coefficients: List[int]
    rochlin_multiple: bool = False
    checks: List[FamilyCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def family_base(parity: Parity, rochlin_multiple: bool = False) -> SeifertMatrix:
    parity = Parity(parity)
    A = SeifertMatrix.from_rows(ODD_BASE if parity is Parity.ODD_Q else EVEN_BASE, parity)
    if rochlin_multiple:
        A = block_sum(*([A] * 8))
    return A


def _validate_primes(primes: Sequence[int]) -> List[int]:
    from sympy import isprime

    primes = [int(p) for p in primes]
    if not primes:
        raise InputError("at least one prime is required")
    if len(set(primes)) != len(primes):
        raise InputError(f"primes must be distinct: {primes}")
    for p in primes:
        if p <= 7 or not isprime(p):
            raise InputError(f"{p} is not a prime greater than 7")
    return primes


def combination_delta(members: Sequence[LinkClass], coefficients: Sequence[int], theta: Angle,
                      settings: Optional[Settings] = None) -> int:
    """δ of the connected sum Σ aᵢKᵢ by additivity; negative coefficients use reverse mirrors."""
    return sum(a * link_delta(K, theta, settings) for K, a in zip(members, coefficients) if a)


def independent_family(parity: Parity, primes: Sequence[int], coefficients: Optional[Sequence[int]] = None,
                       rochlin_multiple: bool = False,
                       settings: Optional[Settings] = None) -> Tuple[List[LinkClass], FamilyReport]:
    """
    Knots K_i with δ_{K_i}(θ) = δ_A(θ·p_i/7), and the report on a combination K = Σ aᵢKᵢ.

    Input:
        parity (Parity): Selects the 2x2 odd base or the 4x4 even base.
        primes (list[int]): Distinct primes greater than 7.
        coefficients (list[int]): Combination; defaults to all ones.
        rochlin_multiple (bool): Replace the base by the block sum of 8 copies.

    Output:
        (members, report): For each p_j with a_j ≠ 0, δ_K(7nπ/6p_j) ≠ 0 and δ_K(7nπ/6p_j + 2π) = 0,
        with n = 2 for odd parity and n = 1 for even parity.
    """
    parity = Parity(parity)
    primes = _validate_primes(primes)
    coefficients = list(coefficients) if coefficients is not None else [1] * len(primes)
    if len(coefficients) != len(primes):
        raise InputError("one coefficient per prime is required")
    if not any(coefficients):
        raise InputError("the combination must be nonzero")
    base = family_base(parity, rochlin_multiple)
    members = [LinkClass(TypeVector((1,)), 7, base, copies=p) for p in primes]
    n = 2 if parity is Parity.ODD_Q else 1
    report = FamilyReport(parity=parity, primes=primes, coefficients=coefficients, rochlin_multiple=rochlin_multiple)
    for p, a in zip(primes, coefficients):
        if not a:
            continue
        theta = Angle.from_pi(Fraction(7 * n, 6 * p))
        for claim, angle in (("nonzero", theta), ("vanish", theta.shifted(1))):
            value = combination_delta(members, coefficients, angle, settings)
            passed = value != 0 if claim == "nonzero" else value == 0
            log_family_check(p, angle.render(), claim, passed)
            report.checks.append(FamilyCheck(prime=p, claim=claim, theta=angle.render(), value=value, passed=passed))
    return members, report
