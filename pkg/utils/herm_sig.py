import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import Poly, Symbol, cyclotomic_poly

from utils.config_utils import Settings, load_settings
from utils.errors import DimensionMismatchError, NotHermitianError, PrecisionCeilingError
from utils.exact_arith import I, GaussianRational, interval_context, iv_rational, sympy_to_fraction
from utils.logging_utils import log_precision_escalation

LOGGER = logging.getLogger(__name__)

Z = Symbol("z")


def _square(rows: Sequence[Sequence[object]]) -> int:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatchError(f"matrix is not square ({n} rows)")
    return n


# --- Hermitian matrices over the Gaussian rationals ---

@dataclass(frozen=True)
class HermitianMatrix:
    entries: Tuple[Tuple[GaussianRational, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "HermitianMatrix":
        n = _square(rows)
        entries = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in rows)
        for i in range(n):
            for j in range(i, n):
                if entries[i][j] != entries[j][i].conj():
                    raise NotHermitianError(f"matrix is not hermitian at ({i + 1},{j + 1})")
        return cls(entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)


class _GaussianField:
    def is_zero(self, x):
        return not x

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inverse()

    def conj(self, x):
        return x.conj()

    def sign(self, x) -> int:
        return 1 if x.re > 0 else -1

    def magnitude(self, x):
        return abs(x.re)


def symmetric_signature(rows: List[list], field) -> Tuple[int, int]:
    """
    Congruence elimination of a hermitian matrix over an exact field.

    Diagonal pivots go largest-magnitude first (first index on ties); when every remaining
    diagonal entry vanishes, the first nonzero off-diagonal entry forms a hyperbolic 2x2
    block that adds 0 to the signature and 2 to the rank.
    """
    H = [list(row) for row in rows]
    active = list(range(len(H)))
    signature, rank = 0, 0
    while active:
        diagonal = [i for i in active if not field.is_zero(H[i][i])]
        if diagonal:
            p = max(diagonal, key=lambda i: field.magnitude(H[i][i]))
            pivot_inv = field.inv(H[p][p])
            signature += field.sign(H[p][p])
            rank += 1
            active.remove(p)
            for i in active:
                if field.is_zero(H[i][p]):
                    continue
                f = field.mul(H[i][p], pivot_inv)
                for j in active:
                    H[i][j] = field.sub(H[i][j], field.mul(f, H[p][j]))
            continue
        block = next(((i, j) for i in active for j in active if i < j and not field.is_zero(H[i][j])), None)
        if block is None:
            break
        i0, j0 = block
        z = H[i0][j0]
        z_inv, zbar_inv = field.inv(z), field.inv(field.conj(z))
        rank += 2
        active.remove(i0)
        active.remove(j0)
        updated = {}
        for i in active:
            for j in active:
                correction = field.add(field.mul(field.mul(H[i][i0], zbar_inv), H[j0][j]),
                                       field.mul(field.mul(H[i][j0], z_inv), H[i0][j]))
                updated[(i, j)] = field.sub(H[i][j], correction)
        for (i, j), value in updated.items():
            H[i][j] = value
    return signature, rank


def signature_exact(H) -> Tuple[int, int]:
    """
    Signature and rank of a hermitian Gaussian-rational matrix.

    Input:
        H (HermitianMatrix | rows): Entries may be ints, Fractions or GaussianRationals.

    Output:
        (signature, rank): #positive − #negative eigenvalues, #nonzero eigenvalues.
    """
    if not isinstance(H, HermitianMatrix):
        H = HermitianMatrix.from_rows(H)
    return symmetric_signature([list(row) for row in H.entries], _GaussianField())


def signature_antihermitian(P) -> Tuple[int, int]:
    """Signature of the hermitian matrix i·P for an anti-hermitian P."""
    n = _square(P)
    entries = [[GaussianRational.coerce(x) for x in row] for row in P]
    for i in range(n):
        for j in range(i, n):
            if entries[i][j] != -entries[j][i].conj():
                raise NotHermitianError(f"matrix is not anti-hermitian at ({i + 1},{j + 1})")
    return signature_exact([[I * x for x in row] for row in entries])


# --- Cyclotomic evaluation points ---

@dataclass(frozen=True)
class CyclotomicMatrix:
    """
    Matrix over Q(ζ) with ζ ↦ e^{2πik/d}, gcd(k, d) = 1.

    Entries are sympy Polys in z over QQ reduced modulo the d-th cyclotomic polynomial.
    """
    order: int
    index: int
    entries: Tuple[Tuple[Poly, ...], ...]

    @classmethod
    def build(cls, order: int, index: int, rows: Sequence[Sequence[object]]) -> "CyclotomicMatrix":
        """
        Input:
            order (int): d > 0.
            index (int): k; (k, d) is reduced by their gcd before entries are reduced.
            rows: Entries as rationals or Polys in z, meaning polynomials in ζ_d.
        """
        _square(rows)
        k = index % order
        g = math.gcd(k, order)
        d, k_reduced = order // g, k // g
        # ζ_d^k = ζ_{d/g}^{k/g}; the evaluation point is unchanged, only the field shrinks
        field = CyclotomicField(d, k_reduced)
        entries = tuple(tuple(field.reduce(_as_poly(x)) for x in row) for row in rows)
        return cls(d, k_reduced, entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def field(self) -> "CyclotomicField":
        return CyclotomicField(self.order, self.index)


def _as_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value.set_domain("QQ") if not value.domain.is_QQ else value
    value = Fraction(value)
    return Poly(sympy.Rational(value.numerator, value.denominator), Z, domain="QQ")


class CyclotomicField:
    """Arithmetic in Q(ζ_d) with the involution ζ ↦ ζ^{d−1} and signs at the embedding ζ ↦ e^{2πik/d}."""

    def __init__(self, order: int, index: int, settings: Optional[Settings] = None):
        self.order = order
        self.index = index
        self.modulus = Poly(cyclotomic_poly(order, Z), Z, domain="QQ")
        self.bar_map = Poly(Z ** (order - 1), Z, domain="QQ")
        self.settings = settings or load_settings()

    def reduce(self, x: Poly) -> Poly:
        return x.rem(self.modulus)

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
        return x.compose(self.bar_map).rem(self.modulus)

    def magnitude(self, x):
        return 0

    def sign(self, x) -> int:
        """Sign of a nonzero real element, by interval evaluation with doubling precision."""
        terms = [(monom[0], sympy_to_fraction(c)) for monom, c in x.terms()]
        bits = self.settings.precision_start_bits
        while bits <= self.settings.precision_ceiling_bits:
            iv = interval_context(bits)
            angle = 2 * iv.pi * self.index / self.order
            value = iv.mpf(0)
            for j, c in terms:
                value += iv_rational(iv, c) * iv.cos(angle * j)
            if (value > 0) is True:
                return 1
            if (value < 0) is True:
                return -1
            bits *= 2
            log_precision_escalation(bits, f"cyclotomic pivot d={self.order}")
        raise PrecisionCeilingError(
            f"sign undetermined at {self.settings.precision_ceiling_bits} bits (d={self.order}, k={self.index})")


def signature_cyclotomic(M: CyclotomicMatrix, settings: Optional[Settings] = None) -> Tuple[int, int]:
    """
    Signature and rank of a matrix over Q(ζ_d), hermitian under ζ ↦ ζ⁻¹.

    Input:
        M (CyclotomicMatrix): Entries reduced modulo Φ_d.
        settings (Settings): Precision start and ceiling for pivot signs.

    Output:
        (signature, rank) at the embedding ζ ↦ e^{2πik/d}.
    """
    field = CyclotomicField(M.order, M.index, settings)
    n = M.dimension
    for i in range(n):
        for j in range(i, n):
            if M.entries[i][j] != field.conj(M.entries[j][i]):
                raise NotHermitianError(f"matrix is not hermitian under ζ ↦ ζ⁻¹ at ({i + 1},{j + 1})")
    return symmetric_signature([list(row) for row in M.entries], field)
