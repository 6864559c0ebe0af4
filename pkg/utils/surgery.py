import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, factorint
from sympy.polys.matrices import DomainMatrix

from utils.errors import DimensionMismatchError, InputError, SingularSurgeryError, TypeVectorError
from utils.exact_arith import format_rational, sympy_to_fraction

LOGGER = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


def _fractions(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def _check_square(rows: Sequence[Sequence[object]], what: str) -> int:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatchError(f"{what} must be square ({n} rows)")
    return n


def _check_symmetric(rows: Matrix, what: str):
    n = len(rows)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise InputError(f"{what} is not symmetric at ({i + 1},{j + 1})")


def _domain_matrix(rows: Matrix) -> DomainMatrix:
    n = len(rows)
    return DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in rows], (n, len(rows[0]) if n else 0), QQ)


def rational_inverse(rows: Sequence[Sequence[object]]) -> Optional[Matrix]:
    """Exact inverse over Q, or None when the matrix is singular."""
    matrix = _fractions(rows)
    n = _check_square(matrix, "matrix")
    if n == 0:
        return []
    dm = _domain_matrix(matrix)
    if dm.det() == 0:
        return None
    return [[sympy_to_fraction(x) for x in row] for row in dm.inv().to_list()]


def format_matrix(rows: Sequence[Sequence[Fraction]]) -> str:
    return "\n".join(" ".join(format_rational(Fraction(x)) for x in row) for row in rows)


# --- Diagrams ---

@dataclass(frozen=True)
class FramedLinkDiagram:
    """
    Surgery presentation of a 3-manifold by its linking matrix.

    Diagonal entries are the framings, off-diagonal entries the S³ linking numbers of the
    surgery components.
    """
    lk_matrix: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "FramedLinkDiagram":
        _check_square(rows, "surgery linking matrix")
        if any(Fraction(x).denominator != 1 for row in rows for x in row):
            raise InputError("surgery linking matrix must be integral")
        matrix = tuple(tuple(int(x) for x in row) for row in rows)
        _check_symmetric([list(map(Fraction, row)) for row in matrix], "surgery linking matrix")
        return cls(matrix)

    @property
    def m(self) -> int:
        return len(self.lk_matrix)

    def determinant(self) -> int:
        if self.m == 0:
            return 1
        return int(sympy_to_fraction(_domain_matrix(_fractions(self.lk_matrix)).det()))

    def is_rational_homology_sphere(self) -> bool:
        return self.determinant() != 0

    def inverse(self) -> Matrix:
        inverse = rational_inverse(self.lk_matrix)
        if inverse is None:
            raise SingularSurgeryError()
        return inverse


@dataclass(frozen=True)
class CurveClass:
    """A curve in the surgery picture, recorded by its S³ linking numbers with the surgery components."""
    lk_vector: Tuple[int, ...]
    name: str = ""
    framing: Optional[Fraction] = None

    @classmethod
    def of(cls, lk_vector: Sequence[int], name: str = "", framing=None) -> "CurveClass":
        return cls(tuple(int(x) for x in lk_vector), name, None if framing is None else Fraction(framing))


@dataclass(frozen=True)
class TypeVector:
    """Type τ of a link: nonzero integers with gcd 1."""
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        if not entries:
            raise TypeVectorError("type vector must be nonempty")
        if any(x == 0 for x in entries):
            raise TypeVectorError(f"type vector has a zero component: {entries}")
        if math.gcd(*entries) != 1:
            raise TypeVectorError(f"type vector components must be coprime: {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def ones(cls, m: int) -> "TypeVector":
        return cls((1,) * m)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __neg__(self) -> "TypeVector":
        return TypeVector(tuple(-x for x in self.entries))

    def render(self) -> str:
        return "(" + ",".join(str(x) for x in self.entries) + ")"


# --- Linking numbers in the surgered manifold ---

def lk_sigma(D: FramedLinkDiagram, x: CurveClass, y: CurveClass, lk_s3) -> Fraction:
    """
    Linking number of two curves after surgery: lk_S³(a, b) − xᵀA⁻¹y.

    Input:
        D (FramedLinkDiagram): Surgery diagram with nonsingular linking matrix A.
        x, y (CurveClass): Linking vectors of the two curves with the surgery components.
        lk_s3: Linking number of the two curves in S³ (the framing when the curves coincide).

    Output:
        Fraction: Exact linking number in the rational homology sphere.
    """
    if len(x.lk_vector) != D.m or len(y.lk_vector) != D.m:
        raise DimensionMismatchError(
            f"linking vectors of length {len(x.lk_vector)}, {len(y.lk_vector)} for {D.m} surgery components")
    inverse = D.inverse()
    correction = sum((x.lk_vector[i] * inverse[i][j] * y.lk_vector[j] for i in range(D.m) for j in range(D.m)),
                     Fraction(0))
    return Fraction(lk_s3) - correction


def induced_linking_matrix(D: FramedLinkDiagram, curves: Sequence[CurveClass], s3_lk) -> Matrix:
    """
    Linking matrix of a link in the surgered manifold.

    Input:
        D (FramedLinkDiagram): Surgery diagram.
        curves (list[CurveClass]): The link components.
        s3_lk: Symmetric matrix of S³ linking numbers, with the chosen framings on the diagonal.

    Output:
        list[list[Fraction]]: Entry (i, j) is lk_sigma of curves i and j.
    """
    s3 = _fractions(s3_lk)
    k = len(curves)
    if len(s3) != k or any(len(row) != k for row in s3):
        raise DimensionMismatchError(f"S³ linking data must be {k}x{k}")
    _check_symmetric(s3, "S³ linking matrix")
    return [[lk_sigma(D, curves[i], curves[j], s3[i][j]) for j in range(k)] for i in range(k)]


# --- Types and framings ---

def _type_rows(A_sigma, tau: TypeVector) -> List[Fraction]:
    matrix = _fractions(A_sigma)
    if not isinstance(tau, TypeVector):
        tau = TypeVector(tuple(tau))
    if len(matrix) != len(tau) or any(len(row) != len(tau) for row in matrix):
        raise DimensionMismatchError(f"linking matrix of size {len(matrix)} for a type of length {len(tau)}")
    return [sum((matrix[i][j] * tau.entries[j] for j in range(len(tau))), Fraction(0)) / tau.entries[i]
            for i in range(len(tau))]


def admits_type(A_sigma, tau: TypeVector) -> bool:
    """True iff (1/τᵢ)Σⱼ aᵢⱼτⱼ is an integer for every i."""
    return all(value.denominator == 1 for value in _type_rows(A_sigma, tau))


def framing_for_type(A_sigma, tau: TypeVector) -> Optional[List[int]]:
    """
    Diagonal of the unique integer D with (A + D)τ = 0, or None when τ is not admitted.
    """
    values = _type_rows(A_sigma, tau)
    if any(value.denominator != 1 for value in values):
        return None
    return [-int(value) for value in values]


def admitted_types(A_sigma, bound: int) -> List[TypeVector]:
    """All admitted types with entries in [−bound, bound]."""
    m = len(A_sigma)
    found = []

    def extend(prefix):
        if len(prefix) == m:
            if math.gcd(*prefix) == 1:
                tau = TypeVector(tuple(prefix))
                if admits_type(A_sigma, tau):
                    found.append(tau)
            return
        for value in range(-bound, bound + 1):
            if value:
                extend(prefix + [value])

    if m:
        extend([])
    return found


# --- Realization ---

def symmetric_diagonalize(rows) -> Tuple[List[Fraction], Matrix]:
    """
    Congruence diagonalization E·A·Eᵀ = diag(d) of a symmetric rational matrix.

    Pivots are the largest-magnitude diagonal entry (first index on ties). When the remaining
    diagonal vanishes, row and column j are added to i for the first nonzero off-diagonal (i, j).
    """
    S = _fractions(rows)
    n = _check_square(S, "linking matrix")
    _check_symmetric(S, "linking matrix")
    E = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    active = list(range(n))

    def add_row(target, source, factor):
        for j in range(n):
            S[target][j] += factor * S[source][j]
        for i in range(n):
            S[i][target] += factor * S[i][source]
        for j in range(n):
            E[target][j] += factor * E[source][j]

    while active:
        diagonal = [i for i in active if S[i][i] != 0]
        if not diagonal:
            pair = next(((i, j) for i in active for j in active if i < j and S[i][j] != 0), None)
            if pair is None:
                break
            add_row(pair[0], pair[1], Fraction(1))
            diagonal = [pair[0]]
        p = max(diagonal, key=lambda i: abs(S[i][i]))
        active.remove(p)
        for i in active:
            if S[i][p] != 0:
                add_row(i, p, -S[i][p] / S[p][p])
    return [S[i][i] for i in range(n)], E


def _least_square_multiple(a: int) -> int:
    # least s > 0 with a | s²
    s = 1
    for prime, exponent in factorint(abs(a)).items():
        s *= prime ** ((exponent + 1) // 2)
    return s


def realize_linking_matrix(A) -> Tuple[List[List[int]], List[List[int]]]:
    """
    Integer B and nonsingular symmetric integer V with BᵀV⁻¹B = A.

    Input:
        A: Symmetric rational matrix.

    Output:
        (B, V): With A = PᵀDP and r nonzero pivots, B = n·(rows of P at the pivots) and V = n²·D⁻¹
        for the least n making both integral. A = 0 gives B = 0 (one row) and V = (1).
    """
    matrix = _fractions(A)
    m = len(matrix)
    diagonal, E = symmetric_diagonalize(matrix)
    pivots = [i for i, d in enumerate(diagonal) if d != 0]
    if not pivots:
        return [[0] * m], [[1]]
    # P = (Eᵀ)⁻¹
    E_inverse = rational_inverse(E)
    P = [[E_inverse[j][i] for j in range(m)] for i in range(m)]
    n = 1
    for i in pivots:
        for x in P[i]:
            n = math.lcm(n, x.denominator)
        n = math.lcm(n, _least_square_multiple(diagonal[i].numerator))
    B = [[int(n * x) for x in P[i]] for i in pivots]
    V = [[int(n * n / diagonal[i]) if i == j else 0 for j in pivots] for i in pivots]
    LOGGER.debug("realization rank=%d n=%d", len(pivots), n)
    return B, V


def realization_diagram(A) -> Tuple[FramedLinkDiagram, List[CurveClass]]:
    """Surgery on −V with curves whose linking vectors are the columns of B; the induced matrix is A."""
    B, V = realize_linking_matrix(A)
    diagram = FramedLinkDiagram.from_rows([[-x for x in row] for row in V])
    curves = [CurveClass.of([row[j] for row in B], name=f"c{j + 1}") for j in range(len(A))]
    return diagram, curves


def check_realization(A, B, V) -> bool:
    inverse = rational_inverse(V)
    if inverse is None:
        return False
    r, m = len(B), len(A)
    for i in range(m):
        for j in range(m):
            value = sum((B[p][i] * inverse[p][q] * B[q][j] for p in range(r) for q in range(r)), Fraction(0))
            if value != Fraction(A[i][j]):
                return False
    return True
