import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from sympy import Poly, Rational, factorial
from sympy.abc import t as _t

from config import Config
from .errors import MatrixError, NotReflexiveError, ResourceGuardError, check_guard
from .exactmat import IntMatrix, adjugate, cofactor_matrix, determinant, kernel_mod, mixed_radix_chunks
from .graphs import Graph, laplacian, spanning_tree_count

logger = logging.getLogger(__name__)

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class LaplacianSimplex:
    source: Graph
    deleted_column: int
    vertex_matrix: IntMatrix
    tau: int

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def dimension(self) -> int:
        return self.n - 1

    @property
    def volume(self) -> int:
        return self.n * self.tau

    @property
    def lifted_matrix(self) -> IntMatrix:
        """[L(i) | 1]: the cone generators (v_i, 1) as rows."""
        return self.vertex_matrix.append_column([1] * self.n)


@dataclass(frozen=True, order=True)
class LambdaElement:
    numerators: tuple[int, ...]
    denominator: int

    @property
    def height(self) -> int:
        return sum(self.numerators) // self.denominator

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.numerators, start=1) if x)

    def inverse(self) -> "LambdaElement":
        return LambdaElement(tuple(-x % self.denominator for x in self.numerators), self.denominator)

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.denominator) for x in self.numerators)

    def point(self, lifted: IntMatrix) -> tuple[int, ...]:
        """Lattice point λ·[L(i)|1] of the fundamental parallelepiped."""
        raw = lifted.left_multiply(self.numerators)
        if any(v % self.denominator for v in raw):
            raise MatrixError(f"{self.numerators}/{self.denominator} does not give a lattice point")
        return tuple(v // self.denominator for v in raw)


@dataclass(frozen=True, eq=False)
class LambdaSet:
    elements: tuple[LambdaElement, ...]
    denominator: int

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[LambdaElement]:
        return iter(self.elements)

    def __getitem__(self, index):
        return self.elements[index]

    def values(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(e.as_fractions() for e in self.elements)

    def __eq__(self, other):
        if not isinstance(other, LambdaSet):
            return NotImplemented
        return self.values() == other.values()

    def __hash__(self):
        return hash(self.values())

    def numerator_set(self) -> set[tuple[int, ...]]:
        return {e.numerators for e in self.elements}


@dataclass(frozen=True)
class HStarVector:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("h*-vector needs at least one coefficient")
        if any(h < 0 for h in self.coefficients):
            raise ValueError(f"h*-vector has a negative entry: {self.coefficients}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def volume(self) -> int:
        return sum(self.coefficients)

    @property
    def is_symmetric(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def __getitem__(self, index):
        return self.coefficients[index]

    def __len__(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class ReflexivityCertificate:
    reflexive: bool
    # first (row, col, cofactor) not divisible by tau, 1-based
    offending: tuple[int, int, int] | None = None

    def __bool__(self):
        return self.reflexive


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def size(self) -> int:
        return sum(multiplicity for _, multiplicity in self.terms)


def build_simplex(g: Graph, i: int | None = None) -> LaplacianSimplex:
    i = g.n if i is None else i
    if not 1 <= i <= g.n:
        raise MatrixError(f"column index {i} outside 1..{g.n}")
    vertex_matrix = laplacian(g).delete_column(i - 1)
    tau = spanning_tree_count(g)
    s = LaplacianSimplex(g, i, vertex_matrix, tau)
    det = determinant(s.lifted_matrix)
    if abs(det) != s.volume:
        raise RuntimeError(f"|det[L({i})|1]| = {abs(det)} differs from n*tau = {s.volume}")
    return s


@lru_cache(maxsize=64)
def _cofactors(s: LaplacianSimplex) -> IntMatrix:
    return cofactor_matrix(s.lifted_matrix)


def is_reflexive_cofactor(s: LaplacianSimplex) -> ReflexivityCertificate:
    c = _cofactors(s)
    for i in range(c.rows):
        for j in range(c.cols):
            if c[i, j] % s.tau:
                return ReflexivityCertificate(False, (i + 1, j + 1, c[i, j]))
    return ReflexivityCertificate(True)


def is_reflexive_hibi(h: HStarVector) -> bool:
    return h.is_symmetric


def is_unimodal(h: HStarVector | Sequence[int]) -> bool:
    values = h.coefficients if isinstance(h, HStarVector) else tuple(h)
    i = 1
    while i < len(values) and values[i - 1] <= values[i]:
        i += 1
    while i < len(values) and values[i - 1] >= values[i]:
        i += 1
    return i >= len(values)


@lru_cache(maxsize=32)
def lambda_set(s: LaplacianSimplex) -> LambdaSet:
    check_guard("Λ enumeration", s.volume, Config.GUARD_LIMIT)
    denominator = s.n if is_reflexive_cofactor(s) else s.volume
    numerators = kernel_mod(s.lifted_matrix, denominator)
    if len(numerators) != s.volume:
        raise RuntimeError(f"kernel has {len(numerators)} elements, expected n*tau = {s.volume}")
    elements = tuple(LambdaElement(x, denominator) for x in numerators)
    if any(sum(e.numerators) % denominator for e in elements):
        raise RuntimeError("fundamental parallelepiped element with fractional height")
    logger.debug(f"Λ({s.source.label}) has {len(elements)} elements over denominator {denominator}")
    return LambdaSet(elements, denominator)


def parallelepiped_points(lifted: IntMatrix, method: str = "box") -> LambdaSet:
    """Λ of the cone spanned by the rows of `lifted`, found geometrically.

    "box" solves every integer z in the bounding box of the half-open
    parallelepiped exactly against the generators and keeps it iff
    0 <= λ_i < 1. "closure" walks the group generated by the fractional
    parts of the unit vectors e_j, which only costs |det| points. "auto"
    scans the box when it fits under the box limit and walks otherwise.
    """
    if method not in ("box", "closure", "auto"):
        raise ValueError(f"unknown parallelepiped method {method!r}")
    det = determinant(lifted)
    if det == 0:
        raise MatrixError("degenerate cone: generators are linearly dependent")
    denominator = abs(det)
    adj = adjugate(lifted)
    sign = 1 if det > 0 else -1
    adj_rows = [[sign * v for v in adj.row(i)] for i in range(adj.rows)]
    size = lifted.rows
    lows = [sum(min(0, lifted[i, j]) for i in range(size)) for j in range(lifted.cols)]
    highs = [sum(max(0, lifted[i, j]) for i in range(size)) for j in range(lifted.cols)]
    radices = [hi - lo + 1 for lo, hi in zip(lows, highs)]
    box = 1
    for r in radices:
        box *= r

    if method == "closure" or (method == "auto" and box > Config.box_limit()):
        found = _unit_vector_closure(adj_rows, denominator)
    else:
        check_guard("parallelepiped bounding box", box, Config.box_limit())
        found = _box_scan(adj_rows, denominator, lows, radices)
    return LambdaSet(tuple(LambdaElement(x, denominator) for x in sorted(found)), denominator)


def _box_scan(adj_rows, denominator: int, lows: list[int], radices: list[int]) -> list[tuple[int, ...]]:
    reach = max(max(abs(lo), abs(lo + r - 1)) for lo, r in zip(lows, radices))
    widest = max(abs(v) for row in adj_rows for v in row)
    exact = reach * widest * len(adj_rows) < _INT64_SAFE and denominator < _INT64_SAFE
    dtype = np.int64 if exact else object
    solver = np.array(adj_rows, dtype=dtype)
    offset = np.array(lows, dtype=dtype)

    found = []
    scanned = 0
    for digits in mixed_radix_chunks(radices):
        z = digits.astype(dtype) + offset
        x = z @ solver
        inside = np.all((x >= 0) & (x < denominator), axis=1).astype(bool)
        found.extend(tuple(int(v) for v in row) for row in x[inside])
        scanned += len(z)
    logger.debug(f"scanned {scanned} box points, {len(found)} inside the parallelepiped")
    return found


def _unit_vector_closure(adj_rows, denominator: int) -> list[tuple[int, ...]]:
    # Row j of sign·adj is the numerator vector of e_j against the generators.
    check_guard("parallelepiped closure", denominator, Config.GUARD_LIMIT)
    steps = {tuple(v % denominator for v in row) for row in adj_rows}
    steps.discard(tuple(0 for _ in adj_rows))
    origin = tuple(0 for _ in adj_rows)
    seen = {origin}
    frontier = [origin]
    while frontier:
        reached = []
        for x in frontier:
            for step in steps:
                y = tuple((a + b) % denominator for a, b in zip(x, step))
                if y not in seen:
                    seen.add(y)
                    reached.append(y)
        frontier = reached
    if len(seen) != denominator:
        raise RuntimeError(f"unit vectors reach {len(seen)} of {denominator} parallelepiped points")
    logger.debug(f"walked {denominator} parallelepiped points from the unit vectors")
    return list(seen)


def lambda_set_bruteforce_oracle(s: LaplacianSimplex) -> LambdaSet:
    check_guard("brute-force Λ oracle", s.volume, Config.oracle_limit())
    return parallelepiped_points(s.lifted_matrix)


def hstar(s: LaplacianSimplex) -> HStarVector:
    counts = Counter(e.height for e in lambda_set(s))
    h = HStarVector(tuple(counts.get(i, 0) for i in range(s.n)))
    if h[0] != 1 or min(h.coefficients) < 1 or h.volume != s.volume:
        raise RuntimeError(f"h* of {s.source.label} breaks its invariants: {h.coefficients}")
    return h


def dual_vertex_matrix(s: LaplacianSimplex) -> IntMatrix:
    """V = -C(n)/tau, the vertices of the dual simplex as rows.

    The last cofactor column is (-1)^(n+i)·tau for every row, so dividing by
    it keeps the sign right whichever column i was deleted.
    """
    certificate = is_reflexive_cofactor(s)
    if not certificate:
        row, col, value = certificate.offending
        raise NotReflexiveError(
            f"{s.source.label} is not reflexive: cofactor ({row},{col}) = {value} "
            f"is not divisible by tau = {s.tau}"
        )
    c = _cofactors(s)
    last = c.cols - 1
    return IntMatrix.from_rows(
        [[-c[i, j] // c[i, last] for j in range(last)] for i in range(c.rows)]
    )


def hyperplane_check(s: LaplacianSimplex) -> bool:
    """<v_k, V_j> = 1 for k != j and 1 - n for k = j."""
    v = dual_vertex_matrix(s)
    product = s.vertex_matrix @ v.transpose()
    return all(
        product[k, j] == (1 - s.n if k == j else 1)
        for k in range(s.n)
        for j in range(s.n)
    )


def dual_volume(s: LaplacianSimplex) -> Fraction:
    """|det[V | 1]| from the cofactor matrix: |det C| / tau^n."""
    return Fraction(abs(determinant(_cofactors(s))), s.tau ** s.n)


def dual_lifted_matrix(s: LaplacianSimplex) -> IntMatrix:
    return dual_vertex_matrix(s).append_column([1] * s.n)


def interior_point_count(h: HStarVector) -> int:
    return h.coefficients[-1]


def lattice_point_count(h: HStarVector) -> int:
    """|P ∩ Z^d| = h*_1 + d + 1."""
    h1 = h.coefficients[1] if len(h) > 1 else 0
    return h1 + h.degree + 1


def ehrhart_polynomial(h: HStarVector, d: int | None = None) -> list[Fraction]:
    """Coefficients of L_P(t) = Σ h*_i binom(t + d - i, d), constant term first."""
    d = h.degree if d is None else d
    polynomial = Poly(0, _t, domain="QQ")
    for i, h_i in enumerate(h.coefficients):
        if h_i:
            polynomial += h_i * _binomial_polynomial(d, d - i)
    coefficients = [Fraction(int(c.p), int(c.q)) for c in reversed(polynomial.all_coeffs())]
    return coefficients or [Fraction(0)]


@lru_cache(maxsize=None)
def _binomial_polynomial(d: int, k: int) -> Poly:
    """binom(t + k, d) as a polynomial in t."""
    polynomial = Poly(Rational(1, factorial(d)), _t, domain="QQ")
    for i in range(d):
        polynomial *= Poly(_t + k - i, _t)
    return polynomial


def ehrhart_count(h: HStarVector, t: int, d: int | None = None) -> Fraction:
    return sum(
        (c * t ** power for power, c in enumerate(ehrhart_polynomial(h, d))), Fraction(0)
    )


def height_one_decomposition_witness(
    s: LaplacianSimplex, target: LambdaElement | Sequence[int]
) -> Decomposition | None:
    """Write target as a sum of height-1 points of the cone over P, or return None.

    The candidates are the height-1 points of the fundamental parallelepiped
    and the generators (v_i, 1); a point at height t needs exactly t of them.
    """
    lifted = s.lifted_matrix
    point = target.point(lifted) if isinstance(target, LambdaElement) else tuple(target)
    if len(point) != s.n:
        raise MatrixError(f"target must have {s.n} coordinates, got {len(point)}")
    height = point[-1]
    if height <= 0:
        return Decomposition(()) if not any(point) else None

    candidates = {tuple(lifted.row(i)) for i in range(s.n)}
    candidates.update(e.point(lifted) for e in lambda_set(s) if e.height == 1)
    candidates = sorted(candidates)
    limit = Config.witness_limit()
    visited = 0
    chosen: list[tuple[int, ...]] = []

    def search(start: int, remaining: tuple[int, ...], count: int) -> bool:
        nonlocal visited
        visited += 1
        if visited > limit:
            raise ResourceGuardError("decomposition search", visited, limit)
        if count == 0:
            return not any(remaining)
        for k in range(start, len(candidates)):
            candidate = candidates[k]
            chosen.append(candidate)
            if search(k, tuple(a - b for a, b in zip(remaining, candidate)), count - 1):
                return True
            chosen.pop()
        return False

    if not search(0, point, height):
        logger.info(f"no height-one decomposition of {point} over {len(candidates)} candidates")
        return None
    return Decomposition(tuple(sorted(Counter(chosen).items())))
