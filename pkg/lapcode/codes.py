import itertools
import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from sympy import integer_log, isprime

from config import Config
from .cache import WriteOnceCache
from .errors import MatrixError, NotReflexiveError, ResourceGuardError, check_guard
from .exactmat import (
    IntMatrix, image_basis_mod, kernel_basis_mod, mixed_radix_chunks, rank_mod_prime,
    span_size, standard_form_prime,
)
from .simplex import LaplacianSimplex, dual_lifted_matrix, is_reflexive_cofactor, parallelepiped_points

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]

_INT64_SAFE = 1 << 62
RATE_DIGITS = 40


class SelfRelation(Enum):
    SELF_ORTHOGONAL = "self_orthogonal"
    CONTAINS_DUAL = "contains_dual"
    SELF_DUAL = "self_dual"
    NONE = "none"


class MdsVerdict(Enum):
    MDS = "mds"
    NOT_MDS = "not_mds"
    NOT_APPLICABLE = "not_applicable"

    def __bool__(self):
        return self is MdsVerdict.MDS


@dataclass(eq=False)
class ModularCode:
    """Linear code over Z_modulus spanned by `generators`.

    `dual_generators`, when known, span the dual code and serve as parity
    checks for membership; otherwise they are derived from the generators.
    """

    length: int
    modulus: int
    generators: tuple[Vector, ...]
    dual_generators: tuple[Vector, ...] | None = None
    basis: tuple[tuple[Vector, int], ...] = field(init=False)
    _cache: WriteOnceCache = field(init=False, repr=False)

    def __post_init__(self):
        if self.modulus < 2:
            raise MatrixError(f"modulus must be at least 2, got {self.modulus}")
        if any(len(g) != self.length for g in self.generators):
            raise MatrixError(f"every generator must have length {self.length}")
        self.generators = tuple(tuple(v % self.modulus for v in g) for g in self.generators)
        if self.dual_generators is not None:
            self.dual_generators = tuple(
                tuple(v % self.modulus for v in h) for h in self.dual_generators
            )
        nonzero = [g for g in self.generators if any(g)]
        self.basis = tuple(image_basis_mod(IntMatrix.from_rows(nonzero), self.modulus)) if nonzero else ()
        self._cache = WriteOnceCache()

    @property
    def cardinality(self) -> int:
        return span_size(self.basis)

    def parity_rows(self) -> tuple[Vector, ...]:
        """Generators of the dual code."""
        if self.dual_generators is not None:
            return self.dual_generators
        return self._cache.get_or_compute("parity_rows", self._derive_parity_rows)

    def _derive_parity_rows(self) -> tuple[Vector, ...]:
        basis = [vector for vector, _ in self.basis]
        if not basis:
            return tuple(tuple(int(i == j) for j in range(self.length)) for i in range(self.length))
        transposed = IntMatrix.from_rows(basis).transpose()
        return tuple(vector for vector, _ in kernel_basis_mod(transposed, self.modulus))

    def contains(self, word: Sequence[int]) -> bool:
        m = self.modulus
        return all(sum(x * h for x, h in zip(word, row)) % m == 0 for row in self.parity_rows())

    def __eq__(self, other):
        if not isinstance(other, ModularCode):
            return NotImplemented
        return (
            self.length == other.length
            and self.modulus == other.modulus
            and self.cardinality == other.cardinality
            and all(self.contains(g) for g in other.generators)
        )

    __hash__ = None

    def word_chunks(self) -> Iterator[np.ndarray]:
        """Every codeword exactly once, as rows of numpy blocks."""
        m, n = self.modulus, self.length
        if not self.basis:
            yield np.zeros((1, n), dtype=np.int64)
            return
        orders = [order for _, order in self.basis]
        exact = len(self.basis) * m * m < _INT64_SAFE
        dtype = np.int64 if exact else object
        vectors = np.array([vector for vector, _ in self.basis], dtype=dtype)
        for digits in mixed_radix_chunks(orders):
            yield (digits.astype(dtype) @ vectors) % m

    def codewords(self) -> list[Vector]:
        check_guard("codeword enumeration", self.cardinality, Config.GUARD_LIMIT)

        def enumerate_words():
            words = [tuple(int(v) for v in row) for chunk in self.word_chunks() for row in chunk]
            return sorted(words)

        if self.cardinality <= Config.CACHE_CODEWORDS:
            return self._cache.get_or_compute("codewords", enumerate_words)
        return enumerate_words()


@dataclass(frozen=True)
class ColumnDependence:
    size: int
    columns: tuple[int, ...]


@dataclass(frozen=True)
class DualityReport:
    holds: bool
    expected_size: int
    dual_lambda_size: int
    cardinality_product: int
    missing: tuple[tuple[Fraction, ...], ...] = ()
    extra: tuple[tuple[Fraction, ...], ...] = ()

    def __bool__(self):
        return self.holds

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "expected_size": self.expected_size,
            "dual_lambda_size": self.dual_lambda_size,
            "cardinality_product": self.cardinality_product,
            "missing": len(self.missing),
            "extra": len(self.extra),
        }


@dataclass(frozen=True)
class PrimeDimensionReport:
    prime: int
    dimension: int
    tau: int
    holds: bool


def code_from_simplex(s: LaplacianSimplex) -> ModularCode:
    """C(P_G) = ker [L(i)|1] over Z_n; its dual is spanned by the columns."""
    certificate = is_reflexive_cofactor(s)
    if not certificate:
        raise NotReflexiveError(
            f"{s.source.label} is not reflexive, so it carries no code over Z_{s.n}"
        )
    lifted = s.lifted_matrix
    generators = tuple(vector for vector, _ in kernel_basis_mod(lifted, s.n))
    columns = tuple(lifted.column(j) for j in range(lifted.cols))
    code = ModularCode(s.n, s.n, generators, dual_generators=columns)
    if code.cardinality != s.volume:
        raise RuntimeError(f"|C| = {code.cardinality} differs from n*tau = {s.volume}")
    return code


def dual_code(c: ModularCode) -> ModularCode:
    dual = ModularCode(c.length, c.modulus, c.parity_rows())
    if c.cardinality * dual.cardinality != c.modulus ** c.length:
        raise RuntimeError(
            f"|C|·|C^⊥| = {c.cardinality * dual.cardinality} differs from {c.modulus}^{c.length}"
        )
    return dual


def log_cardinality(c: ModularCode) -> int | None:
    """log_m |C| when |C| is an exact power of m."""
    k, exact = integer_log(c.cardinality, c.modulus)
    return int(k) if exact else None


def _weights(c: ModularCode) -> Iterator[np.ndarray]:
    check_guard("codeword enumeration", c.cardinality, Config.GUARD_LIMIT)
    for chunk in c.word_chunks():
        yield np.count_nonzero(chunk != 0, axis=1)


def _exhaustive_distance(c: ModularCode) -> int:
    best = c.length + 1
    for weights in _weights(c):
        nonzero = weights[weights > 0]
        if nonzero.size:
            best = min(best, int(nonzero.min()))
    return best


def parity_check_columns_dependent(h: IntMatrix, p: int) -> ColumnDependence | None:
    """Smallest set of linearly dependent columns of h over Z_p (1-based indices)."""
    if not isprime(p):
        raise MatrixError(f"{p} is not prime")
    columns = [h.column(j) for j in range(h.cols)]
    limit = Config.GUARD_LIMIT
    examined = 0
    for size in range(1, min(h.rows + 1, h.cols) + 1):
        examined += math.comb(h.cols, size)
        if examined > limit:
            raise ResourceGuardError("column subsets", examined, limit)
        for subset in itertools.combinations(range(h.cols), size):
            if rank_mod_prime([columns[j] for j in subset], p) < size:
                return ColumnDependence(size, tuple(j + 1 for j in subset))
    return None


def _column_distance(c: ModularCode) -> int:
    form = standard_form_prime([vector for vector, _ in c.basis], c.modulus)
    dependence = parity_check_columns_dependent(form.parity_check, c.modulus)
    return dependence.size if dependence else c.length + 1


def minimum_distance(c: ModularCode, method: str = "auto") -> int:
    """Smallest Hamming weight of a nonzero codeword.

    "exhaustive" streams every codeword; "columns" uses the smallest
    dependent column set of a parity-check matrix and needs a prime modulus.
    """
    if c.cardinality == 1:
        raise MatrixError("the zero code has no minimum distance")
    if method == "auto":
        if c.cardinality <= Config.GUARD_LIMIT:
            method = "exhaustive"
        elif isprime(c.modulus):
            method = "columns"
        else:
            raise ResourceGuardError("codeword enumeration", c.cardinality, Config.GUARD_LIMIT)
    if method == "exhaustive":
        return c._cache.get_or_compute("distance", lambda: _exhaustive_distance(c))
    if method == "columns":
        return c._cache.get_or_compute("distance_columns", lambda: _column_distance(c))
    raise ValueError(f"unknown distance method {method!r}")


def is_mds(c: ModularCode, distance: int | None = None) -> MdsVerdict:
    k = log_cardinality(c)
    if k is None:
        return MdsVerdict.NOT_APPLICABLE
    distance = minimum_distance(c) if distance is None else distance
    return MdsVerdict.MDS if distance == c.length - k + 1 else MdsVerdict.NOT_MDS


def rate(c: ModularCode) -> Fraction | Decimal:
    k = log_cardinality(c)
    if k is not None:
        return Fraction(k, c.length)
    with localcontext() as context:
        context.prec = RATE_DIGITS
        return Decimal(c.cardinality).ln() / Decimal(c.modulus).ln() / c.length


def is_cyclic(c: ModularCode) -> bool:
    return all(c.contains(g[-1:] + g[:-1]) for g in c.generators)


def self_relation(c: ModularCode) -> SelfRelation:
    m = c.modulus
    orthogonal = all(
        sum(x * y for x, y in zip(g, h)) % m == 0 for g in c.generators for h in c.generators
    )
    contains_dual = all(c.contains(h) for h in c.parity_rows())
    if orthogonal and contains_dual:
        return SelfRelation.SELF_DUAL
    if orthogonal:
        return SelfRelation.SELF_ORTHOGONAL
    if contains_dual:
        return SelfRelation.CONTAINS_DUAL
    return SelfRelation.NONE


def weight_distribution(c: ModularCode) -> list[int]:
    def count():
        totals = np.zeros(c.length + 1, dtype=np.int64)
        for weights in _weights(c):
            totals += np.bincount(weights, minlength=c.length + 1)
        return [int(v) for v in totals]

    return c._cache.get_or_compute("weights", count)


def verify_code_duality(s: LaplacianSimplex) -> DualityReport:
    """Compare Λ of the dual simplex, scanned geometrically, with C^⊥/n."""
    code = code_from_simplex(s)
    n = s.n
    expected_size = n ** (n - 1) // s.tau
    check_guard("dual Λ enumeration", expected_size, Config.dual_limit())
    dual = dual_code(code)
    geometric = {e.as_fractions() for e in parallelepiped_points(dual_lifted_matrix(s), method="auto")}
    algebraic = {tuple(Fraction(x, n) for x in word) for word in dual.codewords()}
    missing = tuple(sorted(algebraic - geometric))
    extra = tuple(sorted(geometric - algebraic))
    product = code.cardinality * dual.cardinality
    holds = not missing and not extra and len(geometric) == expected_size and product == n ** n
    if not holds:
        logger.error(
            f"duality check failed for {s.source.label}: {len(missing)} missing, {len(extra)} extra"
        )
    return DualityReport(holds, expected_size, len(geometric), product, missing, extra)


def prime_dimension_report(s: LaplacianSimplex) -> PrimeDimensionReport:
    p = s.n
    if not isprime(p):
        raise MatrixError(f"vertex count {p} is not prime")
    code = code_from_simplex(s)
    k = log_cardinality(code)
    holds = k is not None and s.tau == p ** (k - 1)
    return PrimeDimensionReport(p, k if k is not None else -1, s.tau, holds)


def permute_word(word: Sequence[int], sigma: Sequence[int]) -> Vector:
    """Coordinate v of `word` moves to position sigma[v-1]."""
    image = [0] * len(word)
    for v, x in enumerate(word, start=1):
        image[sigma[v - 1] - 1] = x
    return tuple(image)


def codes_permutation_equivalent(c: ModularCode, c2: ModularCode, sigma: Sequence[int]) -> bool:
    if (c.length, c.modulus, c.cardinality) != (c2.length, c2.modulus, c2.cardinality):
        return False
    return all(c2.contains(permute_word(g, sigma)) for g in c.generators)
