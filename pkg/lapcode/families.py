"""Closed-form descriptions of the named graph families.

Each Λ formula here is built directly from its closed form so that it can be
compared against the kernel computation in `simplex`.
"""
import itertools
import logging
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

from sympy import isprime

from config import Config
from .codes import code_from_simplex, log_cardinality, minimum_distance, rate
from .errors import InvalidGraphError, MatrixError, NotReflexiveError
from .exactmat import IntMatrix, determinant
from .graphs import (
    Graph, bridge, complete, cycle, laplacian, path, star, star_whisker_complete,
)
from .simplex import (
    HStarVector, LambdaElement, LambdaSet, build_simplex, dual_vertex_matrix,
    is_reflexive_cofactor, lambda_set,
)

logger = logging.getLogger(__name__)

FAMILIES = ("trees", "cycles-odd", "complete", "wstar-prime")

DEFAULT_INDICES = {
    "trees": (3, 4, 5, 6, 7, 8, 9),
    "cycles-odd": (3, 5, 7, 9, 11),
    "complete": (3, 4, 5, 6, 7, 8),
    "wstar-prime": (7, 11, 13),
}


def _as_lambda_set(numerators, denominator: int) -> LambdaSet:
    return LambdaSet(tuple(LambdaElement(x, denominator) for x in sorted(set(numerators))), denominator)


def lambda_odd_cycle(n: int) -> LambdaSet:
    """[α·1 + β·(0, 1, ..., n-1)] mod n over denominator n."""
    if n < 3 or n % 2 == 0:
        raise InvalidGraphError(f"odd cycle needs odd n >= 3, got {n}")
    return _as_lambda_set(
        (tuple((alpha + beta * j) % n for j in range(n)) for alpha in range(n) for beta in range(n)),
        n,
    )


def lambda_complete(n: int) -> LambdaSet:
    if n < 3:
        raise InvalidGraphError(f"complete graph family needs n >= 3, got {n}")
    return _as_lambda_set(
        (head + (-sum(head) % n,) for head in itertools.product(range(n), repeat=n - 1)), n
    )


def lambda_star_whisker(n: int, k: int = 1) -> LambdaSet:
    """Λ(W*_k(K_n)) from the free coordinates x_1..x_n, modulo p = (k+1)n + 1.

    Whisker layer m carries x + m(nx - S) with S = Σx, and the hub carries
    -(k+1)S, so the free head determines the whole element.
    """
    if n < 3:
        raise InvalidGraphError(f"W*(K_n) needs n >= 3, got {n}")
    if k < 1:
        raise InvalidGraphError(f"whisker length must be positive, got {k}")
    p = (k + 1) * n + 1

    def extend(free):
        total = sum(free)
        layers = tuple(
            (x + m * (n * x - total)) % p for m in range(1, k + 1) for x in free
        )
        return free + layers + ((-(k + 1) * total) % p,)

    return _as_lambda_set((extend(free) for free in itertools.product(range(p), repeat=n)), p)


def _reflexive_lambda(g: Graph) -> LambdaSet:
    s = build_simplex(g)
    if not is_reflexive_cofactor(s):
        raise NotReflexiveError(f"{g.label} is not reflexive")
    return lambda_set(s)


def lambda_whisker(g: Graph, k: int = 1) -> LambdaSet:
    """(λ, ..., λ) + i/((k+1)n)·1 for λ in Λ(P_g) and i = 0..k."""
    if k < 1:
        raise InvalidGraphError(f"whisker length must be positive, got {k}")
    base = _reflexive_lambda(g)
    denominator = (k + 1) * g.n
    numerators = (
        tuple((k + 1) * x + i for x in element.numerators) * (k + 1)
        for element in base
        for i in range(k + 1)
    )
    return _as_lambda_set(numerators, denominator)


def lambda_bridge(gs: Sequence[Graph]) -> LambdaSet:
    """(λ_1, ..., λ_k) + i/(kn)·1 with (λ_l)_n = (λ_(l+1))_1."""
    if len(gs) < 2:
        raise InvalidGraphError("bridge needs at least two graphs")
    sizes = {g.n for g in gs}
    if len(sizes) != 1:
        raise InvalidGraphError(f"bridge formula needs equal vertex counts, got {[g.n for g in gs]}")
    n = sizes.pop()
    k = len(gs)
    parts = [_reflexive_lambda(g) for g in gs]

    by_first = []
    for part in parts:
        index = {}
        for element in part:
            index.setdefault(element.numerators[0], []).append(element.numerators)
        by_first.append(index)

    chains = [(e.numerators,) for e in parts[0]]
    for position in range(1, k):
        chains = [
            chain + (x,)
            for chain in chains
            for x in by_first[position].get(chain[-1][-1], [])
        ]

    denominator = k * n
    numerators = (
        tuple(k * v + i for x in chain for v in x)
        for chain in chains
        for i in range(k)
    )
    return _as_lambda_set(numerators, denominator)


def wstar_mds_matrices(n: int) -> tuple[IntMatrix, IntMatrix]:
    """Generator [I_n | B] and parity check [nI_n + J_n ; 2·1 | I_(n+1)] over Z_(2n+1)."""
    p = 2 * n + 1
    if n < 3 or not isprime(p):
        raise MatrixError(f"2n + 1 = {p} must be prime with n >= 3")
    generator = []
    for i in range(n):
        identity = [int(i == j) for j in range(n)]
        whiskers = [n if i == j else 2 * n for j in range(n)]
        generator.append(identity + whiskers + [2 * n - 1])
    parity = []
    for r in range(n):
        parity.append([n + 1 if r == j else 1 for j in range(n)] + [int(r == j) for j in range(n + 1)])
    parity.append([2] * n + [int(j == n) for j in range(n + 1)])
    return IntMatrix.from_rows(generator), IntMatrix.from_rows(parity)


def wstar_dual_matrix(n: int) -> IntMatrix:
    """Dual vertex matrix of P_{W*(K_n)} in block form."""
    if n < 3:
        raise InvalidGraphError(f"W*(K_n) needs n >= 3, got {n}")
    rows = []
    for i in range(n):
        rows.append([-3 if i == j else -1 for j in range(n)] + [-int(i == j) for j in range(n)])
    for i in range(n):
        rows.append([0 if i == j else 1 for j in range(n)] + [-n if i == j else 1 for j in range(n)])
    rows.append([3] * n + [2] * n)
    return IntMatrix.from_rows(rows)


def tau_wstar_eigen(n: int, k: int = 1) -> int:
    """τ(W*_k(K_n)) as det((k+1)·L_{K_n} + I_n)."""
    lap = laplacian(complete(n))
    shifted = [
        [(k + 1) * lap[i, j] + int(i == j) for j in range(n)] for i in range(n)
    ]
    return determinant(IntMatrix.from_rows(shifted))


@dataclass(frozen=True)
class DualEquivalence:
    n: int
    transform: IntMatrix
    dual: IntMatrix
    image: IntMatrix
    star_tree: IntMatrix

    @property
    def holds(self) -> bool:
        return self.image == self.star_tree


def complete_dual_equivalence(n: int) -> DualEquivalence:
    """V(K_n)·U against the star tree centred at n, with U = -I_(n-1)."""
    if n < 3:
        raise InvalidGraphError(f"complete graph family needs n >= 3, got {n}")
    transform = IntMatrix.from_rows([[-int(i == j) for j in range(n - 1)] for i in range(n - 1)])
    dual = dual_vertex_matrix(build_simplex(complete(n)))
    star_tree = laplacian(star(n)).delete_column(n - 1)
    return DualEquivalence(n, transform, dual, dual @ transform, star_tree)


def whisker_hstar(h: HStarVector | Sequence[int], k: int = 1) -> HStarVector:
    """h*(z^(k+1))·(1 + z + ... + z^k)."""
    values = h.coefficients if isinstance(h, HStarVector) else tuple(h)
    coefficients = [0] * (len(values) * (k + 1))
    for i, value in enumerate(values):
        for j in range(k + 1):
            coefficients[(k + 1) * i + j] += value
    return HStarVector(tuple(coefficients))


@dataclass(frozen=True)
class RateRow:
    n: int
    vertices: int
    reflexive: bool
    cardinality: int | None
    formula: int
    rate: Fraction | Decimal | None

    @property
    def formula_holds(self) -> bool:
        return self.cardinality == self.formula

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "vertices": self.vertices,
            "reflexive": self.reflexive,
            "cardinality": self.cardinality,
            "formula": self.formula,
            "formula_holds": self.formula_holds,
            "rate": self.rate,
        }


def rate_family_graph(a: int, b: int, n: int) -> Graph:
    parts = [cycle(n)] * (b - a) + [complete(n)] * a
    return parts[0] if len(parts) == 1 else bridge(parts)


def rate_family_scan(a: int, b: int, ns: Sequence[int]) -> list[RateRow]:
    """B(C_n x (b-a), K_n x a): |C| = b·n^(a(n-3)+b+1), rate → a/b."""
    if not 0 <= a <= b or b < 1:
        raise InvalidGraphError(f"need 0 <= a <= b and b >= 1, got a={a}, b={b}")
    rows = []
    for n in ns:
        if n < 3 or n % 2 == 0:
            raise InvalidGraphError(f"rate family needs odd n >= 3, got {n}")
        s = build_simplex(rate_family_graph(a, b, n))
        reflexive = bool(is_reflexive_cofactor(s))
        formula = b * n ** (a * (n - 3) + b + 1)
        if not reflexive:
            logger.error(f"rate family ({a},{b}) n={n} is not reflexive; no code over Z_{s.n}")
            rows.append(RateRow(n, s.n, False, None, formula, None))
            continue
        code = code_from_simplex(s)
        row = RateRow(n, s.n, True, code.cardinality, formula, rate(code))
        logger.info(f"rate family ({a},{b}) n={n}: |C|={row.cardinality}, rate {row.rate}")
        rows.append(row)
    return rows


@dataclass(frozen=True)
class AsymptoticRow:
    index: int
    vertices: int
    cardinality: int
    dimension: int | None
    rate: Fraction | Decimal
    distance: int
    distance_source: str

    @property
    def relative_distance(self) -> Fraction:
        return Fraction(self.distance, self.vertices)

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "vertices": self.vertices,
            "cardinality": self.cardinality,
            "dimension": self.dimension,
            "rate": self.rate,
            "distance": self.distance,
            "relative_distance": self.relative_distance,
            "distance_source": self.distance_source,
        }


def _family_member(family: str, index: int) -> tuple[Graph, int]:
    """Graph of the family at `index` and its closed-form code distance."""
    if family == "trees":
        return path(index), index
    if family == "cycles-odd":
        if index % 2 == 0:
            raise InvalidGraphError(f"cycles-odd needs odd indices, got {index}")
        return cycle(index), index - 1
    if family == "complete":
        return complete(index), 2
    if family == "wstar-prime":
        if not isprime(index) or index < 7:
            raise InvalidGraphError(f"wstar-prime needs a prime index >= 7, got {index}")
        n = (index - 1) // 2
        return star_whisker_complete(n), n + 2
    raise InvalidGraphError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def asymptotic_report(family: str, indices: Sequence[int] | None = None) -> list[AsymptoticRow]:
    """Rate and relative distance along a family.

    Distances are enumerated while the code fits under the guard; beyond that
    the closed-form value is reported and marked as such.
    """
    if family not in FAMILIES:
        raise InvalidGraphError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    indices = DEFAULT_INDICES[family] if indices is None else indices
    rows = []
    for index in indices:
        g, closed_form = _family_member(family, index)
        code = code_from_simplex(build_simplex(g))
        if code.cardinality <= Config.GUARD_LIMIT:
            distance = minimum_distance(code, "exhaustive")
            source = "exhaustive"
            if distance != closed_form:
                logger.error(f"{family} index {index}: distance {distance}, closed form {closed_form}")
        else:
            distance, source = closed_form, "closed-form"
        rows.append(
            AsymptoticRow(index, g.n, code.cardinality, log_cardinality(code), rate(code), distance, source)
        )
    return rows
