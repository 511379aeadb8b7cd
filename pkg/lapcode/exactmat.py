import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import galois
import numpy as np
from sympy import isprime

from .errors import MatrixError

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of Python integers, row-major. Indices are 0-based."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise MatrixError(f"matrix must be at least 1x1, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise MatrixError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise MatrixError("matrix must be at least 1x1")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise MatrixError("ragged rows")
        return cls(len(rows), width, tuple(int(v) for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise MatrixError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = [other.column(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[_dot(self.row(i), col) for col in columns] for i in range(self.rows)]
        )

    def left_multiply(self, x: Sequence[int]) -> Vector:
        """Row vector times matrix: x·M."""
        if len(x) != self.rows:
            raise MatrixError(f"vector of length {len(x)} does not match {self.rows} rows")
        return tuple(_dot(x, self.column(j)) for j in range(self.cols))

    def delete_column(self, j: int) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[v for k, v in enumerate(self.row(i)) if k != j] for i in range(self.rows)]
        )

    def append_column(self, values: Sequence[int]) -> "IntMatrix":
        if len(values) != self.rows:
            raise MatrixError("appended column has the wrong length")
        return IntMatrix.from_rows([list(self.row(i)) + [values[i]] for i in range(self.rows)])

    def reduce(self, modulus: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(v % modulus for v in self.entries))

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in self.row(i)) for i in range(self.rows))


@dataclass(frozen=True, eq=False)
class RationalVector:
    numerators: Vector
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise MatrixError("denominator must be positive")

    def __eq__(self, other):
        if not isinstance(other, RationalVector):
            return NotImplemented
        return len(self.numerators) == len(other.numerators) and all(
            a * other.denominator == b * self.denominator
            for a, b in zip(self.numerators, other.numerators)
        )

    def __hash__(self):
        return hash(self.as_fractions())

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.denominator) for x in self.numerators)


@dataclass(frozen=True)
class StandardForm:
    generator: IntMatrix
    parity_check: IntMatrix
    permutation: tuple[int, ...]
    modulus: int

    @property
    def dimension(self) -> int:
        return self.generator.rows


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _require_square(m: IntMatrix) -> None:
    if not m.is_square:
        raise MatrixError(f"square matrix required, got {m.rows}x{m.cols}")


def _bareiss(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i, lead = a[i], a[i][k]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // previous
        previous = pivot
    return sign * a[n - 1][n - 1]


def determinant(m: IntMatrix) -> int:
    _require_square(m)
    return _bareiss(m.to_rows())


def cofactor_matrix(m: IntMatrix) -> IntMatrix:
    """C[i][j] = (-1)^(i+j) times the minor of m without row i and column j."""
    _require_square(m)
    n = m.rows
    if n == 1:
        return IntMatrix.from_rows([[1]])
    rows = m.to_rows()
    cofactors = []
    for i in range(n):
        line = []
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            value = _bareiss(minor)
            line.append(-value if (i + j) % 2 else value)
        cofactors.append(line)
    return IntMatrix.from_rows(cofactors)


def adjugate(m: IntMatrix) -> IntMatrix:
    return cofactor_matrix(m).transpose()


def solve_exact(m: IntMatrix, rhs: Sequence[int]) -> RationalVector:
    """Unique rational y with y·m = rhs."""
    _require_square(m)
    det = determinant(m)
    if det == 0:
        raise MatrixError("singular matrix")
    numerators = adjugate(m).left_multiply(rhs)
    if det < 0:
        det = -det
        numerators = tuple(-x for x in numerators)
    return RationalVector(numerators, det)


@dataclass
class _Diagonal:
    diagonal: list[int]
    left: list[list[int]]
    left_inverse: list[list[int]]
    right: list[list[int]]
    right_inverse: list[list[int]]


def _identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _diagonalize(m: IntMatrix) -> _Diagonal:
    """Integer row/column reduction with U·m·W = diag, keeping U, U^-1, W, W^-1."""
    a = m.to_rows()
    r, c = m.rows, m.cols
    left, left_inv = _identity_rows(r), _identity_rows(r)
    right, right_inv = _identity_rows(c), _identity_rows(c)

    def add_row(i, t, q):
        a[i] = [x + q * y for x, y in zip(a[i], a[t])]
        left[i] = [x + q * y for x, y in zip(left[i], left[t])]
        for row in left_inv:
            row[t] -= q * row[i]

    def swap_rows(i, t):
        a[i], a[t] = a[t], a[i]
        left[i], left[t] = left[t], left[i]
        for row in left_inv:
            row[i], row[t] = row[t], row[i]

    def add_col(j, t, q):
        for row in a:
            row[j] += q * row[t]
        for row in right:
            row[j] += q * row[t]
        right_inv[t] = [x - q * y for x, y in zip(right_inv[t], right_inv[j])]

    def swap_cols(j, t):
        for row in a:
            row[j], row[t] = row[t], row[j]
        for row in right:
            row[j], row[t] = row[t], row[j]
        right_inv[j], right_inv[t] = right_inv[t], right_inv[j]

    diagonal = []
    for t in range(min(r, c)):
        candidates = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            for i in range(t + 1, r):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, c):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, -q)
            leftovers = [(abs(a[i][t]), i, "row") for i in range(t + 1, r) if a[i][t]]
            leftovers += [(abs(a[t][j]), j, "col") for j in range(t + 1, c) if a[t][j]]
            if not leftovers:
                break
            _, k, kind = min(leftovers)
            if kind == "row":
                swap_rows(k, t)
            else:
                swap_cols(k, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
            for row in left_inv:
                row[t] = -row[t]
        diagonal.append(a[t][t])

    logger.debug(f"diagonalized {r}x{c} matrix, diagonal {diagonal}")
    return _Diagonal(diagonal, left, left_inv, right, right_inv)


def _check_modulus(modulus: int) -> None:
    if modulus < 2:
        raise MatrixError(f"modulus must be at least 2, got {modulus}")


def kernel_basis_mod(m: IntMatrix, modulus: int) -> list[tuple[Vector, int]]:
    """Direct-sum basis (vector, order) of {x : x·m = 0 mod modulus}."""
    _check_modulus(modulus)
    reduced = _diagonalize(m)
    basis = []
    for i in range(m.rows):
        d = reduced.diagonal[i] if i < len(reduced.diagonal) else 0
        order = math.gcd(d, modulus)
        if order == 1:
            continue
        step = modulus // order
        basis.append((tuple(step * v % modulus for v in reduced.left[i]), order))
    return basis


def image_basis_mod(m: IntMatrix, modulus: int) -> list[tuple[Vector, int]]:
    """Direct-sum basis (vector, order) of the row space {x·m} mod modulus."""
    _check_modulus(modulus)
    reduced = _diagonalize(m)
    basis = []
    for j, d in enumerate(reduced.diagonal):
        g = math.gcd(d, modulus)
        order = modulus // g
        if order == 1:
            continue
        basis.append((tuple(g * v % modulus for v in reduced.right_inverse[j]), order))
    return basis


def span_size(basis: Sequence[tuple[Vector, int]]) -> int:
    return math.prod(order for _, order in basis)


def span_elements(basis: Sequence[tuple[Vector, int]], modulus: int, length: int) -> Iterator[Vector]:
    """Every Σ k_i·b_i with 0 ≤ k_i < order_i, each element exactly once."""
    current = [(0,) * length]
    for vector, order in basis:
        current = [
            tuple((x + k * v) % modulus for x, v in zip(word, vector))
            for word in current
            for k in range(order)
        ]
    return iter(current)


def kernel_mod(m: IntMatrix, modulus: int) -> list[Vector]:
    basis = kernel_basis_mod(m, modulus)
    return sorted(span_elements(basis, modulus, m.rows))


def mixed_radix_chunks(radices: Sequence[int], chunk_size: int = 1 << 16) -> Iterator[np.ndarray]:
    """Digit rows of every index in the mixed-radix box, first digit most significant."""
    total = math.prod(radices)
    strides = [math.prod(radices[j + 1:]) for j in range(len(radices))]
    for start in range(0, total, chunk_size):
        index = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        digits = np.empty((len(index), len(radices)), dtype=np.int64)
        for j, (stride, radix) in enumerate(zip(strides, radices)):
            digits[:, j] = (index // stride) % radix
        yield digits


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise MatrixError(f"{p} is not prime")


def _row_reduce_prime(vectors: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Nonzero rows of the reduced row echelon form over GF(p), and their pivot columns."""
    field = galois.GF(p)
    reduced = field(np.array(vectors, dtype=np.int64) % p).row_reduce().view(np.ndarray)
    rows = [[int(v) for v in row] for row in reduced if row.any()]
    pivots = [next(j for j, v in enumerate(row) if v) for row in rows]
    return rows, pivots


def rank_mod_prime(vectors: Sequence[Sequence[int]], p: int) -> int:
    if not vectors:
        return 0
    _require_prime(p)
    field = galois.GF(p)
    return int(np.linalg.matrix_rank(field(np.array(vectors, dtype=np.int64) % p)))


def standard_form_prime(gens: Sequence[Sequence[int]], p: int) -> StandardForm:
    """Generator [I_k | A] and parity check [-A^T | I_(n-k)] after moving pivots first.

    permutation[j] is the original (0-based) coordinate placed at column j.
    """
    _require_prime(p)
    if not gens:
        raise MatrixError("no generators given")
    n = len(gens[0])
    rows, pivots = _row_reduce_prime(gens, p)
    k = len(pivots)
    if k == 0 or k == n:
        raise MatrixError(f"code of dimension {k} over Z_{p} has no proper standard form")
    rest = [j for j in range(n) if j not in pivots]
    permutation = tuple(pivots + rest)
    generator = [[row[j] for j in permutation] for row in rows]
    redundancy = [[row[k + j] for row in generator] for j in range(n - k)]
    parity = [
        [(-v) % p for v in redundancy[j]] + [int(j == i) for i in range(n - k)]
        for j in range(n - k)
    ]
    logger.debug(f"standard form over Z_{p}: k={k}, permutation {permutation}")
    return StandardForm(
        IntMatrix.from_rows(generator), IntMatrix.from_rows(parity), permutation, p
    )
