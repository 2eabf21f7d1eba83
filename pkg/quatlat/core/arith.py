"""Exact rational and integer linear algebra kernels.

Matrices hold ``fractions.Fraction`` entries. Determinants, ranks and
inverses go through sympy's ``DomainMatrix``; Hermite normal forms through
``sympy.polys.matrices.normalforms``. LLL and Fincke-Pohst enumeration work on
Gram matrices with exact rational Gram-Schmidt data, so no square roots or
floating point values appear anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from .config import DEFAULT_NODE_BUDGET
from .errors import EnumerationBudgetExceeded, NotPositiveDefiniteError, ShapeError

Rational = Fraction
IntVector = Tuple[int, ...]

DEFAULT_DELTA = Fraction(99, 100)


def to_fraction(value) -> Fraction:
    """Convert ints, strings and sympy/gmpy rationals to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}")
    numerator = getattr(value, 'numerator', None)
    denominator = getattr(value, 'denominator', None)
    if numerator is None or denominator is None:
        raise TypeError(f"cannot convert {value!r} to an exact rational")
    if callable(numerator):
        numerator, denominator = numerator(), denominator()
    return Fraction(int(numerator), int(denominator))


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    result = 1
    for v in values:
        result = result * v.denominator // math.gcd(result, v.denominator)
    return result


@dataclass(frozen=True)
class RatMatrix:
    """Rectangular matrix of exact rationals, row-major."""

    rows: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ShapeError("matrix dimensions must be positive")
        width = len(self.rows[0])
        if any(len(row) != width for row in self.rows):
            raise ShapeError("matrix rows have different lengths")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RatMatrix":
        return cls(tuple(tuple(to_fraction(e) for e in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(tuple(
            tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
        ))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, index: int) -> Tuple[Fraction, ...]:
        return self.rows[index]

    def __iter__(self):
        return iter(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(tuple(zip(*self.rows)))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = list(zip(*other.rows))
        return RatMatrix(tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
            for row in self.rows
        ))

    def scale(self, factor) -> "RatMatrix":
        factor = to_fraction(factor)
        return RatMatrix(tuple(tuple(factor * e for e in row) for row in self.rows))

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        n = self.nrows
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for row in self.rows for e in row)

    def denominator(self) -> int:
        return lcm_of_denominators(e for row in self.rows for e in row)

    def to_int_rows(self) -> Tuple[Tuple[IntVector, ...], int]:
        """Return (d*M as integer rows, d) with d the lcm of all denominators."""
        d = self.denominator()
        return tuple(tuple(int(e * d) for e in row) for row in self.rows), d

    def to_domain(self) -> DomainMatrix:
        return DomainMatrix.from_list(
            [[(e.numerator, e.denominator) for e in row] for row in self.rows], QQ
        )

    @classmethod
    def from_domain(cls, matrix: DomainMatrix) -> "RatMatrix":
        return cls.from_rows(matrix.to_list())

    def inverse(self) -> "RatMatrix":
        if not self.is_square:
            raise ShapeError("only square matrices can be inverted")
        if det_exact(self) == 0:
            raise ShapeError("matrix is singular")
        return RatMatrix.from_domain(self.to_domain().inv())

    def quadratic_form(self, vector: Sequence) -> Fraction:
        """Return v * M * v^T."""
        total = Fraction(0)
        for i, vi in enumerate(vector):
            if vi:
                row = self.rows[i]
                total += vi * sum((row[j] * vj for j, vj in enumerate(vector) if vj), Fraction(0))
        return total


@dataclass(frozen=True)
class HNFResult:
    """Row Hermite normal form together with its pivot record."""

    rows: Tuple[IntVector, ...]
    rank: int
    pivots: Tuple[int, ...]


def hnf(matrix: Sequence[Sequence[int]]) -> HNFResult:
    """Row Hermite normal form of an integer matrix.

    The result is upper triangular in echelon form: pivots are positive,
    entries above each pivot lie in [0, pivot), zero rows are dropped.
    sympy computes the column-style form with pivots in the lower right, so
    the coordinates are reversed on the way in and out.
    """
    rows = [list(map(int, row)) for row in matrix]
    if not rows:
        return HNFResult((), 0, ())
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ShapeError("matrix rows have different lengths")
    nonzero = [row[::-1] for row in rows if any(row)]
    if not nonzero:
        return HNFResult((), 0, ())

    columns = DomainMatrix.from_list(nonzero, ZZ).transpose()
    reduced = hermite_normal_form(columns).transpose().to_list()

    result = [tuple(int(e) for e in row[::-1]) for row in reduced]
    result.reverse()
    pivots = tuple(next(j for j, e in enumerate(row) if e) for row in result)
    return HNFResult(tuple(result), len(result), pivots)


@dataclass(frozen=True)
class IntLatticeBasis:
    """A Z-module in Q^k stored as scale * (Z-span of HNF rows).

    The HNF rows are kept primitive (gcd of all entries 1) and the content
    lives in ``scale``, so two presentations of one module compare equal.
    """

    basis: Tuple[IntVector, ...]
    scale: Fraction
    width: int

    @classmethod
    def from_rational_rows(cls, rows: Sequence[Sequence]) -> "IntLatticeBasis":
        rows = [tuple(to_fraction(e) for e in row) for row in rows]
        if not rows:
            raise ShapeError("a lattice needs at least one generator")
        width = len(rows[0])
        d = lcm_of_denominators(e for row in rows for e in row)
        result = hnf([[int(e * d) for e in row] for row in rows])
        if result.rank == 0:
            return cls((), Fraction(1), width)
        content = 0
        for row in result.rows:
            for e in row:
                content = math.gcd(content, e)
        # a common factor of the HNF rows moves into the scale
        rows_out = tuple(tuple(e // content for e in row) for row in result.rows)
        return cls(rows_out, Fraction(content, d), width)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rational_rows(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(tuple(self.scale * e for e in row) for row in self.basis)

    def coefficients(self, vector: Sequence) -> Optional[IntVector]:
        """Integer coefficients of vector in the basis, or None if it is not in the module."""
        w = [to_fraction(e) / self.scale for e in vector]
        if any(e.denominator != 1 for e in w):
            return None
        w = [int(e) for e in w]
        coeffs = []
        for row in self.basis:
            pivot = next(j for j, e in enumerate(row) if e)
            c, r = divmod(w[pivot], row[pivot])
            if r:
                return None
            coeffs.append(c)
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        if any(w):
            return None
        return tuple(coeffs)

    def contains(self, vector: Sequence) -> bool:
        return self.coefficients(vector) is not None

    def covolume(self) -> Fraction:
        """|det| of the basis for a full-rank module."""
        if self.rank != self.width:
            raise ShapeError("covolume needs a full-rank module")
        det = 1
        for row in self.basis:
            det *= next(e for e in row if e)
        return abs(det) * self.scale ** self.rank


def det_exact(matrix: RatMatrix) -> Fraction:
    """Exact determinant; integer entries go through fraction-free elimination."""
    if not matrix.is_square:
        raise ShapeError(f"determinant of a non-square {matrix.nrows}x{matrix.ncols} matrix")
    int_rows, d = matrix.to_int_rows()
    value = DomainMatrix.from_list([list(row) for row in int_rows], ZZ).det()
    return Fraction(int(value), d ** matrix.nrows)


def rank_over_Q(matrix: RatMatrix) -> int:
    return int(matrix.to_domain().rank())


def ldl(gram: RatMatrix) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Exact LDL^T of a symmetric matrix.

    Returns (mu, d) with gram[i][j] = sum_k mu[i][k] * d[k] * mu[j][k] and mu
    unit lower triangular. Raises if some pivot is not positive, which is
    equivalent to a leading principal minor being non-positive.
    """
    if not gram.is_symmetric():
        raise NotPositiveDefiniteError("Gram matrix is not symmetric")
    n = gram.nrows
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        mu[i][i] = Fraction(1)
        for j in range(i):
            s = gram[i][j] - sum((mu[j][k] * mu[i][k] * d[k] for k in range(j)), Fraction(0))
            mu[i][j] = s / d[j]
        d[i] = gram[i][i] - sum((mu[i][k] * mu[i][k] * d[k] for k in range(i)), Fraction(0))
        if d[i] <= 0:
            raise NotPositiveDefiniteError(f"Gram matrix is not positive definite (pivot {i} is {d[i]})")
    return mu, d


def is_positive_definite(gram: RatMatrix) -> bool:
    try:
        ldl(gram)
    except NotPositiveDefiniteError:
        return False
    return True


def _round(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def lll_reduce(gram: RatMatrix, delta: Fraction = DEFAULT_DELTA) -> Tuple[RatMatrix, Tuple[IntVector, ...]]:
    """LLL-reduce a positive definite Gram matrix.

    Returns (reduced, U) with reduced = U * gram * U^T exactly and U unimodular.
    Row i of U holds the coordinates of the i-th reduced basis vector.
    """
    delta = to_fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError(f"delta must lie strictly between 1/4 and 1, got {delta}")
    mu, bstar = ldl(gram)
    n = gram.nrows
    g = [list(row) for row in gram.rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def size_reduce(k: int, j: int):
        q = _round(mu[k][j])
        if q == 0:
            return
        for col in range(n):
            g[k][col] -= q * g[j][col]
        for row in range(n):
            g[row][k] -= q * g[row][j]
        for col in range(n):
            u[k][col] -= q * u[j][col]
        mu[k][j] -= q
        for l in range(j):
            mu[k][l] -= q * mu[j][l]

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
        else:
            g[k], g[k - 1] = g[k - 1], g[k]
            for row in g:
                row[k], row[k - 1] = row[k - 1], row[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            mu, bstar = ldl(RatMatrix(tuple(tuple(row) for row in g)))
            k = max(k - 1, 1)

    reduced = RatMatrix(tuple(tuple(row) for row in g))
    return reduced, tuple(tuple(row) for row in u)


class _NodeCounter:
    def __init__(self, budget: int):
        self.budget = budget
        self.visited = 0

    def tick(self):
        self.visited += 1
        if self.visited > self.budget:
            raise EnumerationBudgetExceeded(self.budget, self.visited)


def _integer_window(center: Fraction, radius_sq: Fraction) -> range:
    """Integers x with (x - center)^2 <= radius_sq."""
    if radius_sq < 0:
        return range(0)
    r = math.isqrt(math.floor(radius_sq)) + 1
    lo = math.floor(center) - r
    hi = math.ceil(center) + r
    while lo <= hi and (lo - center) ** 2 > radius_sq:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > radius_sq:
        hi -= 1
    return range(lo, hi + 1)


def enumerate_up_to(gram: RatMatrix, bound, budget: Optional[int] = None) -> List[IntVector]:
    """All nonzero integer vectors v with v * gram * v^T <= bound.

    Fincke-Pohst over the exact LDL^T decomposition: coordinates are fixed from
    the last one down, each level restricted to the integers whose partial sum
    stays within the bound. Each accepted partial assignment counts as one
    node against ``budget``. The result is sorted and contains v and -v.
    """
    bound = to_fraction(bound)
    if bound <= 0:
        raise ValueError("enumeration bound must be positive")
    mu, d = ldl(gram)
    n = gram.nrows
    counter = _NodeCounter(DEFAULT_NODE_BUDGET if budget is None else budget)
    x = [0] * n
    found: List[IntVector] = []

    def search(level: int, remaining: Fraction):
        center = -sum((mu[i][level] * x[i] for i in range(level + 1, n)), Fraction(0))
        for value in _integer_window(center, remaining / d[level]):
            counter.tick()
            x[level] = value
            rest = remaining - d[level] * (value - center) ** 2
            if level == 0:
                if any(x):
                    found.append(tuple(x))
            else:
                search(level - 1, rest)
        x[level] = 0

    search(n - 1, bound)
    found.sort()
    return found


def apply_transform(vector: Sequence[int], transform: Sequence[Sequence[int]]) -> IntVector:
    """Return vector * transform."""
    width = len(transform[0])
    return tuple(
        sum(vector[i] * transform[i][j] for i in range(len(vector)) if vector[i])
        for j in range(width)
    )


def shortest_vectors(gram: RatMatrix, delta: Fraction = DEFAULT_DELTA,
                     budget: Optional[int] = None) -> Tuple[Fraction, List[IntVector]]:
    """Minimum of a positive definite Gram matrix and all vectors attaining it.

    LLL first, then enumeration bounded by the smallest reduced diagonal entry.
    Vectors are returned in the coordinates of the input basis, sorted.
    """
    reduced, transform = lll_reduce(gram, delta)
    bound = min(reduced[i][i] for i in range(reduced.nrows))
    candidates = enumerate_up_to(reduced, bound, budget)
    norms = [(reduced.quadratic_form(v), v) for v in candidates]
    minimum = min(norm for norm, _ in norms)
    vectors = sorted(apply_transform(v, transform) for norm, v in norms if norm == minimum)
    return minimum, vectors


def greedy_independent(vectors: Sequence[Sequence], limit: Optional[int] = None) -> List[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    chosen: List[int] = []
    current = 0
    for index, v in enumerate(vectors):
        rows = [vectors[i] for i in chosen] + [v]
        rank = rank_over_Q(RatMatrix.from_rows(rows))
        if rank > current:
            chosen.append(index)
            current = rank
            if limit is not None and current == limit:
                break
    return chosen
