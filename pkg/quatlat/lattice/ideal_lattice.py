"""Ideal lattices (I, b_alpha): exact Gram matrices, minima and certificates."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath.libmp as mlib
import numpy as np
from sympy import divisors, factorint, integer_nthroot

from ..algebra.number_field import FieldElem, Interval, interval_mul
from ..algebra.orders import QuatModule, conjugate_module, norm_of_ok_ideal, reduced_norm_ideal
from ..algebra.quaternion import ElemLike, QuatAlgebra, QuatElem
from ..core.arith import (
    DEFAULT_DELTA,
    IntVector,
    RatMatrix,
    det_exact,
    greedy_independent,
    is_positive_definite,
    rank_over_Q,
    shortest_vectors,
)
from ..core.errors import (
    ConsistencyError,
    NotTotallyDefiniteError,
    NotTotallyPositiveError,
    ShapeError,
)

GUARD_BITS = 16


@dataclass(frozen=True)
class IdealLattice:
    """A module with the trace form b_alpha and its Gram matrix in the presented basis."""

    module: QuatModule
    alpha: FieldElem
    gram: RatMatrix

    @property
    def algebra(self) -> QuatAlgebra:
        return self.module.algebra

    @property
    def dimension(self) -> int:
        return self.gram.nrows

    @property
    def field_degree(self) -> int:
        return self.module.algebra.field.degree

    def det(self) -> Fraction:
        return det_exact(self.gram)


@dataclass(frozen=True)
class MinimalVectorSet:
    min_norm: Fraction
    vectors: Tuple[IntVector, ...]
    rank: int

    @property
    def count(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class LowerBound:
    """minimum^n >= (2n)^n * N(alpha) * N(nrd I), compared exactly."""

    degree: int
    alpha_norm: Fraction
    ideal_norm: Fraction
    minimum: Fraction

    @property
    def lhs(self) -> Fraction:
        return self.minimum ** self.degree

    @property
    def rhs(self) -> Fraction:
        return (2 * self.degree) ** self.degree * self.alpha_norm * self.ideal_norm

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def tight(self) -> bool:
        return self.lhs == self.rhs


class Verdict(Enum):
    DISPROVEN = "disproven"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SimilarityCertificate:
    """Outcome of the det/minimum test for G2 = r * U * G1 * U^T.

    Only non-similarity is ever proven. ``forced_scale`` is r written as
    ``q`` or ``q^(1/k)``.
    """

    verdict: Verdict
    reason: str
    det_ratio: Fraction
    forced_scale: str
    forced_minimum: str

    def to_dict(self):
        return {
            'verdict': self.verdict.value,
            'reason': self.reason,
            'det_ratio': self.det_ratio,
            'forced_scale': self.forced_scale,
            'forced_minimum': self.forced_minimum,
        }


def build_gram(algebra: QuatAlgebra, alpha: FieldElem, elems: Sequence[QuatElem]) -> RatMatrix:
    """Gram matrix of b_alpha on elems; alpha is assumed already validated."""
    size = len(elems)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            value = algebra.trace_form_unchecked(alpha, elems[i], elems[j])
            rows[i][j] = rows[j][i] = value
    return RatMatrix(tuple(tuple(row) for row in rows))


def _check_form(algebra: QuatAlgebra, alpha: FieldElem):
    if not algebra.is_totally_definite():
        raise NotTotallyDefiniteError(
            f"({algebra.a}, {algebra.b}) is not totally definite; b_alpha is not positive definite"
        )
    if not alpha.is_totally_positive():
        raise NotTotallyPositiveError(f"alpha = {alpha} is not totally positive")


def build_lattice(module: QuatModule, alpha: ElemLike) -> IdealLattice:
    algebra = module.algebra
    alpha = algebra.field.element(alpha)
    _check_form(algebra, alpha)
    gram = build_gram(algebra, alpha, module.basis)
    if algebra.debug_checks and not is_positive_definite(gram):
        raise ConsistencyError("trace form Gram matrix is not positive definite")
    return IdealLattice(module, alpha, gram)


# real embedding

def _sqrt_enclosure(interval: Interval, prec: int) -> Interval:
    lo, hi = interval
    lo = max(lo, Fraction(0))
    low = mlib.mpf_sqrt(mlib.from_rational(lo.numerator, lo.denominator, prec, mlib.round_floor),
                        prec, mlib.round_floor)
    high = mlib.mpf_sqrt(mlib.from_rational(hi.numerator, hi.denominator, prec, mlib.round_ceiling),
                         prec, mlib.round_ceiling)
    return Fraction(*mlib.to_rational(low)), Fraction(*mlib.to_rational(high))


def _embedding_scales(lattice: IdealLattice, precision_bits: int) -> List[Tuple[Interval, ...]]:
    """Per real embedding: enclosures of sqrt(2 alpha), sqrt(-a), sqrt(-b), sqrt(ab)."""
    algebra = lattice.algebra
    prec = precision_bits + GUARD_BITS
    values = [
        (lattice.alpha * 2).embed(prec),
        (-algebra.a).embed(prec),
        (-algebra.b).embed(prec),
        algebra.ab.embed(prec),
    ]
    scales = []
    for k in range(lattice.field_degree):
        s2a, sa, sb, sab = (_sqrt_enclosure(v[k], prec) for v in values)
        scales.append((s2a, interval_mul(s2a, sa), interval_mul(s2a, sb), interval_mul(s2a, sab)))
    return scales


def generator_matrix_real(lattice: IdealLattice, precision_bits: int = 64) -> np.ndarray:
    """Rows are sigma(b) for the presented basis, so M M^T approximates the Gram matrix.

    Column 4k + c holds component c at the k-th real embedding. Every entry
    is the midpoint of a validated enclosure before rounding to float.
    """
    scales = _embedding_scales(lattice, precision_bits)
    prec = precision_bits + GUARD_BITS
    rows = []
    for b in lattice.module.basis:
        parts = [x.embed(prec) for x in b.coords]
        row = []
        for k, factors in enumerate(scales):
            for c in range(4):
                lo, hi = interval_mul(factors[c], parts[c][k])
                row.append(float((lo + hi) / 2))
        rows.append(row)
    return np.array(rows, dtype=float)


def embedding_max_error(lattice: IdealLattice, matrix: np.ndarray) -> float:
    exact = np.array([[float(e) for e in row] for row in lattice.gram], dtype=float)
    return float(np.max(np.abs(matrix @ matrix.T - exact)))


# minima

def minimal_vectors(lattice: IdealLattice, delta: Fraction = DEFAULT_DELTA,
                    budget: Optional[int] = None) -> MinimalVectorSet:
    min_norm, vectors = shortest_vectors(lattice.gram, delta, budget)
    rank = rank_over_Q(RatMatrix.from_rows(vectors))
    return MinimalVectorSet(min_norm, tuple(vectors), rank)


def minimum(lattice: IdealLattice, delta: Fraction = DEFAULT_DELTA,
            budget: Optional[int] = None) -> Fraction:
    return minimal_vectors(lattice, delta, budget).min_norm


def is_well_rounded(lattice: IdealLattice, vectors: Optional[MinimalVectorSet] = None,
                    delta: Fraction = DEFAULT_DELTA,
                    budget: Optional[int] = None) -> Tuple[bool, Tuple[IntVector, ...]]:
    """Whether the minimal vectors span; the witness is a greedily chosen independent subset."""
    if vectors is None:
        vectors = minimal_vectors(lattice, delta, budget)
    chosen = greedy_independent(vectors.vectors, limit=lattice.dimension)
    witness = tuple(vectors.vectors[i] for i in chosen)
    return len(witness) == lattice.dimension, witness


def min_lower_bound(lattice: IdealLattice, minimum_value: Optional[Fraction] = None,
                    delta: Fraction = DEFAULT_DELTA, budget: Optional[int] = None) -> LowerBound:
    if minimum_value is None:
        minimum_value = minimum(lattice, delta, budget)
    ideal_norm = norm_of_ok_ideal(reduced_norm_ideal(lattice.module))
    return LowerBound(
        degree=lattice.field_degree,
        alpha_norm=lattice.alpha.norm(),
        ideal_norm=ideal_norm,
        minimum=minimum_value,
    )


def rational_root_type(lattice: IdealLattice, vectors: MinimalVectorSet) -> Optional[str]:
    """Similarity class of a well-rounded ideal lattice over Q, read off the kissing number."""
    if lattice.field_degree != 1 or vectors.rank != lattice.dimension:
        return None
    return {8: "Z4", 24: "D4", 12: "A2+A2"}.get(vectors.count)


# similarity

def _rational_root(value: Fraction, k: int) -> Optional[Fraction]:
    if value <= 0:
        return None
    p, p_exact = integer_nthroot(value.numerator, k)
    q, q_exact = integer_nthroot(value.denominator, k)
    if p_exact and q_exact:
        return Fraction(int(p), int(q))
    return None


def _split_root(value: Fraction, degree: int) -> Tuple[Fraction, int]:
    """Write value^(1/degree) as base^(1/k) with the smallest possible k."""
    for d in sorted(divisors(degree), reverse=True):
        root = _rational_root(value, d)
        if root is not None:
            return root, degree // d
    return value, degree


def _format_root(base: Fraction, k: int) -> str:
    return str(base) if k == 1 else f"{base}^(1/{k})"


def _format_scaled_root(coefficient: Fraction, base: Fraction, k: int) -> str:
    """coefficient * base^(1/k) written as c * r^(1/k) with r a k-th power free integer."""
    value = coefficient ** k * base
    q = value.denominator
    radicand = value.numerator * q ** (k - 1)
    outside, inside = 1, 1
    for prime, exponent in factorint(radicand).items():
        outside *= prime ** (exponent // k)
        inside *= prime ** (exponent % k)
    c = Fraction(outside, q)
    if inside == 1:
        return str(c)
    return _format_root(Fraction(inside), k) if c == 1 else f"{c}*{_format_root(Fraction(inside), k)}"


def similarity_certificate(first: IdealLattice, second: IdealLattice,
                           first_vectors: Optional[MinimalVectorSet] = None,
                           second_vectors: Optional[MinimalVectorSet] = None,
                           delta: Fraction = DEFAULT_DELTA,
                           budget: Optional[int] = None) -> SimilarityCertificate:
    """Try to disprove G2 = r * U * G1 * U^T for r > 0 and unimodular U."""
    if first.dimension != second.dimension:
        raise ShapeError(
            f"cannot compare lattices of dimension {first.dimension} and {second.dimension}"
        )
    first_vectors = first_vectors or minimal_vectors(first, delta, budget)
    second_vectors = second_vectors or minimal_vectors(second, delta, budget)
    ratio = second.det() / first.det()
    base, k = _split_root(ratio, first.dimension)
    scale = _format_root(base, k)
    min1, min2 = first_vectors.min_norm, second_vectors.min_norm

    if k > 1:
        forced = _format_scaled_root(min1, base, k)
        reason = (f"det ratio {ratio} forces r = {scale}, so the second minimum would be "
                  f"the irrational number {forced}, but the second Gram matrix is rational "
                  f"and its minimum is {min2}")
        return SimilarityCertificate(Verdict.DISPROVEN, reason, ratio, scale, forced)

    forced_min = base * min1
    if forced_min != min2:
        reason = f"det ratio {ratio} forces r = {base} and minimum {forced_min}, found {min2}"
        return SimilarityCertificate(Verdict.DISPROVEN, reason, ratio, scale, str(forced_min))
    if first_vectors.count != second_vectors.count:
        reason = (f"minimal vector counts differ: {first_vectors.count} "
                  f"against {second_vectors.count}")
        return SimilarityCertificate(Verdict.DISPROVEN, reason, ratio, scale, str(forced_min))
    return SimilarityCertificate(
        Verdict.INCONCLUSIVE, "determinant, minimum and kissing number are compatible",
        ratio, scale, str(forced_min),
    )


def conjugate_lattice_gram(order: QuatModule, u: QuatElem, alpha: ElemLike) -> RatMatrix:
    """Gram of u^-1 b_k u; for an order this equals the Gram of the order itself."""
    return build_lattice(conjugate_module(u, order), alpha).gram
