"""Orders and one-sided ideals as Z-modules inside a quaternion algebra.

Every module is stored over the fixed Q-basis {w_k, w_k i, w_k j, w_k ij}
where w_k runs over the integral basis of K. Coordinate index c*n + k holds
the w_k part of component c. The coordinate lattice is HNF-canonical, so
module equality is equality of ``IntLatticeBasis`` values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from ..core.arith import IntLatticeBasis, RatMatrix
from ..core.errors import NotAnOrderError, RankDeficientError, ShapeError
from .number_field import FieldElem, NumberField
from .quaternion import ElemLike, QuatAlgebra, QuatElem

MAX_CLOSURE_ROUNDS = 16


def coordinates(x: QuatElem) -> Tuple[Fraction, ...]:
    """Coordinates of x over the global Q-basis."""
    field = x.algebra.field
    return tuple(c for part in x.coords for c in field.integral_coordinates(part))


def from_coordinates(algebra: QuatAlgebra, coords: Sequence) -> QuatElem:
    n = algebra.field.degree
    if len(coords) != 4 * n:
        raise ShapeError(f"expected {4 * n} coordinates, got {len(coords)}")
    field = algebra.field
    return QuatElem(algebra, tuple(
        field.from_integral_coordinates(coords[c * n:(c + 1) * n]) for c in range(4)
    ))


def _span(algebra: QuatAlgebra, elems: Iterable[QuatElem]) -> IntLatticeBasis:
    return IntLatticeBasis.from_rational_rows([coordinates(x) for x in elems])


def _ok_multiples(algebra: QuatAlgebra, gens: Iterable[QuatElem]) -> List[QuatElem]:
    basis = algebra.field.integral_basis()
    return [w * g for g in gens for w in basis]


class QuatModule:
    """A full-rank Z-module in A with a presented Z-basis.

    ``basis`` is the Z-basis Gram matrices are taken in. It defaults to the
    canonical HNF basis; ``module_from_zbasis`` keeps the caller's order.
    """

    def __init__(self, algebra: QuatAlgebra, lattice: IntLatticeBasis,
                 basis: Optional[Sequence[QuatElem]] = None):
        if lattice.rank != algebra.dimension:
            raise RankDeficientError(
                f"module has rank {lattice.rank}, a basis of the algebra needs {algebra.dimension}"
            )
        self.algebra = algebra
        self.lattice = lattice
        if basis is None:
            basis = [from_coordinates(algebra, row) for row in lattice.rational_rows()]
        self.basis: Tuple[QuatElem, ...] = tuple(basis)

    def __eq__(self, other):
        if not isinstance(other, QuatModule):
            return NotImplemented
        return self.algebra == other.algebra and self.lattice == other.lattice

    def __hash__(self):
        return hash((self.algebra, self.lattice))

    def __repr__(self):
        return f"QuatModule(rank={self.rank}, scale={self.lattice.scale})"

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def contains(self, x: QuatElem) -> bool:
        return self.lattice.contains(coordinates(x))

    def element(self, vector: Sequence[int]) -> QuatElem:
        """The element with the given coefficients in the presented basis."""
        if len(vector) != len(self.basis):
            raise ShapeError(f"expected {len(self.basis)} coefficients, got {len(vector)}")
        total = self.algebra.zero()
        for c, b in zip(vector, self.basis):
            if c:
                total = total + b * c
        return total

    def basis_matrix(self) -> RatMatrix:
        """Rows are the global coordinates of the presented basis."""
        return RatMatrix.from_rows(coordinates(b) for b in self.basis)

    def canonical_basis(self) -> Tuple[QuatElem, ...]:
        return tuple(from_coordinates(self.algebra, row) for row in self.lattice.rational_rows())


@dataclass(frozen=True)
class OKIdealRep:
    """A fractional O_K-ideal stored over the integral basis of K."""

    field: NumberField
    lattice: IntLatticeBasis

    @classmethod
    def from_generators(cls, field: NumberField, gens: Iterable[FieldElem]) -> "OKIdealRep":
        basis = field.integral_basis()
        rows = [field.integral_coordinates(w * g) for g in gens for w in basis]
        if not rows:
            raise ShapeError("an ideal needs at least one generator")
        lattice = IntLatticeBasis.from_rational_rows(rows)
        if lattice.rank != field.degree:
            raise RankDeficientError("O_K-ideal generators span a module of lower rank")
        return cls(field, lattice)

    @classmethod
    def principal(cls, x: FieldElem) -> "OKIdealRep":
        return cls.from_generators(x.field, [x])

    @classmethod
    def unit(cls, field: NumberField) -> "OKIdealRep":
        return cls.principal(field.one())

    def elements(self) -> Tuple[FieldElem, ...]:
        return tuple(self.field.from_integral_coordinates(row) for row in self.lattice.rational_rows())

    def __mul__(self, other: "OKIdealRep") -> "OKIdealRep":
        if not isinstance(other, OKIdealRep):
            return NotImplemented
        return OKIdealRep.from_generators(
            self.field, [x * y for x in self.elements() for y in other.elements()]
        )

    def norm(self) -> Fraction:
        return norm_of_ok_ideal(self)


def norm_of_ok_ideal(ideal: OKIdealRep) -> Fraction:
    """Absolute norm; for integral ideals this is |O_K / J|."""
    return ideal.lattice.covolume()


# construction

def module_from_z_generators(algebra: QuatAlgebra, elems: Sequence[QuatElem],
                             presented: Optional[Sequence[QuatElem]] = None) -> QuatModule:
    """Z-span of arbitrarily many elements; must have full rank."""
    if not elems:
        raise ShapeError("a module needs at least one generator")
    return QuatModule(algebra, _span(algebra, elems), presented)


def module_from_zbasis(algebra: QuatAlgebra, elems: Sequence[ElemLike]) -> QuatModule:
    if len(elems) != algebra.dimension:
        raise ShapeError(f"a Z-basis needs {algebra.dimension} elements, got {len(elems)}")
    elems = [algebra.element(e) for e in elems]
    return module_from_z_generators(algebra, elems, presented=elems)


def module_from_ok_generators(algebra: QuatAlgebra, gens: Sequence[ElemLike]) -> QuatModule:
    if not gens:
        raise ShapeError("an O_K-module needs at least one generator")
    gens = [algebra.element(g) for g in gens]
    return module_from_z_generators(algebra, _ok_multiples(algebra, gens))


def order_from_ring_generators(algebra: QuatAlgebra, gens: Sequence[ElemLike],
                               max_rounds: int = MAX_CLOSURE_ROUNDS) -> QuatModule:
    """The smallest O_K-order containing gens, by closing the O_K-span of {1} + gens under products."""
    elems = [algebra.one()] + [algebra.element(g) for g in gens]
    lattice = _span(algebra, _ok_multiples(algebra, elems))
    for _ in range(max_rounds):
        current = [from_coordinates(algebra, row) for row in lattice.rational_rows()]
        grown = _span(algebra, current + [x * y for x in current for y in current])
        if grown == lattice:
            break
        lattice = grown
    else:
        raise NotAnOrderError(
            f"ring generated by {len(gens)} elements did not close after {max_rounds} rounds"
        )
    return QuatModule(algebra, lattice)


# module arithmetic

def module_contains(module: QuatModule, x: QuatElem) -> bool:
    return module.contains(x)


def is_submodule(inner: QuatModule, outer: QuatModule) -> bool:
    return all(outer.lattice.contains(row) for row in inner.lattice.rational_rows())


def module_sum(left: QuatModule, right: QuatModule) -> QuatModule:
    return module_from_z_generators(left.algebra, left.basis + right.basis)


def module_product(left: QuatModule, right: QuatModule) -> QuatModule:
    if left.algebra != right.algebra:
        raise ShapeError("modules belong to different algebras")
    return module_from_z_generators(
        left.algebra, [x * y for x in left.basis for y in right.basis]
    )


def scale_module(module: QuatModule, factor: ElemLike) -> QuatModule:
    """c * M, keeping the presented basis order."""
    c = module.algebra.field.element(factor)
    elems = [c * b for b in module.basis]
    return module_from_z_generators(module.algebra, elems, presented=elems)


def left_multiply(x: QuatElem, module: QuatModule) -> QuatModule:
    elems = [x * b for b in module.basis]
    return module_from_z_generators(module.algebra, elems, presented=elems)


def conjugate_module(u: QuatElem, module: QuatModule) -> QuatModule:
    """u^-1 M u with basis u^-1 b_k u."""
    u_inv = u.inverse()
    elems = [u_inv * b * u for b in module.basis]
    return module_from_z_generators(module.algebra, elems, presented=elems)


def module_index(sub: QuatModule, sup: QuatModule) -> Fraction:
    """[sup : sub] as a ratio of covolumes; an integer when sub is contained in sup."""
    return sub.lattice.covolume() / sup.lattice.covolume()


# orders and ideals

def is_order(module: QuatModule) -> bool:
    algebra = module.algebra
    if not module.contains(algebra.one()):
        return False
    for w in algebra.field.integral_basis():
        if not all(module.contains(w * b) for b in module.basis):
            return False
    return all(module.contains(x * y) for x in module.basis for y in module.basis)


def _colon_order(ideal: QuatModule, right: bool) -> QuatModule:
    # {x : I x in I} is the intersection of b^-1 I over the basis b of I,
    # and the intersection of full-rank lattices is dual to the sum of duals.
    algebra = ideal.algebra
    dual_rows = []
    for b in ideal.basis:
        b_inv = b.inverse()
        images = [b_inv * c for c in ideal.basis] if right else [c * b_inv for c in ideal.basis]
        matrix = RatMatrix.from_rows(coordinates(e) for e in images)
        dual_rows.extend(matrix.inverse().transpose().rows)
    dual_sum = IntLatticeBasis.from_rational_rows(dual_rows)
    intersection = RatMatrix(dual_sum.rational_rows()).inverse().transpose()
    return module_from_z_generators(
        algebra, [from_coordinates(algebra, row) for row in intersection.rows]
    )


def right_order(ideal: QuatModule) -> QuatModule:
    """O_R(I) = {x in A : I x in I}."""
    return _colon_order(ideal, right=True)


def left_order(ideal: QuatModule) -> QuatModule:
    """O_L(I) = {x in A : x I in I}."""
    return _colon_order(ideal, right=False)


def is_right_ideal(ideal: QuatModule, order: QuatModule) -> bool:
    return all(ideal.contains(x * y) for x in ideal.basis for y in order.basis)


def is_integral(ideal: QuatModule, order: QuatModule) -> bool:
    return is_submodule(ideal, order)


def scale_to_integral(ideal: QuatModule, order: QuatModule) -> Tuple[FieldElem, QuatModule]:
    """Smallest positive integer d with d*I inside the order, and d*I."""
    order_inverse = RatMatrix(order.lattice.rational_rows()).inverse()
    coords = RatMatrix(ideal.lattice.rational_rows()) @ order_inverse
    d = coords.denominator()
    return ideal.algebra.field.scalar(d), scale_module(ideal, d)


def reduced_norm_ideal(ideal: QuatModule) -> OKIdealRep:
    """The O_K-ideal generated by nrd(I).

    nrd(sum z_i b_i) is an integer combination of nrd(b_i) and
    nrd(b_i + b_j), so these generate the whole set.
    """
    b = ideal.basis
    gens = [x.reduced_norm() for x in b]
    gens += [(b[i] + b[j]).reduced_norm() for i in range(len(b)) for j in range(i + 1, len(b))]
    return OKIdealRep.from_generators(ideal.algebra.field, gens)


def random_principal_right_ideal(order: QuatModule, rng: random.Random,
                                 spread: int = 2) -> Tuple[QuatElem, QuatModule]:
    """x * order for a random nonzero x with coefficients in [-spread, spread]."""
    while True:
        x = order.element([rng.randint(-spread, spread) for _ in order.basis])
        if not x.is_zero() and not x.reduced_norm().is_zero():
            return x, left_multiply(x, order)
