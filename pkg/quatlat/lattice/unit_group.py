"""The reduced norm one group of an order and the well-roundedness tests built on it.

With alpha = 1 the minimal vectors of an order lattice are exactly its
norm one elements, so the group is read off the enumeration kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.ntheory.factor_ import core

from ..algebra.number_field import euler_phi, rationals, real_cyclotomic_field
from ..algebra.orders import QuatModule, coordinates, is_order
from ..algebra.quaternion import ElemLike, QuatAlgebra, QuatElem
from ..core.arith import DEFAULT_DELTA, RatMatrix, rank_over_Q
from ..core.errors import (
    ClassificationError,
    ConsistencyError,
    NormOneViolation,
    NotAnOrderError,
    NotTotallyPositiveError,
    PreconditionError,
    PresentationError,
)
from ..core.validation import ValidationResult
from .ideal_lattice import (
    IdealLattice,
    MinimalVectorSet,
    build_lattice,
    is_well_rounded,
    minimal_vectors,
)


class GroupVariant(Enum):
    CYCLIC = "cyclic"
    BINARY_DIHEDRAL = "binary_dihedral"
    BINARY_TETRAHEDRAL = "binary_tetrahedral"
    BINARY_OCTAHEDRAL = "binary_octahedral"
    BINARY_ICOSAHEDRAL = "binary_icosahedral"


EXCEPTIONAL_ORDERS = {
    GroupVariant.BINARY_TETRAHEDRAL: 24,
    GroupVariant.BINARY_OCTAHEDRAL: 48,
    GroupVariant.BINARY_ICOSAHEDRAL: 120,
}

# c in x^2 = y^3 = z^c = xyz
EXCEPTIONAL_EXPONENTS = {
    GroupVariant.BINARY_TETRAHEDRAL: 3,
    GroupVariant.BINARY_OCTAHEDRAL: 4,
    GroupVariant.BINARY_ICOSAHEDRAL: 5,
}


@dataclass(frozen=True)
class GroupClass:
    """Isomorphism class of a finite subgroup of the unit quaternions.

    ``m`` is the parameter of Cyclic(2m) and BinaryDihedral(4m).
    """

    variant: GroupVariant
    m: Optional[int] = None

    @property
    def order(self) -> int:
        if self.variant == GroupVariant.CYCLIC:
            return 2 * self.m
        if self.variant == GroupVariant.BINARY_DIHEDRAL:
            return 4 * self.m
        return EXCEPTIONAL_ORDERS[self.variant]

    @property
    def is_exceptional(self) -> bool:
        return self.variant in EXCEPTIONAL_ORDERS

    @property
    def exponent(self) -> int:
        return EXCEPTIONAL_EXPONENTS[self.variant]

    def __str__(self):
        if self.variant == GroupVariant.CYCLIC:
            return f"Cyclic({self.order})"
        if self.variant == GroupVariant.BINARY_DIHEDRAL:
            return f"BinaryDihedral({self.order})"
        return {
            GroupVariant.BINARY_TETRAHEDRAL: "BinaryTetrahedral",
            GroupVariant.BINARY_OCTAHEDRAL: "BinaryOctahedral",
            GroupVariant.BINARY_ICOSAHEDRAL: "BinaryIcosahedral",
        }[self.variant]


class FiniteUnitGroup:
    """A finite group of norm one quaternions, indexed for table lookups."""

    def __init__(self, algebra: QuatAlgebra, elements: Sequence[QuatElem]):
        self.algebra = algebra
        self.elements: Tuple[QuatElem, ...] = tuple(sorted(elements, key=lambda x: x.key()))
        self._index: Dict[Tuple[Fraction, ...], int] = {x.key(): i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ConsistencyError("group elements are not distinct")
        self._table: Optional[List[List[int]]] = None
        self._orders: Optional[Tuple[int, ...]] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x: QuatElem) -> bool:
        return x.key() in self._index

    def index(self, x: QuatElem) -> int:
        try:
            return self._index[x.key()]
        except KeyError:
            raise ConsistencyError(f"{x} is not in the group") from None

    @property
    def identity(self) -> int:
        return self.index(self.algebra.one())

    def multiplication_table(self) -> List[List[int]]:
        """table[i][j] is the index of elements[i] * elements[j]; raises if not closed."""
        if self._table is None:
            table = []
            for x in self.elements:
                row = []
                for y in self.elements:
                    key = (x * y).key()
                    if key not in self._index:
                        raise ConsistencyError(f"product of {x} and {y} leaves the group")
                    row.append(self._index[key])
                table.append(row)
            self._table = table
        return self._table

    def element_order(self, i: int) -> int:
        table = self.multiplication_table()
        one = self.identity
        current, k = i, 1
        while current != one:
            current = table[current][i]
            k += 1
            if k > self.order:
                raise ConsistencyError(f"{self.elements[i]} has no finite order in the group")
        return k

    @property
    def element_orders(self) -> Tuple[int, ...]:
        if self._orders is None:
            self._orders = tuple(self.element_order(i) for i in range(self.order))
        return self._orders

    def is_abelian(self) -> bool:
        table = self.multiplication_table()
        return all(table[i][j] == table[j][i] for i in range(self.order) for j in range(i))

    def generated_order(self, gens: Sequence[QuatElem]) -> int:
        """Order of the subgroup generated by gens."""
        table = self.multiplication_table()
        gen_ids = [self.index(g) for g in gens]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for i in frontier:
                for g in gen_ids:
                    j = table[i][g]
                    if j not in seen:
                        seen.add(j)
                        new.append(j)
            frontier = new
        return len(seen)


@dataclass(frozen=True)
class PresentationGenerators:
    """Generators satisfying the defining relations of ``group_class``.

    BinaryDihedral(4m): y^(2m) = 1, x^2 = y^m, x y x^-1 = y^-1.
    Exceptional: x^2 = y^3 = z^c = xyz. Cyclic: y alone.
    """

    group_class: GroupClass
    y: QuatElem
    x: Optional[QuatElem] = None
    z: Optional[QuatElem] = None


# enumeration and classification

def enumerate_norm_one(order: QuatModule, delta: Fraction = DEFAULT_DELTA,
                       budget: Optional[int] = None) -> FiniteUnitGroup:
    """All x in the order with nrd(x) = 1, found as the minimal vectors of (order, b_1)."""
    if not is_order(order):
        raise NotAnOrderError("norm one groups are only defined for orders")
    algebra = order.algebra
    lattice = build_lattice(order, algebra.field.one())
    vectors = minimal_vectors(lattice, delta, budget)
    expected = 2 * algebra.field.degree
    if vectors.min_norm != expected:
        raise NormOneViolation(f"order lattice has minimum {vectors.min_norm}, expected {expected}")

    one = algebra.field.one()
    elements = []
    for v in vectors.vectors:
        x = order.element(v)
        if x.reduced_norm() != one:
            raise NormOneViolation(f"minimal vector {v} has reduced norm {x.reduced_norm()}")
        elements.append(x)

    group = FiniteUnitGroup(algebra, elements)
    if algebra.one() not in group or -algebra.one() not in group:
        raise ConsistencyError("norm one group does not contain 1 and -1")
    group.multiplication_table()
    return group


def _dihedral_pair(group: FiniteUnitGroup, m: int) -> Optional[Tuple[int, int]]:
    table = group.multiplication_table()
    orders = group.element_orders
    one = group.identity
    for y in range(group.order):
        if orders[y] != 2 * m:
            continue
        y_m = y
        for _ in range(m - 1):
            y_m = table[y_m][y]
        y_inv = next(j for j in range(group.order) if table[y][j] == one)
        for x in range(group.order):
            if table[x][x] != y_m:
                continue
            x_inv = next(j for j in range(group.order) if table[x][j] == one)
            if table[table[x][y]][x_inv] == y_inv:
                return x, y
    return None


def classify(group: FiniteUnitGroup) -> GroupClass:
    size = group.order
    max_order = max(group.element_orders)
    if max_order == size:
        return GroupClass(GroupVariant.CYCLIC, size // 2)
    for variant, exceptional_order in EXCEPTIONAL_ORDERS.items():
        if size == exceptional_order and max_order == 2 * EXCEPTIONAL_EXPONENTS[variant]:
            return GroupClass(variant)
    if size % 4 == 0 and size > 4:
        m = size // 4
        if _dihedral_pair(group, m) is not None:
            return GroupClass(GroupVariant.BINARY_DIHEDRAL, m)
    raise ClassificationError(
        f"group of order {size} with maximal element order {max_order} fits no allowed class"
    )


def _check_relations(group_class: GroupClass, x: Optional[QuatElem], y: QuatElem,
                     z: Optional[QuatElem]) -> List[str]:
    algebra = y.algebra
    one = algebra.one()
    failed = []
    if group_class.variant == GroupVariant.CYCLIC:
        if y ** group_class.order != one or any(y ** k == one for k in range(1, group_class.order)):
            failed.append(f"y must have order {group_class.order}")
        return failed
    if x is None:
        return ["x is missing"]
    if group_class.variant == GroupVariant.BINARY_DIHEDRAL:
        m = group_class.m
        if y ** (2 * m) != one:
            failed.append("y^(2m) = 1")
        if x * x != y ** m:
            failed.append("x^2 = y^m")
        if x * y * x.inverse() != y.inverse():
            failed.append("x y x^-1 = y^-1")
        return failed
    if z is None:
        return ["z is missing"]
    c = group_class.exponent
    xyz = x * y * z
    if not (x * x == y ** 3 == z ** c == xyz):
        failed.append(f"x^2 = y^3 = z^{c} = xyz")
    if xyz * xyz != one:
        failed.append("(xyz)^2 = 1")
    return failed


def verify_presentation(group: FiniteUnitGroup, group_class: GroupClass,
                        gens: PresentationGenerators) -> PresentationGenerators:
    """Check the class relations and that the generators produce the whole group."""
    failed = _check_relations(group_class, gens.x, gens.y, gens.z)
    if failed:
        raise PresentationError(f"{group_class} relations fail: {', '.join(failed)}")
    supplied = [g for g in (gens.x, gens.y, gens.z) if g is not None]
    for g in supplied:
        if g not in group:
            raise PresentationError(f"generator {g} is not in the group")
    generated = group.generated_order(supplied)
    if generated != group.order:
        raise PresentationError(f"generators produce {generated} of {group.order} elements")
    return PresentationGenerators(group_class, gens.y, gens.x, gens.z)


def find_presentation_generators(group: FiniteUnitGroup, group_class: GroupClass) -> PresentationGenerators:
    elems = group.elements
    orders = group.element_orders
    variant = group_class.variant

    if variant == GroupVariant.CYCLIC:
        y = next(i for i, k in enumerate(orders) if k == group.order)
        return verify_presentation(group, group_class, PresentationGenerators(group_class, elems[y]))

    if variant == GroupVariant.BINARY_DIHEDRAL:
        pair = _dihedral_pair(group, group_class.m)
        if pair is None:
            raise PresentationError(f"no dihedral generators found for {group_class}")
        x, y = pair
        return verify_presentation(group, group_class,
                                   PresentationGenerators(group_class, elems[y], elems[x]))

    table = group.multiplication_table()
    c = group_class.exponent
    for y in (i for i, k in enumerate(orders) if k == 6):
        for z in (i for i, k in enumerate(orders) if k == 2 * c):
            x = table[y][z]
            # x = yz makes xyz = x^2; y^3 = z^c = -1 holds by the orders
            if orders[x] != 4:
                continue
            candidate = PresentationGenerators(group_class, elems[y], elems[x], elems[z])
            if group.generated_order([elems[y], elems[z]]) == group.order:
                return verify_presentation(group, group_class, candidate)
    raise PresentationError(f"no generators found for {group_class}")


# well-roundedness via the group

def spans_Q_basis(group: FiniteUnitGroup) -> bool:
    matrix = RatMatrix.from_rows(coordinates(x) for x in group.elements)
    return rank_over_Q(matrix) == group.algebra.dimension


def predict_well_rounded(degree: int, group_class: GroupClass) -> bool:
    """Whether orders over a degree-n field with this norm one group give well-rounded lattices."""
    variant = group_class.variant
    if variant == GroupVariant.CYCLIC:
        return False
    if variant == GroupVariant.BINARY_DIHEDRAL:
        return euler_phi(2 * group_class.m) == 2 * degree
    if degree == 1:
        return variant == GroupVariant.BINARY_TETRAHEDRAL
    if degree == 2:
        return variant in (GroupVariant.BINARY_OCTAHEDRAL, GroupVariant.BINARY_ICOSAHEDRAL)
    return False


def explicit_minimal_basis(order: QuatModule, group_class: GroupClass,
                           gens: PresentationGenerators,
                           beta: Optional[QuatElem] = None) -> List[QuatElem]:
    """beta * y^k * x^l (dihedral) or beta * z^k * y^l (exceptional), l = 0, 1."""
    algebra = order.algebra
    beta = algebra.one() if beta is None else beta
    variant = group_class.variant
    if variant == GroupVariant.BINARY_DIHEDRAL:
        span = euler_phi(2 * group_class.m)
        elems = [beta * gens.y ** k * gens.x ** l for l in (0, 1) for k in range(span)]
    elif group_class.is_exceptional:
        span = euler_phi(2 * group_class.exponent)
        elems = [beta * gens.z ** k * gens.y ** l for l in (0, 1) for k in range(span)]
    else:
        raise PreconditionError(f"{group_class} has no basis of minimal vectors")
    if len(elems) != algebra.dimension:
        raise PreconditionError(
            f"{group_class} gives {len(elems)} elements over a field of degree {algebra.field.degree}"
        )
    matrix = RatMatrix.from_rows(coordinates(x) for x in elems)
    if rank_over_Q(matrix) != algebra.dimension:
        raise ConsistencyError(f"explicit basis for {group_class} is not linearly independent")
    return elems


def explicit_ideal_basis(lattice: IdealLattice, vectors: MinimalVectorSet,
                         group_class: GroupClass, gens: PresentationGenerators) -> List[QuatElem]:
    """The explicit basis with beta the first minimal vector of a right ideal lattice."""
    beta = lattice.module.element(vectors.vectors[0])
    elems = explicit_minimal_basis(lattice.module, group_class, gens, beta)
    algebra = lattice.algebra
    for x in elems:
        if algebra.trace_form_unchecked(lattice.alpha, x, x) != vectors.min_norm:
            raise ConsistencyError(f"{x} does not attain the minimum {vectors.min_norm}")
    return elems


@dataclass(frozen=True)
class WellRoundedReport:
    direct: bool
    basis: bool
    predicted: bool
    group_class: GroupClass
    group_order: int

    @property
    def consistent(self) -> bool:
        return self.direct == self.basis == self.predicted

    def checks(self) -> List[ValidationResult]:
        return [
            ValidationResult("norm one span", self.basis == self.direct,
                             f"spans={self.basis}, lattice well-rounded={self.direct}"),
            ValidationResult("group class", self.predicted == self.direct,
                             f"predicts well-rounded={self.predicted}",
                             details=f"{self.group_class}, order {self.group_order}"),
        ]

    def to_dict(self):
        return {
            'direct': self.direct,
            'basis': self.basis,
            'predicted': self.predicted,
            'consistent': self.consistent,
        }


def wellrounded_consistency(order: QuatModule, alpha: ElemLike,
                            group: Optional[FiniteUnitGroup] = None,
                            vectors: Optional[MinimalVectorSet] = None,
                            delta: Fraction = DEFAULT_DELTA,
                            budget: Optional[int] = None) -> WellRoundedReport:
    """Cross-check the three well-roundedness tests; any disagreement raises."""
    field = order.algebra.field
    alpha = field.element(alpha)
    if not alpha.is_rational():
        raise PreconditionError("the consistency check needs a rational alpha")
    if alpha.rational_value() <= 0:
        raise NotTotallyPositiveError(f"alpha = {alpha} is not positive")

    lattice = build_lattice(order, alpha)
    direct, _ = is_well_rounded(lattice, vectors, delta, budget)
    group = group or enumerate_norm_one(order, delta, budget)
    group_class = classify(group)
    report = WellRoundedReport(
        direct=direct,
        basis=spans_Q_basis(group),
        predicted=predict_well_rounded(field.degree, group_class),
        group_class=group_class,
        group_order=group.order,
    )
    if not report.consistent:
        raise ConsistencyError(
            f"well-roundedness tests disagree: direct={report.direct}, "
            f"basis={report.basis}, predicted={report.predicted}"
        )
    return report


# classification table

@dataclass(frozen=True)
class TableRow:
    degree: int
    field: str
    algebra: str
    group_class: GroupClass

    @property
    def order(self) -> int:
        return self.group_class.order


def _rational_algebra(b: Fraction) -> str:
    # (-1, b / Q) only depends on b up to squares
    sign = -1 if b < 0 else 1
    squarefree = int(core(abs(b.numerator * b.denominator)))
    return f"(-1, {sign * squarefree} / Q)"


def _dihedral_row(degree: int, two_m: int) -> TableRow:
    field = real_cyclotomic_field(two_m)
    t = field.gen()
    b = t * t - 4
    algebra = QuatAlgebra(field, -1, b, require_definite=True)
    group_class = GroupClass(GroupVariant.BINARY_DIHEDRAL, two_m // 2)
    if field.degree == 1:
        return TableRow(degree, "Q", _rational_algebra(algebra.b.rational_value()), group_class)
    return TableRow(
        degree,
        f"Q(t), {field.defining_polynomial()} = 0",
        "(-1, t^2 - 4 / Q(t))",
        group_class,
    )


def classification_table(degree: int) -> List[TableRow]:
    """Norm one groups giving well-rounded order lattices over fields of the given degree."""
    if degree < 1:
        raise ValueError("field degree must be positive")
    rows: List[TableRow] = []
    if degree == 1:
        QuatAlgebra(rationals(), -1, -1, require_definite=True)
        rows.append(TableRow(1, "Q", "(-1, -1 / Q)", GroupClass(GroupVariant.BINARY_TETRAHEDRAL)))
    elif degree == 2:
        rows.append(TableRow(2, "Q(t), t**2 - 2 = 0", "(-1, -1 / Q(t))",
                             GroupClass(GroupVariant.BINARY_OCTAHEDRAL)))
        rows.append(TableRow(2, "Q(t), t**2 - 5 = 0", "(-1, -1 / Q(t))",
                             GroupClass(GroupVariant.BINARY_ICOSAHEDRAL)))
    # phi(k) >= sqrt(k / 2), so phi(k) = 2n forces k <= 8n^2
    for two_m in range(4, 8 * degree * degree + 3, 2):
        if euler_phi(two_m) == 2 * degree:
            group_class = GroupClass(GroupVariant.BINARY_DIHEDRAL, two_m // 2)
            if predict_well_rounded(degree, group_class):
                rows.append(_dihedral_row(degree, two_m))
    return rows
