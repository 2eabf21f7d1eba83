"""Tests for norm one groups, their classification and the well-roundedness cross-checks."""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from quatlat.algebra.orders import (
    conjugate_module,
    is_order,
    module_from_zbasis,
    random_principal_right_ideal,
    scale_module,
)
from quatlat.core.arith import RatMatrix, det_exact
from quatlat.core.errors import (
    ConsistencyError,
    NotAnOrderError,
    PreconditionError,
    PresentationError,
)
from quatlat.lattice.ideal_lattice import (
    build_gram,
    build_lattice,
    conjugate_lattice_gram,
    minimal_vectors,
)
from quatlat.lattice.unit_group import (
    FiniteUnitGroup,
    GroupClass,
    GroupVariant,
    PresentationGenerators,
    classification_table,
    classify,
    enumerate_norm_one,
    explicit_ideal_basis,
    explicit_minimal_basis,
    find_presentation_generators,
    predict_well_rounded,
    spans_Q_basis,
    verify_presentation,
    wellrounded_consistency,
)
from quatlat.utils.problem import build_problem, load_problem

FIXTURES = Path(__file__).parent / "fixtures"


def _problem(name):
    return build_problem(load_problem(FIXTURES / f"{name}.yaml"))


def _toy_order():
    algebra = _problem("hurwitz").algebra
    one, i, j, ij = algebra.basis()
    return module_from_zbasis(algebra, [one, i * 2, j, ij * 2])


@pytest.mark.parametrize("name", [
    "lipschitz", "hurwitz", "b2_lambda3", "zeta14", "sqrt3_order", "sqrt2_2O", "sqrt5_2I",
])
def test_fixture_groups(name):
    """Group order and class match, and all three well-roundedness tests agree."""
    problem = _problem(name)
    expected = problem.spec.expected
    group = enumerate_norm_one(problem.order)
    assert group.order == expected['group_order']
    group_class = classify(group)
    assert str(group_class) == expected['group_class']
    assert group_class.order == group.order
    assert predict_well_rounded(problem.field.degree, group_class) == expected['well_rounded']
    assert spans_Q_basis(group) == expected['well_rounded']

    report = wellrounded_consistency(problem.order, 1, group)
    assert report.consistent
    assert report.direct == expected['well_rounded']
    assert all(check.success for check in report.checks())


def test_group_elements_have_norm_one():
    problem = _problem("sqrt5_2I")
    group = enumerate_norm_one(problem.order)
    one = problem.field.one()
    assert all(x.reduced_norm() == one for x in group.elements)
    assert problem.algebra.one() in group
    assert max(group.element_orders) == 10
    assert not group.is_abelian()


def test_cyclic_group_of_toy_order():
    """{+-1, +-j} is Cyclic(4) and predicts no well-roundedness."""
    toy = _toy_order()
    group = enumerate_norm_one(toy)
    assert group.order == 4
    group_class = classify(group)
    assert group_class.variant == GroupVariant.CYCLIC
    assert str(group_class) == "Cyclic(4)"
    assert group.is_abelian()
    assert not spans_Q_basis(group)

    report = wellrounded_consistency(toy, 1, group)
    assert (report.direct, report.basis, report.predicted) == (False, False, False)

    gens = find_presentation_generators(group, group_class)
    assert gens.y ** 4 == toy.algebra.one()
    with pytest.raises(PreconditionError):
        explicit_minimal_basis(toy, group_class, gens)


def test_non_order_is_rejected():
    hurwitz = _problem("hurwitz")
    with pytest.raises(NotAnOrderError):
        enumerate_norm_one(scale_module(hurwitz.order, 2))


def test_consistency_needs_rational_alpha():
    problem = _problem("sqrt3_order")
    with pytest.raises(PreconditionError):
        wellrounded_consistency(problem.order, problem.field.gen() + 2)
    report = wellrounded_consistency(problem.order, problem.alpha)
    assert report.consistent and report.direct


def test_supplied_dihedral_generators():
    """The fixture generators satisfy the BinaryDihedral(28) relations."""
    problem = _problem("zeta14")
    group = enumerate_norm_one(problem.order)
    group_class = classify(group)
    assert group_class == GroupClass(GroupVariant.BINARY_DIHEDRAL, 7)
    supplied = PresentationGenerators(group_class, problem.generators['y'], problem.generators['x'])
    gens = verify_presentation(group, group_class, supplied)
    assert gens.y == problem.generators['y']

    bad = PresentationGenerators(group_class, problem.generators['y'], problem.generators['y'])
    with pytest.raises(PresentationError):
        verify_presentation(group, group_class, bad)
    with pytest.raises(PresentationError):
        verify_presentation(group, group_class, PresentationGenerators(group_class, problem.generators['y']))


def test_explicit_basis_over_cubic_field():
    """The basis y^k x^l has Gram matrix 6 on the diagonal and +-1 within each block."""
    problem = _problem("zeta14")
    group = enumerate_norm_one(problem.order)
    group_class = classify(group)
    gens = PresentationGenerators(group_class, problem.generators['y'], problem.generators['x'])
    elems = explicit_minimal_basis(problem.order, group_class, gens)
    assert len(elems) == 12
    assert all(problem.order.contains(x) for x in elems)

    gram = build_gram(problem.algebra, problem.field.one(), elems)
    expected = []
    for r in range(12):
        row = []
        for c in range(12):
            if r // 6 != c // 6:
                row.append(0)
            elif r == c:
                row.append(6)
            else:
                row.append((-1) ** (abs(r - c) + 1))
        expected.append(row)
    assert gram == RatMatrix.from_rows(expected)
    assert det_exact(gram) == 7 ** 10


@pytest.mark.parametrize("name", ["hurwitz", "sqrt2_2O", "sqrt5_2I", "lipschitz", "sqrt3_order"])
def test_found_generators_give_minimal_basis(name):
    """Searched generators pass verification and give a basis of minimal vectors."""
    problem = _problem(name)
    group = enumerate_norm_one(problem.order)
    group_class = classify(group)
    gens = find_presentation_generators(group, group_class)
    if group_class.is_exceptional:
        assert gens.x * gens.x == gens.y ** 3 == gens.z ** group_class.exponent
    elems = explicit_minimal_basis(problem.order, group_class, gens)
    assert len(elems) == problem.algebra.dimension
    minimum = 2 * problem.field.degree
    for x in elems:
        assert problem.algebra.trace_form(1, x, x) == minimum


def test_explicit_ideal_basis():
    problem = _problem("sqrt3_ideal")
    lattice = build_lattice(problem.ideal, problem.alpha)
    vectors = minimal_vectors(lattice)
    group = enumerate_norm_one(problem.order)
    group_class = classify(group)
    gens = find_presentation_generators(group, group_class)
    elems = explicit_ideal_basis(lattice, vectors, group_class, gens)
    assert len(elems) == 8
    assert all(problem.ideal.contains(x) for x in elems)


def test_multiplication_table_detects_non_groups():
    algebra = _problem("hurwitz").algebra
    one, i, _, _ = algebra.basis()
    with pytest.raises(ConsistencyError):
        FiniteUnitGroup(algebra, [one, -one, i]).multiplication_table()


def test_predict_well_rounded():
    dihedral = GroupVariant.BINARY_DIHEDRAL
    assert predict_well_rounded(1, GroupClass(dihedral, 2))
    assert predict_well_rounded(3, GroupClass(dihedral, 7))
    assert not predict_well_rounded(2, GroupClass(dihedral, 2))
    assert predict_well_rounded(1, GroupClass(GroupVariant.BINARY_TETRAHEDRAL))
    assert not predict_well_rounded(2, GroupClass(GroupVariant.BINARY_TETRAHEDRAL))
    assert not predict_well_rounded(1, GroupClass(GroupVariant.BINARY_OCTAHEDRAL))
    assert predict_well_rounded(2, GroupClass(GroupVariant.BINARY_ICOSAHEDRAL))
    assert not predict_well_rounded(3, GroupClass(GroupVariant.BINARY_ICOSAHEDRAL))
    assert not predict_well_rounded(1, GroupClass(GroupVariant.CYCLIC, 2))


def test_classification_table():
    expected = {1: {24, 8, 12}, 2: {48, 120, 16, 20, 24}, 3: {28, 36}}
    for degree, orders in expected.items():
        rows = classification_table(degree)
        assert {row.order for row in rows} == orders
        assert len(rows) == len(orders)

    algebras = {row.order: row.algebra for row in classification_table(1)}
    assert algebras[8] == "(-1, -1 / Q)"
    assert algebras[12] == "(-1, -3 / Q)"
    assert classification_table(4) != []
    with pytest.raises(ValueError):
        classification_table(0)


@pytest.mark.parametrize("name", ["lipschitz", "hurwitz", "b2_lambda3", "sqrt3_order"])
def test_conjugated_orders(name):
    """u^-1 O u keeps the Gram matrix and the three tests still agree."""
    problem = _problem(name)
    base = build_lattice(problem.order, problem.alpha).gram
    rng = random.Random(name)
    for _ in range(10):
        u, _ = random_principal_right_ideal(problem.order, rng)
        conjugate = conjugate_module(u, problem.order)
        assert is_order(conjugate)
        assert conjugate_lattice_gram(problem.order, u, problem.alpha) == base
        report = wellrounded_consistency(conjugate, problem.alpha)
        assert report.consistent
        assert report.group_order == problem.spec.expected['group_order']


@pytest.mark.parametrize("alpha", [1, Fraction(1, 2), 3])
@pytest.mark.parametrize("name", [
    "lipschitz", "hurwitz", "b2_lambda3", "zeta14", "sqrt3_order", "sqrt2_2O", "sqrt5_2I",
])
def test_minimal_vectors_are_the_norm_one_group(name, alpha):
    """For rational alpha the minimum is 2n alpha and the minimal vectors number |O^1|."""
    problem = _problem(name)
    vectors = minimal_vectors(build_lattice(problem.order, alpha))
    assert vectors.min_norm == 2 * problem.field.degree * alpha
    assert vectors.count == problem.spec.expected['group_order']
