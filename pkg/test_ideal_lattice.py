"""Tests for ideal lattices: Gram matrices, minima, bounds and similarity."""

import random
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from quatlat.algebra.orders import (
    left_multiply,
    module_from_zbasis,
    random_principal_right_ideal,
    scale_module,
)
from quatlat.algebra.quaternion import QuatAlgebra
from quatlat.core.arith import RatMatrix
from quatlat.core.errors import NotTotallyDefiniteError, NotTotallyPositiveError, ShapeError
from quatlat.lattice.ideal_lattice import (
    Verdict,
    build_lattice,
    conjugate_lattice_gram,
    embedding_max_error,
    generator_matrix_real,
    is_well_rounded,
    min_lower_bound,
    minimal_vectors,
    minimum,
    rational_root_type,
    similarity_certificate,
)
from quatlat.utils.problem import build_problem, load_problem

FIXTURES = Path(__file__).parent / "fixtures"


def _problem(name):
    return build_problem(load_problem(FIXTURES / f"{name}.yaml"))


def _lattice(name):
    problem = _problem(name)
    return build_lattice(problem.lattice_module, problem.alpha)


@pytest.mark.parametrize("name", [
    "lipschitz", "hurwitz", "b2_lambda3", "zeta14", "sqrt3_order", "sqrt3_ideal",
])
def test_fixture_lattices(name):
    """Gram matrix, determinant, minimum and kissing number match the recorded values."""
    problem = _problem(name)
    expected = problem.spec.expected
    lattice = build_lattice(problem.lattice_module, problem.alpha)
    assert lattice.gram.is_symmetric()
    if 'gram' in expected:
        assert lattice.gram == RatMatrix.from_rows(expected['gram'])
    assert lattice.det() == Fraction(expected['det'])

    vectors = minimal_vectors(lattice)
    assert vectors.min_norm == Fraction(expected['minimum'])
    if 'minimal_vector_count' in expected:
        assert vectors.count == expected['minimal_vector_count']
    well_rounded, witness = is_well_rounded(lattice, vectors)
    assert well_rounded == expected['well_rounded']
    assert len(witness) == lattice.dimension
    if 'root_lattice_type' in expected:
        assert rational_root_type(lattice, vectors) == expected['root_lattice_type']


def test_minimal_vectors_attain_minimum():
    lattice = _lattice("sqrt3_ideal")
    vectors = minimal_vectors(lattice)
    for v in vectors.vectors:
        assert lattice.gram.quadratic_form(v) == vectors.min_norm
        x = lattice.module.element(v)
        assert lattice.algebra.trace_form(lattice.alpha, x, x) == vectors.min_norm


def test_toy_order_is_not_well_rounded():
    """Z + 2Zi + Zj + 2Zij: the minimal vectors +-1, +-j span a plane."""
    problem = _problem("hurwitz")
    algebra = problem.algebra
    one, i, j, ij = algebra.basis()
    toy = module_from_zbasis(algebra, [one, i * 2, j, ij * 2])
    lattice = build_lattice(toy, 1)
    assert lattice.gram == RatMatrix.from_rows([[2, 0, 0, 0], [0, 8, 0, 0], [0, 0, 2, 0], [0, 0, 0, 8]])
    vectors = minimal_vectors(lattice)
    assert vectors.count == 4
    assert vectors.rank == 2
    well_rounded, witness = is_well_rounded(lattice, vectors)
    assert not well_rounded
    assert len(witness) == 2
    assert rational_root_type(lattice, vectors) is None


def test_alpha_scales_the_form():
    problem = _problem("hurwitz")
    base = build_lattice(problem.order, 1)
    scaled = build_lattice(problem.order, Fraction(5, 2))
    assert scaled.gram == base.gram.scale(Fraction(5, 2))
    assert minimum(scaled) == 5


def test_form_preconditions():
    problem = _problem("hurwitz")
    with pytest.raises(NotTotallyPositiveError):
        build_lattice(problem.order, -1)
    sqrt3 = _problem("sqrt3_order")
    s = sqrt3.field.gen()
    with pytest.raises(NotTotallyPositiveError):
        build_lattice(sqrt3.order, s)
    indefinite = QuatAlgebra(problem.field, 1, -1)
    module = module_from_zbasis(indefinite, indefinite.basis())
    with pytest.raises(NotTotallyDefiniteError):
        build_lattice(module, 1)


def test_lower_bound():
    """minimum^n >= (2n)^n N(alpha) N(nrd I), with equality in the tight cases."""
    order_bound = min_lower_bound(_lattice("sqrt3_order"))
    assert (order_bound.lhs, order_bound.rhs) == (4, 4)
    assert order_bound.tight

    ideal_bound = min_lower_bound(_lattice("sqrt3_ideal"))
    assert ideal_bound.ideal_norm == 2
    assert (ideal_bound.lhs, ideal_bound.rhs) == (16, 8)
    assert ideal_bound.holds and not ideal_bound.tight

    hurwitz = _problem("hurwitz")
    tripled = build_lattice(scale_module(hurwitz.order, 3), 1)
    bound = min_lower_bound(tripled)
    assert (bound.lhs, bound.rhs) == (18, 18)


def test_similarity_irrational_scale():
    """Order and ideal lattices over Q(sqrt 3) cannot be similar."""
    certificate = similarity_certificate(_lattice("sqrt3_order"), _lattice("sqrt3_ideal"))
    assert certificate.verdict == Verdict.DISPROVEN
    assert certificate.det_ratio == 16
    assert certificate.forced_scale == "2^(1/2)"
    assert certificate.forced_minimum == "2*2^(1/2)"
    assert certificate.to_dict()['verdict'] == "disproven"


def test_similarity_rational_scale():
    hurwitz = _problem("hurwitz")
    base = build_lattice(hurwitz.order, 1)
    tripled = build_lattice(scale_module(hurwitz.order, 3), 1)
    certificate = similarity_certificate(base, tripled)
    assert certificate.verdict == Verdict.INCONCLUSIVE
    assert certificate.forced_scale == "9"

    lipschitz = _lattice("lipschitz")
    certificate = similarity_certificate(lipschitz, base)
    assert certificate.verdict == Verdict.DISPROVEN
    assert certificate.forced_scale == "1/2^(1/2)"
    assert certificate.forced_minimum == "2^(1/2)"

    ideal = build_lattice(left_multiply(hurwitz.algebra.element([1, 1, 0, 0]), hurwitz.order), 1)
    certificate = similarity_certificate(base, ideal)
    # (1+i)O is similar to O with r = 2
    assert certificate.verdict == Verdict.INCONCLUSIVE
    assert certificate.forced_minimum == "4"

    with pytest.raises(ShapeError):
        similarity_certificate(base, _lattice("sqrt3_order"))


@pytest.mark.parametrize("name", ["hurwitz", "sqrt3_order", "zeta14"])
def test_conjugate_lattice_gram_is_invariant(name):
    """The basis u^-1 b_k u has the same Gram matrix for every invertible u."""
    problem = _problem(name)
    base = build_lattice(problem.order, problem.alpha)
    rng = random.Random(name)
    for _ in range(50):
        u, _ = random_principal_right_ideal(problem.order, rng)
        assert conjugate_lattice_gram(problem.order, u, problem.alpha) == base.gram


def test_real_generator_matrix():
    """M M^T reproduces the exact Gram matrix to the requested precision."""
    lattice = _lattice("sqrt3_ideal")
    matrix = generator_matrix_real(lattice, 64)
    assert matrix.shape == (8, 8)
    assert embedding_max_error(lattice, matrix) < 1e-9
    assert np.isfinite(matrix).all()


@pytest.mark.parametrize("name", [
    "lipschitz", "hurwitz", "b2_lambda3", "zeta14", "sqrt3_order", "sqrt3_ideal", "sqrt2_2O", "sqrt5_2I",
])
def test_lower_bound_on_random_ideals(name):
    """The bound holds on principal right ideals and is attained by the order itself."""
    problem = _problem(name)
    order_bound = min_lower_bound(build_lattice(problem.order, problem.alpha))
    assert order_bound.tight

    rng = random.Random(name)
    for _ in range(100):
        _, ideal = random_principal_right_ideal(problem.order, rng)
        bound = min_lower_bound(build_lattice(ideal, problem.alpha))
        assert bound.holds, (bound.lhs, bound.rhs)


@pytest.mark.parametrize("name", [
    "lipschitz", "hurwitz", "b2_lambda3", "zeta14", "sqrt3_order", "sqrt3_ideal", "sqrt2_2O", "sqrt5_2I",
])
def test_embedding_isometry(name):
    lattice = _lattice(name)
    assert embedding_max_error(lattice, generator_matrix_real(lattice, 64)) < 1e-9
