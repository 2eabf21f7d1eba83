"""Tests for quaternion algebra arithmetic and the trace form."""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from quatlat.algebra.number_field import NumberField, rationals
from quatlat.algebra.quaternion import QuatAlgebra
from quatlat.core.errors import (
    ConsistencyError,
    FieldDivisionError,
    NotTotallyDefiniteError,
    NotTotallyPositiveError,
    PreconditionError,
    ShapeError,
)
from quatlat.utils.problem import build_problem, load_problem

FIXTURES = Path(__file__).parent / "fixtures"


def hamilton(**kwargs):
    return QuatAlgebra(rationals(), -1, -1, **kwargs)


def test_multiplication_rules():
    algebra = hamilton()
    one, i, j, ij = algebra.basis()
    assert i * i == -one
    assert j * j == -one
    assert i * j == ij
    assert j * i == -ij
    assert ij * ij == -one


def test_general_parameters():
    """i^2 = a, j^2 = b, (ij)^2 = -ab."""
    algebra = QuatAlgebra(rationals(), -2, -3)
    one, i, j, ij = algebra.basis()
    assert i * i == one * -2
    assert j * j == one * -3
    assert ij * ij == one * -6
    assert i * j == -(j * i)


def test_reduced_norm_trace_and_inverse():
    algebra = hamilton(debug_checks=True)
    h = algebra.element(["1/2", "1/2", "1/2", "1/2"])
    assert h.reduced_norm().rational_value() == 1
    assert h.reduced_trace().rational_value() == 1
    assert h * h.inverse() == algebra.one()
    assert h ** 6 == algebra.one()
    assert h * h.conj() == algebra.scalar(h.reduced_norm())
    with pytest.raises(FieldDivisionError):
        algebra.zero().inverse()


def test_trace_form():
    """b_alpha(x, x) = Tr(2 alpha nrd(x))."""
    algebra = hamilton()
    one, i, j, ij = algebra.basis()
    assert algebra.trace_form(1, i, i) == 2
    assert algebra.trace_form(1, i, j) == 0
    assert algebra.trace_form(Fraction(1, 2), one + i, one + i) == 2


def test_definiteness():
    assert hamilton().is_totally_definite()
    indefinite = QuatAlgebra(rationals(), 1, -1)
    assert not indefinite.is_totally_definite()
    with pytest.raises(NotTotallyDefiniteError):
        indefinite.trace_form(1, indefinite.one(), indefinite.one())
    with pytest.raises(NotTotallyDefiniteError):
        QuatAlgebra(rationals(), 1, -1, require_definite=True)
    with pytest.raises(PreconditionError):
        QuatAlgebra(rationals(), 0, -1)


def test_trace_form_over_real_quadratic_field():
    """alpha must be positive at every real embedding."""
    field = NumberField([1, 0, -2])
    t = field.gen()
    algebra = QuatAlgebra(field, -1, t - 2, require_definite=True)
    x = algebra.element([1, t, 0, 0])
    # nrd(x) = 1 + t^2 = 3, so Tr(2 * 3) = 12
    assert algebra.trace_form(1, x, x) == 12
    assert algebra.trace_form(t + 2, x, x) == 24
    with pytest.raises(NotTotallyPositiveError):
        algebra.trace_form(t, x, x)


def test_shape_checks():
    algebra = hamilton()
    with pytest.raises(ShapeError):
        algebra.element([1, 0, 0])
    other = QuatAlgebra(rationals(), -1, -3)
    with pytest.raises(ShapeError):
        algebra.one() + other.one()


def test_debug_checks_catch_nothing_on_valid_input():
    """The redundant trace computation agrees with the norm form."""
    algebra = hamilton(debug_checks=True)
    x = algebra.element([1, 2, 3, 4])
    y = algebra.element([0, 1, -1, "1/2"])
    try:
        value = algebra.trace_form(1, x, y)
    except ConsistencyError:
        pytest.fail("trace form consistency check failed")
    assert value == 2 * (0 + 2 - 3 + 2)


@pytest.mark.parametrize("name", ["hurwitz", "zeta14"])
def test_algebra_properties(name):
    """Multiplicativity, anti-automorphism, associativity, adjunction and positivity."""
    problem = build_problem(load_problem(FIXTURES / f"{name}.yaml"))
    algebra = problem.algebra
    rng = random.Random(name)

    def sample():
        while True:
            x = problem.order.element([rng.randint(-3, 3) for _ in problem.order.basis])
            if not x.is_zero():
                return x

    for _ in range(20):
        x, y, z = sample(), sample(), sample()
        assert (x * y).reduced_norm() == x.reduced_norm() * y.reduced_norm()
        assert (x * y).conj() == y.conj() * x.conj()
        assert (x * y) * z == x * (y * z)
        assert algebra.trace_form(problem.alpha, z * x, y) == algebra.trace_form(problem.alpha, x, z.conj() * y)
        assert algebra.trace_form(problem.alpha, x, x) > 0
