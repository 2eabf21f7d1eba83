"""Tests for the exact linear algebra and enumeration kernels."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from quatlat.core.arith import (
    IntLatticeBasis,
    RatMatrix,
    apply_transform,
    det_exact,
    enumerate_up_to,
    greedy_independent,
    hnf,
    is_positive_definite,
    ldl,
    lll_reduce,
    rank_over_Q,
    shortest_vectors,
    to_fraction,
)
from quatlat.core.errors import EnumerationBudgetExceeded, NotPositiveDefiniteError, ShapeError

D4 = RatMatrix.from_rows([[2, 0, 0, 1], [0, 2, 0, 1], [0, 0, 2, 1], [1, 1, 1, 2]])


def test_to_fraction_refuses_floats():
    """Only exact values become rationals."""
    assert to_fraction("3/6") == Fraction(1, 2)
    assert to_fraction(4) == Fraction(4)
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_matrix_shapes():
    """Ragged or mismatched matrices raise ShapeError."""
    with pytest.raises(ShapeError):
        RatMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ShapeError):
        RatMatrix.from_rows([[1, 2]]) @ RatMatrix.from_rows([[1, 2]])
    with pytest.raises(ShapeError):
        det_exact(RatMatrix.from_rows([[1, 2]]))


def test_det_rank_and_inverse():
    """Determinants, ranks and inverses are exact."""
    m = RatMatrix.from_rows([[2, 1], [1, 2]])
    assert det_exact(m) == 3
    assert det_exact(m.scale(Fraction(1, 2))) == Fraction(3, 4)
    assert m @ m.inverse() == RatMatrix.identity(2)
    assert rank_over_Q(RatMatrix.from_rows([[1, 2], [2, 4]])) == 1
    with pytest.raises(ShapeError):
        RatMatrix.from_rows([[1, 2], [2, 4]]).inverse()


def test_hnf_rank_and_pivots():
    """The HNF drops dependent rows and records pivot columns."""
    result = hnf([[2, 0, 0], [1, 1, 0], [3, 1, 0]])
    assert result.rank == 2
    assert result.pivots == (0, 1)
    assert hnf([[0, 0]]).rank == 0


def test_lattice_basis_is_canonical():
    """Different generating sets of one module give equal bases."""
    first = IntLatticeBasis.from_rational_rows([["1/2", 0], [0, "1/2"]])
    second = IntLatticeBasis.from_rational_rows([["1/2", "1/2"], [0, "1/2"], [1, 1]])
    assert first == second
    assert first.covolume() == Fraction(1, 4)
    assert first.contains([Fraction(1, 2), Fraction(3, 2)])
    assert not first.contains([Fraction(1, 4), 0])
    assert first.coefficients([1, 0]) is not None


def test_lattice_basis_covolume_needs_full_rank():
    lattice = IntLatticeBasis.from_rational_rows([[1, 1]])
    assert lattice.rank == 1
    with pytest.raises(ShapeError):
        lattice.covolume()


def test_ldl_and_definiteness():
    """LDL^T reproduces the matrix; indefinite input is rejected."""
    mu, d = ldl(D4)
    n = D4.nrows
    for i in range(n):
        for j in range(n):
            assert sum(mu[i][k] * d[k] * mu[j][k] for k in range(n)) == D4[i][j]
    assert is_positive_definite(D4)
    assert not is_positive_definite(RatMatrix.from_rows([[1, 2], [2, 1]]))
    with pytest.raises(NotPositiveDefiniteError):
        ldl(RatMatrix.from_rows([[1, 2], [3, 1]]))


def test_lll_reduce_is_exact_change_of_basis():
    """reduced = U G U^T with U unimodular."""
    gram = RatMatrix.from_rows([[1, 5], [5, 26]])
    reduced, transform = lll_reduce(gram)
    u = RatMatrix.from_rows(transform)
    assert u @ gram @ u.transpose() == reduced
    assert abs(det_exact(u)) == 1
    assert reduced == RatMatrix.identity(2)
    with pytest.raises(ValueError):
        lll_reduce(gram, Fraction(1, 5))


def test_enumerate_up_to():
    """All vectors of norm at most the bound, in +/- pairs."""
    vectors = enumerate_up_to(RatMatrix.identity(2), 1)
    assert vectors == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(enumerate_up_to(RatMatrix.identity(3), 2)) == 18
    with pytest.raises(ValueError):
        enumerate_up_to(RatMatrix.identity(2), 0)


def test_enumeration_budget():
    """Exceeding the node budget raises instead of running on."""
    with pytest.raises(EnumerationBudgetExceeded) as exc:
        enumerate_up_to(RatMatrix.identity(4), 10, budget=5)
    assert exc.value.budget == 5
    assert exc.value.exit_code == 4


def test_shortest_vectors_root_lattices():
    """Kissing numbers of A2 and D4."""
    minimum, vectors = shortest_vectors(RatMatrix.from_rows([[2, 1], [1, 2]]))
    assert minimum == 2
    assert len(vectors) == 6

    minimum, vectors = shortest_vectors(D4)
    assert minimum == 2
    assert len(vectors) == 24
    assert all(D4.quadratic_form(v) == 2 for v in vectors)


def test_shortest_vectors_in_input_coordinates():
    """Vectors are reported in the unreduced basis."""
    gram = RatMatrix.from_rows([[1, 5], [5, 26]])
    minimum, vectors = shortest_vectors(gram)
    assert minimum == 1
    assert all(gram.quadratic_form(v) == 1 for v in vectors)
    assert len(vectors) == 4


def test_apply_transform_and_greedy_independent():
    assert apply_transform((1, 1), ((1, 0), (0, 2))) == (1, 2)
    assert greedy_independent([(1, 0), (2, 0), (0, 1), (1, 1)]) == [0, 2]
    assert greedy_independent([(1, 0, 0), (0, 1, 0), (0, 0, 1)], limit=2) == [0, 1]


def _brute_force(rows, bound):
    # gram >= identity, so every coordinate satisfies x_i^2 <= bound
    radius = math.isqrt(bound)
    grid = np.array(list(itertools.product(range(-radius, radius + 1), repeat=len(rows))))
    gram = np.array(rows)
    norms = np.einsum('ij,jk,ik->i', grid, gram, grid)
    keep = (norms <= bound) & grid.any(axis=1)
    return sorted(tuple(int(e) for e in row) for row in grid[keep])


def _cofactor_det(rows):
    if len(rows) == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for c, entry in enumerate(rows[0]):
        minor = [row[:c] + row[c + 1:] for row in rows[1:]]
        total += (-1) ** c * Fraction(entry) * _cofactor_det(minor)
    return total


def test_enumeration_matches_box_search():
    """Fincke-Pohst agrees with exhaustive search on random positive definite Grams."""
    rng = random.Random(2024)
    for _ in range(500):
        n = rng.randint(1, 4)
        b = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        rows = [[sum(b[i][k] * b[j][k] for k in range(n)) + (i == j) for j in range(n)] for i in range(n)]
        bound = rng.randint(1, 20)
        assert enumerate_up_to(RatMatrix.from_rows(rows), bound) == _brute_force(rows, bound)


def test_hnf_is_idempotent():
    rng = random.Random(11)
    for _ in range(50):
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(rng.randint(1, 6))]
        once = hnf(rows)
        assert hnf(once.rows) == once


def test_det_matches_cofactor_expansion():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 5)
        rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        assert det_exact(RatMatrix.from_rows(rows)) == _cofactor_det(rows)


def _random_unimodular(n, rng):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            factor = rng.randint(-2, 2)
            rows[i] = [a + factor * b for a, b in zip(rows[i], rows[j])]
        if rng.random() < 0.3:
            rows[i] = [-a for a in rows[i]]
    return RatMatrix.from_rows(rows)


def _random_gram(n, rng):
    b = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    return RatMatrix.from_rows(
        [[sum(b[i][k] * b[j][k] for k in range(n)) + (i == j) for j in range(n)] for i in range(n)]
    )


def test_det_is_invariant_under_unimodular_change():
    rng = random.Random(31)
    for _ in range(100):
        n = rng.randint(1, 6)
        gram = _random_gram(n, rng)
        u = _random_unimodular(n, rng)
        assert abs(det_exact(u)) == 1
        assert det_exact(u @ gram @ u.transpose()) == det_exact(gram)


def test_lll_keeps_determinant_and_is_unimodular():
    rng = random.Random(37)
    for _ in range(100):
        n = rng.randint(1, 6)
        gram = _random_gram(n, rng)
        change = _random_unimodular(n, rng)
        skewed = change @ gram @ change.transpose()
        reduced, transform = lll_reduce(skewed)
        u = RatMatrix.from_rows(transform)
        assert abs(det_exact(u)) == 1
        assert u @ skewed @ u.transpose() == reduced
        assert det_exact(reduced) == det_exact(gram)
