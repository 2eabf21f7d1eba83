"""Totally real number fields K = Q[X]/(f) with exact arithmetic.

Elements are coefficient vectors in the power basis 1, theta, ..., theta^(n-1).
Real embeddings are pinned by rational isolating intervals for the roots of f,
sorted ascending, and refined on demand.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Poly, Rational as SympyRational, Symbol, cyclotomic_poly, resultant, totient
from sympy.polys.domains import QQ

from ..core.arith import RatMatrix, det_exact, rank_over_Q, to_fraction
from ..core.errors import (
    FieldDivisionError,
    NotTotallyRealError,
    PreconditionError,
    ReduciblePolynomialError,
    ShapeError,
)

Interval = Tuple[Fraction, Fraction]
Scalar = Union[int, Fraction, str]
_OPERANDS = (int, Fraction, str)

_X = Symbol('X')


def _sympy_rational(value: Fraction) -> SympyRational:
    return SympyRational(value.numerator, value.denominator)


def interval_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _interval_horner(coeffs: Sequence[Fraction], point: Interval) -> Interval:
    """Enclosure of sum coeffs[k] * t^k for t in point."""
    acc = (coeffs[-1], coeffs[-1])
    for c in reversed(coeffs[:-1]):
        lo, hi = interval_mul(acc, point)
        acc = (lo + c, hi + c)
    return acc


class NumberField:
    """A totally real number field with a supplied integral basis."""

    def __init__(self, min_poly: Sequence[Scalar],
                 integral_basis: Optional[Sequence[Sequence[Scalar]]] = None,
                 name: Optional[str] = None):
        coeffs = [to_fraction(c) for c in min_poly]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        if len(coeffs) < 2:
            raise PreconditionError("defining polynomial must have degree at least 1")
        if coeffs[0] != 1:
            raise PreconditionError(f"defining polynomial must be monic, leading coefficient is {coeffs[0]}")

        self.min_poly: Tuple[Fraction, ...] = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.name = name
        self._poly = Poly([_sympy_rational(c) for c in coeffs], _X, domain=QQ)

        if not self._poly.is_irreducible:
            raise ReduciblePolynomialError(f"{self._poly.as_expr()} is reducible over Q")
        real_roots = self._poly.count_roots()
        if real_roots != self.degree:
            raise NotTotallyRealError(
                f"{self._poly.as_expr()} has {real_roots} real roots out of {self.degree}"
            )

        self._lock = threading.Lock()
        self._roots: List[Interval] = [
            (to_fraction(lo), to_fraction(hi)) for (lo, hi), _ in self._poly.intervals()
        ]
        self._power_table = self._build_power_table()
        self._power_traces = tuple(
            sum((self._power_table[k + i][i] for i in range(self.degree)), Fraction(0))
            for k in range(self.degree)
        )

        if integral_basis is None:
            basis_rows = [[Fraction(int(i == j)) for j in range(self.degree)] for i in range(self.degree)]
        else:
            basis_rows = [self._coerce_coeffs(row) for row in integral_basis]
        self._basis_matrix = RatMatrix.from_rows(basis_rows)
        self._is_power_basis = integral_basis is None
        self._validate_integral_basis()
        self._basis_inverse = self._basis_matrix.inverse()

    # construction helpers

    def _build_power_table(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Coefficient vectors of theta^k for k < 2n - 1."""
        n = self.degree
        tail = [c for c in reversed(self.min_poly[1:])]  # ascending, f = X^n + sum tail[k] X^k
        table = []
        current = [Fraction(0)] * n
        current[0] = Fraction(1)
        for k in range(2 * n - 1):
            table.append(tuple(current))
            top = current[-1]
            shifted = [Fraction(0)] + current[:-1]
            current = [shifted[i] - top * tail[i] for i in range(n)]
        return tuple(table)

    def _coerce_coeffs(self, coeffs: Sequence[Scalar]) -> Tuple[Fraction, ...]:
        values = [to_fraction(c) for c in coeffs]
        if len(values) != self.degree:
            raise ShapeError(f"expected {self.degree} coefficients, got {len(values)}")
        return tuple(values)

    def _validate_integral_basis(self):
        if rank_over_Q(self._basis_matrix) != self.degree:
            raise ShapeError("integral basis does not have full rank")
        if self._is_power_basis:
            return
        inverse = self._basis_matrix.inverse()
        basis = self.integral_basis()
        for x in basis:
            for y in basis:
                coords = RatMatrix((tuple((x * y).coeffs),)) @ inverse
                if any(c.denominator != 1 for c in coords[0]):
                    raise PreconditionError("integral basis is not closed under multiplication")

    # identity

    def _key(self):
        return self.min_poly, self._basis_matrix.rows

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = self.name or str(self._poly.as_expr())
        return f"NumberField({label})"

    def defining_polynomial(self) -> str:
        """The defining polynomial in the variable t, e.g. 't**2 - 2'."""
        return str(self._poly.as_expr()).replace('X', 't')

    # elements

    def element(self, coeffs: Union[Scalar, Sequence[Scalar]]) -> "FieldElem":
        """Build an element from power-basis coefficients or a rational constant."""
        if isinstance(coeffs, FieldElem):
            return coeffs
        if isinstance(coeffs, (list, tuple)):
            return FieldElem(self, self._coerce_coeffs(coeffs))
        return self.scalar(coeffs)

    def scalar(self, value: Scalar) -> "FieldElem":
        values = [Fraction(0)] * self.degree
        values[0] = to_fraction(value)
        return FieldElem(self, tuple(values))

    def zero(self) -> "FieldElem":
        return self.scalar(0)

    def one(self) -> "FieldElem":
        return self.scalar(1)

    def gen(self) -> "FieldElem":
        if self.degree == 1:
            return self.scalar(-self.min_poly[1])
        values = [Fraction(0)] * self.degree
        values[1] = Fraction(1)
        return FieldElem(self, tuple(values))

    def integral_basis(self) -> Tuple["FieldElem", ...]:
        return tuple(FieldElem(self, row) for row in self._basis_matrix.rows)

    def integral_coordinates(self, x: "FieldElem") -> Tuple[Fraction, ...]:
        """Coordinates of x in the integral basis."""
        if self._is_power_basis:
            return x.coeffs
        return (RatMatrix((x.coeffs,)) @ self._basis_inverse)[0]

    def from_integral_coordinates(self, coords: Sequence[Scalar]) -> "FieldElem":
        coords = [to_fraction(c) for c in coords]
        if self._is_power_basis:
            return FieldElem(self, tuple(coords))
        return FieldElem(self, (RatMatrix((tuple(coords),)) @ self._basis_matrix)[0])

    # arithmetic on coefficient vectors

    def _multiply(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        n = self.degree
        conv = [Fraction(0)] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        result = list(conv[:n])
        for k in range(n, 2 * n - 1):
            ck = conv[k]
            if ck:
                row = self._power_table[k]
                for i in range(n):
                    result[i] += ck * row[i]
        return tuple(result)

    def _inverse(self, a: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        if not any(a):
            raise FieldDivisionError("division by zero in number field")
        g = Poly([_sympy_rational(c) for c in reversed(a)], _X, domain=QQ)
        inverse = g.invert(self._poly)
        coeffs = [to_fraction(c) for c in reversed(inverse.all_coeffs())]
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return tuple(coeffs)

    def multiplication_matrix(self, x: "FieldElem") -> RatMatrix:
        """Rows are the coefficient vectors of x * theta^i."""
        return RatMatrix(tuple(self._multiply(x.coeffs, self._power_table[i]) for i in range(self.degree)))

    def trace(self, x: "FieldElem") -> Fraction:
        return sum((c * t for c, t in zip(x.coeffs, self._power_traces)), Fraction(0))

    def norm(self, x: "FieldElem") -> Fraction:
        return det_exact(self.multiplication_matrix(x))

    # real embeddings

    def root_interval(self, index: int) -> Interval:
        return self._roots[index]

    def _refine_root(self, index: int):
        with self._lock:
            lo, hi = self._roots[index]
            if lo == hi:
                return
            new_lo, new_hi = self._poly.refine_root(
                _sympy_rational(lo), _sympy_rational(hi), eps=_sympy_rational((hi - lo) / 4)
            )
            self._roots[index] = (to_fraction(new_lo), to_fraction(new_hi))

    def _enclose(self, x: "FieldElem", index: int) -> Interval:
        return _interval_horner(x.coeffs, self._roots[index])

    def signs(self, x: "FieldElem") -> Tuple[int, ...]:
        """Exact signs of x at every real embedding, in ascending root order."""
        if x.is_zero():
            raise FieldDivisionError("sign of zero is undefined")
        signs = []
        for index in range(self.degree):
            while True:
                lo, hi = self._enclose(x, index)
                if lo > 0:
                    signs.append(1)
                    break
                if hi < 0:
                    signs.append(-1)
                    break
                self._refine_root(index)
        return tuple(signs)

    def embed(self, x: "FieldElem", precision_bits: int = 64) -> List[Interval]:
        """Enclosures of sigma_1(x), ..., sigma_n(x), each narrower than 2^-precision_bits."""
        width = Fraction(1, 2 ** precision_bits)
        result = []
        for index in range(self.degree):
            while True:
                lo, hi = self._enclose(x, index)
                if hi - lo < width:
                    result.append((lo, hi))
                    break
                self._refine_root(index)
        return result


@dataclass(frozen=True)
class FieldElem:
    """Element of a number field, stored by power-basis coefficients."""

    field: NumberField
    coeffs: Tuple[Fraction, ...]

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field != self.field:
                raise ShapeError("elements belong to different fields")
            return other
        return self.field.scalar(other)

    def __add__(self, other):
        if not isinstance(other, (FieldElem,) + _OPERANDS):
            return NotImplemented
        other = self._coerce(other)
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (FieldElem,) + _OPERANDS):
            return NotImplemented
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElem(self.field, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        return FieldElem(self.field, self.field._multiply(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field._inverse(self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise FieldDivisionError("division by zero in number field")
            return FieldElem(self.field, tuple(a / other for a in self.coeffs))
        return self * self._coerce(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def trace(self) -> Fraction:
        return self.field.trace(self)

    def norm(self) -> Fraction:
        return self.field.norm(self)

    def signs(self) -> Tuple[int, ...]:
        return self.field.signs(self)

    def is_totally_positive(self) -> bool:
        if self.is_zero():
            return False
        return all(s > 0 for s in self.signs())

    def is_totally_negative(self) -> bool:
        if self.is_zero():
            return False
        return all(s < 0 for s in self.signs())

    def embed(self, precision_bits: int = 64) -> List[Interval]:
        return self.field.embed(self, precision_bits)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{k}")
        return " + ".join(terms) if terms else "0"


def field_from_poly(coeffs: Sequence[Scalar], integral_basis: Optional[Sequence[Sequence[Scalar]]] = None,
                    name: Optional[str] = None) -> NumberField:
    """Construct a totally real field from a monic polynomial, leading coefficient first."""
    return NumberField(coeffs, integral_basis, name=name)


def rationals() -> NumberField:
    return NumberField([1, 0], name="Q")


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("Euler totient needs a positive integer")
    return int(totient(m))


def real_cyclotomic_field(two_m: int) -> NumberField:
    """Q(zeta + zeta^-1) for a primitive two_m-th root of unity zeta.

    The minimal polynomial of 2cos(2pi/two_m) is the squarefree part of the
    resultant of the cyclotomic polynomial with Y^2 - X*Y + 1 in Y.
    """
    if two_m < 3:
        raise ValueError("real cyclotomic fields need two_m >= 3")
    y = Symbol('Y')
    res = resultant(cyclotomic_poly(two_m, y), y ** 2 - _X * y + 1, y)
    minimal = Poly(res, _X, domain=QQ).sqf_part().monic()
    coeffs = [to_fraction(c) for c in minimal.all_coeffs()]
    name = "Q" if len(coeffs) == 2 else f"Q(zeta_{two_m} + zeta_{two_m}^-1)"
    return NumberField(coeffs, name=name)
