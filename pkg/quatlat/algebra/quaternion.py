"""Quaternion algebras (a, b / K) over totally real number fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from ..core.errors import (
    ConsistencyError,
    FieldDivisionError,
    NotTotallyDefiniteError,
    NotTotallyPositiveError,
    PreconditionError,
    ShapeError,
)
from .number_field import FieldElem, NumberField, Scalar

ElemLike = Union[FieldElem, Scalar, Sequence[Scalar]]


class QuatAlgebra:
    """The algebra with basis 1, i, j, ij where i^2 = a, j^2 = b, ij = -ji."""

    def __init__(self, field: NumberField, a: ElemLike, b: ElemLike,
                 require_definite: bool = False, debug_checks: bool = False):
        self.field = field
        self.a = field.element(a)
        self.b = field.element(b)
        if self.a.is_zero() or self.b.is_zero():
            raise PreconditionError("quaternion algebra parameters must be nonzero")
        self.ab = self.a * self.b
        self.debug_checks = debug_checks
        self._definite = None
        if require_definite and not self.is_totally_definite():
            raise NotTotallyDefiniteError(
                f"({self.a}, {self.b}) is not negative at every real embedding"
            )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, QuatAlgebra):
            return NotImplemented
        return (self.field, self.a, self.b) == (other.field, other.a, other.b)

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def __repr__(self):
        return f"QuatAlgebra(({self.a}, {self.b}) / {self.field!r})"

    @property
    def dimension(self) -> int:
        """Dimension over Q."""
        return 4 * self.field.degree

    def is_totally_definite(self) -> bool:
        """True iff a and b are negative at every real embedding of K."""
        if self._definite is None:
            self._definite = self.a.is_totally_negative() and self.b.is_totally_negative()
        return self._definite

    def element(self, coords: Union["QuatElem", Sequence[ElemLike]]) -> "QuatElem":
        if isinstance(coords, QuatElem):
            return coords
        if len(coords) != 4:
            raise ShapeError(f"a quaternion needs 4 coordinates, got {len(coords)}")
        return QuatElem(self, tuple(self.field.element(c) for c in coords))

    def scalar(self, value: ElemLike) -> "QuatElem":
        zero = self.field.zero()
        return QuatElem(self, (self.field.element(value), zero, zero, zero))

    def one(self) -> "QuatElem":
        return self.scalar(1)

    def zero(self) -> "QuatElem":
        return self.scalar(0)

    def basis(self) -> Tuple["QuatElem", ...]:
        """The K-basis 1, i, j, ij."""
        one, zero = self.field.one(), self.field.zero()
        return tuple(
            QuatElem(self, tuple(one if k == c else zero for k in range(4))) for c in range(4)
        )

    def multiply(self, x: "QuatElem", y: "QuatElem") -> "QuatElem":
        x0, x1, x2, x3 = x.coords
        y0, y1, y2, y3 = y.coords
        a, b, ab = self.a, self.b, self.ab
        return QuatElem(self, (
            x0 * y0 + a * (x1 * y1) + b * (x2 * y2) - ab * (x3 * y3),
            x0 * y1 + x1 * y0 - b * (x2 * y3) + b * (x3 * y2),
            x0 * y2 + x2 * y0 + a * (x1 * y3) - a * (x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def norm_form(self, x: "QuatElem", y: "QuatElem") -> FieldElem:
        """The scalar part of x * conj(y)."""
        x0, x1, x2, x3 = x.coords
        y0, y1, y2, y3 = y.coords
        return x0 * y0 - self.a * (x1 * y1) - self.b * (x2 * y2) + self.ab * (x3 * y3)

    def trace_form(self, alpha: ElemLike, x: "QuatElem", y: "QuatElem") -> Fraction:
        """b_alpha(x, y) = Tr_{K/Q}(trd(alpha * x * conj(y)))."""
        alpha = self.field.element(alpha)
        if not self.is_totally_definite():
            raise NotTotallyDefiniteError("trace form needs a totally definite algebra")
        if not alpha.is_totally_positive():
            raise NotTotallyPositiveError(f"alpha = {alpha} is not totally positive")
        return self.trace_form_unchecked(alpha, x, y)

    def trace_form_unchecked(self, alpha: FieldElem, x: "QuatElem", y: "QuatElem") -> Fraction:
        value = (alpha * self.norm_form(x, y) * 2).trace()
        if self.debug_checks:
            direct = (alpha * (x * y.conj()).reduced_trace()).trace()
            if direct != value:
                raise ConsistencyError(f"trace form mismatch: {value} != {direct}")
        return value


@dataclass(frozen=True)
class QuatElem:
    """x0 + x1 i + x2 j + x3 ij."""

    algebra: QuatAlgebra
    coords: Tuple[FieldElem, FieldElem, FieldElem, FieldElem]

    def _coerce(self, other) -> "QuatElem":
        if isinstance(other, QuatElem):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise ShapeError("quaternions belong to different algebras")
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return QuatElem(self.algebra, tuple(p + q for p, q in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElem(self.algebra, tuple(-p for p in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, QuatElem):
            return self.algebra.multiply(self, self._coerce(other))
        if isinstance(other, FieldElem) or isinstance(other, (int, Fraction)):
            return QuatElem(self.algebra, tuple(p * other for p in self.coords))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, FieldElem) or isinstance(other, (int, Fraction)):
            return QuatElem(self.algebra, tuple(other * p for p in self.coords))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, QuatElem):
            return self * other.inverse()
        if isinstance(other, FieldElem):
            return self * other.inverse()
        if other == 0:
            raise FieldDivisionError("division by zero in quaternion algebra")
        return QuatElem(self.algebra, tuple(p / other for p in self.coords))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.algebra.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> "QuatElem":
        x0, x1, x2, x3 = self.coords
        return QuatElem(self.algebra, (x0, -x1, -x2, -x3))

    def reduced_trace(self) -> FieldElem:
        return self.coords[0] * 2

    def reduced_norm(self) -> FieldElem:
        value = self.algebra.norm_form(self, self)
        if self.algebra.debug_checks:
            product = self * self.conj()
            if product != self.algebra.scalar(value):
                raise ConsistencyError(f"reduced norm mismatch for {self}")
        return value

    def inverse(self) -> "QuatElem":
        norm = self.reduced_norm()
        if norm.is_zero():
            raise FieldDivisionError(f"{self} is not invertible")
        inv = norm.inverse()
        return QuatElem(self.algebra, tuple(p * inv for p in self.conj().coords))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coords)

    def is_one(self) -> bool:
        return self == self.algebra.one()

    def key(self) -> Tuple[Fraction, ...]:
        return tuple(c for p in self.coords for c in p.coeffs)

    def __str__(self):
        labels = ("", "i", "j", "ij")
        parts = []
        for label, p in zip(labels, self.coords):
            if p.is_zero():
                continue
            text = str(p)
            parts.append(f"({text}){label}" if label else f"({text})")
        return " + ".join(parts) if parts else "0"
