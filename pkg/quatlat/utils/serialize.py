"""Exact-value serialization: rationals travel as "p/q" strings."""

import json
from enum import Enum
from fractions import Fraction
from typing import Any, List

from ..algebra.number_field import FieldElem
from ..algebra.quaternion import QuatElem
from ..core.arith import RatMatrix
from ..core.errors import ProblemSpecError


def rational_str(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(value: Any, where: str = "value") -> Fraction:
    """Parse an int or a "p/q" string; floats are rejected as inexact."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ProblemSpecError(f"{where}: {value!r} is not an exact rational; write it as a \"p/q\" string")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ProblemSpecError(f"{where}: cannot parse {value!r} as a rational") from e
    raise ProblemSpecError(f"{where}: expected a rational, got {type(value).__name__}")


def matrix_to_json(matrix: RatMatrix) -> List[List[str]]:
    return [[rational_str(e) for e in row] for row in matrix]


def field_elem_to_json(x: FieldElem) -> List[str]:
    return [rational_str(c) for c in x.coeffs]


def quat_to_json(x: QuatElem) -> List[List[str]]:
    return [field_elem_to_json(c) for c in x.coords]


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, RatMatrix):
        return matrix_to_json(obj)
    if isinstance(obj, QuatElem):
        return quat_to_json(obj)
    if isinstance(obj, FieldElem):
        return field_elem_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(document: Any, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, exact values as strings."""
    return json.dumps(to_jsonable(document), indent=indent, sort_keys=True)
