"""Problem documents: YAML descriptions of a field, an algebra, an order and an ideal."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from ..algebra.number_field import FieldElem, NumberField
from ..algebra.orders import (
    QuatModule,
    module_from_ok_generators,
    module_from_zbasis,
    order_from_ring_generators,
)
from ..algebra.quaternion import QuatAlgebra, QuatElem
from ..core.errors import ProblemSpecError
from .serialize import parse_rational

RawElem = Union[Fraction, List[Fraction]]
RawQuat = List[RawElem]


@dataclass
class FieldSpec:
    min_poly: List[Fraction]
    integral_basis: Optional[List[List[Fraction]]] = None
    name: Optional[str] = None

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1


@dataclass
class ModuleSpec:
    zbasis: Optional[List[RawQuat]] = None
    ok_generators: Optional[List[RawQuat]] = None
    ring_generators: Optional[List[RawQuat]] = None


@dataclass
class UnitGroupSpec:
    y: RawQuat
    x: Optional[RawQuat] = None
    z: Optional[RawQuat] = None


@dataclass
class ProblemSpec:
    name: str
    field: FieldSpec
    a: RawElem
    b: RawElem
    alpha: RawElem
    order: ModuleSpec
    ideal: Optional[ModuleSpec] = None
    unit_group: Optional[UnitGroupSpec] = None
    description: Optional[str] = None
    expected: Dict[str, Any] = field(default_factory=dict)
    source: Optional[str] = None
    digest: Optional[str] = None


@dataclass
class Problem:
    """A ProblemSpec turned into exact objects."""

    spec: ProblemSpec
    field: NumberField
    algebra: QuatAlgebra
    alpha: FieldElem
    order: QuatModule
    ideal: Optional[QuatModule] = None
    generators: Dict[str, QuatElem] = field(default_factory=dict)

    @property
    def lattice_module(self) -> QuatModule:
        """The module whose lattice is analyzed: the ideal when present, else the order."""
        return self.ideal if self.ideal is not None else self.order


_problem_cache: Dict[Tuple[str, str], ProblemSpec] = {}


def _load_yaml(path: Path) -> Dict[str, Any]:
    with path.open(encoding='utf-8') as fh:
        try:
            data = yaml.safe_load(fh) or {}
        except yaml.YAMLError as e:
            raise ProblemSpecError(f"Cannot parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ProblemSpecError(f"{path} must contain a mapping")
    return data


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    path = Path(path)
    if not path.exists():
        raise ProblemSpecError(f"Problem file not found: {path}")
    # keyed on content: an edited file is parsed again
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    key = (str(path.resolve()), digest)
    if key in _problem_cache:
        return _problem_cache[key]

    spec = parse_problem(_load_yaml(path), default_name=path.stem)
    spec.source = str(path)
    spec.digest = digest
    _problem_cache[key] = spec
    return spec


def parse_problem(data: Dict[str, Any], default_name: str = "problem") -> ProblemSpec:
    """Validate the document shape and convert every number to an exact rational."""
    field_data = _require_mapping(data, 'field')
    if 'min_poly' not in field_data:
        raise ProblemSpecError("field.min_poly is required")
    min_poly = _rational_list(field_data['min_poly'], 'field.min_poly')
    degree = len(min_poly) - 1
    if degree < 1:
        raise ProblemSpecError("field.min_poly must have degree at least 1")
    integral_basis = None
    if field_data.get('integral_basis') is not None:
        integral_basis = [
            _rational_list(row, f'field.integral_basis[{i}]', degree)
            for i, row in enumerate(_as_list(field_data['integral_basis'], 'field.integral_basis'))
        ]
    field_spec = FieldSpec(min_poly, integral_basis, field_data.get('name'))

    algebra_data = _require_mapping(data, 'algebra')
    for key in ('a', 'b'):
        if key not in algebra_data:
            raise ProblemSpecError(f"algebra.{key} is required")
    a = _raw_elem(algebra_data['a'], 'algebra.a', degree)
    b = _raw_elem(algebra_data['b'], 'algebra.b', degree)
    alpha = _raw_elem(data.get('alpha', 1), 'alpha', degree)

    order = _module_spec(_require_mapping(data, 'order'), 'order', degree)
    if not (order.zbasis or order.ok_generators or order.ring_generators):
        raise ProblemSpecError("order needs zbasis, ok_generators or ring_generators")
    ideal = None
    if data.get('ideal') is not None:
        ideal = _module_spec(_require_mapping(data, 'ideal'), 'ideal', degree)
        if ideal.ring_generators or not (ideal.zbasis or ideal.ok_generators):
            raise ProblemSpecError("ideal needs zbasis or ok_generators")

    unit_group = None
    if data.get('unit_group') is not None:
        group_data = _require_mapping(data, 'unit_group')
        if 'y' not in group_data:
            raise ProblemSpecError("unit_group.y is required")
        unit_group = UnitGroupSpec(
            y=_raw_quat(group_data['y'], 'unit_group.y', degree),
            x=_raw_quat(group_data['x'], 'unit_group.x', degree) if 'x' in group_data else None,
            z=_raw_quat(group_data['z'], 'unit_group.z', degree) if 'z' in group_data else None,
        )

    return ProblemSpec(
        name=str(data.get('name', default_name)),
        field=field_spec,
        a=a,
        b=b,
        alpha=alpha,
        order=order,
        ideal=ideal,
        unit_group=unit_group,
        description=data.get('description'),
        expected=dict(data.get('expected') or {}),
    )


def build_problem(spec: ProblemSpec, alpha: Optional[RawElem] = None,
                  debug_checks: bool = False) -> Problem:
    """Construct the field, algebra, order and ideal; mathematical failures raise PreconditionError."""
    number_field = NumberField(spec.field.min_poly, spec.field.integral_basis, name=spec.field.name)
    algebra = QuatAlgebra(number_field, spec.a, spec.b, debug_checks=debug_checks)
    alpha_elem = number_field.element(spec.alpha if alpha is None else alpha)
    order = _build_module(algebra, spec.order, 'order')
    ideal = _build_module(algebra, spec.ideal, 'ideal') if spec.ideal is not None else None
    generators = {}
    if spec.unit_group is not None:
        for name in ('x', 'y', 'z'):
            raw = getattr(spec.unit_group, name)
            if raw is not None:
                generators[name] = algebra.element(raw)
    return Problem(spec, number_field, algebra, alpha_elem, order, ideal, generators)


def parse_alpha(text: str, degree: int) -> RawElem:
    """Parse a --alpha value: "p/q" or comma-separated power-basis coefficients."""
    parts = [p for p in text.split(',') if p.strip()]
    if len(parts) == 1:
        return parse_rational(parts[0], 'alpha')
    return _raw_elem(parts, 'alpha', degree)


def _build_module(algebra: QuatAlgebra, spec: ModuleSpec, where: str) -> QuatModule:
    candidates = []
    if spec.zbasis:
        candidates.append(module_from_zbasis(algebra, spec.zbasis))
    if spec.ok_generators:
        candidates.append(module_from_ok_generators(algebra, spec.ok_generators))
    if spec.ring_generators:
        candidates.append(order_from_ring_generators(algebra, spec.ring_generators))
    first = candidates[0]
    for other in candidates[1:]:
        if other != first:
            raise ProblemSpecError(f"{where}: the given presentations describe different modules")
    return first


def _require_mapping(data: Dict[str, Any], key: str) -> Dict[str, Any]:
    value = data.get(key)
    if not isinstance(value, dict):
        raise ProblemSpecError(f"'{key}' must be a mapping")
    return value


def _as_list(value: Any, where: str) -> List[Any]:
    if not isinstance(value, list):
        raise ProblemSpecError(f"{where} must be a list")
    return value


def _rational_list(value: Any, where: str, length: Optional[int] = None) -> List[Fraction]:
    items = _as_list(value, where)
    if length is not None and len(items) != length:
        raise ProblemSpecError(f"{where} must have {length} entries, got {len(items)}")
    return [parse_rational(v, f"{where}[{i}]") for i, v in enumerate(items)]


def _raw_elem(value: Any, where: str, degree: int) -> RawElem:
    if isinstance(value, list):
        return _rational_list(value, where, degree)
    return parse_rational(value, where)


def _raw_quat(value: Any, where: str, degree: int) -> RawQuat:
    items = _as_list(value, where)
    if len(items) != 4:
        raise ProblemSpecError(f"{where} must have 4 coordinates (1, i, j, ij), got {len(items)}")
    return [_raw_elem(v, f"{where}[{i}]", degree) for i, v in enumerate(items)]


def _module_spec(data: Dict[str, Any], where: str, degree: int) -> ModuleSpec:
    lists = {}
    for key in ('zbasis', 'ok_generators', 'ring_generators'):
        if data.get(key) is not None:
            lists[key] = [
                _raw_quat(q, f"{where}.{key}[{i}]", degree)
                for i, q in enumerate(_as_list(data[key], f"{where}.{key}"))
            ]
    if 'zbasis' in lists and len(lists['zbasis']) != 4 * degree:
        raise ProblemSpecError(f"{where}.zbasis must list {4 * degree} elements, got {len(lists['zbasis'])}")
    return ModuleSpec(**lists)
