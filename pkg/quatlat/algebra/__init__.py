"""Number fields, quaternion algebras, orders and ideals."""

from .number_field import FieldElem, NumberField, euler_phi, field_from_poly, rationals, real_cyclotomic_field
from .quaternion import QuatAlgebra, QuatElem
from .orders import (
    OKIdealRep,
    QuatModule,
    is_order,
    left_order,
    module_from_ok_generators,
    module_from_zbasis,
    module_product,
    norm_of_ok_ideal,
    order_from_ring_generators,
    reduced_norm_ideal,
    right_order,
)

__all__ = [
    'FieldElem',
    'NumberField',
    'euler_phi',
    'field_from_poly',
    'rationals',
    'real_cyclotomic_field',
    'QuatAlgebra',
    'QuatElem',
    'OKIdealRep',
    'QuatModule',
    'is_order',
    'left_order',
    'module_from_ok_generators',
    'module_from_zbasis',
    'module_product',
    'norm_of_ok_ideal',
    'order_from_ring_generators',
    'reduced_norm_ideal',
    'right_order'
]
