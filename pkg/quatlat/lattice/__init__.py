"""Ideal lattices and the norm one groups of orders."""

from .ideal_lattice import (
    IdealLattice,
    MinimalVectorSet,
    SimilarityCertificate,
    Verdict,
    build_lattice,
    minimal_vectors,
    similarity_certificate,
)
from .unit_group import (
    FiniteUnitGroup,
    GroupClass,
    GroupVariant,
    classification_table,
    classify,
    enumerate_norm_one,
    predict_well_rounded,
)

__all__ = [
    'IdealLattice',
    'MinimalVectorSet',
    'SimilarityCertificate',
    'Verdict',
    'build_lattice',
    'minimal_vectors',
    'similarity_certificate',
    'FiniteUnitGroup',
    'GroupClass',
    'GroupVariant',
    'classification_table',
    'classify',
    'enumerate_norm_one',
    'predict_well_rounded'
]
