"""Core kernels: exact arithmetic, configuration, errors and check records."""

from .arith import (
    HNFResult,
    IntLatticeBasis,
    RatMatrix,
    det_exact,
    enumerate_up_to,
    hnf,
    lll_reduce,
    rank_over_Q,
    shortest_vectors,
)
from .config import ConfigManager, EnumerationConfig, OutputConfig, QuatLatConfig
from .errors import (
    ConsistencyError,
    EnumerationBudgetExceeded,
    PreconditionError,
    ProblemSpecError,
    QuatLatError,
)
from .validation import ValidationResult

__all__ = [
    'HNFResult',
    'IntLatticeBasis',
    'RatMatrix',
    'det_exact',
    'enumerate_up_to',
    'hnf',
    'lll_reduce',
    'rank_over_Q',
    'shortest_vectors',
    'ConfigManager',
    'EnumerationConfig',
    'OutputConfig',
    'QuatLatConfig',
    'ConsistencyError',
    'EnumerationBudgetExceeded',
    'PreconditionError',
    'ProblemSpecError',
    'QuatLatError',
    'ValidationResult'
]
