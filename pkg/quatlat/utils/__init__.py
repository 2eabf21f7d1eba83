"""Input documents and result serialization."""

from .problem import Problem, ProblemSpec, build_problem, load_problem
from .serialize import dump_json, parse_rational

__all__ = [
    'Problem',
    'ProblemSpec',
    'build_problem',
    'load_problem',
    'dump_json',
    'parse_rational'
]
