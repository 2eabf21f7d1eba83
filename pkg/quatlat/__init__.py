"""Ideal lattices from totally definite quaternion algebras."""

__version__ = "0.1.0"
__author__ = "quatlat developers"

from .cli import QuatLatCLI, main

__all__ = ['__version__', '__author__', 'QuatLatCLI', 'main']
