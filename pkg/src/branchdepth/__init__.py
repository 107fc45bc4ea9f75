"""Matroid branch-depth toolkit."""
from .algebra import FieldSpec, Rational, collinear, field_build, matrix_rank
from .kernels import BACKEND

__version__ = "0.1.0"
