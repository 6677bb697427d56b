"""Exact intersection theory on finite Chow-ring models, with the double
ramification cycle formulas for numerically trivial line bundles."""

from .errors import ChowError
from .ring import (
    GradedClass,
    RingModel,
    add,
    component,
    equal,
    exp_truncated,
    integrate,
    make_ring,
    mul,
    power,
    scalar_mul,
)

__version__ = "0.1.0"

__all__ = [
    "ChowError",
    "GradedClass",
    "RingModel",
    "add",
    "component",
    "equal",
    "exp_truncated",
    "integrate",
    "make_ring",
    "mul",
    "power",
    "scalar_mul",
]
