"""Finite doctrines, their checks, and the elementary quotient completion."""

from .builders import (
    powerset_doctrine,
    setoid_powerset_doctrine,
    subobject_doctrine,
    two_point_doctrine,
    weak_subobject_doctrine,
)
from .category import FinSet, FiniteCategory, SetoidCategory
from .completion import embed, lift_existential, q_quotient, quotient_completion
from .doctrine import Doctrine
from .io import emit, parse_doctrine
from .report import StructureReport

__all__ = [
    "Doctrine", "FinSet", "FiniteCategory", "SetoidCategory", "StructureReport",
    "embed", "emit", "lift_existential", "parse_doctrine", "powerset_doctrine",
    "q_quotient", "quotient_completion", "setoid_powerset_doctrine", "subobject_doctrine",
    "two_point_doctrine", "weak_subobject_doctrine",
]
