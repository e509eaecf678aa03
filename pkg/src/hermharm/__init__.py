"""Exact harmonic theory for invariant Hermitian structures on nilmanifolds.

Everything is computed over the Gaussian rationals: operators are block
matrices on the bigraded exterior algebra of left-invariant forms, kernels
come from exact row reduction, and every verdict is tolerance-free.
"""

from .model import (
    EXAMPLES,
    CoalgebraSpec,
    ConventionError,
    HermitianStructure,
    SpecError,
    build_structure,
    load_spec,
    parse_spec,
)

__all__ = [
    "EXAMPLES",
    "CoalgebraSpec",
    "ConventionError",
    "HermitianStructure",
    "SpecError",
    "build_structure",
    "load_spec",
    "parse_spec",
]
__version__ = "0.1.0"
