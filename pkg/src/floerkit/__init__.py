"""floerkit: exact homological algebra over k[U_1..U_r] at desk scale.

Multigraded free chain complexes, hypercubes of complexes and their
eigenspace refinements, derived tensor products, calibrated direct
limits, torus-algebra bordered modules, and the knot/link invariant
models built from them.
"""

from .scalars import F2, QQ, QI, Field, FieldError, GaussianRational, Poly, field_by_tag
from .complexes import (
    ChainMap,
    ComplexFormatError,
    FreeComplex,
    Generator,
    GradedModule,
    cone,
    direct_sum,
    homology_over_field,
    homology_over_ring,
    load_complex,
    sdr,
    shift,
    specialize_u_zero,
    tensor_field,
    tensor_ring,
    truncate_above,
)

__version__ = "0.1.0"

__all__ = [
    "F2", "QQ", "QI", "Field", "FieldError", "GaussianRational", "Poly",
    "field_by_tag",
    "ChainMap", "ComplexFormatError", "FreeComplex", "Generator",
    "GradedModule", "cone", "direct_sum", "homology_over_field",
    "homology_over_ring", "load_complex", "sdr", "shift",
    "specialize_u_zero", "tensor_field", "tensor_ring", "truncate_above",
]
