"""Exact type-D_n weight combinatorics, level-truncated fusion rings,
braid-algebra representation data, and numerical transport/verification of
connection coefficients for the associated first-order Fuchsian systems.

The combinatorial core (weights, Weyl orbits, alcoves, fusion matrices) is
exact integer/rational arithmetic; floating point enters only through
characters, braid matrices and ODE transport.
"""

from fusion_forge.weights import (
    Weight,
    Alcove,
    CenterElement,
    alcove,
    casimir,
    center_act,
    inner,
    is_minimal,
    weyl_orbit,
)
from fusion_forge.fusion import (
    FusionMatrix,
    character_vector,
    fusion_matrix,
    level1_ring,
    quantum_dim,
    tensor_with_minimal,
    verlinde_product,
)
from fusion_forge.braid import BraidParams, WenzlRep, braiding_eigenvalues, wenzl_rep

__all__ = [
    "Weight",
    "Alcove",
    "CenterElement",
    "alcove",
    "casimir",
    "center_act",
    "inner",
    "is_minimal",
    "weyl_orbit",
    "FusionMatrix",
    "character_vector",
    "fusion_matrix",
    "level1_ring",
    "quantum_dim",
    "tensor_with_minimal",
    "verlinde_product",
    "BraidParams",
    "WenzlRep",
    "braiding_eigenvalues",
    "wenzl_rep",
]
