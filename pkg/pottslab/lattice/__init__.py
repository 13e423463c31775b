from ._boundary import (
    BoundaryAssignment,
    BoundarySpec,
    Face,
    cube_faces,
    discretize_boundary,
)
from ._box import Lattice, box_at, build_box, build_segment, build_slab
from ._rng import RngStream

# Public API for ``pottslab.lattice``: geometry, boundary conditions and the
# randomness contract every stochastic module draws from.
__all__ = [
    # Geometry
    "Lattice",
    "box_at",
    "build_box",
    "build_segment",
    "build_slab",
    # Boundary conditions
    "BoundaryAssignment",
    "BoundarySpec",
    "Face",
    "cube_faces",
    "discretize_boundary",
    # Randomness
    "RngStream",
]
