from ._events import TestEventSpec, empirical_phase_partition, test_event
from ._grid import (
    BlockGrid,
    BlockSet,
    PhasePartition,
    intermediate_scale,
    scale_growth_table,
)
from ._io import load_partition, parse_partition, render_partition, save_partition
from ._metrics import (
    boundary_energy,
    bulk_energy,
    discrete_perimeter,
    dist_l1,
    dist_p,
    phase_components,
    surface_energy,
)

# Public API for ``pottslab.phases``: the block grid, the empirical phase
# partition and the functionals evaluated on it.
__all__ = [
    # Block grid
    "BlockGrid",
    "BlockSet",
    "PhasePartition",
    "intermediate_scale",
    "scale_growth_table",
    # Test events
    "TestEventSpec",
    "empirical_phase_partition",
    "test_event",
    # Metrics and energies
    "boundary_energy",
    "bulk_energy",
    "discrete_perimeter",
    "dist_l1",
    "dist_p",
    "phase_components",
    "surface_energy",
    # Partition files
    "load_partition",
    "parse_partition",
    "render_partition",
    "save_partition",
]
