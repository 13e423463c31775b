from ._anneal import AnnealResult, AnnealSchedule, TraceRow, anneal_partition
from ._ensemble import (
    DropletReport,
    EnsembleMode,
    EnsembleSpec,
    droplet_experiment,
    ensemble_condition_check,
    target_volumes,
)
from ._reference import ReferenceKind, droplet_scale, reference_partition
from ._wulff import WulffShape, sphere_directions, wulff_crystal

# Public API for ``pottslab.variational``: Wulff crystals, reference
# partitions, the surface-energy annealer and conditioned droplet runs.
__all__ = [
    # Wulff crystal
    "WulffShape",
    "sphere_directions",
    "wulff_crystal",
    # Reference partitions
    "ReferenceKind",
    "droplet_scale",
    "reference_partition",
    # Annealing
    "AnnealResult",
    "AnnealSchedule",
    "TraceRow",
    "anneal_partition",
    # Conditioned ensembles
    "DropletReport",
    "EnsembleMode",
    "EnsembleSpec",
    "droplet_experiment",
    "ensemble_condition_check",
    "target_volumes",
]
