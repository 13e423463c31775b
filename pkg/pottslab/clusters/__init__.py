from ._estimators import (
    ESTIMATE_FIELDS,
    DiameterTail,
    Estimate,
    SlabProbeResult,
    batch_means,
    center_reaches_boundary,
    diameter_tail,
    order_parameter_estimate,
    percolation_estimate,
    slab_lro_probe,
)
from ._labeling import (
    BondConfig,
    ClusterLabeling,
    Wiring,
    cluster_count,
    clusters,
)

# Public API for ``pottslab.clusters``: labeling with boundary identification
# and the finite-volume estimators built on it.
__all__ = [
    # Labeling
    "BondConfig",
    "ClusterLabeling",
    "Wiring",
    "cluster_count",
    "clusters",
    # Estimators
    "ESTIMATE_FIELDS",
    "DiameterTail",
    "Estimate",
    "SlabProbeResult",
    "batch_means",
    "center_reaches_boundary",
    "diameter_tail",
    "order_parameter_estimate",
    "percolation_estimate",
    "slab_lro_probe",
]
