from ._chain import (
    ChainResult,
    ChainSample,
    Provenance,
    RunningStats,
    RunSpec,
    iter_chain,
    observable_names,
    observables,
    sample_chain,
)
from ._edwards_sokal import (
    es_bond_step,
    es_color_step,
    random_start,
    sw_step,
    sw_sweep,
)
from ._fk_direct import BondRule, fk_direct_chain
from ._snapshot import Snapshot, SnapshotKind, load_snapshot, save_snapshot

# Public API for ``pottslab.sampling``: Edwards-Sokal cluster dynamics, the
# direct FK chain and the replica driver with its snapshot format.
__all__ = [
    # Edwards-Sokal steps
    "es_bond_step",
    "es_color_step",
    "random_start",
    "sw_step",
    "sw_sweep",
    # Direct FK dynamics
    "BondRule",
    "fk_direct_chain",
    # Chain driver
    "ChainResult",
    "ChainSample",
    "Provenance",
    "RunSpec",
    "RunningStats",
    "iter_chain",
    "observable_names",
    "observables",
    "sample_chain",
    # Snapshots
    "Snapshot",
    "SnapshotKind",
    "load_snapshot",
    "save_snapshot",
]
