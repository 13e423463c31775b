from importlib.metadata import PackageNotFoundError as _PackageNotFoundError
from importlib.metadata import version as _version

# Concept namespaces, reachable as ``pottslab.<name>`` but kept out of the
# flat ``__all__`` so ``from pottslab import *`` stays the everyday surface:
#   pottslab.exc         - the error hierarchy
#   pottslab.clusters    - labeling and the finite-volume estimators
#   pottslab.experiments - config text, runner, manifests
# (lattice / gibbs / sampling / phases / tau / variational are bound by the
# from-imports below.)
from . import clusters, exc, experiments  # noqa: F401
from ._context import LabContext, configure

# Lattice and boundary conditions
from .lattice import BoundarySpec, Lattice, RngStream, build_box, discretize_boundary

# Weights and the exact oracle
from .gibbs import ModelParams, enumerate_exact

# Sampling
from .sampling import RunSpec, fk_direct_chain, sample_chain, sw_sweep

# Phase geometry
from .phases import BlockGrid, PhasePartition, empirical_phase_partition, surface_energy

# Surface tension
from .tau import TauModel, tau_probe

# Variational side
from .variational import (
    EnsembleSpec,
    anneal_partition,
    droplet_experiment,
    reference_partition,
    wulff_crystal,
)

try:
    __version__ = _version("pottslab")
except _PackageNotFoundError:  # pragma: no cover - only possible from an unpackaged tree
    __version__ = "0+unknown"

# Public API surface for pottslab.
#
# This top-level namespace is the primary public API. The concept namespaces
# (``pottslab.lattice``, ``pottslab.gibbs``, ``pottslab.sampling``,
# ``pottslab.clusters``, ``pottslab.phases``, ``pottslab.tau``,
# ``pottslab.variational``, ``pottslab.experiments``) expose the remaining
# supported symbols for users working in that subsystem.
__all__ = [
    "__version__",
    # Runtime limits
    "LabContext",
    "configure",
    # Lattice
    "BoundarySpec",
    "Lattice",
    "RngStream",
    "build_box",
    "discretize_boundary",
    # Gibbs kernel
    "ModelParams",
    "enumerate_exact",
    # Sampling
    "RunSpec",
    "fk_direct_chain",
    "sample_chain",
    "sw_sweep",
    # Phases
    "BlockGrid",
    "PhasePartition",
    "empirical_phase_partition",
    "surface_energy",
    # Surface tension
    "TauModel",
    "tau_probe",
    # Variational
    "EnsembleSpec",
    "anneal_partition",
    "droplet_experiment",
    "reference_partition",
    "wulff_crystal",
]
