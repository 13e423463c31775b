"""Public exception hierarchy for pottslab.

Two families:

* Setup errors raised before any sampling happens: :class:`ConfigError`
  (malformed experiment configuration, unknown keys) and :class:`SizingError`
  (a lattice or an exact enumeration exceeds the budgets set with
  :func:`pottslab.configure`).
* Model errors raised while a computation runs: an inadmissible bond
  configuration handed to the coloring step, a move on a frozen site, a
  partition grid mismatch, an annealer audit that disagrees with a full
  recomputation, and so on.

Every error derives from :class:`PottsLabError`, so callers that only care
whether the lab failed can catch one type. The CLI maps the families onto
exit codes (see :mod:`pottslab.cli`).
"""


class PottsLabError(Exception):
    """Base class for pottslab errors."""


class ConfigError(PottsLabError):
    """Raised for malformed or unknown experiment configuration."""


class SizingError(PottsLabError):
    """Raised when a request exceeds a configured memory or enumeration budget."""


class BoundarySpecError(PottsLabError):
    """Raised for a BoundarySpec that does not describe q+1 face parts."""


class FrozenSiteError(PottsLabError):
    """Raised when a dynamics is asked to resample a site frozen by the boundary."""


class InadmissibleBondsError(PottsLabError):
    """Raised when open bonds connect boundary sites frozen to different colors.

    Such a bond configuration has zero weight under the constrained FK measure,
    so the coloring step has no consistent way to color the offending cluster.
    """


class GridMismatchError(PottsLabError):
    """Raised when two block sets or partitions live on different block grids."""


class PhaseSpecError(PottsLabError):
    """Raised when the phase test events would not be pairwise exclusive.

    The density events for two different phases can only be disjoint when the
    order parameter exceeds twice the tolerance; below that the partition is
    not well defined and the lab refuses instead of guessing.
    """


class DropletFitError(PottsLabError):
    """Raised when a rescaled Wulff droplet does not fit inside the unit cube."""


class InfeasibleConstraintsError(PottsLabError):
    """Raised when annealer volume constraints cannot be met on the block grid."""


class EnergyDriftError(PottsLabError):
    """Raised when the annealer's incremental energy drifts from a full recompute."""


class SnapshotFormatError(PottsLabError):
    """Raised for a snapshot or partition file whose header and payload disagree."""


class EmptySampleError(PottsLabError):
    """Raised when an estimator receives no samples."""


__all__ = [
    "BoundarySpecError",
    "ConfigError",
    "DropletFitError",
    "EmptySampleError",
    "EnergyDriftError",
    "FrozenSiteError",
    "GridMismatchError",
    "InadmissibleBondsError",
    "InfeasibleConstraintsError",
    "PhaseSpecError",
    "PottsLabError",
    "SizingError",
    "SnapshotFormatError",
]
