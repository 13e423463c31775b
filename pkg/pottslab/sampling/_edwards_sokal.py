"""Edwards-Sokal cluster dynamics (Swendsen-Wang) with mixed boundary conditions.

One sweep is the bond step followed by the color step. The bond step only
opens edges whose endpoints agree, so the bond configuration it produces can
never join boundary pieces frozen to different colors: the FK admissibility
constraint holds by construction and the coupled bond marginal is the
constrained FK measure.
"""

import numpy as np
import numpy.typing as npt

from ..clusters._labeling import BondConfig, ClusterLabeling, Wiring, clusters
from ..exc import InadmissibleBondsError
from ..gibbs import ModelParams, SpinConfig
from ..lattice import BoundaryAssignment, Lattice


def es_bond_step(
    spins: SpinConfig, lattice: Lattice, p: float, rng: np.random.Generator
) -> BondConfig:
    """Open each agreeing edge independently with probability ``p``.

    Draws exactly one uniform per edge, agreeing or not, so the number of
    draws per sweep does not depend on the configuration.
    """
    spins = np.asarray(spins)
    agree = spins[lattice.edges[:, 0]] == spins[lattice.edges[:, 1]]
    return agree & (rng.random(lattice.num_edges) < p)


def _cluster_colors(
    labeling: ClusterLabeling,
    q: int,
    rng: np.random.Generator,
    fields: npt.NDArray[np.float64] | None,
) -> npt.NDArray[np.int16]:
    uniforms = rng.random(labeling.count)
    if fields is None:
        colors = 1 + np.minimum((uniforms * q).astype(np.int64), q - 1)
    else:
        # A free cluster of size s takes color c with weight exp(h_c * s).
        logits = labeling.sizes[:, None] * np.asarray(fields, dtype=np.float64)[None, :]
        weights = np.exp(logits - logits.max(axis=1, keepdims=True))
        cdf = np.cumsum(weights, axis=1)
        cdf /= cdf[:, -1:]
        colors = 1 + np.minimum((cdf < uniforms[:, None]).sum(axis=1), q - 1)
    group_touch = labeling.touches[:, 1:]
    frozen = group_touch.any(axis=1)
    colors[frozen] = 1 + np.argmax(group_touch[frozen], axis=1)
    return colors.astype(np.int16)


def es_color_step(
    bonds: BondConfig,
    assignment: BoundaryAssignment,
    q: int,
    rng: np.random.Generator,
    fields: npt.ArrayLike | None = None,
) -> SpinConfig:
    """Color the open clusters of ``bonds``.

    A cluster containing boundary sites frozen to color ``i`` takes color
    ``i``; every other cluster takes an independent uniform color in ``1..q``
    (or, with per-color ``fields`` ``h``, color ``c`` with weight
    ``exp(h_c * size)``). One uniform is drawn per cluster.

    Raises :class:`~pottslab.exc.InadmissibleBondsError` when an open path
    joins sites frozen to different colors.
    """
    labeling = clusters(bonds, Wiring.from_assignment(assignment))
    if not labeling.admissible:
        raise InadmissibleBondsError(
            "open bonds connect boundary sites frozen to different colors"
        )
    field_array = None if fields is None else np.asarray(fields, dtype=np.float64)
    if field_array is not None and field_array.shape != (q,):
        raise ValueError(f"fields must have one entry per color, got shape {field_array.shape}")
    return _cluster_colors(labeling, q, rng, field_array)[labeling.labels]


def sw_step(
    spins: SpinConfig,
    lattice: Lattice,
    params: ModelParams,
    assignment: BoundaryAssignment,
    rng: np.random.Generator,
    fields: npt.ArrayLike | None = None,
) -> tuple[SpinConfig, BondConfig]:
    """One Swendsen-Wang sweep returning the new spins and the coupled bonds."""
    bonds = es_bond_step(spins, lattice, params.p, rng)
    return es_color_step(bonds, assignment, params.q, rng, fields), bonds


def sw_sweep(
    spins: SpinConfig,
    lattice: Lattice,
    params: ModelParams,
    assignment: BoundaryAssignment,
    rng: np.random.Generator,
    fields: npt.ArrayLike | None = None,
) -> SpinConfig:
    """One Swendsen-Wang sweep; the Potts measure with ``assignment`` is stationary."""
    return sw_step(spins, lattice, params, assignment, rng, fields)[0]


def random_start(
    lattice: Lattice, q: int, assignment: BoundaryAssignment, rng: np.random.Generator
) -> SpinConfig:
    """Independent uniform colors on free sites, frozen sites at their colors."""
    spins = rng.integers(1, q + 1, size=lattice.num_sites).astype(np.int16)
    spins[assignment.frozen] = assignment.indices[assignment.frozen]
    return spins
