import math

import numpy as np
import numpy.typing as npt

from ..exc import FrozenSiteError
from ..lattice import BoundaryAssignment, Lattice
from ._weights import ModelParams, SpinConfig


def heat_bath_probabilities(
    spins: SpinConfig, lattice: Lattice, params: ModelParams, site: int
) -> npt.NDArray[np.float64]:
    """Conditional law of the color at ``site`` given its neighbors.

    Entry ``c - 1`` is proportional to ``exp(beta * k_c)`` where ``k_c`` counts
    neighbors of color ``c``; this is the Gibbs conditional because the local
    energy is ``degree - k_c``.
    """
    neighbors, _ = lattice.neighbors(site)
    counts = np.bincount(np.asarray(spins)[neighbors], minlength=params.q + 1)[1:]
    counts = counts[: params.q].astype(np.float64)
    if math.isinf(params.beta):
        best = counts == counts.max()
        return best / best.sum()
    logits = params.beta * counts
    weights = np.exp(logits - logits.max())
    return weights / weights.sum()


def _draw_color(probs: npt.NDArray[np.float64], u: float) -> int:
    # cumsum can end a rounding error below 1.
    return 1 + min(int(np.searchsorted(np.cumsum(probs), u, side="right")), probs.size - 1)


def heat_bath_step(
    spins: SpinConfig,
    lattice: Lattice,
    params: ModelParams,
    site: int,
    rng: np.random.Generator,
    assignment: BoundaryAssignment | None = None,
) -> SpinConfig:
    """Resample the color at ``site`` from its conditional Gibbs law.

    Returns a new configuration. Raises :class:`~pottslab.exc.FrozenSiteError`
    for a site frozen by ``assignment``.
    """
    if assignment is not None and assignment.frozen[site]:
        raise FrozenSiteError(f"site {site} is frozen to color {assignment.indices[site]}")
    probs = heat_bath_probabilities(spins, lattice, params, site)
    new = np.array(spins, copy=True)
    new[site] = _draw_color(probs, rng.random())
    return new


def heat_bath_sweep(
    spins: SpinConfig,
    lattice: Lattice,
    params: ModelParams,
    assignment: BoundaryAssignment,
    rng: np.random.Generator,
) -> SpinConfig:
    """One systematic-scan sweep over the free sites, in site order."""
    current = np.array(spins, copy=True)
    for site in assignment.free_sites:
        probs = heat_bath_probabilities(current, lattice, params, int(site))
        current[site] = _draw_color(probs, rng.random())
    return current
