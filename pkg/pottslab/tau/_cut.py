"""Finite-n surface tension from the windowed cut event.

The cut event for an axis direction asks that no open path cross a window of
half-height ``2d`` lattice layers around the central section orthogonal to
the axis. With ``F`` the empirical frequency of the event over ``N`` FK
samples, the estimate is ``tau_n = -log(F) / n**(d-1)``. A frequency of zero
gives no finite estimate; the record then carries the lower bound
``log(N) / n**(d-1)`` and ``censored=True``.
"""

import logging
import math
from collections.abc import Iterable

import numpy as np
import pydantic

from ..clusters import BondConfig, Wiring, clusters
from ..exc import EmptySampleError
from ..gibbs import ModelParams
from ..lattice import Lattice
from ._model import TauModel

logger = logging.getLogger(__name__)

#: Column order of tau CSV rows.
TAU_FIELDS = (
    "nu",
    "n",
    "q",
    "beta",
    "samples",
    "cut_frequency",
    "tau_hat",
    "stderr",
    "censored",
)


def cut_window(lattice: Lattice, axis: int) -> tuple[int, int]:
    """Lowest and highest layer of the window along ``axis``, clipped to the box."""
    lo = lattice.origin[axis]
    hi = lo + lattice.shape[axis] - 1
    middle = lo + (lattice.shape[axis] - 1) // 2
    half = 2 * lattice.d
    return max(lo, middle - half), min(hi, middle + half)


def cut_event_indicator(bonds: BondConfig, lattice: Lattice, axis: int) -> bool:
    """True iff the two end layers of the window are not joined inside the window.

    Only edges with both endpoints in the window count. Opening an edge can
    only turn the event from true to false.
    """
    lo, hi = cut_window(lattice, axis)
    if lo == hi:
        return False
    layer = lattice.coords[:, axis]
    groups = np.zeros(lattice.num_sites, dtype=np.int16)
    groups[layer == lo] = 1
    groups[layer == hi] = 2
    ends = lattice.coords[lattice.edges, axis]
    inside = (ends >= lo).all(axis=1) & (ends <= hi).all(axis=1)
    labeling = clusters(np.asarray(bonds, dtype=bool) & inside, Wiring(lattice, groups, "cut"))
    return labeling.admissible


class TauEstimate(pydantic.BaseModel):
    """A finite-n surface tension estimate along one axis."""

    model_config = pydantic.ConfigDict(frozen=True)

    nu: int
    n: int
    d: int
    q: int
    beta: float
    samples: int
    cut_frequency: float
    tau_hat: float
    stderr: float
    censored: bool
    note: str = "finite-n estimate"

    def as_row(self) -> dict[str, object]:
        return {name: getattr(self, name) for name in TAU_FIELDS}


def tau_from_indicators(
    indicators: Iterable[bool], axis: int, lattice: Lattice, params: ModelParams
) -> TauEstimate:
    events = np.fromiter((bool(e) for e in indicators), dtype=bool)
    if events.size == 0:
        raise EmptySampleError("tau estimate needs at least one sample")
    area = float(lattice.n ** (lattice.d - 1))
    total = events.size
    frequency = float(events.mean())
    if frequency == 0.0:
        logger.warning(
            "cut event never observed in %d samples (axis %d, n=%d, beta=%g); "
            "reporting a censored lower bound",
            total,
            axis,
            lattice.n,
            params.beta,
        )
        tau_hat, stderr, censored = math.log(total) / area, math.nan, True
    else:
        tau_hat = -math.log(frequency) / area
        # Delta method: Var(log F) ~ (1 - F) / (N F).
        stderr = math.sqrt((1.0 - frequency) / (total * frequency)) / area
        censored = False
    return TauEstimate(
        nu=axis,
        n=lattice.n,
        d=lattice.d,
        q=params.q,
        beta=params.beta,
        samples=total,
        cut_frequency=frequency,
        tau_hat=abs(tau_hat),
        stderr=stderr,
        censored=censored,
    )


def tau_estimate(
    axis: int,
    lattice: Lattice,
    params: ModelParams,
    samples: Iterable[BondConfig],
) -> TauEstimate:
    """Estimate ``tau(e_axis)`` at the lattice's resolution from FK bond samples."""
    if not 0 <= axis < lattice.d:
        raise ValueError(f"axis must lie in 0..{lattice.d - 1}, got {axis}")
    return tau_from_indicators(
        (cut_event_indicator(bonds, lattice, axis) for bonds in samples),
        axis,
        lattice,
        params,
    )


def tau_probe(
    axis: int,
    n: int,
    d: int,
    params: ModelParams,
    *,
    samples: int = 1000,
    burn_in: int | None = None,
    thinning: int = 1,
    seed: int = 0,
) -> TauEstimate:
    """Sample free-boundary FK configurations by Swendsen-Wang and estimate ``tau``."""
    from ..sampling import RunSpec, iter_chain

    run = RunSpec(
        d=d,
        n=n,
        q=params.q,
        beta=params.beta,
        sweeps=samples * thinning,
        burn_in=burn_in,
        thinning=thinning,
        seed=seed,
    )
    lattice = run.lattice()
    return tau_estimate(
        axis, lattice, params, (sample.bonds for sample in iter_chain(run, 0, lattice))
    )


def axis_model(estimates: Iterable[TauEstimate]) -> TauModel:
    """An axis-anisotropic model from one uncensored estimate per axis."""
    by_axis = {e.nu: e for e in estimates}
    d = len(by_axis)
    if sorted(by_axis) != list(range(d)):
        raise ValueError(f"need one estimate per axis 0..{d - 1}, got axes {sorted(by_axis)}")
    if any(e.censored or e.tau_hat <= 0 for e in by_axis.values()):
        raise ValueError("censored or zero estimates cannot define a surface tension")
    return TauModel.axis([by_axis[a].tau_hat for a in range(d)])
