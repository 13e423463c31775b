"""Finite-volume estimators built on cluster labelings.

Every infinite-volume quantity is replaced by a declared finite-n proxy and
every returned record carries the lattice size it was measured at:

* ``theta``: frequency of the boundary color at the center site, minus ``1/q``.
* ``theta_star``: frequency with which the center site is joined to the
  outer layer of the box by open edges. This overestimates the
  infinite-volume percolation probability.
"""

import dataclasses
import math
from collections.abc import Iterable
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
import pydantic
from scipy import stats

from .._context import lab_globals
from ..exc import EmptySampleError
from ..lattice import BoundaryAssignment, Lattice, RngStream, build_slab
from ._labeling import BondConfig, Wiring, clusters

if TYPE_CHECKING:
    from ..gibbs import ModelParams, SpinConfig

#: Column order of estimate CSV rows.
ESTIMATE_FIELDS = (
    "quantity",
    "n",
    "d",
    "q",
    "beta",
    "value",
    "stderr",
    "samples",
    "seed",
    "censored",
    "note",
)


class Estimate(pydantic.BaseModel):
    """A labeled finite-n estimate with its standard error."""

    model_config = pydantic.ConfigDict(frozen=True)

    quantity: str
    n: int
    d: int
    q: int
    beta: float
    value: float
    stderr: float
    samples: int
    seed: int | None = None
    censored: bool = False
    note: str = ""

    def as_row(self) -> dict[str, object]:
        return {name: getattr(self, name) for name in ESTIMATE_FIELDS}

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.value - target) <= sigmas * self.stderr


def batch_means(values: npt.ArrayLike, batches: int = 20) -> tuple[float, float]:
    """Mean and batch-means standard error of a correlated series.

    The series is cut into ``batches`` contiguous batches; the error is the
    standard error of the batch means. Fewer than two values give a nan error.
    """
    series = np.asarray(values, dtype=np.float64)
    if series.size == 0:
        raise EmptySampleError("cannot estimate from an empty sample stream")
    k = min(batches, series.size)
    if k < 2:
        return float(series.mean()), math.nan
    means = np.array([chunk.mean() for chunk in np.array_split(series, k)])
    return float(series.mean()), float(means.std(ddof=1) / math.sqrt(k))


def order_parameter_estimate(
    samples: Iterable["SpinConfig"],
    lattice: Lattice,
    params: "ModelParams",
    j: int,
    *,
    seed: int | None = None,
    batches: int = 20,
) -> Estimate:
    """``P[sigma_center = j] - 1/q`` from spin samples drawn under color-``j`` boundary."""
    center = lattice.center_index
    hits = [float(np.asarray(spins)[center] == j) for spins in samples]
    mean, stderr = batch_means(hits, batches)
    return Estimate(
        quantity="theta",
        n=lattice.n,
        d=lattice.d,
        q=params.q,
        beta=params.beta,
        value=mean - 1.0 / params.q,
        stderr=stderr,
        samples=len(hits),
        seed=seed,
        note="center-site color excess",
    )


def center_reaches_boundary(bonds: BondConfig, lattice: Lattice) -> bool:
    labeling = clusters(bonds, Wiring.wired(lattice))
    return bool(labeling.touches[labeling.labels[lattice.center_index], 1])


def percolation_estimate(
    samples: Iterable[BondConfig],
    lattice: Lattice,
    params: "ModelParams",
    *,
    seed: int | None = None,
    batches: int = 20,
) -> Estimate:
    """Frequency of an open path from the center site to the outer layer."""
    hits = [float(center_reaches_boundary(bonds, lattice)) for bonds in samples]
    mean, stderr = batch_means(hits, batches)
    return Estimate(
        quantity="theta_star",
        n=lattice.n,
        d=lattice.d,
        q=params.q,
        beta=params.beta,
        value=mean,
        stderr=stderr,
        samples=len(hits),
        seed=seed,
        note="center-to-boundary connection (finite-n upper proxy)",
    )


class SlabProbeResult(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    d: int
    length: int
    n: int
    alpha: float
    q: int
    beta: float
    value: float
    pair: tuple[tuple[int, ...], tuple[int, ...]]
    pairs_checked: int
    exhaustive: bool
    samples: int
    seed: int


def _slab_pairs(
    region: npt.NDArray[np.int64], stream: RngStream
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64], bool]:
    size = region.size
    total = size * (size - 1) // 2
    if total <= lab_globals.max_pairs:
        first, second = np.triu_indices(size, k=1)
        return region[first], region[second], True
    rng = stream.generator()
    first = rng.integers(0, size, lab_globals.max_pairs)
    # Shift by 1..size-1 so the pair is always distinct.
    second = (first + rng.integers(1, size, lab_globals.max_pairs)) % size
    return region[first], region[second], False


def slab_lro_probe(
    length: int,
    n: int,
    params: "ModelParams",
    *,
    d: int = 3,
    alpha: float = 1.0,
    samples: int = 100,
    burn_in: int | None = None,
    seed: int = 0,
) -> SlabProbeResult:
    """Smallest estimated connection probability over pairs in ``S(length, alpha n)``.

    Samples the free-boundary FK measure on the slab
    ``[-length, length] x [-n, n]**(d-1)`` as the bond marginal of
    Swendsen-Wang. Pairs range over the central region ``|x_i| <= alpha n``
    (``i >= 1``); all pairs are used up to the configured ``max_pairs``,
    above it a seeded sample of that many pairs.
    """
    from ..sampling import random_start, sw_step

    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if samples < 1:
        raise EmptySampleError("slab probe needs at least one sample")
    lattice = build_slab(d, length, n)
    assignment = BoundaryAssignment.none(lattice, params.q)
    reach = math.floor(alpha * n)
    region = np.flatnonzero(np.all(np.abs(lattice.coords[:, 1:]) <= reach, axis=1))
    stream = RngStream(seed)
    xs, ys, exhaustive = _slab_pairs(region, stream.child(1))

    rng = stream.child(0).generator()
    spins = random_start(lattice, params.q, assignment, rng)
    for _ in range(max(1000, 20 * n) if burn_in is None else burn_in):
        spins, _ = sw_step(spins, lattice, params, assignment, rng)
    wiring = Wiring.free(lattice)
    hits = np.zeros(xs.size, dtype=np.int64)
    for _ in range(samples):
        spins, bonds = sw_step(spins, lattice, params, assignment, rng)
        labels = clusters(bonds, wiring).labels
        hits += labels[xs] == labels[ys]

    worst = int(np.argmin(hits))
    return SlabProbeResult(
        d=d,
        length=length,
        n=n,
        alpha=alpha,
        q=params.q,
        beta=params.beta,
        value=float(hits[worst] / samples),
        pair=(
            tuple(lattice.coords[xs[worst]].tolist()),
            tuple(lattice.coords[ys[worst]].tolist()),
        ),
        pairs_checked=int(xs.size),
        exhaustive=exhaustive,
        samples=samples,
        seed=seed,
    )


@dataclasses.dataclass(frozen=True, eq=False)
class DiameterTail:
    """Histogram of non-largest cluster diameters and its log-linear slope."""

    diameters: npt.NDArray[np.int64]
    counts: npt.NDArray[np.int64]
    slope: float
    slope_low: float
    slope_high: float
    confidence: float

    @property
    def decays(self) -> bool:
        """The whole confidence interval of the slope lies below zero."""
        return bool(self.slope_high < 0)

    def rows(self) -> list[dict[str, float]]:
        total = max(int(self.counts.sum()), 1)
        return [
            {"diameter": int(k), "count": int(c), "log_frequency": math.log(c / total)}
            for k, c in zip(self.diameters, self.counts)
        ]


def diameter_tail(
    samples: Iterable[BondConfig],
    lattice: Lattice,
    *,
    wiring: Wiring | None = None,
    confidence: float = 0.95,
) -> DiameterTail:
    """Count the diameters of every cluster but the largest, then fit ``log count``.

    The fit is an ordinary least-squares line through ``(diameter, log count)``
    over the diameters seen at least once, with a Student-t interval for the
    slope. It is a statistical report; fewer than three distinct diameters
    leave the slope undefined (nan).
    """
    wiring = Wiring.free(lattice) if wiring is None else wiring
    counts = np.zeros(max(lattice.shape), dtype=np.int64)
    for bonds in samples:
        labeling = clusters(bonds, wiring)
        others = np.delete(labeling.diameters, labeling.largest)
        counts += np.bincount(others, minlength=counts.size)[: counts.size]

    seen = np.flatnonzero(counts)
    diameters, observed = seen.astype(np.int64), counts[seen]
    slope = low = high = math.nan
    if seen.size >= 3:
        fit = stats.linregress(diameters, np.log(observed))
        half_width = stats.t.ppf(0.5 + confidence / 2, seen.size - 2) * fit.stderr
        slope, low, high = fit.slope, fit.slope - half_width, fit.slope + half_width
    return DiameterTail(
        diameters=diameters,
        counts=observed,
        slope=float(slope),
        slope_low=float(low),
        slope_high=float(high),
        confidence=confidence,
    )
