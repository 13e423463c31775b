"""The replica chain driver.

A run is fully described by a :class:`RunSpec`. Replica ``r`` draws from
``RngStream(seed).child(r)``, so replicas are independent of one another and
of the worker that executes them, and a rerun of the same spec reproduces
every emitted configuration bit for bit.
"""

import dataclasses
import logging
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import numpy.typing as npt
import pydantic

from .._context import LabContext, lab_globals
from ..clusters._labeling import BondConfig
from ..gibbs import ModelParams, SpinConfig, hamiltonian
from ..lattice import (
    BoundaryAssignment,
    BoundarySpec,
    Lattice,
    RngStream,
    build_box,
    build_segment,
    discretize_boundary,
)
from ._edwards_sokal import random_start, sw_step
from ._snapshot import Snapshot, SnapshotKind

logger = logging.getLogger(__name__)


class RunSpec(pydantic.BaseModel):
    """Everything that determines a chain: model, boundary and run shape.

    ``burn_in`` defaults to ``max(1000, 20 n)`` discarded sweeps; this is a
    heuristic, not a mixing bound. ``sweeps`` counts post-burn-in sweeps, of
    which every ``thinning``-th is emitted. ``fields`` are optional per-color
    chemical potentials for tilted sampling.
    """

    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")

    d: int = pydantic.Field(ge=1)
    n: int = pydantic.Field(ge=1)
    q: int = pydantic.Field(ge=1)
    beta: float = pydantic.Field(ge=0.0)
    boundary: BoundarySpec | None = None
    sweeps: int = pydantic.Field(default=1000, ge=0)
    burn_in: int | None = pydantic.Field(default=None, ge=0)
    thinning: int = pydantic.Field(default=1, ge=1)
    replicas: int = pydantic.Field(default=1, ge=1)
    seed: int = pydantic.Field(default=0, ge=0, lt=1 << 64)
    fields: tuple[float, ...] | None = None

    @property
    def params(self) -> ModelParams:
        return ModelParams(q=self.q, beta=self.beta)

    @property
    def effective_burn_in(self) -> int:
        return max(1000, 20 * self.n) if self.burn_in is None else self.burn_in

    @property
    def emitted_per_replica(self) -> int:
        return self.sweeps // self.thinning

    def stream(self, replica: int) -> RngStream:
        return RngStream(self.seed).child(replica)

    def lattice(self) -> Lattice:
        return build_box(self.d, self.n) if self.d >= 2 else build_segment(self.n)

    def assignment(self, lattice: Lattice | None = None) -> BoundaryAssignment:
        lattice = self.lattice() if lattice is None else lattice
        spec = self.boundary or BoundarySpec.free(self.d, self.q)
        if spec.q != self.q:
            raise ValueError(f"boundary spec has q={spec.q}, run has q={self.q}")
        return discretize_boundary(spec, self.n, lattice)


@dataclasses.dataclass(frozen=True, eq=False)
class ChainSample:
    """One emitted configuration: the spins after a sweep and its coupled bonds."""

    replica: int
    sweep: int
    spins: SpinConfig
    bonds: BondConfig
    run: RunSpec

    def snapshot(self, kind: SnapshotKind = "spin") -> Snapshot:
        return Snapshot(
            kind=kind,
            d=self.run.d,
            n=self.run.n,
            q=self.run.q,
            beta=self.run.beta,
            seed=self.run.seed,
            sweep=self.sweep,
            payload=self.spins if kind == "spin" else self.bonds,
        )


@dataclasses.dataclass
class RunningStats:
    """Online mean and variance of a vector observable.

    :meth:`merge` combines two accumulators exactly (pairwise update), so
    merging per-replica statistics gives the same numbers in any grouping.
    """

    count: int = 0
    mean: npt.NDArray[np.float64] | None = None
    m2: npt.NDArray[np.float64] | None = None

    def push(self, value: npt.ArrayLike) -> None:
        x = np.asarray(value, dtype=np.float64)
        if self.mean is None:
            self.mean = np.zeros_like(x)
            self.m2 = np.zeros_like(x)
        self.count += 1
        delta = x - self.mean
        self.mean = self.mean + delta / self.count
        self.m2 = self.m2 + delta * (x - self.mean)

    def merge(self, other: "RunningStats") -> "RunningStats":
        if other.count == 0:
            return dataclasses.replace(self)
        if self.count == 0:
            return dataclasses.replace(other)
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta**2 * self.count * other.count / count
        return RunningStats(count=count, mean=mean, m2=m2)

    @property
    def variance(self) -> npt.NDArray[np.float64]:
        if self.count < 2:
            return np.full_like(self.mean, math.nan)
        return self.m2 / (self.count - 1)


def observable_names(q: int) -> list[str]:
    return ["energy_density", "open_density"] + [f"fraction_{c}" for c in range(1, q + 1)]


def observables(
    spins: SpinConfig, bonds: BondConfig, lattice: Lattice, q: int
) -> npt.NDArray[np.float64]:
    """Energy per edge, open-edge density and the color fractions."""
    edges = max(lattice.num_edges, 1)
    fractions = np.bincount(spins, minlength=q + 1)[1 : q + 1] / lattice.num_sites
    return np.concatenate(
        [[hamiltonian(spins, lattice) / edges, np.count_nonzero(bonds) / edges], fractions]
    )


def iter_chain(
    run: RunSpec,
    replica: int = 0,
    lattice: Lattice | None = None,
    assignment: BoundaryAssignment | None = None,
) -> Iterator[ChainSample]:
    """Stream the emitted samples of one replica."""
    lattice = run.lattice() if lattice is None else lattice
    assignment = run.assignment(lattice) if assignment is None else assignment
    params = run.params
    rng = run.stream(replica).generator()
    spins = random_start(lattice, run.q, assignment, rng)

    burn_in = run.effective_burn_in
    for _ in range(burn_in):
        spins, _ = sw_step(spins, lattice, params, assignment, rng, run.fields)
    logger.debug("replica %d: discarded %d burn-in sweeps", replica, burn_in)

    for k in range(run.sweeps):
        spins, bonds = sw_step(spins, lattice, params, assignment, rng, run.fields)
        if (k + 1) % run.thinning == 0:
            yield ChainSample(
                replica=replica, sweep=burn_in + k + 1, spins=spins, bonds=bonds, run=run
            )


def _run_replica(
    run: RunSpec, replica: int, max_sites: int
) -> tuple[list[ChainSample], RunningStats]:
    with LabContext() as context:
        context.max_sites = max_sites
        lattice = run.lattice()
        samples: list[ChainSample] = []
        stats = RunningStats()
        for sample in iter_chain(run, replica, lattice):
            samples.append(sample)
            stats.push(observables(sample.spins, sample.bonds, lattice, run.q))
    logger.debug("replica %d: emitted %d samples", replica, len(samples))
    return samples, stats


class Provenance(pydantic.BaseModel):
    """What a reader needs to reproduce a chain's output."""

    model_config = pydantic.ConfigDict(frozen=True)

    run: RunSpec
    burn_in: int
    streams: tuple[int, ...]
    emitted: int
    version: str


@dataclasses.dataclass(frozen=True, eq=False)
class ChainResult:
    """Samples in replica order, merged statistics and provenance."""

    samples: list[ChainSample]
    stats: RunningStats
    replica_stats: list[RunningStats]
    provenance: Provenance

    def replica(self, index: int) -> list[ChainSample]:
        return [s for s in self.samples if s.replica == index]


def sample_chain(run: RunSpec) -> ChainResult:
    """Run every replica of ``run`` and merge the results in replica order.

    With ``workers > 1`` (see :func:`pottslab.configure`) replicas execute in
    a process pool; the output is identical to the serial run.
    """
    from .. import __version__

    workers = min(lab_globals.workers, run.replicas)
    args = (
        [run] * run.replicas,
        list(range(run.replicas)),
        [lab_globals.max_sites] * run.replicas,
    )
    logger.info(
        "sampling %d replica(s) of d=%d n=%d q=%d beta=%g on %d worker(s)",
        run.replicas,
        run.d,
        run.n,
        run.q,
        run.beta,
        workers,
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_replica, *args))
    else:
        results = [_run_replica(*a) for a in zip(*args)]

    samples = [s for replica_samples, _ in results for s in replica_samples]
    replica_stats = [stats for _, stats in results]
    merged = RunningStats()
    for stats in replica_stats:
        merged = merged.merge(stats)
    provenance = Provenance(
        run=run,
        burn_in=run.effective_burn_in,
        streams=tuple(run.stream(r).stream for r in range(run.replicas)),
        emitted=len(samples),
        version=__version__,
    )
    return ChainResult(
        samples=samples, stats=merged, replica_stats=replica_stats, provenance=provenance
    )
