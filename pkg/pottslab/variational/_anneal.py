"""Simulated annealing of the surface energy over block labels.

Blocks are updated one checkerboard color class at a time. Blocks of one
class share no face, so the energy change of a move only depends on labels
of the other class and every block of the class can be proposed at once.

* Unconstrained runs relabel single blocks to a uniformly chosen other phase.
* Constrained runs pair up blocks of one class at random and propose to swap
  their labels, which keeps every phase volume fixed exactly.

The running energy is updated move by move and compared against a full
:func:`~pottslab.phases.surface_energy` every ``audit_every`` moves.
"""

import dataclasses
import logging
import math
from collections.abc import Mapping

import numpy as np
import numpy.typing as npt
import pydantic

from .._context import lab_globals
from ..exc import EnergyDriftError, InfeasibleConstraintsError
from ..lattice import BoundarySpec
from ..phases import BlockGrid, PhasePartition, surface_energy
from ..tau import TauModel

logger = logging.getLogger(__name__)

_AUDIT_TOLERANCE = 1e-9


class AnnealSchedule(pydantic.BaseModel):
    """Geometric cooling from ``t0`` down to ``floor_ratio * t0``.

    ``t0`` defaults to ``tau_max * face_area * 2d``, the largest energy change
    a single relabel can cause.
    """

    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")

    t0: float | None = pydantic.Field(default=None, gt=0.0)
    cooling: float = pydantic.Field(default=0.97, gt=0.0, lt=1.0)
    sweeps_per_level: int = pydantic.Field(default=50, ge=1)
    floor_ratio: float = pydantic.Field(default=1e-3, gt=0.0, lt=1.0)

    def temperatures(self, t0: float) -> list[float]:
        levels = math.floor(math.log(self.floor_ratio) / math.log(self.cooling)) + 1
        return [t0 * self.cooling**k for k in range(levels)]


@dataclasses.dataclass(frozen=True)
class TraceRow:
    level: int
    temperature: float
    energy: float
    best: float
    acceptance: float


@dataclasses.dataclass(frozen=True, eq=False)
class AnnealResult:
    partition: PhasePartition
    energy: float
    initial_energy: float
    trace: list[TraceRow]
    moves: int
    audits: int


class _Board:
    """Labels padded with one layer of boundary parts, plus face weights."""

    def __init__(
        self, partition: PhasePartition, tau: TauModel, boundary: BoundarySpec | None
    ) -> None:
        grid = partition.grid
        d, count = grid.d, grid.blocks_per_axis
        self.padded = np.zeros((count + 2,) * d, dtype=np.int16)
        core = (slice(1, -1),) * d
        self.padded[core] = partition.labels
        if boundary is not None:
            for axis in range(d):
                for side, layer in ((0, 0), (1, count + 1)):
                    index = [slice(1, -1)] * d
                    index[axis] = layer
                    self.padded[tuple(index)] = boundary.part_of_face(axis, side)
        flat = np.arange(self.padded.size).reshape(self.padded.shape)
        self.cells = flat[core].ravel()
        strides = [int(s) // self.padded.itemsize for s in self.padded.strides]
        self.area = float(grid.extents[0]) ** (d - 1)
        self.offsets = np.array([sign * strides[a] for a in range(d) for sign in (-1, 1)])
        self.weights = np.array(
            [tau.axis_value(a) * self.area for a in range(d) for _ in (-1, 1)]
        )
        parity = np.indices(grid.shape).sum(axis=0).ravel() % 2
        self.classes = [self.cells[parity == c] for c in (0, 1)]
        self.shape = grid.shape

    def local(
        self, cells: npt.NDArray[np.int64], labels: npt.NDArray
    ) -> npt.NDArray[np.float64]:
        """Energy of the faces around ``cells`` if they carried ``labels``."""
        flat = self.padded.reshape(-1)
        total = np.zeros(cells.size)
        for offset, weight in zip(self.offsets, self.weights):
            neighbor = flat[cells + offset]
            total += weight * ((neighbor != labels) & (neighbor > 0))
        return total

    def labels(self) -> npt.NDArray[np.int16]:
        return self.padded.reshape(-1)[self.cells].reshape(self.shape).copy()


def _block_counts(volumes: Mapping[int, float], num_blocks: int) -> dict[int, int]:
    """Whole block counts per phase by largest remainder, summing to the rounded total."""
    phases = sorted(volumes)
    exact = np.array([volumes[phase] * num_blocks for phase in phases])
    counts = np.floor(exact).astype(np.int64)
    total = min(num_blocks, round(float(exact.sum())))
    short = total - int(counts.sum())
    # Ties go to the lower phase.
    order = np.argsort(-(exact - counts), kind="stable")
    counts[order[:short]] += 1
    if counts.sum() > num_blocks:
        raise InfeasibleConstraintsError(
            f"phase volumes need {counts.sum()} blocks, the grid has {num_blocks}"
        )
    return dict(zip(phases, counts.tolist()))


def _constrained_start(
    grid: BlockGrid, q: int, volumes: Mapping[int, float], fill: int
) -> PhasePartition:
    if fill in volumes or not 1 <= fill <= q:
        raise InfeasibleConstraintsError(f"fill phase {fill} must be free and in 1..{q}")
    if any(not 1 <= phase <= q or v < 0 for phase, v in volumes.items()):
        raise InfeasibleConstraintsError(f"volumes must name phases 1..{q} with v >= 0")
    if sum(volumes.values()) > 1.0 + 1e-12:
        raise InfeasibleConstraintsError(
            f"phase volumes sum to {sum(volumes.values()):.6g} > 1"
        )
    counts = _block_counts(volumes, grid.num_blocks)
    labels = np.full(grid.num_blocks, fill, dtype=np.int16)
    # Layer the constrained phases from the bottom up in phase order.
    order = np.lexsort(np.indices(grid.shape).reshape(grid.d, -1))
    start = 0
    for phase in sorted(counts):
        labels[order[start : start + counts[phase]]] = phase
        start += counts[phase]
    return PhasePartition(grid, q, labels.reshape(grid.shape))


def anneal_partition(
    boundary: BoundarySpec | None,
    tau: TauModel,
    grid: BlockGrid,
    rng: np.random.Generator,
    *,
    q: int | None = None,
    initial: PhasePartition | None = None,
    volumes: Mapping[int, float] | None = None,
    fill: int = 1,
    schedule: AnnealSchedule | None = None,
) -> AnnealResult:
    """Minimize :func:`~pottslab.phases.surface_energy` by simulated annealing.

    ``volumes`` (phase -> volume) switches to volume-preserving swap moves;
    the blocks no constrained phase takes go to ``fill``. Otherwise single
    blocks are relabeled freely. The returned partition is the best one
    seen, the initial partition included.
    """
    schedule = AnnealSchedule() if schedule is None else schedule
    if not grid.is_uniform:
        raise ValueError("the annealer needs a grid of equal blocks")
    if q is None:
        q = boundary.q if boundary is not None else initial.q if initial is not None else 2
    if volumes is not None:
        start = _constrained_start(grid, q, volumes, fill)
        if initial is not None:
            counts = [np.bincount(p.labels.ravel(), minlength=q + 1) for p in (initial, start)]
            if not np.array_equal(*counts):
                raise InfeasibleConstraintsError("initial partition violates the volumes")
            start = initial
    elif initial is not None:
        start = initial
    else:
        start = PhasePartition(
            grid, q, rng.integers(1, q + 1, size=grid.shape).astype(np.int16)
        )
    if np.any(start.labels == 0):
        raise InfeasibleConstraintsError("the annealer cannot start from indefinite blocks")
    grid.check_same(start.grid)

    board = _Board(start, tau, boundary)
    energy = surface_energy(start, tau, boundary)
    initial_energy = best = energy
    best_labels = start.labels.copy()
    t0 = schedule.t0 or tau.tau_max * board.area * 2 * grid.d
    flat = board.padded.reshape(-1)
    audit_every = lab_globals.audit_every
    moves = audits = 0
    next_audit = audit_every
    trace: list[TraceRow] = []

    for level, temperature in enumerate(schedule.temperatures(t0)):
        accepted = proposed = 0
        for _ in range(schedule.sweeps_per_level):
            for cells in board.classes:
                if volumes is None:
                    current = flat[cells]
                    shift = rng.integers(1, max(q, 2), size=cells.size)
                    proposal = ((current - 1 + shift) % q + 1).astype(np.int16)
                    delta = board.local(cells, proposal) - board.local(cells, current)
                    accept = _metropolis(delta, temperature, rng)
                    flat[cells[accept]] = proposal[accept]
                else:
                    perm = rng.permutation(cells)
                    half = perm.size // 2
                    first, second = perm[:half], perm[half : 2 * half]
                    a, b = flat[first], flat[second]
                    delta = (
                        board.local(first, b) - board.local(first, a)
                        + board.local(second, a) - board.local(second, b)
                    )
                    accept = _metropolis(delta, temperature, rng) & (a != b)
                    flat[first[accept]] = b[accept]
                    flat[second[accept]] = a[accept]
                energy += float(delta[accept].sum())
                proposed += delta.size
                accepted += int(accept.sum())
                moves += delta.size
                if energy < best - 1e-12:
                    best, best_labels = energy, board.labels()
                if moves >= next_audit:
                    _audit(board, energy, grid, q, tau, boundary, moves)
                    audits += 1
                    next_audit += audit_every
        trace.append(
            TraceRow(
                level=level,
                temperature=temperature,
                energy=energy,
                best=best,
                acceptance=accepted / max(proposed, 1),
            )
        )
        logger.debug("level %d T=%.4g energy=%.6g best=%.6g", level, temperature, energy, best)

    _audit(board, energy, grid, q, tau, boundary, moves)
    audits += 1
    return AnnealResult(
        partition=PhasePartition(grid, q, best_labels),
        energy=best,
        initial_energy=initial_energy,
        trace=trace,
        moves=moves,
        audits=audits,
    )


def _metropolis(
    delta: npt.NDArray[np.float64], temperature: float, rng: np.random.Generator
) -> npt.NDArray[np.bool_]:
    uniforms = rng.random(delta.size)
    with np.errstate(over="ignore"):
        return (delta <= 0) | (uniforms < np.exp(-delta / temperature))


def _audit(
    board: _Board,
    energy: float,
    grid: BlockGrid,
    q: int,
    tau: TauModel,
    boundary: BoundarySpec | None,
    moves: int,
) -> None:
    full = surface_energy(PhasePartition(grid, q, board.labels()), tau, boundary)
    if abs(full - energy) > _AUDIT_TOLERANCE * max(1.0, abs(full)):
        raise EnergyDriftError(
            f"incremental energy {energy!r} drifted from full recomputation {full!r} "
            f"after {moves} moves"
        )
    logger.info("audit after %d moves: energy %.9g matches", moves, full)
