"""Conditional ensembles: Gibbs samples restricted to color-excess events.

The event ``G_n`` asks that the fraction ``S_n(i)`` of sites with color ``i``
reaches ``s_i`` for every ``i >= 2`` (and, with upper thresholds, stays below
``u_i``). Two ways to condition:

* ``rejection`` runs the plain chain and keeps the samples in ``G_n``.
  Exact, but the acceptance collapses once the thresholds leave the typical
  fluctuation window.
* ``tilted`` runs the chain with per-color chemical potentials ``h_c`` and
  gives each kept sample the weight ``exp(-sum_c h_c N_c)``, ``N_c`` the
  number of sites of color ``c``. The weights are normalized with
  log-sum-exp and their spread and effective sample size are logged.

Each kept sample is turned into an empirical phase partition, whose droplet
phases are matched against the best translate of the rescaled Wulff crystal.
"""

import dataclasses
import logging
import math
from typing import Literal

import numpy as np
import numpy.typing as npt
import pydantic
from scipy.special import logsumexp

from ..exc import PhaseSpecError
from ..gibbs import ModelParams, SpinConfig
from ..lattice import BoundarySpec
from ..phases import (
    BlockGrid,
    BlockSet,
    PhasePartition,
    TestEventSpec,
    dist_l1,
    empirical_phase_partition,
    phase_components,
)
from ..sampling import RunSpec, sample_chain
from ..tau import TauModel
from ._reference import droplet_scale
from ._wulff import WulffShape, wulff_crystal

logger = logging.getLogger(__name__)

EnsembleMode = Literal["rejection", "tilted"]


def target_volumes(
    thresholds: npt.ArrayLike, theta: float, q: int
) -> npt.NDArray[np.float64]:
    """Droplet volumes ``v_i = (s_i - (1 - theta)/q) / theta`` in the unit cube."""
    if theta <= 0:
        raise PhaseSpecError(f"theta must be positive, got {theta}")
    s = np.asarray(thresholds, dtype=np.float64)
    floor = (1.0 - theta) / q
    if np.any(s < floor - 1e-12):
        raise PhaseSpecError(
            f"thresholds must be at least (1 - theta)/q = {floor:.6g}, got {s.tolist()}"
        )
    return np.maximum(s - floor, 0.0) / theta


class EnsembleSpec(pydantic.BaseModel):
    """Thresholds of a conditioned ensemble and how to condition on them.

    ``thresholds`` and ``upper`` hold ``s_2..s_q`` and ``u_2..u_q``.
    ``boundary_color`` freezes the whole boundary to one color; ``None``
    leaves it free. ``theta``, when given, enables the target volumes and the
    phase partition of kept samples. Tilted runs without ``fields`` use zero
    potentials, which reduces to rejection with unit weights.
    """

    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")

    q: int = pydantic.Field(ge=2)
    thresholds: tuple[float, ...]
    upper: tuple[float, ...] | None = None
    boundary_color: int | None = 1
    theta: float | None = None
    mode: EnsembleMode = "rejection"
    fields: tuple[float, ...] | None = None

    @pydantic.model_validator(mode="after")
    def _check(self) -> "EnsembleSpec":
        if len(self.thresholds) != self.q - 1:
            raise ValueError(f"need {self.q - 1} thresholds s_2..s_q")
        if any(not 0.0 <= s <= 1.0 for s in self.thresholds):
            raise ValueError("thresholds must lie in [0, 1]")
        if self.upper is not None:
            if len(self.upper) != self.q - 1:
                raise ValueError(f"need {self.q - 1} upper thresholds u_2..u_q")
            if any(u < s for s, u in zip(self.thresholds, self.upper)):
                raise ValueError("upper thresholds must not lie below the lower ones")
        if self.boundary_color is not None and not 1 <= self.boundary_color <= self.q:
            raise ValueError(f"boundary color must lie in 1..{self.q}")
        if self.fields is not None and len(self.fields) != self.q:
            raise ValueError(f"need {self.q} fields h_1..h_q")
        if self.theta is not None:
            target_volumes(self.thresholds, self.theta, self.q)
        return self

    @property
    def target_volumes(self) -> npt.NDArray[np.float64]:
        if self.theta is None:
            raise PhaseSpecError("target volumes need theta")
        return target_volumes(self.thresholds, self.theta, self.q)

    def boundary(self, d: int) -> BoundarySpec:
        if self.boundary_color is None:
            return BoundarySpec.free(d, self.q)
        return BoundarySpec.whole(d, self.q, self.boundary_color)


def ensemble_condition_check(
    spins: SpinConfig, spec: EnsembleSpec
) -> tuple[bool, npt.NDArray[np.float64]]:
    """Whether ``spins`` lies in ``G_n``, and the color fractions ``S_n(1..q)``."""
    spins = np.asarray(spins, dtype=np.int64)
    fractions = np.bincount(spins, minlength=spec.q + 1)[1 : spec.q + 1] / spins.size
    ok = bool(np.all(fractions[1:] >= np.asarray(spec.thresholds)))
    if spec.upper is not None:
        ok = ok and bool(np.all(fractions[1:] <= np.asarray(spec.upper)))
    return ok, fractions


@dataclasses.dataclass(frozen=True, eq=False)
class DropletReport:
    """Kept samples of a conditioned run and what they look like.

    Per-sample arrays are indexed by kept sample; the columns of
    ``distances`` and ``components`` are the phases ``2..q``.
    """

    spec: EnsembleSpec
    params: ModelParams
    n: int
    d: int
    samples: int
    accepted: int
    ess: float
    log_weight_range: tuple[float, float]
    weights: npt.NDArray[np.float64]
    fractions: npt.NDArray[np.float64]
    fraction_mean: npt.NDArray[np.float64]
    fraction_stderr: npt.NDArray[np.float64]
    replicas: npt.NDArray[np.int64]
    sweeps: npt.NDArray[np.int64]
    partitions: list[PhasePartition]
    distances: npt.NDArray[np.float64]
    components: npt.NDArray[np.int64]

    @property
    def acceptance(self) -> float:
        return self.accepted / self.samples if self.samples else 0.0

    @property
    def single_component_rate(self) -> float:
        """Share of kept samples whose phase 2 forms one connected component."""
        if not self.partitions:
            return math.nan
        return float(np.mean(self.components[:, 0] == 1))

    def rows(self) -> list[dict[str, float | int]]:
        out = []
        for k in range(self.accepted):
            row: dict[str, float | int] = {
                "replica": int(self.replicas[k]),
                "sweep": int(self.sweeps[k]),
                "weight": float(self.weights[k]),
            }
            for c in range(1, self.spec.q + 1):
                row[f"fraction_{c}"] = float(self.fractions[k, c - 1])
            if self.partitions:
                for i in range(2, self.spec.q + 1):
                    row[f"dist_{i}"] = float(self.distances[k, i - 2])
                    row[f"components_{i}"] = int(self.components[k, i - 2])
            out.append(row)
        return out

    def summary(self) -> dict[str, float | int | str]:
        out: dict[str, float | int | str] = {
            "mode": self.spec.mode,
            "samples": self.samples,
            "accepted": self.accepted,
            "acceptance": self.acceptance,
            "ess": self.ess,
            "log_weight_min": self.log_weight_range[0],
            "log_weight_max": self.log_weight_range[1],
            "single_component_rate": self.single_component_rate,
        }
        for c in range(1, self.spec.q + 1):
            out[f"fraction_{c}"] = float(self.fraction_mean[c - 1])
            out[f"fraction_{c}_stderr"] = float(self.fraction_stderr[c - 1])
        return out


def _translates(grid: BlockGrid) -> npt.NDArray[np.float64]:
    # Block centers and block corners, the cube faces included.
    edges = np.concatenate([[0.0], np.cumsum(grid.extents)])
    mids = (edges[:-1] + edges[1:]) / 2
    ticks = np.unique(np.concatenate([edges, mids]))
    mesh = np.meshgrid(*([ticks] * grid.d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _droplet_masks(
    grid: BlockGrid, shape: WulffShape, volume: float, centers: npt.NDArray[np.float64]
) -> npt.NDArray[np.bool_]:
    if volume <= 0:
        return np.zeros((len(centers), grid.num_blocks), dtype=bool)
    scale = droplet_scale(shape, volume)
    return np.stack(
        [shape.contains(grid.centers, scale=scale, center=c) for c in centers]
    )


def _best_translate(
    phase: BlockSet, masks: npt.NDArray[np.bool_], volumes: npt.NDArray[np.float64]
) -> float:
    a = phase.mask.ravel().astype(np.float64)
    overlap = masks @ (volumes * a)
    # |M xor A| = |M| + |A| - 2 |M and A|
    distances = masks @ volumes + volumes @ a - 2 * overlap
    best = int(np.argmin(distances))
    return dist_l1(phase, BlockSet(phase.grid, masks[best].reshape(phase.grid.shape)))


def droplet_experiment(
    params: ModelParams,
    spec: EnsembleSpec,
    runs: int,
    *,
    n: int,
    d: int = 3,
    samples: int = 1,
    seed: int = 0,
    tau: TauModel | None = None,
    f: int | None = None,
    burn_in: int | None = None,
    thinning: int = 1,
) -> DropletReport:
    """Sample the conditioned ensemble with ``runs`` independent chains.

    Each chain emits ``samples`` configurations after burn-in. Kept samples
    are those in ``G_n``; with ``spec.theta`` set, each is also mapped to its
    empirical phase partition, and every phase ``i >= 2`` is compared in
    ``dist_l1`` with the best translate of a Wulff droplet of volume ``v_i``.
    No kept sample is reported (and logged), not raised.
    """
    if params.q != spec.q:
        raise ValueError(f"model has q={params.q}, ensemble has q={spec.q}")
    fields = spec.fields if spec.mode == "tilted" else None
    run = RunSpec(
        d=d,
        n=n,
        q=spec.q,
        beta=params.beta,
        boundary=spec.boundary(d),
        sweeps=samples * thinning,
        burn_in=burn_in,
        thinning=thinning,
        replicas=runs,
        seed=seed,
        fields=fields,
    )
    result = sample_chain(run)
    h = np.zeros(spec.q) if fields is None else np.asarray(fields, dtype=np.float64)

    lattice = run.lattice()
    kept = []
    log_weights = []
    fractions = []
    for sample in result.samples:
        ok, frac = ensemble_condition_check(sample.spins, spec)
        if ok:
            kept.append(sample)
            fractions.append(frac)
            log_weights.append(-float(h @ frac) * lattice.num_sites)
    total = len(result.samples)

    if not kept:
        logger.warning(
            "droplet run (%s, beta=%g, n=%d) kept none of %d samples",
            spec.mode,
            params.beta,
            n,
            total,
        )
        nan = np.full(spec.q, math.nan)
        return DropletReport(
            spec=spec,
            params=params,
            n=n,
            d=d,
            samples=total,
            accepted=0,
            ess=0.0,
            log_weight_range=(math.nan, math.nan),
            weights=np.zeros(0),
            fractions=np.zeros((0, spec.q)),
            fraction_mean=nan,
            fraction_stderr=nan,
            replicas=np.zeros(0, dtype=np.int64),
            sweeps=np.zeros(0, dtype=np.int64),
            partitions=[],
            distances=np.zeros((0, spec.q - 1)),
            components=np.zeros((0, spec.q - 1), dtype=np.int64),
        )

    logw = np.asarray(log_weights)
    weights = np.exp(logw - logsumexp(logw))
    ess = float(1.0 / np.sum(weights**2))
    frac = np.asarray(fractions)
    mean = weights @ frac
    variance = weights @ (frac - mean) ** 2
    stderr = np.sqrt(variance / ess) if len(kept) > 1 else np.full(spec.q, math.nan)
    logger.info(
        "droplet run kept %d/%d samples; log-weights in [%.6g, %.6g], ESS %.1f",
        len(kept),
        total,
        logw.min(),
        logw.max(),
        ess,
    )

    partitions: list[PhasePartition] = []
    distances = np.zeros((len(kept), spec.q - 1))
    components = np.zeros((len(kept), spec.q - 1), dtype=np.int64)
    if spec.theta is not None:
        events = TestEventSpec(q=spec.q, theta=spec.theta)
        grid = BlockGrid.for_lattice(lattice, f)
        shape = wulff_crystal(tau or TauModel.isotropic(d), m=64)
        centers = _translates(grid)
        volumes = grid.volumes.ravel()
        masks = [
            _droplet_masks(grid, shape, float(v), centers) for v in spec.target_volumes
        ]
        for k, sample in enumerate(kept):
            partition = empirical_phase_partition(sample.spins, lattice, events, grid.f)
            partitions.append(partition)
            for i in range(2, spec.q + 1):
                phase = partition.phase(i)
                distances[k, i - 2] = _best_translate(phase, masks[i - 2], volumes)
                components[k, i - 2] = phase_components(partition, i)

    return DropletReport(
        spec=spec,
        params=params,
        n=n,
        d=d,
        samples=total,
        accepted=len(kept),
        ess=ess,
        log_weight_range=(float(logw.min()), float(logw.max())),
        weights=weights,
        fractions=frac,
        fraction_mean=mean,
        fraction_stderr=stderr,
        replicas=np.array([s.replica for s in kept], dtype=np.int64),
        sweeps=np.array([s.sweep for s in kept], dtype=np.int64),
        partitions=partitions,
        distances=distances,
        components=components,
    )
