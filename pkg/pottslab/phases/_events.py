from typing import Literal

import numpy as np
import numpy.typing as npt
import pydantic

from ..exc import PhaseSpecError
from ..gibbs import SpinConfig
from ..lattice import Lattice
from ._grid import BlockGrid, PhasePartition


class TestEventSpec(pydantic.BaseModel):
    """Density test events for the pure phases.

    In phase ``j`` the reference density of color ``j`` is ``1/q + theta``
    and every other color has ``(1 - 1/q - theta) / (q - 1)``. A block passes
    the event of phase ``j`` when every color density lies within
    ``epsilon`` of these. ``epsilon`` defaults to ``min(0.05, theta/4)`` and
    must stay below ``theta / 2`` so that two events never hold together.
    """

    __test__ = False

    model_config = pydantic.ConfigDict(frozen=True)

    q: int = pydantic.Field(ge=2)
    theta: float
    epsilon: float | None = None
    theta_source: Literal["supplied", "estimated"] = "supplied"

    @pydantic.model_validator(mode="before")
    @classmethod
    def _default_epsilon(cls, data: object) -> object:
        if isinstance(data, dict) and data.get("epsilon") is None and "theta" in data:
            data = {**data, "epsilon": min(0.05, float(data["theta"]) / 4)}
        return data

    @pydantic.model_validator(mode="after")
    def _guard(self) -> "TestEventSpec":
        if not 0.0 < self.theta <= 1.0 - 1.0 / self.q:
            raise PhaseSpecError(
                f"theta must lie in (0, {1.0 - 1.0 / self.q:g}], got {self.theta}; "
                "test events are only defined in the phase-coexistence regime"
            )
        if not 0.0 < self.epsilon or not self.theta > 2 * self.epsilon:
            raise PhaseSpecError(
                f"need 0 < epsilon < theta/2 for exclusive events, got "
                f"theta={self.theta}, epsilon={self.epsilon}"
            )
        return self

    def reference_densities(self, j: int) -> npt.NDArray[np.float64]:
        """Color densities ``rho_j(1..q)`` of pure phase ``j``."""
        if not 1 <= j <= self.q:
            raise ValueError(f"phase must lie in 1..{self.q}, got {j}")
        rho = np.full(self.q, (1.0 - 1.0 / self.q - self.theta) / (self.q - 1))
        rho[j - 1] = 1.0 / self.q + self.theta
        return rho

    @property
    def reference_table(self) -> npt.NDArray[np.float64]:
        """Row ``j - 1`` holds :meth:`reference_densities` of phase ``j``."""
        return np.stack([self.reference_densities(j) for j in range(1, self.q + 1)])


def _densities(colors: npt.NDArray, q: int) -> npt.NDArray[np.float64]:
    return np.bincount(colors, minlength=q + 1)[1 : q + 1] / colors.size


def test_event(
    sites: npt.ArrayLike, spins: SpinConfig, j: int, spec: TestEventSpec
) -> bool:
    """Whether the event of phase ``j`` occurs on the block made of ``sites``."""
    block = np.asarray(spins)[np.asarray(sites, dtype=np.int64)]
    if block.size == 0:
        raise ValueError("test event needs a nonempty block")
    deviation = np.abs(_densities(block, spec.q) - spec.reference_densities(j))
    return bool(np.all(deviation <= spec.epsilon))


test_event.__test__ = False


def empirical_phase_partition(
    spins: SpinConfig,
    lattice: Lattice,
    spec: TestEventSpec,
    f: int | None = None,
) -> PhasePartition:
    """Label each block with the phase whose test event it passes, else 0.

    ``f`` defaults to :func:`intermediate_scale` of the lattice.
    """
    grid = BlockGrid.for_lattice(lattice, f)
    q = spec.q
    block = grid.block_of_sites(lattice)
    spins = np.asarray(spins, dtype=np.int64)
    counts = np.bincount(block * q + (spins - 1), minlength=grid.num_blocks * q)
    counts = counts.reshape(grid.num_blocks, q)
    densities = counts / counts.sum(axis=1, keepdims=True)
    deviation = np.abs(densities[:, None, :] - spec.reference_table[None, :, :])
    passes = np.all(deviation <= spec.epsilon, axis=2)
    labels = np.where(passes.any(axis=1), np.argmax(passes, axis=1) + 1, 0)
    return PhasePartition(grid, q, labels.reshape(grid.shape).astype(np.int16))
