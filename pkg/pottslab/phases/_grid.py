import dataclasses
import functools
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy import interpolate

from ..exc import GridMismatchError
from ..lattice import Lattice


def intermediate_scale(n: int, d: int) -> int:
    """Block side ``f(n)`` in lattice units: the smallest ``f`` with ``f**(2(d-1)) >= n``.

    This is ``ceil(n**(1/(2(d-1))))`` in exact integer arithmetic, so that
    ``f**(d-1)`` grows like ``sqrt(n)`` while ``f / log(n)`` still diverges.
    """
    if n < 2:
        raise ValueError(f"intermediate scale needs n >= 2, got {n}")
    if d < 2:
        raise ValueError(f"intermediate scale needs d >= 2, got {d}")
    power = 2 * (d - 1)
    f = max(1, math.isqrt(n) if power == 2 else int(round(n ** (1.0 / power))))
    while f**power < n:
        f += 1
    while f > 1 and (f - 1) ** power >= n:
        f -= 1
    return f


def scale_growth_table(d: int, ns: Sequence[int]) -> list[dict[str, float]]:
    """``n / f**(d-1)`` and ``f / log n`` for each ``n``; both must grow with ``n``."""
    rows = []
    for n in ns:
        f = intermediate_scale(n, d)
        rows.append(
            {"n": n, "f": f, "n_over_area": n / f ** (d - 1), "f_over_log_n": f / math.log(n)}
        )
    return rows


@dataclasses.dataclass(frozen=True)
class BlockGrid:
    """Mesoscopic blocks of side ``f / n`` tiling the unit cube.

    There are ``max(1, n // f)`` blocks per axis; the last one absorbs the
    remainder when ``f`` does not divide ``n``, so block volumes always sum to
    one. A site with coordinate ``k`` (lattice units) lies in block
    ``ceil(k / f) - 1`` clamped to the grid, the half-open ``(a, b]``
    convention of :func:`~pottslab.lattice.box_at`.
    """

    d: int
    n: int
    f: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.n < 1 or self.f < 1:
            raise ValueError(f"invalid block grid d={self.d}, n={self.n}, f={self.f}")

    @classmethod
    def uniform(cls, d: int, blocks: int) -> "BlockGrid":
        """``blocks`` equal blocks per axis."""
        return cls(d=d, n=blocks, f=1)

    @classmethod
    def for_lattice(cls, lattice: Lattice, f: int | None = None) -> "BlockGrid":
        return cls(
            d=lattice.d,
            n=lattice.n,
            f=intermediate_scale(lattice.n, lattice.d) if f is None else f,
        )

    @property
    def blocks_per_axis(self) -> int:
        return max(1, self.n // self.f)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.blocks_per_axis,) * self.d

    @property
    def num_blocks(self) -> int:
        return self.blocks_per_axis**self.d

    @property
    def is_uniform(self) -> bool:
        return self.n % self.f == 0 or self.blocks_per_axis == 1

    @functools.cached_property
    def extents(self) -> npt.NDArray[np.float64]:
        """Side length of each block along an axis (the same on every axis)."""
        count = self.blocks_per_axis
        sides = np.full(count, self.f / self.n)
        sides[-1] = 1.0 - (count - 1) * self.f / self.n
        return sides

    @functools.cached_property
    def volumes(self) -> npt.NDArray[np.float64]:
        out = np.ones(self.shape)
        for axis in range(self.d):
            view = [1] * self.d
            view[axis] = -1
            out = out * self.extents.reshape(view)
        return out

    def face_areas(self, axis: int) -> npt.NDArray[np.float64]:
        """Area of the faces orthogonal to ``axis`` between consecutive blocks.

        The result has the grid shape except ``blocks - 1`` entries along
        ``axis``; entry ``k`` is the face between block ``k`` and ``k + 1``.
        """
        sections = self.volumes / self.extents.reshape(
            [-1 if a == axis else 1 for a in range(self.d)]
        )
        return np.take(sections, np.arange(self.blocks_per_axis - 1), axis=axis)

    def boundary_areas(self, axis: int) -> npt.NDArray[np.float64]:
        """Area of each block's face on the cube face orthogonal to ``axis``."""
        return np.take(self.volumes, 0, axis=axis) / self.extents[0]

    @functools.cached_property
    def axis_centers(self) -> npt.NDArray[np.float64]:
        """Block center coordinates along one axis."""
        edges = np.concatenate([[0.0], np.cumsum(self.extents)])
        return (edges[:-1] + edges[1:]) / 2

    @functools.cached_property
    def centers(self) -> npt.NDArray[np.float64]:
        """Block centers, shape ``(num_blocks, d)`` in lexicographic order."""
        grids = np.meshgrid(*([self.axis_centers] * self.d), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def block_of_coords(self, coords: npt.ArrayLike) -> npt.NDArray[np.int64]:
        """Flat block index of integer lattice coordinates (lattice units)."""
        k = np.asarray(coords, dtype=np.int64)
        per_axis = np.clip(-(-k // self.f) - 1, 0, self.blocks_per_axis - 1)
        return np.ravel_multi_index(tuple(per_axis.T), self.shape)

    def block_of_sites(self, lattice: Lattice) -> npt.NDArray[np.int64]:
        if (lattice.d, lattice.n) != (self.d, self.n) or any(lattice.origin):
            raise GridMismatchError(
                f"lattice (d={lattice.d}, n={lattice.n}) does not carry grid "
                f"(d={self.d}, n={self.n})"
            )
        return self.block_of_coords(lattice.coords)

    def check_same(self, other: "BlockGrid") -> None:
        if self != other:
            raise GridMismatchError(f"block grids differ: {self} vs {other}")


@dataclasses.dataclass(frozen=True, eq=False)
class BlockSet:
    """A union of blocks, e.g. one phase of a partition."""

    grid: BlockGrid
    mask: npt.NDArray[np.bool_]

    def __post_init__(self) -> None:
        if self.mask.shape != self.grid.shape:
            raise GridMismatchError(
                f"mask of shape {self.mask.shape} on a grid of shape {self.grid.shape}"
            )

    @property
    def volume(self) -> float:
        return float(self.grid.volumes[self.mask].sum())

    @classmethod
    def empty(cls, grid: BlockGrid) -> "BlockSet":
        return cls(grid, np.zeros(grid.shape, dtype=bool))

    @classmethod
    def full(cls, grid: BlockGrid) -> "BlockSet":
        return cls(grid, np.ones(grid.shape, dtype=bool))


@dataclasses.dataclass(frozen=True, eq=False)
class PhasePartition:
    """A label in ``0..q`` for every block; 0 is the indefinite phase."""

    grid: BlockGrid
    q: int
    labels: npt.NDArray[np.int16]

    def __post_init__(self) -> None:
        if self.labels.shape != self.grid.shape:
            raise GridMismatchError(
                f"labels of shape {self.labels.shape} on a grid of shape {self.grid.shape}"
            )
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() > self.q):
            raise ValueError(f"labels must lie in 0..{self.q}")

    @classmethod
    def constant(cls, grid: BlockGrid, q: int, label: int) -> "PhasePartition":
        return cls(grid, q, np.full(grid.shape, label, dtype=np.int16))

    def phase(self, label: int) -> BlockSet:
        return BlockSet(self.grid, self.labels == label)

    def volumes(self) -> npt.NDArray[np.float64]:
        """Volume of each phase ``0..q``."""
        return np.bincount(
            self.labels.ravel(), weights=self.grid.volumes.ravel(), minlength=self.q + 1
        )

    def permuted(self, mapping: Sequence[int]) -> "PhasePartition":
        """Relabel phase ``i`` as ``mapping[i]`` (``mapping[0]`` must be 0)."""
        table = np.asarray(mapping, dtype=np.int16)
        if table.size != self.q + 1 or table[0] != 0:
            raise ValueError("mapping must cover 0..q and fix 0")
        return PhasePartition(self.grid, self.q, table[self.labels])

    def dilated(
        self, factor: float, center: npt.ArrayLike | None = None
    ) -> "PhasePartition":
        """The partition stretched by ``factor`` about ``center`` on the same grid.

        Each block takes the label of the block nearest to the preimage of its
        center, ``center + (x - center) / factor``; ``center`` defaults to the
        middle of the cube. Preimages outside the cube take the label of the
        nearest boundary block.
        """
        if not factor > 0:
            raise ValueError(f"dilation factor must be positive, got {factor}")
        grid = self.grid
        origin = (
            np.full(grid.d, 0.5) if center is None else np.asarray(center, dtype=np.float64)
        )
        lookup = interpolate.RegularGridInterpolator(
            [grid.axis_centers] * grid.d,
            self.labels,
            method="nearest",
            bounds_error=False,
            fill_value=None,
        )
        preimages = origin + (grid.centers - origin) / factor
        labels = np.rint(lookup(preimages)).astype(np.int16).reshape(grid.shape)
        return PhasePartition(grid, self.q, labels)

    def same_as(self, other: "PhasePartition") -> bool:
        return (
            self.grid == other.grid
            and self.q == other.q
            and bool(np.array_equal(self.labels, other.labels))
        )
