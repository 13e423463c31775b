import dataclasses
import functools
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
import scipy.sparse as sps

from .._context import lab_globals
from ..exc import SizingError

IntArray = npt.NDArray[np.int64]


@dataclasses.dataclass(frozen=True, eq=False)
class Lattice:
    """A rectangular piece of the rescaled integer lattice.

    Sites are stored as integer coordinates in lattice units; the physical
    position of a site is ``coords / n``. Sites are enumerated
    lexicographically by coordinates (first axis most significant) and edges
    by ``(site, axis)``, the edge of a site along an axis joining it to the
    site one step up that axis. Both orders are fixed: snapshots, exact
    tables and partitions rely on them.
    """

    d: int
    n: int
    shape: tuple[int, ...]
    origin: tuple[int, ...]
    coords: IntArray
    edges: IntArray
    edge_axis: npt.NDArray[np.int8]

    @property
    def num_sites(self) -> int:
        return int(self.coords.shape[0])

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @functools.cached_property
    def points(self) -> npt.NDArray[np.float64]:
        """Physical site positions, ``coords / n``."""
        return self.coords / self.n

    @functools.cached_property
    def boundary_mask(self) -> npt.NDArray[np.bool_]:
        """Sites on the outer layer of the box (some coordinate extremal)."""
        lo = np.asarray(self.origin)
        hi = lo + np.asarray(self.shape) - 1
        return np.any((self.coords == lo) | (self.coords == hi), axis=1)

    @functools.cached_property
    def center_index(self) -> int:
        """The site closest to the middle of the box (rounded down)."""
        middle = tuple(o + (s - 1) // 2 for o, s in zip(self.origin, self.shape))
        return self.site_index(middle)

    @functools.cached_property
    def adjacency(self) -> sps.csr_matrix:
        """Symmetric site-site matrix whose entries are ``edge index + 1``."""
        data = np.arange(1, self.num_edges + 1)
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        matrix = sps.csr_matrix(
            (np.concatenate([data, data]), (rows, cols)),
            shape=(self.num_sites, self.num_sites),
        )
        matrix.sort_indices()
        return matrix

    @functools.cached_property
    def degree(self) -> IntArray:
        return np.diff(self.adjacency.indptr).astype(np.int64)

    def neighbors(self, site: int) -> tuple[IntArray, IntArray]:
        """Return ``(neighbor sites, connecting edge ids)`` of ``site``."""
        adj = self.adjacency
        start, stop = adj.indptr[site], adj.indptr[site + 1]
        return adj.indices[start:stop].astype(np.int64), adj.data[start:stop] - 1

    def site_index(self, coord: Sequence[int]) -> int:
        local = tuple(int(c) - o for c, o in zip(coord, self.origin))
        return int(np.ravel_multi_index(local, self.shape))

    def as_grid(self, values: npt.NDArray) -> npt.NDArray:
        """Reshape a per-site array onto the box shape."""
        return np.asarray(values).reshape(self.shape)


def _check_budget(shape: Sequence[int]) -> None:
    sites = math.prod(shape)
    if sites > lab_globals.max_sites:
        raise SizingError(
            f"A lattice of shape {tuple(shape)} has {sites} sites, above the "
            f"configured budget of {lab_globals.max_sites}. Raise it with "
            "pottslab.configure(max_sites=...)."
        )


def _build(d: int, n: int, shape: tuple[int, ...], origin: tuple[int, ...]) -> Lattice:
    _check_budget(shape)
    index = np.arange(math.prod(shape), dtype=np.int64).reshape(shape)
    coords = np.stack(np.unravel_index(index.ravel(), shape), axis=1).astype(np.int64)
    coords += np.asarray(origin, dtype=np.int64)

    sources, targets, axes = [], [], []
    for axis in range(d):
        if shape[axis] < 2:
            continue
        lower = [slice(None)] * d
        upper = [slice(None)] * d
        lower[axis] = slice(0, shape[axis] - 1)
        upper[axis] = slice(1, shape[axis])
        sources.append(index[tuple(lower)].ravel())
        targets.append(index[tuple(upper)].ravel())
        axes.append(np.full(sources[-1].size, axis, dtype=np.int8))
    if sources:
        src = np.concatenate(sources)
        dst = np.concatenate(targets)
        edge_axis = np.concatenate(axes)
        order = np.lexsort((edge_axis, src))
        edges = np.stack([src[order], dst[order]], axis=1)
        edge_axis = edge_axis[order]
    else:
        edges = np.empty((0, 2), dtype=np.int64)
        edge_axis = np.empty(0, dtype=np.int8)
    return Lattice(
        d=d,
        n=n,
        shape=shape,
        origin=origin,
        coords=coords,
        edges=edges,
        edge_axis=edge_axis,
    )


def build_box(d: int, n: int) -> Lattice:
    """The sites of the closed unit cube at resolution ``n``: ``(n+1)**d`` sites.

    Raises :class:`~pottslab.exc.SizingError` when the site count exceeds the
    configured ``max_sites`` budget.
    """
    if d < 2:
        raise ValueError(f"build_box needs d >= 2, got d={d}; use build_segment")
    if n < 1:
        raise ValueError(f"resolution n must be >= 1, got {n}")
    return _build(d, n, (n + 1,) * d, (0,) * d)


def build_segment(n: int) -> Lattice:
    """The one-dimensional closed unit interval at resolution ``n``."""
    if n < 1:
        raise ValueError(f"resolution n must be >= 1, got {n}")
    return _build(1, n, (n + 1,), (0,))


def build_slab(d: int, length: int, width: int) -> Lattice:
    """The slab ``[-length, length] x [-width, width]**(d-1)`` of the integer lattice."""
    if d < 2 or length < 1 or width < 1:
        raise ValueError(f"invalid slab d={d}, length={length}, width={width}")
    shape = (2 * length + 1,) + (2 * width + 1,) * (d - 1)
    origin = (-length,) + (-width,) * (d - 1)
    return _build(d, max(length, width), shape, origin)


def box_at(lattice: Lattice, x: Sequence[float], r: float) -> IntArray:
    """Sites of ``lattice`` inside the half-open box ``Lambda(x, r)``.

    ``Lambda(x, r)`` holds the points ``y`` with ``-r/2 < y_i - x_i <= r/2`` in
    every coordinate, so translates by multiples of ``r`` never overlap.
    """
    if r <= 0:
        raise ValueError(f"box side r must be positive, got {r}")
    offset = lattice.points - np.asarray(x, dtype=np.float64)
    inside = np.all((offset > -r / 2) & (offset <= r / 2), axis=1)
    return np.flatnonzero(inside)
