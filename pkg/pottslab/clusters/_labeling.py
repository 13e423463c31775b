import dataclasses
import functools

import numpy as np
import numpy.typing as npt
import scipy.sparse as sps
from scipy.sparse import csgraph

from ..lattice import BoundaryAssignment, Lattice

BondConfig = npt.NDArray[np.bool_]


@dataclasses.dataclass(frozen=True, eq=False)
class Wiring:
    """The cluster identification rule: which sites count as already connected.

    ``groups[x] = k >= 1`` puts site ``x`` in identification group ``k``; all
    sites of a group belong to one cluster before any bond is looked at.
    Colored boundary conditions use the boundary color as the group, so that
    identically colored boundary pieces count as a single cluster and a
    cluster reaching two different groups is inadmissible. The wired rule is
    the one-group special case covering the whole boundary layer.
    """

    lattice: Lattice
    groups: npt.NDArray[np.int16]
    name: str = "custom"

    @classmethod
    def free(cls, lattice: Lattice) -> "Wiring":
        return cls(lattice, np.zeros(lattice.num_sites, dtype=np.int16), "free")

    @classmethod
    def wired(cls, lattice: Lattice) -> "Wiring":
        return cls(lattice, lattice.boundary_mask.astype(np.int16), "wired")

    @classmethod
    def from_assignment(cls, assignment: BoundaryAssignment) -> "Wiring":
        return cls(assignment.lattice, assignment.indices.astype(np.int16), "colored")

    @functools.cached_property
    def present_groups(self) -> npt.NDArray[np.int16]:
        groups = np.unique(self.groups)
        return groups[groups > 0]


@dataclasses.dataclass(frozen=True, eq=False)
class ClusterLabeling:
    """Open clusters of a bond configuration under a :class:`Wiring`.

    ``labels[x]`` is the cluster id of site ``x``; ids run ``0..count-1`` in
    order of their smallest site. ``diameters`` are max-norm bounding-box
    extents in lattice units, ``touches[c, k]`` says whether cluster ``c``
    contains a site of group ``k``, ``crossing[c, a]`` whether it reaches both
    extreme layers along axis ``a``.
    """

    labels: npt.NDArray[np.int64]
    count: int
    sizes: npt.NDArray[np.int64]
    diameters: npt.NDArray[np.int64]
    touches: npt.NDArray[np.bool_]
    crossing: npt.NDArray[np.bool_]

    @property
    def admissible(self) -> bool:
        """No cluster reaches two different identification groups."""
        return bool(np.all(self.touches[:, 1:].sum(axis=1) <= 1))

    @functools.cached_property
    def largest(self) -> int:
        return int(np.argmax(self.sizes)) if self.count else -1

    def connected(self, x: int, y: int) -> bool:
        return bool(self.labels[x] == self.labels[y])


def _components(
    lattice: Lattice, bonds: BondConfig, wiring: Wiring
) -> tuple[int, npt.NDArray[np.int64]]:
    n_sites = lattice.num_sites
    open_edges = lattice.edges[np.asarray(bonds, dtype=bool)]
    rows = [open_edges[:, 0]]
    cols = [open_edges[:, 1]]
    groups = wiring.present_groups
    # One virtual node per group pre-merges its sites before edge union.
    for offset, group in enumerate(groups):
        members = np.flatnonzero(wiring.groups == group)
        rows.append(members)
        cols.append(np.full(members.size, n_sites + offset, dtype=np.int64))
    row = np.concatenate(rows)
    col = np.concatenate(cols)
    size = n_sites + groups.size
    graph = sps.coo_matrix(
        (np.ones(row.size, dtype=np.int8), (row, col)), shape=(size, size)
    ).tocsr()
    count, labels = csgraph.connected_components(graph, directed=False)
    site_labels = labels[:n_sites]
    # Renumber by smallest member site so ids are independent of virtual nodes.
    _, first = np.unique(site_labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(count, dtype=np.int64)
    remap[np.unique(site_labels)[order]] = np.arange(order.size)
    return int(order.size), remap[site_labels]


def clusters(bonds: BondConfig, wiring: Wiring) -> ClusterLabeling:
    """Label the open clusters of ``bonds``, merging identified sites first."""
    lattice = wiring.lattice
    count, labels = _components(lattice, bonds, wiring)
    sizes = np.bincount(labels, minlength=count).astype(np.int64)

    coords = lattice.coords
    lo = np.full((count, lattice.d), np.iinfo(np.int64).max)
    hi = np.full((count, lattice.d), np.iinfo(np.int64).min)
    np.minimum.at(lo, labels, coords)
    np.maximum.at(hi, labels, coords)
    diameters = (hi - lo).max(axis=1) if count else np.empty(0, dtype=np.int64)
    box_lo = np.asarray(lattice.origin)
    box_hi = box_lo + np.asarray(lattice.shape) - 1
    crossing = (lo == box_lo) & (hi == box_hi)

    n_groups = int(wiring.groups.max(initial=0)) + 1
    touches = np.zeros((count, n_groups), dtype=bool)
    touches[labels, wiring.groups] = True
    return ClusterLabeling(
        labels=labels,
        count=count,
        sizes=sizes,
        diameters=diameters.astype(np.int64),
        touches=touches,
        crossing=crossing,
    )


def cluster_count(bonds: BondConfig, wiring: Wiring) -> int:
    """``#(eta)``: the number of clusters under the identification rule."""
    return _components(wiring.lattice, bonds, wiring)[0]
