"""Distances, perimeter and surface energy on the block grid.

The perimeter here is the digital face count: the area of block faces that
separate different labels. It is exact for axis-aligned interfaces and
overestimates the perimeter of a tilted interface by up to a factor
``sqrt(d)``. Face normals are axis vectors, so the surface tension is only
ever evaluated on ``e_1, ..., e_d``.
"""

import math

import numpy as np
from scipy import ndimage

from ..exc import GridMismatchError
from ..lattice import BoundarySpec
from ..tau import TauModel
from ._grid import BlockSet, PhasePartition


def dist_l1(a: BlockSet, b: BlockSet) -> float:
    """Volume of the symmetric difference ``a xor b``."""
    a.grid.check_same(b.grid)
    return float(a.grid.volumes[a.mask ^ b.mask].sum())


def dist_p(a: PhasePartition, b: PhasePartition) -> float:
    """Sum over phases ``0..q`` of :func:`dist_l1` between matching phases."""
    a.grid.check_same(b.grid)
    if a.q != b.q:
        raise GridMismatchError(f"partitions have q={a.q} and q={b.q}")
    return sum(dist_l1(a.phase(i), b.phase(i)) for i in range(a.q + 1))


def _interfaces(partition: PhasePartition, axis: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    labels = partition.labels
    count = partition.grid.blocks_per_axis
    lower = np.take(labels, np.arange(count - 1), axis=axis)
    upper = np.take(labels, np.arange(1, count), axis=axis)
    return lower, upper, partition.grid.face_areas(axis)


def discrete_perimeter(partition: PhasePartition, phase: int | None = None) -> float:
    """Area of the internal block faces between different labels.

    Without ``phase`` each interface face counts once. With ``phase`` only
    faces with ``phase`` on exactly one side count, so every interface face
    contributes to the perimeters of both phases it separates.
    """
    total = 0.0
    for axis in range(partition.grid.d):
        lower, upper, areas = _interfaces(partition, axis)
        if phase is None:
            cut = lower != upper
        else:
            cut = (lower == phase) != (upper == phase)
        total += float(areas[cut].sum())
    return total


def bulk_energy(partition: PhasePartition, tau: TauModel) -> float:
    """Surface tension weighted area of the internal interfaces."""
    total = 0.0
    for axis in range(partition.grid.d):
        lower, upper, areas = _interfaces(partition, axis)
        total += tau.axis_value(axis) * float(areas[lower != upper].sum())
    return total


def boundary_energy(
    partition: PhasePartition, tau: TauModel, boundary: BoundarySpec
) -> float:
    """Area where a block of phase ``i`` lies on boundary part ``j >= 1``, ``j != i``."""
    grid = partition.grid
    if boundary.d != grid.d:
        raise GridMismatchError(f"boundary spec has d={boundary.d}, grid has d={grid.d}")
    total = 0.0
    for axis in range(grid.d):
        areas = grid.boundary_areas(axis)
        for side, layer in ((0, 0), (1, grid.blocks_per_axis - 1)):
            part = boundary.part_of_face(axis, side)
            if part == 0:
                continue
            face_labels = np.take(partition.labels, layer, axis=axis)
            total += tau.axis_value(axis) * float(areas[face_labels != part].sum())
    return total


def surface_energy(
    partition: PhasePartition, tau: TauModel, boundary: BoundarySpec | None = None
) -> float:
    """Interface energy of a partition, ``inf`` if any block is indefinite (label 0)."""
    if np.any(partition.labels == 0):
        return math.inf
    energy = bulk_energy(partition, tau)
    if boundary is not None:
        energy += boundary_energy(partition, tau, boundary)
    return energy


def phase_components(partition: PhasePartition, phase: int) -> int:
    """Number of face-connected components of one phase."""
    _, count = ndimage.label(partition.labels == phase)
    return int(count)
