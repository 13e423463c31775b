from typing import Literal

import numpy as np

from ..exc import DropletFitError
from ..lattice import cube_faces
from ..phases import BlockGrid, PhasePartition
from ..tau import TauModel
from ._wulff import WulffShape, wulff_crystal

ReferenceKind = Literal[
    "pyramids", "flat-slab", "corner-droplet", "centered-droplet", "double-bubble"
]


def _pyramids(grid: BlockGrid, q: int) -> PhasePartition:
    # Doubled block-center coordinates keep every distance comparison exact.
    count = grid.blocks_per_axis
    index = np.indices(grid.shape).reshape(grid.d, -1).T
    doubled = 2 * index + 1
    distances = np.concatenate([doubled, 2 * count - doubled], axis=1)
    # Column order (axis 0 low, axis 1 low, ..., axis 0 high, ...) -> face color.
    face_color = {face: color for color, face in enumerate(cube_faces(grid.d), start=1)}
    columns = [(axis, 0) for axis in range(grid.d)] + [(axis, 1) for axis in range(grid.d)]
    colors = np.array([face_color[face] for face in columns])
    nearest = distances == distances.min(axis=1, keepdims=True)
    ties = nearest.sum(axis=1)
    # Spread tied blocks over the tied faces by index-sum parity.
    pick = index.sum(axis=1) % ties
    ranked = np.cumsum(nearest, axis=1) - 1
    chosen = np.argmax(nearest & (ranked == pick[:, None]), axis=1)
    labels = colors[chosen]
    return PhasePartition(grid, q, labels.reshape(grid.shape).astype(np.int16))


def _flat_slab(grid: BlockGrid, q: int) -> PhasePartition:
    heights = np.indices(grid.shape)[-1]
    upper = heights >= grid.blocks_per_axis // 2
    labels = np.where(upper, 1, 2).astype(np.int16)
    return PhasePartition(grid, q, labels)


def droplet_scale(shape: WulffShape, volume: float, fraction: float = 1.0) -> float:
    """Scale ``s`` with ``fraction * s**d * vol(W) = volume``."""
    return (volume / (fraction * shape.volume)) ** (1.0 / shape.d)


def _place(
    grid: BlockGrid,
    labels: np.ndarray,
    shape: WulffShape,
    scale: float,
    center: np.ndarray,
    phase: int,
) -> None:
    inside = shape.contains(grid.centers, scale=scale, center=center)
    labels.reshape(-1)[inside] = phase


def _check_fit(shape: WulffShape, scale: float, room: np.ndarray, what: str) -> None:
    for axis in range(shape.d):
        reach = scale * shape.extent(axis)
        if reach > room[axis] + 1e-12:
            raise DropletFitError(
                f"{what} reaches {reach:.4f} along axis {axis}, only {room[axis]:.4f} fits"
            )


def reference_partition(
    kind: ReferenceKind,
    grid: BlockGrid,
    q: int | None = None,
    *,
    volume: float | None = None,
    tau: TauModel | None = None,
    shape: WulffShape | None = None,
) -> PhasePartition:
    """Build a named reference partition on ``grid``.

    * ``pyramids``: each block takes the color of its nearest cube face, in
      :func:`~pottslab.lattice.cube_faces` order (``q = 2d``).
    * ``flat-slab``: upper half (last axis) phase 1, lower half phase 2.
    * ``corner-droplet``: phase 2 is the rescaled Wulff crystal centered at
      the origin corner, of volume ``volume`` inside the cube; phase 1 elsewhere.
    * ``centered-droplet``: the same droplet centered in the cube.
    * ``double-bubble``: two touching droplets of phases 2 and 3, each of
      volume ``volume / 2``, side by side along axis 0; phase 1 elsewhere.

    Droplets use ``shape`` or the crystal of ``tau`` (isotropic by default)
    and raise :class:`~pottslab.exc.DropletFitError` when they do not fit.
    """
    if kind == "pyramids":
        return _pyramids(grid, 2 * grid.d if q is None else q)
    if kind == "flat-slab":
        return _flat_slab(grid, 2 if q is None else q)
    if kind not in ("corner-droplet", "centered-droplet", "double-bubble"):
        raise ValueError(f"unknown reference partition {kind!r}")

    if volume is None or not 0.0 < volume < 1.0:
        raise DropletFitError(f"droplet volume must lie in (0, 1), got {volume}")
    if shape is None:
        shape = wulff_crystal(tau or TauModel.isotropic(grid.d), m=64)
    q = (3 if kind == "double-bubble" else 2) if q is None else q
    labels = np.ones(grid.shape, dtype=np.int16)
    d = grid.d

    if kind == "corner-droplet":
        scale = droplet_scale(shape, volume, fraction=0.5**d)
        _check_fit(shape, scale, np.ones(d), "corner droplet")
        _place(grid, labels, shape, scale, np.zeros(d), 2)
    elif kind == "centered-droplet":
        scale = droplet_scale(shape, volume)
        _check_fit(shape, scale, np.full(d, 0.5), "centered droplet")
        _place(grid, labels, shape, scale, np.full(d, 0.5), 2)
    else:
        if q < 3:
            raise ValueError("a double bubble needs q >= 3")
        scale = droplet_scale(shape, volume / 2)
        offset = scale * shape.extent(0)
        room = np.full(d, 0.5)
        room[0] = 0.25
        _check_fit(shape, scale, room, "double bubble")
        for phase, sign in ((2, -1.0), (3, 1.0)):
            center = np.full(d, 0.5)
            center[0] += sign * offset
            _place(grid, labels, shape, scale, center, phase)
    return PhasePartition(grid, q, labels)

