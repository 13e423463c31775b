import dataclasses
import functools
import math

import numpy as np
import numpy.typing as npt
from scipy.stats import norm, qmc

from ..tau import TauModel

# Raster cells are tested against the half-spaces in chunks of this many cells.
_CHUNK = 1 << 12


def sphere_directions(d: int, count: int) -> npt.NDArray[np.float64]:
    """``count`` unit vectors: the ``2d`` axis directions, then a Halton sequence.

    The sequence is deterministic and nested: the first ``k`` directions of a
    larger request are the directions of the request for ``k``.
    """
    axes = np.concatenate([np.eye(d), -np.eye(d)])
    extra = count - 2 * d
    if extra < 0:
        raise ValueError(f"need at least {2 * d} directions, got {count}")
    if extra == 0:
        return axes
    if d == 1:
        return axes
    if d == 2:
        sampler = qmc.Halton(d=1, scramble=False)
        sampler.fast_forward(1)
        angles = 2 * math.pi * sampler.random(extra)[:, 0]
        points = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    else:
        sampler = qmc.Halton(d=d, scramble=False)
        # Skip the all-zero first point, which maps to -inf.
        sampler.fast_forward(1)
        gauss = norm.ppf(sampler.random(extra))
        points = gauss / np.linalg.norm(gauss, axis=1, keepdims=True)
    return np.concatenate([axes, points])


@dataclasses.dataclass(frozen=True, eq=False)
class WulffShape:
    """The Wulff crystal ``{x : x . nu <= tau(nu) for all sampled nu}`` on a raster.

    The raster has ``m`` cells per axis over ``[-R, R]**d`` with
    ``R = tau.tau_max``; ``inside`` marks cells whose center satisfies every
    sampled half-space.
    """

    tau: TauModel
    m: int
    directions: npt.NDArray[np.float64]
    support: npt.NDArray[np.float64]
    inside: npt.NDArray[np.bool_]

    @property
    def d(self) -> int:
        return self.tau.d

    @property
    def half_width(self) -> float:
        return self.tau.tau_max

    @property
    def cell_size(self) -> float:
        return 2 * self.half_width / self.m

    @functools.cached_property
    def cell_centers(self) -> npt.NDArray[np.float64]:
        return _cell_centers(self.d, self.m, self.half_width)

    @property
    def volume(self) -> float:
        return float(self.inside.sum()) * self.cell_size**self.d

    def contains(
        self,
        points: npt.ArrayLike,
        scale: float = 1.0,
        center: npt.ArrayLike | None = None,
    ) -> npt.NDArray[np.bool_]:
        """Exact membership of points in ``center + scale * W`` (no raster)."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if center is not None:
            pts = pts - np.asarray(center, dtype=np.float64)
        return _inside(pts, self.directions, scale * self.support)

    def radii(self) -> npt.NDArray[np.float64]:
        """Distances from the origin of the inside cells that touch the outside."""
        padded = np.pad(self.inside, 1)
        exposed = np.zeros_like(self.inside)
        core = tuple(slice(1, -1) for _ in range(self.d))
        for axis in range(self.d):
            for shift in (-1, 1):
                exposed |= ~np.roll(padded, shift, axis=axis)[core]
        rim = (self.inside & exposed).ravel()
        return np.linalg.norm(self.cell_centers[rim], axis=1)

    def extent(self, axis: int) -> float:
        """Largest coordinate along ``axis`` of the crystal: ``min_nu tau(nu) / nu_axis``."""
        component = self.directions[:, axis]
        positive = component > 1e-12
        return float(np.min(self.support[positive] / component[positive]))


def _cell_centers(d: int, m: int, half_width: float) -> npt.NDArray[np.float64]:
    h = 2 * half_width / m
    ticks = -half_width + (np.arange(m) + 0.5) * h
    grids = np.meshgrid(*([ticks] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _inside(
    points: npt.NDArray[np.float64],
    directions: npt.NDArray[np.float64],
    support: npt.NDArray[np.float64],
) -> npt.NDArray[np.bool_]:
    # The ball of radius min(support) lies inside every half-space.
    out = np.linalg.norm(points, axis=1) <= support.min()
    pending = np.flatnonzero(~out)
    for start in range(0, pending.size, _CHUNK):
        rows = pending[start : start + _CHUNK]
        out[rows] = np.all(
            points[rows] @ directions.T <= support[None, :] * (1 + 1e-12), axis=1
        )
    return out


def wulff_crystal(tau: TauModel, m: int = 64, directions: int | None = None) -> WulffShape:
    """Rasterize the Wulff crystal of ``tau`` with ``m`` cells per axis.

    ``directions`` (``K``) defaults to ``2d`` plus 1000 Halton directions; it
    must be at least ``2d``. More directions only remove cells.
    """
    d = tau.d
    if m < 8:
        raise ValueError(f"raster resolution must be >= 8, got {m}")
    count = 2 * d + 1000 if directions is None else directions
    dirs = sphere_directions(d, count)
    support = np.asarray(tau(dirs), dtype=np.float64)
    centers = _cell_centers(d, m, tau.tau_max)
    inside = _inside(centers, dirs, support).reshape((m,) * d)
    return WulffShape(tau=tau, m=m, directions=dirs, support=support, inside=inside)
