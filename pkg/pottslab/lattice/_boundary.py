import dataclasses
import functools
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
import pydantic

from ..exc import BoundarySpecError
from ._box import Lattice, build_box, build_segment

#: A face of the unit cube: ``(axis, side)`` with side 0 for ``x_axis = 0``
#: and side 1 for ``x_axis = 1``.
Face = tuple[int, int]


def cube_faces(d: int) -> tuple[Face, ...]:
    """All ``2d`` faces in color order: axis 0 low, axis 0 high, axis 1 low, ..."""
    return tuple((axis, side) for axis in range(d) for side in (0, 1))


class BoundarySpec(pydantic.BaseModel):
    """A partition ``(G0, G1, ..., Gq)`` of the cube boundary into colored parts.

    Each part is a union of closed cube faces. ``G0`` is the free part; faces
    no part claims are added to it, so the parts always cover the boundary.
    Two parts may share only relative boundaries (cube edges and corners),
    never a whole face.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    d: int = pydantic.Field(ge=1)
    parts: tuple[frozenset[Face], ...]
    name: str = "custom"

    @pydantic.field_validator("parts")
    @classmethod
    def _validate_parts(
        cls, parts: tuple[frozenset[Face], ...], info: pydantic.ValidationInfo
    ) -> tuple[frozenset[Face], ...]:
        if len(parts) < 2:
            raise BoundarySpecError(
                f"a boundary spec needs q+1 >= 2 parts, got {len(parts)}"
            )
        d = info.data.get("d")
        if d is None:
            # d failed its own validation, which pydantic reports.
            return parts
        faces = set(cube_faces(d))
        seen: dict[Face, int] = {}
        for index, part in enumerate(parts):
            for face in part:
                if face not in faces:
                    raise BoundarySpecError(
                        f"part {index} names face {face}, not a face of the {d}-cube"
                    )
                if face in seen:
                    raise BoundarySpecError(
                        f"face {face} is claimed by parts {seen[face]} and {index}"
                    )
                seen[face] = index
        unclaimed = faces - set(seen)
        if unclaimed:
            parts = (parts[0] | frozenset(unclaimed),) + parts[1:]
        return parts

    @property
    def q(self) -> int:
        return len(self.parts) - 1

    def part_of_face(self, axis: int, side: int) -> int:
        """Index of the part containing the whole face ``(axis, side)``."""
        for index, part in enumerate(self.parts):
            if (axis, side) in part:
                return index
        return 0

    def distance(self, points: npt.ArrayLike, index: int) -> npt.NDArray[np.float64]:
        """Max-norm distance from points of the closed cube to part ``index``.

        For a point of the cube the max-norm distance to the face
        ``x_axis = side`` is ``|x_axis - side|``; a part's distance is the
        minimum over its faces, and ``inf`` for an empty part.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.full(pts.shape[0], np.inf)
        for axis, side in self.parts[index]:
            out = np.minimum(out, np.abs(pts[:, axis] - side))
        return out

    # -- built-ins -----------------------------------------------------------

    @classmethod
    def free(cls, d: int, q: int) -> "BoundarySpec":
        """Free boundary conditions: every face in ``G0``."""
        return cls(
            d=d, parts=(frozenset(cube_faces(d)),) + (frozenset(),) * q, name="free"
        )

    @classmethod
    def whole(cls, d: int, q: int, color: int = 1) -> "BoundarySpec":
        """The entire boundary in part ``color``."""
        _check_color(color, q)
        parts: list[frozenset[Face]] = [frozenset() for _ in range(q + 1)]
        parts[color] = frozenset(cube_faces(d))
        return cls(d=d, parts=tuple(parts), name=f"whole-{color}")

    @classmethod
    def top_bottom(
        cls, d: int, q: int = 2, top: int = 1, bottom: int = 2
    ) -> "BoundarySpec":
        """Top face (last axis high) in ``top``, bottom face in ``bottom``, rest free."""
        _check_color(top, q)
        _check_color(bottom, q)
        if top == bottom:
            raise BoundarySpecError("top and bottom colors must differ")
        parts: list[set[Face]] = [set() for _ in range(q + 1)]
        parts[top].add((d - 1, 1))
        parts[bottom].add((d - 1, 0))
        parts[0].update(face for face in cube_faces(d) if face[0] != d - 1)
        return cls(
            d=d, parts=tuple(frozenset(p) for p in parts), name="top-bottom"
        )

    @classmethod
    def per_face(
        cls, d: int, colors: Sequence[int] | None = None, q: int | None = None
    ) -> "BoundarySpec":
        """One color per face, in :func:`cube_faces` order (default 1..2d)."""
        if colors is None:
            colors = list(range(1, 2 * d + 1))
        if len(colors) != 2 * d:
            raise BoundarySpecError(f"need {2 * d} face colors, got {len(colors)}")
        q = max(colors) if q is None else q
        parts: list[set[Face]] = [set() for _ in range(q + 1)]
        for face, color in zip(cube_faces(d), colors):
            if not 0 <= color <= q:
                raise BoundarySpecError(f"face color {color} outside 0..{q}")
            parts[color].add(face)
        return cls(
            d=d, parts=tuple(frozenset(p) for p in parts), name="per-face"
        )


def _check_color(color: int, q: int) -> None:
    if not 1 <= color <= q:
        raise BoundarySpecError(f"color {color} outside 1..{q}")


@dataclasses.dataclass(frozen=True, eq=False)
class BoundaryAssignment:
    """The discretized boundary ``(G0_n, ..., Gq_n)`` on a lattice.

    ``indices[x]`` is the part index of site ``x``; interior sites and free
    boundary sites carry 0. Sites with index ``i >= 1`` are frozen to color ``i``.
    """

    spec: BoundarySpec
    lattice: Lattice
    indices: npt.NDArray[np.int16]

    @property
    def q(self) -> int:
        return self.spec.q

    @functools.cached_property
    def frozen(self) -> npt.NDArray[np.bool_]:
        return self.indices > 0

    @functools.cached_property
    def free_sites(self) -> npt.NDArray[np.int64]:
        return np.flatnonzero(~self.frozen)

    @classmethod
    def none(cls, lattice: Lattice, q: int) -> "BoundaryAssignment":
        """Free boundary on an arbitrary lattice: nothing is frozen."""
        spec = BoundarySpec.free(lattice.d, q)
        return cls(
            spec=spec,
            lattice=lattice,
            indices=np.zeros(lattice.num_sites, dtype=np.int16),
        )


def discretize_boundary(
    spec: BoundarySpec, n: int, lattice: Lattice | None = None
) -> BoundaryAssignment:
    """Assign every boundary site of the cube at resolution ``n`` a part index.

    A boundary site gets the smallest index ``i`` with ``d_inf(x, G_i) < 1/n``
    and ``d_inf(x, G_j) >= 1/n`` for every ``j < i``. Because ``G0`` comes
    first, a site within ``1/n`` of the free part stays free even when it also
    lies on a colored face. Sites matching no part get 0.
    """
    if lattice is None:
        lattice = build_box(spec.d, n) if spec.d >= 2 else build_segment(n)
    if lattice.d != spec.d or lattice.n != n:
        raise BoundarySpecError(
            f"lattice (d={lattice.d}, n={lattice.n}) does not match spec d={spec.d}, n={n}"
        )
    indices = np.zeros(lattice.num_sites, dtype=np.int16)
    on_boundary = lattice.boundary_mask
    # Work in lattice units so the 1/n threshold is an exact integer comparison.
    coords = lattice.coords[on_boundary]
    pending = np.ones(coords.shape[0], dtype=bool)
    assigned = np.zeros(coords.shape[0], dtype=np.int16)
    for index, part in enumerate(spec.parts):
        if not part:
            continue
        dist = np.full(coords.shape[0], np.iinfo(np.int64).max)
        for axis, side in part:
            dist = np.minimum(dist, np.abs(coords[:, axis] - side * n))
        hit = pending & (dist < 1)
        assigned[hit] = index
        pending &= ~hit
    indices[on_boundary] = assigned
    return BoundaryAssignment(spec=spec, lattice=lattice, indices=indices)
