import math
from collections.abc import Sequence
from typing import Literal

import numpy as np
import numpy.typing as npt
import pydantic

TauKind = Literal["isotropic", "axis", "tabulated"]
AxisRule = Literal["l1", "euclidean"]


class TauModel(pydantic.BaseModel):
    """A direction-dependent surface tension ``nu -> tau(nu)``.

    Models are evaluated as positively one-homogeneous functions, so a
    non-unit argument ``t * nu`` gives ``t * tau(nu)``; on unit vectors this
    is the surface tension itself.

    * ``isotropic``: ``tau = c``.
    * ``axis``: one value per axis, combined as ``sum a_i |nu_i|`` (``l1``)
      or ``sqrt(sum a_i**2 nu_i**2)`` (``euclidean``). ``l1`` with all values
      1 is the support function of the cube.
    * ``tabulated``: value of the nearest listed direction, where ``u`` and
      ``-u`` count as the same direction.

    Every built-in satisfies ``tau(nu) = tau(-nu)``.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    d: int = pydantic.Field(ge=1)
    kind: TauKind = "isotropic"
    c: float = pydantic.Field(default=1.0, gt=0.0)
    axis_values: tuple[float, ...] | None = None
    rule: AxisRule = "euclidean"
    directions: tuple[tuple[float, ...], ...] | None = None
    values: tuple[float, ...] | None = None

    @pydantic.model_validator(mode="after")
    def _check_kind(self) -> "TauModel":
        if self.kind == "axis":
            if self.axis_values is None or len(self.axis_values) != self.d:
                raise ValueError(f"an axis model needs {self.d} axis values")
            if min(self.axis_values) <= 0 or not all(map(math.isfinite, self.axis_values)):
                raise ValueError("axis values must be positive and finite")
        elif self.kind == "tabulated":
            if not self.directions or self.values is None:
                raise ValueError("a tabulated model needs directions and values")
            if len(self.directions) != len(self.values):
                raise ValueError("directions and values differ in length")
            if any(len(u) != self.d for u in self.directions):
                raise ValueError(f"every direction must have {self.d} components")
            if min(self.values) <= 0 or not all(map(math.isfinite, self.values)):
                raise ValueError("tabulated values must be positive and finite")
        return self

    # -- constructors --------------------------------------------------------

    @classmethod
    def isotropic(cls, d: int, c: float = 1.0) -> "TauModel":
        return cls(d=d, kind="isotropic", c=c)

    @classmethod
    def axis(
        cls, values: Sequence[float], rule: AxisRule = "euclidean"
    ) -> "TauModel":
        return cls(d=len(values), kind="axis", axis_values=tuple(values), rule=rule)

    @classmethod
    def l1(cls, d: int) -> "TauModel":
        """``tau(nu) = sum |nu_i|``, whose Wulff crystal is the cube ``[-1, 1]**d``."""
        return cls.axis([1.0] * d, rule="l1")

    @classmethod
    def tabulated(
        cls, directions: Sequence[Sequence[float]], values: Sequence[float]
    ) -> "TauModel":
        dirs = np.asarray(directions, dtype=np.float64)
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        return cls(
            d=dirs.shape[1],
            kind="tabulated",
            directions=tuple(tuple(row) for row in dirs.tolist()),
            values=tuple(float(v) for v in values),
        )

    # -- evaluation ----------------------------------------------------------

    def __call__(self, nu: npt.ArrayLike) -> npt.NDArray[np.float64] | float:
        vectors = np.asarray(nu, dtype=np.float64)
        single = vectors.ndim == 1
        vectors = np.atleast_2d(vectors)
        if vectors.shape[1] != self.d:
            raise ValueError(f"expected {self.d}-dimensional directions, got {vectors.shape[1]}")
        norms = np.linalg.norm(vectors, axis=1)
        if self.kind == "isotropic":
            out = self.c * norms
        elif self.kind == "axis":
            a = np.asarray(self.axis_values)
            if self.rule == "l1":
                out = np.abs(vectors) @ a
            else:
                out = np.linalg.norm(vectors * a, axis=1)
        else:
            table = np.asarray(self.directions)
            safe = np.where(norms > 0, norms, 1.0)[:, None]
            nearest = np.argmax(np.abs((vectors / safe) @ table.T), axis=1)
            out = np.asarray(self.values)[nearest] * norms
        return float(out[0]) if single else out

    def axis_value(self, axis: int) -> float:
        """``tau(e_axis)``."""
        return float(self(np.eye(self.d)[axis]))

    @property
    def tau_min(self) -> float:
        if self.kind == "isotropic":
            return self.c
        if self.kind == "axis":
            return min(self.axis_values)
        return min(self.values)

    @property
    def tau_max(self) -> float:
        if self.kind == "isotropic":
            return self.c
        if self.kind == "axis":
            if self.rule == "l1":
                return math.sqrt(sum(a * a for a in self.axis_values))
            return max(self.axis_values)
        return max(self.values)

    def scaled(self, factor: float) -> "TauModel":
        """The model multiplied by ``factor > 0``."""
        if factor <= 0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        if self.kind == "isotropic":
            return self.model_copy(update={"c": self.c * factor})
        if self.kind == "axis":
            return self.model_copy(
                update={"axis_values": tuple(a * factor for a in self.axis_values)}
            )
        return self.model_copy(update={"values": tuple(v * factor for v in self.values)})
