"""Experiment configuration as dotted ``key = value`` text.

Every line sets one field, ``section.field = value``. Values are JSON
literals (``0.8``, ``null``, ``[1, 2]``, ``{"2": 0.1}``); a value that is not
valid JSON is taken as a bare string, so ``boundary.name = whole`` works.
Blank lines and lines starting with ``#`` are ignored. Unknown sections and
fields are errors, never silently dropped.
"""

import json
from pathlib import Path
from typing import Literal

import pydantic

from ..exc import ConfigError
from ..lattice import BoundarySpec
from ..tau import AxisRule, TauKind, TauModel
from ..variational import AnnealSchedule, EnsembleMode, EnsembleSpec, ReferenceKind

BoundaryName = Literal["free", "whole", "top-bottom", "per-face"]


class _Section(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")


class ModelSection(_Section):
    d: int = pydantic.Field(default=3, ge=1)
    n: int = pydantic.Field(default=8, ge=1)
    q: int = pydantic.Field(default=2, ge=1)
    beta: float = pydantic.Field(default=0.8, ge=0.0)


class BoundarySection(_Section):
    """Which built-in boundary to use and its colors."""

    name: BoundaryName = "whole"
    color: int = 1
    top: int = 1
    bottom: int = 2
    colors: tuple[int, ...] | None = None

    def spec(self, d: int, q: int) -> BoundarySpec:
        if self.name == "free":
            return BoundarySpec.free(d, q)
        if self.name == "whole":
            return BoundarySpec.whole(d, q, self.color)
        if self.name == "top-bottom":
            return BoundarySpec.top_bottom(d, q, self.top, self.bottom)
        return BoundarySpec.per_face(d, self.colors, q)


class RunSection(_Section):
    sweeps: int = pydantic.Field(default=1000, ge=0)
    burn_in: int | None = pydantic.Field(default=None, ge=0)
    thinning: int = pydantic.Field(default=1, ge=1)
    replicas: int = pydantic.Field(default=1, ge=1)
    seed: int = pydantic.Field(default=0, ge=0)
    workers: int = pydantic.Field(default=1, ge=1)


class AnalysisSection(_Section):
    """Toggles and knobs of the estimators and the phase partition."""

    snapshots: bool = False
    batches: int = pydantic.Field(default=20, ge=1)
    diameters: bool = True
    theta: float | None = None
    epsilon: float | None = None
    f: int | None = pydantic.Field(default=None, ge=1)
    partition: str | None = None
    slab_length: int = pydantic.Field(default=16, ge=1)
    slab_alpha: float = pydantic.Field(default=1.0, gt=0.0)
    slab_samples: int = pydantic.Field(default=100, ge=1)
    scale_sizes: tuple[int, ...] = (8, 16, 32, 64, 128, 256)


class TauSection(_Section):
    """The surface tension model, and which axes ``tau-probe`` measures."""

    kind: TauKind = "isotropic"
    c: float = pydantic.Field(default=1.0, gt=0.0)
    axis_values: tuple[float, ...] | None = None
    rule: AxisRule = "euclidean"
    axes: tuple[int, ...] | None = None
    samples: int = pydantic.Field(default=1000, ge=1)

    def model(self, d: int) -> TauModel:
        if self.kind == "tabulated":
            raise ConfigError("tabulated models cannot be configured from text")
        return TauModel(
            d=d, kind=self.kind, c=self.c, axis_values=self.axis_values, rule=self.rule
        )


class WulffSection(_Section):
    m: int = pydantic.Field(default=64, ge=8)
    directions: int | None = None


class AnnealSection(_Section):
    blocks: int = pydantic.Field(default=16, ge=1)
    restarts: int = pydantic.Field(default=1, ge=1)
    initial: ReferenceKind | None = None
    droplet_volume: float | None = None
    volumes: dict[int, float] | None = None
    fill: int = 1
    t0: float | None = None
    cooling: float = 0.97
    sweeps_per_level: int = 50
    floor_ratio: float = 1e-3

    @property
    def schedule(self) -> AnnealSchedule:
        return AnnealSchedule(
            t0=self.t0,
            cooling=self.cooling,
            sweeps_per_level=self.sweeps_per_level,
            floor_ratio=self.floor_ratio,
        )


class EnsembleSection(_Section):
    thresholds: tuple[float, ...] = (0.25,)
    upper: tuple[float, ...] | None = None
    boundary_color: int | None = 1
    theta: float | None = None
    mode: EnsembleMode = "rejection"
    fields: tuple[float, ...] | None = None
    runs: int = pydantic.Field(default=20, ge=1)
    samples: int = pydantic.Field(default=1, ge=1)

    def spec(self, q: int) -> EnsembleSpec:
        return EnsembleSpec(
            q=q,
            thresholds=self.thresholds,
            upper=self.upper,
            boundary_color=self.boundary_color,
            theta=self.theta,
            mode=self.mode,
            fields=self.fields,
        )


class OracleSection(_Section):
    """The exact-enumeration cross-check, by default the 2x2 grid."""

    d: int = pydantic.Field(default=2, ge=1)
    n: int = pydantic.Field(default=1, ge=1)
    q: int = pydantic.Field(default=2, ge=1)
    beta: float = pydantic.Field(default=0.7, ge=0.0)
    tolerance: float = pydantic.Field(default=1e-10, gt=0.0)


class OutputSection(_Section):
    directory: str = "pottslab-out"


class ExperimentConfig(_Section):
    model: ModelSection = ModelSection()
    boundary: BoundarySection = BoundarySection()
    run: RunSection = RunSection()
    analysis: AnalysisSection = AnalysisSection()
    tau: TauSection = TauSection()
    wulff: WulffSection = WulffSection()
    anneal: AnnealSection = AnnealSection()
    ensemble: EnsembleSection = EnsembleSection()
    oracle: OracleSection = OracleSection()
    output: OutputSection = OutputSection()

    def with_overrides(self, lines: list[str]) -> "ExperimentConfig":
        """A copy with ``key=value`` overrides applied on top."""
        data = self.model_dump()
        _apply(data, _read_lines(lines))
        return _validate(data)


def _read_lines(lines: list[str]) -> list[tuple[str, object]]:
    pairs = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, text = line.partition("=")
        key, text = key.strip(), text.strip()
        if not sep or not key:
            raise ConfigError(f"line {number}: expected 'section.field = value', got {raw!r}")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        pairs.append((key, value))
    return pairs


def _apply(data: dict, pairs: list[tuple[str, object]]) -> None:
    for key, value in pairs:
        section, dot, field = key.partition(".")
        if not dot or "." in field:
            raise ConfigError(f"config key {key!r} must have the form section.field")
        if section not in data:
            raise ConfigError(f"unknown config key {key!r}: no section {section!r}")
        if field not in data[section]:
            raise ConfigError(f"unknown config key {key!r}")
        data[section][field] = value


def _validate(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        error = exc.errors()[0]
        key = ".".join(str(part) for part in error["loc"])
        raise ConfigError(f"invalid config key {key!r}: {error['msg']}") from exc


def parse_config(text: str) -> ExperimentConfig:
    """Parse config text; fields left out keep their defaults."""
    data = ExperimentConfig().model_dump()
    _apply(data, _read_lines(text.splitlines()))
    return _validate(data)


def render_config(config: ExperimentConfig) -> str:
    """Every field, one ``section.field = value`` line each, in declaration order."""
    lines = []
    for section, values in config.model_dump().items():
        for field, value in values.items():
            lines.append(f"{section}.{field} = {json.dumps(value, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)
