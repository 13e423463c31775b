"""Artifact writing and the run manifest.

All files of a run are written through one :class:`ArtifactWriter`. Every
CSV gets a ``manifest`` column holding the config digest, so a table found on
its own still names the configuration that produced it. The manifest lists
the digest of every artifact; it holds no timestamps or host names, so two
runs of the same config produce byte-identical directories.
"""

import csv
import hashlib
import io
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

import pydantic

from ._config import ExperimentConfig, render_config

MANIFEST_NAME = "manifest.json"
CONFIG_NAME = "config.txt"


def config_digest(config: ExperimentConfig) -> str:
    return hashlib.sha256(render_config(config).encode("utf-8")).hexdigest()


class Manifest(pydantic.BaseModel):
    """What produced a run directory, and a digest of each file in it."""

    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")

    command: str
    config_sha256: str
    version: str
    seeds: tuple[int, ...]
    artifacts: dict[str, str]

    def render(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    @classmethod
    def load(cls, path: str | Path) -> "Manifest":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


class ArtifactWriter:
    """Single writer for one run directory."""

    def __init__(self, directory: Path, config: ExperimentConfig, command: str) -> None:
        self.directory = directory
        self.config = config
        self.command = command
        self.reference = config_digest(config)
        self._digests: dict[str, str] = {}
        directory.mkdir(parents=True, exist_ok=True)
        self.write_text(CONFIG_NAME, render_config(config))

    def write_text(self, name: str, text: str) -> Path:
        data = text.encode("utf-8")
        path = self.directory / name
        path.write_bytes(data)
        self._digests[name] = hashlib.sha256(data).hexdigest()
        return path

    def write_csv(
        self, name: str, fields: Sequence[str], rows: Iterable[Mapping[str, object]]
    ) -> Path:
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=[*fields, "manifest"], lineterminator="\n"
        )
        writer.writeheader()
        for row in rows:
            writer.writerow({**row, "manifest": self.reference})
        return self.write_text(name, buffer.getvalue())

    def finish(self, seeds: Iterable[int]) -> Manifest:
        from .. import __version__

        manifest = Manifest(
            command=self.command,
            config_sha256=self.reference,
            version=__version__,
            seeds=tuple(seeds),
            artifacts=dict(sorted(self._digests.items())),
        )
        (self.directory / MANIFEST_NAME).write_text(manifest.render(), encoding="utf-8")
        return manifest
