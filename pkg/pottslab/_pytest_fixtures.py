from collections.abc import Callable, Iterator
from pathlib import Path

import pytest

from ._context import LabContext
from .lattice import RngStream


@pytest.fixture
def lab_context() -> Iterator[LabContext]:
    """A fresh :class:`LabContext` with default limits, active for one test."""
    with LabContext() as context:
        yield context


@pytest.fixture
def rng_stream() -> Callable[..., RngStream]:
    """Factory for seeded streams: ``rng_stream(seed, stream=0)``."""

    def make(seed: int = 0, stream: int = 0) -> RngStream:
        return RngStream(seed, stream)

    return make


@pytest.fixture
def tmp_artifact_dir(tmp_path: Path) -> Path:
    """An empty directory for a run's artifacts."""
    directory = tmp_path / "artifacts"
    directory.mkdir()
    return directory
