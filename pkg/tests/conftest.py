"""Pytest configuration and shared fixtures."""

import pytest

from pottslab._context import LabContext
from pottslab.lattice import RngStream, build_box
from pottslab.pytest_fixtures import lab_context as lab_context
from pottslab.pytest_fixtures import rng_stream as rng_stream
from pottslab.pytest_fixtures import tmp_artifact_dir as tmp_artifact_dir


@pytest.fixture(autouse=True)
def isolated_limits():
    """Run every test under its own LabContext so configure() never leaks."""
    with LabContext() as context:
        yield context


@pytest.fixture
def square():
    """The 3x3 square (n=2, d=2): 9 sites, 12 edges, center site 4."""
    return build_box(2, 2)


@pytest.fixture
def rng():
    """A Philox generator drawn from the same stream type the samplers use."""
    return RngStream(12345).generator()
