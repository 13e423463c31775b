import math

import numpy as np
import pytest

from pottslab.exc import GridMismatchError
from pottslab.lattice import BoundarySpec
from pottslab.phases import (
    BlockGrid,
    PhasePartition,
    boundary_energy,
    bulk_energy,
    discrete_perimeter,
    dist_l1,
    dist_p,
    phase_components,
    surface_energy,
)
from pottslab.tau import TauModel


@pytest.fixture
def cube_grid():
    return BlockGrid.uniform(3, 4)


def _split(grid, lower, upper):
    labels = np.full(grid.shape, lower, dtype=np.int16)
    labels[:, :, 2:] = upper
    return PhasePartition(grid, 2, labels)


def test_mid_plane_split_has_unit_perimeter(cube_grid):
    partition = _split(cube_grid, 2, 1)

    assert discrete_perimeter(partition) == pytest.approx(1.0)
    assert discrete_perimeter(partition, phase=1) == pytest.approx(1.0)


def test_flipped_interior_block_perimeter(cube_grid):
    labels = np.ones(cube_grid.shape, dtype=np.int16)
    labels[1, 2, 1] = 2
    partition = PhasePartition(cube_grid, 2, labels)

    # 2d * s**(d-1) with s = 1/4
    assert discrete_perimeter(partition) == pytest.approx(6 / 16)


def test_surface_energy_with_matching_boundary(cube_grid):
    tau = TauModel.isotropic(3, c=1.5)
    boundary = BoundarySpec.top_bottom(3)

    assert surface_energy(_split(cube_grid, 2, 1), tau, boundary) == pytest.approx(1.5)
    assert surface_energy(_split(cube_grid, 1, 2), tau, boundary) == pytest.approx(4.5)
    assert boundary_energy(_split(cube_grid, 1, 2), tau, boundary) == pytest.approx(3.0)


def test_surface_energy_uses_axis_values(cube_grid):
    tau = TauModel.axis([1.0, 2.0, 5.0])

    assert bulk_energy(_split(cube_grid, 2, 1), tau) == pytest.approx(5.0)


def test_indefinite_blocks_cost_infinity(cube_grid):
    partition = PhasePartition.constant(cube_grid, 2, 0)

    assert surface_energy(partition, TauModel.isotropic(3)) == math.inf


def test_whole_boundary_charges_every_foreign_face(cube_grid):
    partition = PhasePartition.constant(cube_grid, 2, 2)
    boundary = BoundarySpec.whole(3, 2, color=1)

    assert surface_energy(partition, TauModel.isotropic(3), boundary) == pytest.approx(6.0)
    assert surface_energy(
        PhasePartition.constant(cube_grid, 2, 1), TauModel.isotropic(3), boundary
    ) == pytest.approx(0.0)


def test_boundary_dimension_must_match(cube_grid):
    with pytest.raises(GridMismatchError):
        boundary_energy(
            PhasePartition.constant(cube_grid, 2, 1),
            TauModel.isotropic(3),
            BoundarySpec.whole(2, 2),
        )


def test_distances_are_symmetric_difference_volumes(cube_grid):
    a = PhasePartition.constant(cube_grid, 2, 1)
    b = _split(cube_grid, 2, 1)

    assert dist_l1(a.phase(1), b.phase(1)) == pytest.approx(0.5)
    assert dist_p(a, b) == pytest.approx(1.0)
    assert dist_p(b, b) == 0.0


def test_distances_reject_mismatched_partitions(cube_grid):
    a = PhasePartition.constant(cube_grid, 2, 1)

    with pytest.raises(GridMismatchError):
        dist_p(a, PhasePartition.constant(BlockGrid.uniform(3, 2), 2, 1))
    with pytest.raises(GridMismatchError, match="q=2 and q=3"):
        dist_p(a, PhasePartition.constant(cube_grid, 3, 1))


def test_phase_components_counts_face_connected_pieces(cube_grid):
    labels = np.ones(cube_grid.shape, dtype=np.int16)
    labels[0, 0, 0] = 2
    labels[3, 3, 3] = 2
    labels[1, 1, 0] = 2
    partition = PhasePartition(cube_grid, 2, labels)

    assert phase_components(partition, 2) == 3
    assert phase_components(partition, 1) == 1


def test_partition_distance_is_a_metric(rng):
    grid = BlockGrid.uniform(2, 4)

    def draw():
        return PhasePartition(grid, 3, rng.integers(0, 4, size=grid.shape).astype(np.int16))

    for _ in range(1000):
        a, b, c = draw(), draw(), draw()

        assert dist_p(a, a) == 0.0
        assert dist_p(a, b) == pytest.approx(dist_p(b, a))
        assert dist_p(a, c) <= dist_p(a, b) + dist_p(b, c) + 1e-12
        assert (dist_p(a, b) > 0) == (not a.same_as(b))
