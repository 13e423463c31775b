import numpy as np
import pytest

from pottslab import configure
from pottslab.exc import InfeasibleConstraintsError
from pottslab.lattice import BoundarySpec, RngStream
from pottslab.phases import BlockGrid, PhasePartition, surface_energy
from pottslab.tau import TauModel
from pottslab.variational import AnnealSchedule, anneal_partition, reference_partition

FAST = AnnealSchedule(cooling=0.9, sweeps_per_level=40)


@pytest.fixture
def plane():
    return BlockGrid.uniform(2, 8)


def test_schedule_levels():
    schedule = AnnealSchedule(cooling=0.5, floor_ratio=0.1)

    assert schedule.temperatures(2.0) == pytest.approx([2.0, 1.0, 0.5, 0.25])


def test_schedule_rejects_bad_cooling():
    with pytest.raises(ValueError):
        AnnealSchedule(cooling=1.0)


def test_two_phase_box_finds_the_flat_interface(plane, rng):
    tau = TauModel.isotropic(2)
    boundary = BoundarySpec.top_bottom(2)

    result = anneal_partition(boundary, tau, plane, rng, schedule=FAST)

    assert result.energy == pytest.approx(1.0)
    assert result.energy <= result.initial_energy
    assert surface_energy(result.partition, tau, boundary) == pytest.approx(result.energy)


def test_trace_tracks_the_best_energy(plane, rng):
    result = anneal_partition(
        BoundarySpec.top_bottom(2), TauModel.isotropic(2), plane, rng, schedule=FAST
    )

    bests = [row.best for row in result.trace]
    assert len(bests) == len(FAST.temperatures(1.0))
    assert all(later <= earlier for earlier, later in zip(bests, bests[1:]))
    assert bests[-1] == pytest.approx(result.energy)
    assert all(0.0 <= row.acceptance <= 1.0 for row in result.trace)


def test_volume_constraints_hold_exactly(plane, rng):
    tau = TauModel.isotropic(2)
    boundary = BoundarySpec.top_bottom(2, q=3)

    result = anneal_partition(
        boundary, tau, plane, rng, volumes={2: 0.25, 3: 0.125}, schedule=FAST
    )

    volumes = result.partition.volumes()
    assert volumes[2] == pytest.approx(0.25)
    assert volumes[3] == pytest.approx(0.125)
    assert volumes[1] == pytest.approx(0.625)
    assert surface_energy(result.partition, tau, boundary) == pytest.approx(result.energy)


def test_constrained_run_keeps_a_valid_initial_partition(plane, rng):
    initial = reference_partition("flat-slab", plane)

    result = anneal_partition(
        BoundarySpec.top_bottom(2),
        TauModel.isotropic(2),
        plane,
        rng,
        initial=initial,
        volumes={2: 0.5},
        schedule=FAST,
    )

    assert result.initial_energy == pytest.approx(1.0)
    assert result.energy == pytest.approx(1.0)


def test_audits_follow_the_configured_interval(plane, rng):
    configure(audit_every=100)
    schedule = AnnealSchedule(cooling=0.5, sweeps_per_level=2, floor_ratio=0.1)

    result = anneal_partition(None, TauModel.isotropic(2), plane, rng, schedule=schedule)

    # 4 levels * 2 sweeps * 64 blocks
    assert result.moves == 512
    assert result.audits == 512 // 100 + 1
    assert len(result.trace) == 4


def test_free_boundary_prefers_a_single_phase(plane, rng):
    result = anneal_partition(None, TauModel.isotropic(2), plane, rng, q=3, schedule=FAST)

    assert result.energy == pytest.approx(0.0)
    assert np.unique(result.partition.labels).size == 1


@pytest.mark.parametrize(
    ("volumes", "fill"),
    [
        ({1: 0.5}, 1),
        ({2: 0.6, 3: 0.6}, 1),
        ({2: -0.1}, 1),
        ({5: 0.1}, 1),
        ({2: 0.1}, 4),
    ],
)
def test_infeasible_volumes(plane, rng, volumes, fill):
    with pytest.raises(InfeasibleConstraintsError):
        anneal_partition(
            None, TauModel.isotropic(2), plane, rng, q=3, volumes=volumes, fill=fill
        )


def test_initial_partition_must_match_the_volumes(plane, rng):
    initial = PhasePartition.constant(plane, 2, 1)

    with pytest.raises(InfeasibleConstraintsError, match="violates"):
        anneal_partition(
            None, TauModel.isotropic(2), plane, rng, initial=initial, volumes={2: 0.5}
        )


def test_indefinite_start_is_rejected(plane, rng):
    initial = PhasePartition.constant(plane, 2, 0)

    with pytest.raises(InfeasibleConstraintsError, match="indefinite"):
        anneal_partition(None, TauModel.isotropic(2), plane, rng, initial=initial)


def test_uneven_grid_is_rejected(rng):
    with pytest.raises(ValueError, match="equal blocks"):
        anneal_partition(None, TauModel.isotropic(2), BlockGrid(d=2, n=10, f=3), rng)


@pytest.mark.slow
def test_three_dimensional_two_phase_box(rng):
    tau = TauModel.isotropic(3)
    boundary = BoundarySpec.top_bottom(3)

    result = anneal_partition(boundary, tau, BlockGrid.uniform(3, 6), rng, schedule=FAST)

    assert result.energy <= 1.05




@pytest.mark.parametrize(
    ("volumes", "expected"),
    [
        ({2: 0.5, 3: 0.5}, [0, 0, 14, 13, 0]),
        ({2: 5.5 / 27, 3: 5.5 / 27, 4: 16 / 27}, [0, 0, 6, 5, 16]),
    ],
)
def test_constrained_start_splits_an_odd_block_count_exactly(rng, volumes, expected):
    schedule = AnnealSchedule(cooling=0.5, sweeps_per_level=2, floor_ratio=0.1)

    result = anneal_partition(
        None,
        TauModel.isotropic(3),
        BlockGrid.uniform(3, 3),
        rng,
        q=4,
        volumes=volumes,
        schedule=schedule,
    )

    assert np.bincount(result.partition.labels.ravel(), minlength=5).tolist() == expected


@pytest.mark.slow
def test_two_phase_cube_recovers_the_flat_slab(rng):
    grid = BlockGrid.uniform(3, 16)
    tau = TauModel.isotropic(3)
    boundary = BoundarySpec.top_bottom(3)
    flat = surface_energy(reference_partition("flat-slab", grid), tau, boundary)

    result = anneal_partition(boundary, tau, grid, rng)

    assert flat == pytest.approx(1.0)
    assert result.energy <= 1.05 * flat


@pytest.mark.slow
def test_six_colors_beat_the_pyramids_on_most_restarts():
    grid = BlockGrid.uniform(3, 16)
    tau = TauModel.isotropic(3)
    boundary = BoundarySpec.per_face(3)
    pyramids = reference_partition("pyramids", grid)
    reference = surface_energy(pyramids, tau, boundary)
    streams = RngStream(2024).children(10)

    energies = [
        anneal_partition(boundary, tau, grid, stream.generator(), initial=pyramids).energy
        for stream in streams
    ]

    assert sum(energy < reference - 1e-9 for energy in energies) >= 9
