import itertools
import math

import numpy as np
import pytest

import pottslab
from pottslab.clusters import (
    ESTIMATE_FIELDS,
    Estimate,
    batch_means,
    center_reaches_boundary,
    diameter_tail,
    order_parameter_estimate,
    percolation_estimate,
    slab_lro_probe,
)
from pottslab.exc import EmptySampleError
from pottslab.gibbs import ModelParams
from pottslab.lattice import BoundarySpec, build_box
from pottslab.sampling import RunSpec, iter_chain


def test_batch_means():
    mean, stderr = batch_means([1.0, 2.0, 3.0, 4.0], batches=2)

    assert mean == 2.5
    assert stderr == pytest.approx(1.0)
    assert math.isnan(batch_means([3.0])[1])
    with pytest.raises(EmptySampleError):
        batch_means([])


def test_order_parameter_estimate(square):
    params = ModelParams(q=3, beta=1.0)
    samples = [np.full(9, 1, dtype=np.int16)] * 3 + [np.full(9, 2, dtype=np.int16)]

    estimate = order_parameter_estimate(samples, square, params, 1, seed=4, batches=2)

    assert estimate.quantity == "theta"
    assert estimate.value == pytest.approx(0.75 - 1 / 3)
    assert estimate.samples == 4
    assert estimate.n == 2 and estimate.seed == 4
    assert list(estimate.as_row()) == list(ESTIMATE_FIELDS)


def test_center_reaches_boundary(square):
    bonds = np.zeros(12, dtype=bool)
    assert not center_reaches_boundary(bonds, square)

    _, edges = square.neighbors(square.center_index)
    bonds[edges[0]] = True
    assert center_reaches_boundary(bonds, square)


def test_percolation_estimate(square):
    open_all = np.ones(12, dtype=bool)
    closed = np.zeros(12, dtype=bool)

    samples = [open_all, closed, open_all, open_all]

    estimate = percolation_estimate(samples, square, ModelParams(q=2, beta=1.0))

    assert estimate.quantity == "theta_star"
    assert estimate.value == 0.75
    assert "upper proxy" in estimate.note


def test_estimate_within():
    estimate = Estimate(
        quantity="theta", n=4, d=2, q=2, beta=1.0, value=0.5, stderr=0.1, samples=10
    )

    assert estimate.within(0.7)
    assert not estimate.within(0.9)


def test_slab_probe_extremes():
    frozen = slab_lro_probe(2, 1, ModelParams(q=2, beta=0.0), d=2, samples=3, burn_in=0)
    ordered = slab_lro_probe(
        2, 1, ModelParams(q=2, beta=30.0), d=2, samples=3, burn_in=60
    )

    assert frozen.value == 0.0
    assert ordered.value == 1.0
    assert frozen.exhaustive
    assert frozen.pairs_checked == 15 * 14 // 2


def test_slab_probe_samples_pairs_above_budget():
    pottslab.configure(max_pairs=10)

    params = ModelParams(q=2, beta=0.5)

    result = slab_lro_probe(2, 1, params, d=2, samples=2, burn_in=0, seed=3)

    assert not result.exhaustive
    assert result.pairs_checked == 10
    assert result.pair[0] != result.pair[1]


def test_slab_probe_region_shrinks_with_alpha():
    params = ModelParams(q=2, beta=0.0)

    result = slab_lro_probe(1, 4, params, d=2, alpha=0.25, samples=1, burn_in=0)

    # |x_1| <= 1 leaves 3 columns of 3 sites
    assert result.pairs_checked == 9 * 8 // 2


def test_slab_probe_rejects_bad_arguments():
    params = ModelParams(q=2, beta=0.5)

    with pytest.raises(ValueError, match="alpha"):
        slab_lro_probe(2, 1, params, alpha=0.0)
    with pytest.raises(EmptySampleError):
        slab_lro_probe(2, 1, params, samples=0)


def test_diameter_tail_decays_at_high_temperature():
    run = RunSpec(d=2, n=16, q=2, beta=0.3, sweeps=40, burn_in=10)
    lattice = run.lattice()

    tail = diameter_tail((s.bonds for s in iter_chain(run, 0, lattice)), lattice)

    assert tail.diameters[0] == 0
    assert tail.decays
    assert tail.slope_low <= tail.slope <= tail.slope_high
    rows = tail.rows()
    assert rows[0]["diameter"] == 0
    assert sum(math.exp(r["log_frequency"]) for r in rows) == pytest.approx(1.0)


def test_diameter_tail_needs_three_diameters(square):
    tail = diameter_tail([np.zeros(12, dtype=bool)], square)

    assert tail.counts.tolist() == [8]
    assert math.isnan(tail.slope)
    assert not tail.decays


def _theta(beta, seed):
    run = RunSpec(
        d=3,
        n=8,
        q=2,
        beta=beta,
        boundary=BoundarySpec.whole(3, 2, color=1),
        sweeps=600,
        burn_in=100,
        seed=seed,
    )
    lattice = run.lattice()
    spins = (s.spins for s in iter_chain(run, 0, lattice))
    return order_parameter_estimate(spins, lattice, run.params, 1, seed=seed)


@pytest.mark.slow
def test_theta_vanishes_at_infinite_temperature_and_grows_with_beta():
    estimates = [_theta(beta, seed) for seed, beta in enumerate([0.0, 0.5, 1.0, 1.5, 2.0])]

    assert abs(estimates[0].value) <= 3 * estimates[0].stderr
    for low, high in itertools.pairwise(estimates):
        assert high.value >= low.value - 3 * math.hypot(low.stderr, high.stderr)
    assert estimates[-1].value > 0.4


def test_adding_open_edges_never_breaks_percolation(rng):
    lattice = build_box(2, 6)
    params = ModelParams(q=2, beta=1.0)
    sparse, dense = [], []

    for _ in range(500):
        bonds = rng.random(lattice.num_edges) < 0.45
        more = bonds | (rng.random(lattice.num_edges) < 0.1)
        assert center_reaches_boundary(bonds, lattice) <= center_reaches_boundary(more, lattice)
        sparse.append(bonds)
        dense.append(more)

    assert (
        percolation_estimate(sparse, lattice, params).value
        <= percolation_estimate(dense, lattice, params).value
    )
