import logging
import math

import numpy as np
import pydantic
import pytest

from pottslab.exc import PhaseSpecError
from pottslab.gibbs import ModelParams
from pottslab.testing import assert_within_sigma
from pottslab.variational import (
    EnsembleSpec,
    droplet_experiment,
    ensemble_condition_check,
    target_volumes,
)


def test_target_volumes():
    volumes = target_volumes([0.5, 0.3], theta=0.6, q=3)

    assert volumes.tolist() == pytest.approx([(0.5 - 0.4 / 3) / 0.6, (0.3 - 0.4 / 3) / 0.6])
    assert target_volumes([0.5], 0.5, 2).tolist() == pytest.approx([0.5])


def test_target_volumes_guards():
    with pytest.raises(PhaseSpecError, match="at least"):
        target_volumes([0.1], 0.5, 2)
    with pytest.raises(PhaseSpecError, match="positive"):
        target_volumes([0.5], 0.0, 2)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"q": 3, "thresholds": (0.1,)},
        {"q": 2, "thresholds": (1.5,)},
        {"q": 2, "thresholds": (0.4,), "upper": (0.3,)},
        {"q": 2, "thresholds": (0.4,), "boundary_color": 3},
        {"q": 2, "thresholds": (0.4,), "fields": (0.0,)},
        {"q": 2, "thresholds": (0.4,), "mode": "umbrella"},
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(pydantic.ValidationError):
        EnsembleSpec(**kwargs)


def test_spec_theta_must_fit_the_thresholds():
    with pytest.raises(PhaseSpecError):
        EnsembleSpec(q=2, thresholds=(0.1,), theta=0.5)
    with pytest.raises(PhaseSpecError, match="need theta"):
        EnsembleSpec(q=2, thresholds=(0.1,)).target_volumes


def test_spec_boundary():
    assert EnsembleSpec(q=3, thresholds=(0.1, 0.1)).boundary(2).name == "whole-1"
    free = EnsembleSpec(q=3, thresholds=(0.1, 0.1), boundary_color=None).boundary(2)
    assert free.q == 3
    assert free.name != "whole-1"


def test_condition_check():
    spins = np.array([1, 2, 2, 3])

    ok, fractions = ensemble_condition_check(spins, EnsembleSpec(q=3, thresholds=(0.5, 0.25)))
    assert ok
    assert fractions.tolist() == [0.25, 0.5, 0.25]

    ok, _ = ensemble_condition_check(spins, EnsembleSpec(q=3, thresholds=(0.6, 0.0)))
    assert not ok

    capped = EnsembleSpec(q=3, thresholds=(0.0, 0.0), upper=(0.4, 1.0))
    assert not ensemble_condition_check(spins, capped)[0]


def test_zero_thresholds_keep_every_sample():
    spec = EnsembleSpec(q=2, thresholds=(0.0,))

    report = droplet_experiment(
        ModelParams(q=2, beta=0.0), spec, 2, n=4, d=2, samples=3, burn_in=0, seed=3
    )

    assert report.samples == 6
    assert report.accepted == 6
    assert report.acceptance == 1.0
    assert report.ess == pytest.approx(6.0)
    assert report.weights.tolist() == pytest.approx([1 / 6] * 6)
    assert sorted(set(report.replicas.tolist())) == [0, 1]
    assert report.fraction_mean.sum() == pytest.approx(1.0)
    assert math.isnan(report.single_component_rate)

    rows = report.rows()
    assert len(rows) == 6
    assert set(rows[0]) == {"replica", "sweep", "weight", "fraction_1", "fraction_2"}
    assert report.summary()["mode"] == "rejection"


def test_impossible_thresholds_keep_nothing(caplog):
    spec = EnsembleSpec(q=2, thresholds=(1.0,))

    with caplog.at_level(logging.WARNING, logger="pottslab.variational._ensemble"):
        report = droplet_experiment(
            ModelParams(q=2, beta=0.0), spec, 1, n=4, d=2, samples=4, burn_in=0
        )

    assert report.accepted == 0
    assert report.acceptance == 0.0
    assert report.ess == 0.0
    assert np.isnan(report.fraction_mean).all()
    assert report.rows() == []
    assert "kept none of 4 samples" in caplog.text


def test_tilted_weights_follow_the_color_counts():
    spec = EnsembleSpec(q=2, thresholds=(0.0,), mode="tilted", fields=(0.0, 1.0))

    report = droplet_experiment(
        ModelParams(q=2, beta=0.0), spec, 2, n=4, d=2, samples=3, burn_in=0, seed=9
    )

    sites = 25
    counts = report.fractions[:, 1] * sites
    assert report.weights.sum() == pytest.approx(1.0)
    log_ratio = np.log(report.weights) - np.log(report.weights[0])
    assert log_ratio.tolist() == pytest.approx((counts[0] - counts).tolist())
    assert 1.0 <= report.ess <= 6.0 + 1e-9
    low, high = report.log_weight_range
    assert low <= high
    assert report.summary()["mode"] == "tilted"


def test_theta_maps_kept_samples_to_partitions():
    spec = EnsembleSpec(q=2, thresholds=(0.3,), boundary_color=None, theta=0.4)

    report = droplet_experiment(
        ModelParams(q=2, beta=0.0), spec, 2, n=8, d=2, samples=3, burn_in=0, f=4
    )

    assert report.accepted > 0
    assert len(report.partitions) == report.accepted
    assert report.partitions[0].grid.shape == (2, 2)
    assert report.distances.shape == (report.accepted, 1)
    assert report.components.shape == (report.accepted, 1)
    assert np.all((report.distances >= 0) & (report.distances <= 1))
    assert "dist_2" in report.rows()[0]


def test_model_and_ensemble_must_agree_on_q():
    with pytest.raises(ValueError, match="model has q=3"):
        droplet_experiment(
            ModelParams(q=3, beta=0.5), EnsembleSpec(q=2, thresholds=(0.1,)), 1, n=4
        )


def test_tilted_sampling_agrees_with_rejection():
    params = ModelParams(q=2, beta=0.0)
    common = {"q": 2, "thresholds": (0.6,), "boundary_color": None}
    kwargs = {"n": 4, "d": 2, "samples": 200, "burn_in": 0}

    plain = droplet_experiment(params, EnsembleSpec(**common), 4, seed=1, **kwargs)
    tilted = droplet_experiment(
        params,
        EnsembleSpec(**common, mode="tilted", fields=(0.0, 0.4)),
        4,
        seed=2,
        **kwargs,
    )

    assert plain.accepted > 50 and tilted.accepted > plain.accepted
    assert_within_sigma(
        tilted.fraction_mean[1],
        plain.fraction_mean[1],
        math.hypot(plain.fraction_stderr[1], tilted.fraction_stderr[1]),
    )


def test_cold_droplets_form_one_component():
    spec = EnsembleSpec(q=2, thresholds=(0.3,), boundary_color=None, theta=0.5)

    report = droplet_experiment(
        ModelParams(q=2, beta=10.0), spec, 8, n=8, d=2, samples=2, f=2, burn_in=50, seed=5
    )

    assert report.accepted > 0
    assert report.single_component_rate >= 0.9
