import csv
import hashlib
import math

import pytest

from pottslab import configure
from pottslab.experiments import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_SIZING,
    SUBCOMMANDS,
    Manifest,
    config_digest,
    parse_config,
    run,
)


@pytest.fixture
def make_config(tmp_path):
    def make(*lines):
        return parse_config("\n".join([f'output.directory = "{tmp_path}"', *lines]))

    return make


def _rows(path):
    with path.open(newline="") as handle:
        return list(csv.DictReader(handle))


def _check_manifest(outcome, config):
    manifest = Manifest.load(outcome.directory / "manifest.json")
    assert manifest == outcome.manifest
    assert manifest.config_sha256 == config_digest(config)
    for name, digest in manifest.artifacts.items():
        assert hashlib.sha256((outcome.directory / name).read_bytes()).hexdigest() == digest
    return manifest


def test_every_subcommand_is_registered():
    assert set(SUBCOMMANDS) == {
        "sample",
        "estimate-theta",
        "estimate-theta-star",
        "phase-partition",
        "tau-probe",
        "slab-probe",
        "wulff",
        "surface-energy",
        "anneal",
        "droplet",
        "oracle-check",
    }


def test_oracle_check_passes(make_config, tmp_path):
    config = make_config()

    outcome = run("oracle-check", config)

    assert outcome.status == EXIT_OK
    assert outcome.message.startswith("ES-coupling TV distance:")
    assert outcome.directory == tmp_path / "oracle-check"
    manifest = _check_manifest(outcome, config)
    assert manifest.command == "oracle-check"
    assert sorted(manifest.artifacts) == ["config.txt", "oracle.csv"]
    (row,) = _rows(outcome.directory / "oracle.csv")
    assert row["sites"] == "4"
    assert float(row["tv"]) < 1e-10
    assert row["manifest"] == manifest.config_sha256


def test_unknown_subcommand(make_config):
    outcome = run("simulate", make_config())

    assert outcome.status == EXIT_CONFIG
    assert outcome.directory is None


def test_sizing_errors_exit_with_three(make_config):
    configure(max_sites=10)

    outcome = run("sample", make_config("model.d = 2", "model.n = 8"))

    assert outcome.status == EXIT_SIZING
    assert outcome.manifest is None


def test_enumeration_budget_exits_with_three(make_config):
    configure(oracle_bits=4)

    assert run("oracle-check", make_config()).status == EXIT_SIZING


def test_specs_the_config_cannot_build_exit_with_two(make_config):
    assert run("wulff", make_config("tau.kind = axis")).status == EXIT_CONFIG
    assert run("wulff", make_config("tau.kind = tabulated")).status == EXIT_CONFIG


def test_rejected_model_values_exit_with_two(make_config):
    config = make_config(
        "model.d = 2",
        "model.q = 2",
        'anneal.initial = "double-bubble"',
        "anneal.droplet_volume = 0.2",
        "anneal.blocks = 4",
    )

    outcome = run("anneal", config)

    assert outcome.status == EXIT_CONFIG
    assert "q >= 3" in outcome.message
    assert outcome.manifest is None


def test_empty_runs_exit_with_one(make_config):
    config = make_config("model.d = 2", "model.n = 2", "run.sweeps = 0", "run.burn_in = 0")

    outcome = run("estimate-theta", config)

    assert outcome.status == EXIT_RUNTIME
    assert "no samples" in outcome.message


def test_sample_writes_observables_and_snapshots(make_config):
    config = make_config(
        "model.d = 2",
        "model.n = 2",
        "model.beta = 0.5",
        "run.sweeps = 5",
        "run.burn_in = 2",
        "run.replicas = 2",
        "run.seed = 4",
        "analysis.snapshots = true",
    )

    outcome = run("sample", config)

    assert outcome.status == EXIT_OK
    assert outcome.message == "sampled 10 configurations"
    manifest = _check_manifest(outcome, config)
    assert manifest.seeds == (4,)
    assert {"samples.csv", "summary.csv", "replica-1.spin.txt", "replica-1.bond.txt"} <= set(
        manifest.artifacts
    )
    rows = _rows(outcome.directory / "samples.csv")
    assert len(rows) == 10
    assert {row["replica"] for row in rows} == {"0", "1"}
    assert (outcome.directory / "replica-0.spin.txt").read_text().startswith("POTTSLAB v1 spin")


def test_rerunning_a_config_reproduces_the_manifest(make_config):
    config = make_config("model.d = 2", "model.n = 2", "run.sweeps = 4", "run.burn_in = 1")

    first = run("sample", config)
    second = run("sample", config)

    assert first.manifest == second.manifest


def test_estimators_write_their_tables(make_config):
    config = make_config(
        "model.d = 2",
        "model.n = 4",
        "model.beta = 1.0",
        "run.sweeps = 20",
        "run.burn_in = 5",
        "analysis.batches = 5",
        "analysis.diameters = false",
    )

    theta = run("estimate-theta", config)
    theta_star = run("estimate-theta-star", config)

    assert theta.status == EXIT_OK
    assert theta.message.startswith("theta = ")
    assert len(_rows(theta.directory / "theta.csv")) == 1
    assert theta_star.status == EXIT_OK
    assert "diameters.csv" not in theta_star.manifest.artifacts


def test_phase_partition_with_supplied_theta(make_config):
    config = make_config(
        "model.d = 2",
        "model.n = 8",
        "model.beta = 2.0",
        "run.sweeps = 3",
        "run.burn_in = 10",
        "analysis.theta = 0.4",
        "analysis.f = 4",
        "analysis.scale_sizes = [8, 16]",
    )

    outcome = run("phase-partition", config)

    assert outcome.status == EXIT_OK
    assert (outcome.directory / "replica-0.partition.txt").read_text().startswith(
        "PARTITION v1 2 8 4 2"
    )
    volumes = _rows(outcome.directory / "volumes.csv")
    assert [row["phase"] for row in volumes] == ["0", "1", "2"]
    assert sum(float(row["volume"]) for row in volumes) == pytest.approx(1.0)
    assert len(_rows(outcome.directory / "scale.csv")) == 2


def test_wulff_reports_the_crystal(make_config):
    config = make_config("model.d = 2", "wulff.m = 16", "wulff.directions = 40")

    outcome = run("wulff", config)

    assert outcome.status == EXIT_OK
    (row,) = _rows(outcome.directory / "wulff.csv")
    assert row["directions"] == "40"
    assert float(row["ball_volume"]) == pytest.approx(math.pi)
    assert float(row["volume"]) == pytest.approx(math.pi, rel=0.1)
    assert "wulff.partition.txt" in outcome.manifest.artifacts


def test_surface_energy_compares_references(make_config):
    config = make_config(
        "model.d = 2",
        "model.q = 4",
        "boundary.name = per-face",
        "anneal.blocks = 8",
        "anneal.droplet_volume = 0.1",
    )

    outcome = run("surface-energy", config)

    assert outcome.status == EXIT_OK
    rows = {row["partition"]: row for row in _rows(outcome.directory / "surface_energy.csv")}
    assert set(rows) == {
        "flat-slab",
        "pyramids",
        "corner-droplet",
        "centered-droplet",
        "double-bubble",
    }
    assert float(rows["pyramids"]["boundary"]) < float(rows["flat-slab"]["boundary"])
    assert outcome.message.startswith("lowest surface energy")


def test_surface_energy_of_a_partition_file(make_config, tmp_path):
    path = tmp_path / "slab.txt"
    path.write_text("PARTITION v1 2 2 1 2\n11\n22\n", encoding="utf-8")
    config = make_config(
        "model.d = 2", "boundary.name = top-bottom", f'analysis.partition = "{path}"'
    )

    outcome = run("surface-energy", config)

    assert outcome.status == EXIT_OK
    (row,) = _rows(outcome.directory / "surface_energy.csv")
    assert row["partition"] == "file"


def test_anneal_restarts(make_config):
    config = make_config(
        "model.d = 2",
        "model.q = 2",
        "boundary.name = top-bottom",
        "anneal.blocks = 4",
        "anneal.restarts = 2",
        "anneal.cooling = 0.5",
        "anneal.sweeps_per_level = 2",
        "anneal.floor_ratio = 0.1",
    )

    outcome = run("anneal", config)

    assert outcome.status == EXIT_OK
    assert len(outcome.manifest.seeds) == 2
    summary = _rows(outcome.directory / "anneal.csv")
    assert [row["restart"] for row in summary] == ["0", "1"]
    assert all(float(r["energy"]) <= float(r["initial_energy"]) for r in summary)
    assert len(_rows(outcome.directory / "anneal_trace.csv")) == 8
    assert "restart-1.partition.txt" in outcome.manifest.artifacts


def test_droplet_run(make_config):
    config = make_config(
        "model.d = 2",
        "model.n = 4",
        "model.beta = 0.0",
        "ensemble.thresholds = [0.0]",
        "ensemble.runs = 2",
        "ensemble.samples = 2",
        "run.burn_in = 0",
    )

    outcome = run("droplet", config)

    assert outcome.status == EXIT_OK
    assert outcome.message == "kept 4/4 samples (ESS 4.0)"
    assert len(_rows(outcome.directory / "droplet.csv")) == 4
    (summary,) = _rows(outcome.directory / "droplet_summary.csv")
    assert summary["mode"] == "rejection"
