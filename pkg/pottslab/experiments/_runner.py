"""Subcommand pipelines and the translation of failures into exit codes.

Each subcommand reads an :class:`ExperimentConfig`, runs one module
pipeline and writes its artifacts under ``output.directory/<subcommand>``
through a single :class:`ArtifactWriter`. Failures never escape
:func:`run` as exceptions; they become exit codes:

* ``2`` for configuration errors, including specs the config cannot build
  and model values the lab rejects,
* ``3`` for sizing errors (memory or enumeration budgets),
* ``1`` for any other lab error,
* ``0`` on success.
"""

import dataclasses
import logging
import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pydantic
from scipy.special import gamma

from .._context import LabContext, lab_globals
from ..clusters import (
    ESTIMATE_FIELDS,
    Wiring,
    diameter_tail,
    order_parameter_estimate,
    percolation_estimate,
    slab_lro_probe,
)
from ..exc import ConfigError, EmptySampleError, PottsLabError, SizingError
from ..gibbs import ModelParams, enumerate_exact, total_variation
from ..lattice import RngStream, build_box, build_segment
from ..phases import (
    BlockGrid,
    PhasePartition,
    TestEventSpec,
    boundary_energy,
    bulk_energy,
    discrete_perimeter,
    empirical_phase_partition,
    load_partition,
    render_partition,
    scale_growth_table,
    surface_energy,
)
from ..sampling import ChainResult, RunSpec, observable_names, observables, sample_chain
from ..tau import TAU_FIELDS, axis_model, tau_probe
from ..variational import (
    AnnealResult,
    anneal_partition,
    droplet_experiment,
    reference_partition,
    wulff_crystal,
)
from ._config import ExperimentConfig
from ._manifest import ArtifactWriter, Manifest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_SIZING = 3


@dataclasses.dataclass(frozen=True)
class RunOutcome:
    """Exit status, a one-line message and, on success, the manifest."""

    status: int
    message: str
    directory: Path | None = None
    manifest: Manifest | None = None


@dataclasses.dataclass(frozen=True)
class _Done:
    message: str
    seeds: tuple[int, ...]
    status: int = EXIT_OK


Command = Callable[[ExperimentConfig, ArtifactWriter], _Done]
_COMMANDS: dict[str, Command] = {}


def _command(name: str) -> Callable[[Command], Command]:
    def register(func: Command) -> Command:
        _COMMANDS[name] = func
        return func

    return register


# ---------------------------------------------------------------------------
# Shared builders
# ---------------------------------------------------------------------------


def _params(config: ExperimentConfig) -> ModelParams:
    return ModelParams(q=config.model.q, beta=config.model.beta)


def _run_spec(config: ExperimentConfig) -> RunSpec:
    m, r = config.model, config.run
    return RunSpec(
        d=m.d,
        n=m.n,
        q=m.q,
        beta=m.beta,
        boundary=config.boundary.spec(m.d, m.q),
        sweeps=r.sweeps,
        burn_in=r.burn_in,
        thinning=r.thinning,
        replicas=r.replicas,
        seed=r.seed,
    )


def _boundary_color(config: ExperimentConfig) -> int:
    return config.boundary.color if config.boundary.name == "whole" else 1


def _sample(config: ExperimentConfig) -> tuple[RunSpec, ChainResult]:
    run = _run_spec(config)
    result = sample_chain(run)
    if not result.samples:
        raise EmptySampleError("the run emitted no samples; raise run.sweeps")
    return run, result


# ---------------------------------------------------------------------------
# Sampling and estimators
# ---------------------------------------------------------------------------


@_command("sample")
def _cmd_sample(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    run = _run_spec(config)
    result = sample_chain(run)
    lattice = run.lattice()
    names = observable_names(run.q)
    rows = []
    for s in result.samples:
        values = observables(s.spins, s.bonds, lattice, run.q)
        row: dict[str, float] = {"replica": s.replica, "sweep": s.sweep}
        row.update(zip(names, map(float, values)))
        rows.append(row)
    out.write_csv("samples.csv", ["replica", "sweep", *names], rows)
    if result.stats.count:
        summary = [
            {
                "observable": name,
                "mean": float(mean),
                "variance": float(var),
                "count": result.stats.count,
            }
            for name, mean, var in zip(names, result.stats.mean, result.stats.variance)
        ]
        out.write_csv("summary.csv", ["observable", "mean", "variance", "count"], summary)
    if config.analysis.snapshots:
        for replica in range(run.replicas):
            emitted = result.replica(replica)
            if emitted:
                last = emitted[-1]
                out.write_text(f"replica-{replica}.spin.txt", last.snapshot("spin").render())
                out.write_text(f"replica-{replica}.bond.txt", last.snapshot("bond").render())
    return _Done(f"sampled {len(result.samples)} configurations", (run.seed,))


@_command("estimate-theta")
def _cmd_theta(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    run, result = _sample(config)
    estimate = order_parameter_estimate(
        [s.spins for s in result.samples],
        run.lattice(),
        run.params,
        _boundary_color(config),
        seed=run.seed,
        batches=config.analysis.batches,
    )
    out.write_csv("theta.csv", ESTIMATE_FIELDS, [estimate.as_row()])
    return _Done(f"theta = {estimate.value:.6g} +- {estimate.stderr:.2g}", (run.seed,))


@_command("estimate-theta-star")
def _cmd_theta_star(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    run, result = _sample(config)
    lattice = run.lattice()
    bonds = [s.bonds for s in result.samples]
    estimate = percolation_estimate(
        bonds, lattice, run.params, seed=run.seed, batches=config.analysis.batches
    )
    out.write_csv("theta_star.csv", ESTIMATE_FIELDS, [estimate.as_row()])
    if config.analysis.diameters:
        wiring = Wiring.from_assignment(run.assignment(lattice))
        tail = diameter_tail(bonds, lattice, wiring=wiring)
        out.write_csv("diameters.csv", ["diameter", "count", "log_frequency"], tail.rows())
        fit = {
            "slope": tail.slope,
            "slope_low": tail.slope_low,
            "slope_high": tail.slope_high,
            "confidence": tail.confidence,
            "decays": tail.decays,
        }
        out.write_csv("diameter_fit.csv", list(fit), [fit])
    return _Done(f"theta* = {estimate.value:.6g} +- {estimate.stderr:.2g}", (run.seed,))


@_command("phase-partition")
def _cmd_phase_partition(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    run, result = _sample(config)
    lattice = run.lattice()
    analysis = config.analysis
    theta, source = analysis.theta, "supplied"
    if theta is None:
        estimate = order_parameter_estimate(
            [s.spins for s in result.samples],
            lattice,
            run.params,
            _boundary_color(config),
            seed=run.seed,
            batches=analysis.batches,
        )
        theta, source = estimate.value, "estimated"
        logger.info("phase partition uses estimated theta %.6g", theta)
    events = TestEventSpec(
        q=run.q, theta=theta, epsilon=analysis.epsilon, theta_source=source
    )
    rows = []
    for replica in range(run.replicas):
        emitted = result.replica(replica)
        if not emitted:
            continue
        last = emitted[-1]
        partition = empirical_phase_partition(last.spins, lattice, events, analysis.f)
        out.write_text(f"replica-{replica}.partition.txt", render_partition(partition))
        for phase, volume in enumerate(partition.volumes()):
            rows.append(
                {"replica": replica, "sweep": last.sweep, "phase": phase, "volume": float(volume)}
            )
    out.write_csv("volumes.csv", ["replica", "sweep", "phase", "volume"], rows)
    scale = scale_growth_table(run.d, analysis.scale_sizes)
    out.write_csv("scale.csv", ["n", "f", "n_over_area", "f_over_log_n"], scale)
    return _Done(f"wrote {run.replicas} phase partition(s), theta={theta:.6g}", (run.seed,))


# ---------------------------------------------------------------------------
# Surface tension and slabs
# ---------------------------------------------------------------------------


@_command("tau-probe")
def _cmd_tau_probe(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    m, r = config.model, config.run
    axes = config.tau.axes if config.tau.axes is not None else tuple(range(m.d))
    estimates = [
        tau_probe(
            axis,
            m.n,
            m.d,
            _params(config),
            samples=config.tau.samples,
            burn_in=r.burn_in,
            thinning=r.thinning,
            seed=r.seed,
        )
        for axis in axes
    ]
    out.write_csv("tau.csv", TAU_FIELDS, [e.as_row() for e in estimates])
    if sorted(axes) == list(range(m.d)) and not any(e.censored for e in estimates):
        model = axis_model(estimates)
        out.write_csv(
            "tau_model.csv",
            ["axis", "value"],
            [{"axis": a, "value": model.axis_value(a)} for a in range(m.d)],
        )
    values = ", ".join(f"{e.tau_hat:.4g}{'+' if e.censored else ''}" for e in estimates)
    return _Done(f"tau along axes {list(axes)}: {values}", (r.seed,))


@_command("slab-probe")
def _cmd_slab_probe(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    m, a = config.model, config.analysis
    result = slab_lro_probe(
        a.slab_length,
        m.n,
        _params(config),
        d=m.d,
        alpha=a.slab_alpha,
        samples=a.slab_samples,
        burn_in=config.run.burn_in,
        seed=config.run.seed,
    )
    row = result.model_dump()
    row["pair"] = " ".join(",".join(map(str, x)) for x in result.pair)
    out.write_csv("slab.csv", list(row), [row])
    return _Done(f"smallest connection probability {result.value:.4g}", (config.run.seed,))


# ---------------------------------------------------------------------------
# Geometry and variational
# ---------------------------------------------------------------------------


def _ball_volume(d: int, radius: float) -> float:
    return math.pi ** (d / 2) / gamma(d / 2 + 1) * radius**d


@_command("wulff")
def _cmd_wulff(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    d = config.model.d
    tau = config.tau.model(d)
    shape = wulff_crystal(tau, m=config.wulff.m, directions=config.wulff.directions)
    raster = PhasePartition(
        BlockGrid.uniform(d, shape.m), 1, shape.inside.astype(np.int16)
    )
    out.write_text("wulff.partition.txt", render_partition(raster))
    radii = shape.radii()
    ball = _ball_volume(d, tau.c) if tau.kind == "isotropic" else math.nan
    row = {
        "d": d,
        "m": shape.m,
        "directions": len(shape.directions),
        "cell_size": shape.cell_size,
        "volume": shape.volume,
        "ball_volume": ball,
        "radius_min": float(radii.min()),
        "radius_max": float(radii.max()),
    }
    out.write_csv("wulff.csv", list(row), [row])
    return _Done(f"Wulff crystal volume {shape.volume:.6g}", ())


def _reference(config: ExperimentConfig, kind: str, grid: BlockGrid) -> PhasePartition:
    d = grid.d
    return reference_partition(
        kind,
        grid,
        config.model.q,
        volume=config.anneal.droplet_volume,
        tau=config.tau.model(d),
    )


@_command("surface-energy")
def _cmd_surface_energy(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    d, q = config.model.d, config.model.q
    tau = config.tau.model(d)
    boundary = config.boundary.spec(d, q)
    candidates: list[tuple[str, PhasePartition]] = []
    if config.analysis.partition is not None:
        candidates.append(("file", load_partition(config.analysis.partition)))
    else:
        grid = BlockGrid.uniform(d, config.anneal.blocks)
        kinds = ["flat-slab"]
        if q >= 2 * d:
            kinds.append("pyramids")
        if config.anneal.droplet_volume is not None:
            kinds += ["corner-droplet", "centered-droplet"]
            if q >= 3:
                kinds.append("double-bubble")
        candidates += [(kind, _reference(config, kind, grid)) for kind in kinds]
    rows = []
    for name, partition in candidates:
        rows.append(
            {
                "partition": name,
                "bulk": bulk_energy(partition, tau),
                "boundary": boundary_energy(partition, tau, boundary),
                "total": surface_energy(partition, tau, boundary),
                "perimeter": discrete_perimeter(partition),
            }
        )
    fields = ["partition", "bulk", "boundary", "total", "perimeter"]
    out.write_csv("surface_energy.csv", fields, rows)
    best = min(rows, key=lambda row: row["total"])
    return _Done(f"lowest surface energy {best['total']:.6g} ({best['partition']})", ())


def _anneal_restart(
    config: ExperimentConfig, restart: int, audit_every: int
) -> AnnealResult:
    with LabContext() as context:
        context.audit_every = audit_every
        d, q, a = config.model.d, config.model.q, config.anneal
        grid = BlockGrid.uniform(d, a.blocks)
        initial = _reference(config, a.initial, grid) if a.initial else None
        rng = RngStream(config.run.seed).child(restart).generator()
        return anneal_partition(
            config.boundary.spec(d, q),
            config.tau.model(d),
            grid,
            rng,
            q=q,
            initial=initial,
            volumes=a.volumes,
            fill=a.fill,
            schedule=a.schedule,
        )


@_command("anneal")
def _cmd_anneal(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    restarts = config.anneal.restarts
    args = ([config] * restarts, list(range(restarts)), [lab_globals.audit_every] * restarts)
    workers = min(lab_globals.workers, restarts)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_anneal_restart, *args))
    else:
        results = [_anneal_restart(*a) for a in zip(*args)]

    summary, trace = [], []
    for restart, result in enumerate(results):
        out.write_text(f"restart-{restart}.partition.txt", render_partition(result.partition))
        summary.append(
            {
                "restart": restart,
                "initial_energy": result.initial_energy,
                "energy": result.energy,
                "moves": result.moves,
                "audits": result.audits,
            }
        )
        trace += [{"restart": restart, **dataclasses.asdict(row)} for row in result.trace]
    out.write_csv("anneal.csv", ["restart", "initial_energy", "energy", "moves", "audits"], summary)
    out.write_csv(
        "anneal_trace.csv",
        ["restart", "level", "temperature", "energy", "best", "acceptance"],
        trace,
    )
    best = min(result.energy for result in results)
    seeds = tuple(RngStream(config.run.seed).child(r).stream for r in range(restarts))
    return _Done(f"best annealed energy {best:.6g} over {restarts} restart(s)", seeds)


@_command("droplet")
def _cmd_droplet(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    m, e, r = config.model, config.ensemble, config.run
    report = droplet_experiment(
        _params(config),
        e.spec(m.q),
        e.runs,
        n=m.n,
        d=m.d,
        samples=e.samples,
        seed=r.seed,
        tau=config.tau.model(m.d),
        f=config.analysis.f,
        burn_in=r.burn_in,
        thinning=r.thinning,
    )
    rows = report.rows()
    fields = ["replica", "sweep", "weight"] + [f"fraction_{c}" for c in range(1, m.q + 1)]
    if report.partitions:
        for i in range(2, m.q + 1):
            fields += [f"dist_{i}", f"components_{i}"]
    out.write_csv("droplet.csv", fields, rows)
    summary = report.summary()
    out.write_csv("droplet_summary.csv", list(summary), [summary])
    return _Done(
        f"kept {report.accepted}/{report.samples} samples (ESS {report.ess:.1f})", (r.seed,)
    )


@_command("oracle-check")
def _cmd_oracle_check(config: ExperimentConfig, out: ArtifactWriter) -> _Done:
    o = config.oracle
    lattice = build_box(o.d, o.n) if o.d >= 2 else build_segment(o.n)
    tables = enumerate_exact(lattice, ModelParams(q=o.q, beta=o.beta))
    tv = total_variation(tables.es_spins, tables.potts)
    row = {
        "d": o.d,
        "n": o.n,
        "q": o.q,
        "beta": o.beta,
        "sites": lattice.num_sites,
        "edges": lattice.num_edges,
        "tv": tv,
        "residual": tables.residual,
    }
    out.write_csv("oracle.csv", list(row), [row])
    status = EXIT_OK if tv < o.tolerance else EXIT_RUNTIME
    return _Done(f"ES-coupling TV distance: {tv:.3e}", (), status)


SUBCOMMANDS = tuple(_COMMANDS)


def run(subcommand: str, config: ExperimentConfig) -> RunOutcome:
    """Run one subcommand and write its artifacts; see the module docs for exit codes."""
    command = _COMMANDS.get(subcommand)
    if command is None:
        return RunOutcome(EXIT_CONFIG, f"unknown subcommand {subcommand!r}")
    directory = Path(config.output.directory) / subcommand
    context = LabContext()
    for name in LabContext.__slots__:
        setattr(context, name, getattr(lab_globals, name))
    context.workers = config.run.workers
    try:
        with context:
            out = ArtifactWriter(directory, config, subcommand)
            done = command(config, out)
            manifest = out.finish(done.seeds)
    except (ConfigError, pydantic.ValidationError) as exc:
        logger.error("%s: configuration error: %s", subcommand, exc)
        return RunOutcome(EXIT_CONFIG, str(exc))
    except SizingError as exc:
        logger.error("%s: sizing error: %s", subcommand, exc)
        return RunOutcome(EXIT_SIZING, str(exc))
    except PottsLabError as exc:
        logger.error("%s failed: %s", subcommand, exc)
        return RunOutcome(EXIT_RUNTIME, str(exc))
    except ValueError as exc:
        logger.error("%s: invalid input: %s", subcommand, exc)
        return RunOutcome(EXIT_CONFIG, str(exc))
    logger.info("%s finished: %s", subcommand, done.message)
    return RunOutcome(done.status, done.message, directory, manifest)
