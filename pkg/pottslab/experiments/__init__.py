from ..sampling import Snapshot, load_snapshot, save_snapshot
from ._config import (
    AnalysisSection,
    AnnealSection,
    BoundarySection,
    EnsembleSection,
    ExperimentConfig,
    ModelSection,
    OracleSection,
    OutputSection,
    RunSection,
    TauSection,
    WulffSection,
    load_config,
    parse_config,
    render_config,
)
from ._manifest import ArtifactWriter, Manifest, config_digest
from ._runner import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_SIZING,
    SUBCOMMANDS,
    RunOutcome,
    run,
)

# Public API for ``pottslab.experiments``: the config text format, the
# subcommand runner and the files a run leaves behind.
__all__ = [
    # Configuration
    "AnalysisSection",
    "AnnealSection",
    "BoundarySection",
    "EnsembleSection",
    "ExperimentConfig",
    "ModelSection",
    "OracleSection",
    "OutputSection",
    "RunSection",
    "TauSection",
    "WulffSection",
    "load_config",
    "parse_config",
    "render_config",
    # Runner
    "EXIT_CONFIG",
    "EXIT_OK",
    "EXIT_RUNTIME",
    "EXIT_SIZING",
    "SUBCOMMANDS",
    "RunOutcome",
    "run",
    # Artifacts
    "ArtifactWriter",
    "Manifest",
    "Snapshot",
    "config_digest",
    "load_snapshot",
    "save_snapshot",
]
