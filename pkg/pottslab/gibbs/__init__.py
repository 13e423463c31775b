from ._heat_bath import heat_bath_probabilities, heat_bath_step, heat_bath_sweep
from ._oracle import ExactTables, enumerate_exact, oracle_bits, total_variation
from ._weights import (
    ModelParams,
    SpinConfig,
    fk_weight,
    gibbs_weight,
    hamiltonian,
    log_fk_weight,
    log_gibbs_weight,
)

# Public API for ``pottslab.gibbs``: exact weights, the enumeration oracle and
# the single-site heat bath used to cross-check the cluster sampler.
__all__ = [
    # Parameters and configurations
    "ModelParams",
    "SpinConfig",
    # Weights
    "fk_weight",
    "gibbs_weight",
    "hamiltonian",
    "log_fk_weight",
    "log_gibbs_weight",
    # Exact enumeration
    "ExactTables",
    "enumerate_exact",
    "oracle_bits",
    "total_variation",
    # Heat bath
    "heat_bath_probabilities",
    "heat_bath_step",
    "heat_bath_sweep",
]
