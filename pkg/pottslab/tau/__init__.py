from ._cut import (
    TAU_FIELDS,
    TauEstimate,
    axis_model,
    cut_event_indicator,
    cut_window,
    tau_estimate,
    tau_from_indicators,
    tau_probe,
)
from ._model import AxisRule, TauKind, TauModel

# Public API for ``pottslab.tau``: surface tension models and the finite-n
# cut-event estimator.
__all__ = [
    # Models
    "AxisRule",
    "TauKind",
    "TauModel",
    # Estimation
    "TAU_FIELDS",
    "TauEstimate",
    "axis_model",
    "cut_event_indicator",
    "cut_window",
    "tau_estimate",
    "tau_from_indicators",
    "tau_probe",
]
