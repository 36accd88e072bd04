"""Multi-agent debate engine for event extraction."""

from ._dao import (
    BackendError,
    ConfigError,
    DaoError,
    accept,
    calibrate,
    calibrate_config,
    conformal_rank,
    decay_radius,
    embed,
    evaluate,
    head_of_span,
    run,
    trigger_prf,
)

__all__ = [
    "BackendError",
    "ConfigError",
    "DaoError",
    "accept",
    "calibrate",
    "calibrate_config",
    "conformal_rank",
    "decay_radius",
    "embed",
    "evaluate",
    "head_of_span",
    "run",
    "trigger_prf",
]
