"""Joint survival signatures of coherent systems with shared components."""

from ._sharedsig import (
    ConditioningOnNullEvent,
    Error,
    Model,
    ModelFileError,
    Reliability,
    SignatureTable,
    TooLarge,
    exhaustive_signature,
    generator_id,
    joint_signature,
    load_model,
    parse_model,
    run_cli,
    simulate,
    survival_signature,
)

__all__ = [
    "ConditioningOnNullEvent",
    "Error",
    "Model",
    "ModelFileError",
    "Reliability",
    "SignatureTable",
    "TooLarge",
    "exhaustive_signature",
    "generator_id",
    "joint_signature",
    "load_model",
    "parse_model",
    "run_cli",
    "simulate",
    "survival_signature",
]
