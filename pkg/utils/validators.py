"""Validation functions for run configurations and specs."""

import logging
from typing import Any, Dict, Optional, Tuple

from pydantic import ValidationError

logger = logging.getLogger(__name__)

STATE_KINDS = ("cat", "defect", "ghz", "plus", "basis", "haar", "subset-phase", "gaussian-random")
RANDOM_STATE_KINDS = ("haar", "subset-phase", "gaussian-random")

# Commands that prepare an input state
STATE_COMMANDS = (
    "faf", "witness", "bell-estimate", "single-estimate", "test-bell", "test-single", "sweep-depol", "ensemble-stats",
)

# Commands whose results depend on shot sampling or random circuits
SAMPLING_COMMANDS = ("bell-estimate", "single-estimate", "test-bell", "test-single", "brickwork")


def format_validation_error(error: ValidationError) -> str:
    """One line per pydantic error, with the field location."""
    parts = []
    for item in error.errors():
        location = ".".join(str(piece) for piece in item.get("loc", ())) or "<root>"
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


def validate_state_fields(config: Any) -> Tuple[bool, Optional[str]]:
    """
    Check that a named state has the parameters it needs.

    Args:
        config: RunConfig

    Returns:
        Tuple of (is_valid, error_message)
    """
    if config.state_json is not None:
        return True, None
    if config.state is None:
        return False, f"{config.command} requires --state or --state-json"
    if config.state not in STATE_KINDS:
        return False, f"Unknown state '{config.state}', expected one of: {', '.join(STATE_KINDS)}"
    if config.state == "basis":
        if not config.bits:
            return False, "basis state requires --bits"
        return True, None
    if config.n is None:
        return False, f"state '{config.state}' requires --n"
    if config.state == "cat" and config.eps2 is None:
        return False, "cat state requires --eps2"
    if config.state == "subset-phase" and config.q is None:
        return False, "subset-phase state requires --q"
    if config.state == "defect" and config.n < 4:
        return False, "defect state requires --n >= 4"
    return True, None


def is_stochastic(config: Any) -> bool:
    """True when the run draws random numbers and so needs a seed."""
    if config.command in SAMPLING_COMMANDS:
        return True
    if config.command in ("sweep-theta", "sweep-depol") and (config.shots or 0) > 0:
        return True
    if config.state_json is not None:
        return config.state_json.get("kind") in ("haar", "subset_phase", "gaussian_random")
    return config.state in RANDOM_STATE_KINDS


def validate_run_config(config: Any) -> Tuple[bool, Optional[str]]:
    """
    Validate the per-command requirements of a RunConfig.

    Field-level checks (ranges, types) are already done by the model; this
    covers the fields each command needs.

    Args:
        config: RunConfig

    Returns:
        Tuple of (is_valid, error_message)
    """
    command = config.command

    if command in STATE_COMMANDS:
        is_valid, message = validate_state_fields(config)
        if not is_valid:
            return False, message

    if is_stochastic(config) and config.seed is None:
        return False, f"{command} is stochastic and requires --seed"

    if command in ("bell-estimate", "single-estimate") and not config.shots:
        return False, f"{command} requires --shots"
    if command == "single-estimate" and config.shots < 2:
        return False, "single-estimate needs at least 2 shots per layer"
    if command == "bell-estimate":
        from protocols.estimators import mom_batches

        needed = mom_batches(config.delta)
        if config.shots < needed:
            return False, f"bell-estimate needs at least {needed} shots at --delta {config.delta}"
    if command in ("test-bell", "test-single") and config.epsilon is None:
        return False, f"{command} requires --epsilon"
    if command == "sweep-theta" and not config.thetas:
        return False, "sweep-theta requires --thetas"
    if command == "sweep-depol" and not config.ps:
        return False, "sweep-depol requires --ps"
    if command in ("brickwork", "layers") and config.n is None:
        return False, f"{command} requires --n"
    if command == "brickwork":
        if config.depth is None:
            return False, "brickwork requires --depth"
        if config.n % 2:
            return False, "brickwork requires an even --n"
    if command == "ensemble-stats" and config.state_json is None and config.draws is None:
        return False, "ensemble-stats requires --draws"

    # deferred: qstate imports utils.errors, which loads this module
    from qstate.channels import CHANNEL_KINDS

    if config.noise is not None and config.noise not in CHANNEL_KINDS:
        return False, f"Unknown noise '{config.noise}', expected one of: {', '.join(CHANNEL_KINDS)}"
    if config.noise is not None and config.noise_strength is None and command == "brickwork":
        return False, "brickwork noise requires --noise-strength"
    for p in config.ps or []:
        if not 0.0 <= p <= 1.0:
            return False, f"Noise strength {p} outside [0, 1]"

    return True, None


def validate_spec_json(model: Any, data: Dict[str, Any]) -> Tuple[bool, Optional[str]]:
    """
    Validate a JSON document against a pydantic spec model.

    Args:
        model: EnsembleSpec or CircuitSpec class
        data: Parsed JSON

    Returns:
        Tuple of (is_valid, error_message) with field locations on failure
    """
    try:
        model.model_validate(data)
    except ValidationError as e:
        return False, f"{model.__name__}: {format_validation_error(e)}"
    return True, None
