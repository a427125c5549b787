"""Node functions for the run pipeline."""

import logging
from pathlib import Path
from typing import Any, Dict

from pydantic import ValidationError

from graph.commands import HANDLERS, STATEFUL, prepare_state, run_streams
from graph.state import RunConfig, RunState, add_error
from protocols.records import write_bell_records, write_layer_csv
from utils.helpers import get_output_path
from utils.report_writer import write_report
from utils.validators import format_validation_error, validate_run_config

logger = logging.getLogger(__name__)


def validate_config_node(state: RunState) -> Dict[str, Any]:
    """
    Parse and validate the raw configuration.

    Args:
        state: Current run state

    Returns:
        Updated state dictionary
    """
    logger.info("Executing validate_config node")
    try:
        config = RunConfig.model_validate(state.get("raw_config", {}))
    except ValidationError as e:
        message = format_validation_error(e)
        logger.error(f"Invalid run configuration: {message}")
        return add_error("validate_config", "ValidationError", message)

    is_valid, message = validate_run_config(config)
    if not is_valid:
        logger.error(f"Invalid run configuration: {message}")
        return add_error("validate_config", "UsageError", message)

    return {"config": config}


def prepare_inputs_node(state: RunState) -> Dict[str, Any]:
    """
    Build the input state for commands that take one.

    Args:
        state: Current run state

    Returns:
        Updated state dictionary
    """
    config: RunConfig = state["config"]
    if config.command not in STATEFUL:
        return {"prepared_state": None}

    logger.info(f"Preparing input state for {config.command}")
    try:
        prepared = prepare_state(config, run_streams(config)[0])
    except ValidationError as e:
        return add_error("prepare_inputs", "ValidationError", format_validation_error(e))
    except ValueError as e:
        logger.error(f"Error preparing input state: {e}")
        return add_error("prepare_inputs", type(e).__name__, str(e))
    return {"prepared_state": prepared}


def execute_command_node(state: RunState) -> Dict[str, Any]:
    """
    Run the command handler.

    Args:
        state: Current run state

    Returns:
        Updated state dictionary with results, rows, constants and verdict
    """
    config: RunConfig = state["config"]
    logger.info(f"Executing command {config.command}")
    try:
        outcome = HANDLERS[config.command](config, state.get("prepared_state"), run_streams(config)[1])
    except ValidationError as e:
        return add_error("execute_command", "ValidationError", format_validation_error(e))
    except (ValueError, RuntimeError) as e:
        logger.error(f"Error in {config.command}: {e}")
        return add_error("execute_command", type(e).__name__, str(e))

    update: Dict[str, Any] = {
        "results": outcome.results,
        "rows": outcome.rows,
        "constants": outcome.constants,
        "verdict": outcome.verdict,
    }
    if config.records and outcome.record is not None:
        path = Path(_report_path(config)).with_suffix(".shots.ndjson")
        update["record_path"] = str(write_bell_records(outcome.record, path))
    if config.records and outcome.layer_shots is not None:
        path = Path(_report_path(config)).with_suffix(".layers.csv")
        update["record_path"] = str(write_layer_csv(outcome.layer_shots, path))
    return update


def _report_path(config: RunConfig) -> str:
    if config.output:
        return config.output
    return str(get_output_path(f"{config.command}.{config.format}"))


def write_report_node(state: RunState) -> Dict[str, Any]:
    """
    Write the report file.

    Args:
        state: Current run state

    Returns:
        Updated state dictionary with the report path and final status
    """
    config: RunConfig = state["config"]
    report = {
        "command": config.command,
        "parameters": config.echo(),
        "constants": state.get("constants") or {},
        "results": state.get("results") or {},
        "rows": state.get("rows") or [],
    }
    try:
        path = write_report(report, Path(_report_path(config)), config.format)
    except OSError as e:
        return add_error("write_report", "OSError", str(e))
    return {"report_path": str(path), "status": "completed"}


def route_after(state: RunState) -> str:
    """Continue on success; stop at the first recorded error."""
    return "end" if state.get("errors") else "continue"
