"""Helper functions for logging, output paths and number formatting."""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Union

from config import get_config

LOGGER_NAME = "fermiprobe"


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """
    Set up logging for the toolkit.

    Module loggers live under their package names, so the handlers go on
    the root logger and the named ``fermiprobe`` logger is returned for the
    CLI's own messages.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path to log file

    Returns:
        Configured logger instance
    """
    level = getattr(logging, log_level.upper())
    root = logging.getLogger()
    root.setLevel(level)

    # Remove existing handlers
    root.handlers = []

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console goes to stderr; stdout carries report paths and layer listings
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    return logging.getLogger(LOGGER_NAME)


def get_output_path(filename: str, subdirectory: Optional[str] = None) -> Path:
    """
    Get output path for a report file.

    Args:
        filename: Name of the file
        subdirectory: Optional subdirectory within output directory

    Returns:
        Path object for the output file
    """
    output_dir = get_config().paths.output_dir

    if subdirectory:
        output_dir = output_dir / subdirectory
    output_dir.mkdir(parents=True, exist_ok=True)

    return output_dir / filename


def format_number(value: Any) -> str:
    """
    Format a value for a report cell.

    Floats use the configured number of significant digits with a '.'
    separator; ints, bools, strings and None pass through as text.
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        digits = get_config().report.significant_digits
        return format(value, f".{digits}g")
    return str(value)


def round_floats(value: Any) -> Any:
    """Recursively round floats to the configured significant digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(format_number(value))
    if isinstance(value, dict):
        return {str(k): round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v) for v in value]
    if hasattr(value, "item"):
        return round_floats(value.item())
    return value


def load_json_argument(value: Union[str, Path]) -> Any:
    """
    Parse a CLI argument that is either inline JSON or a path to a JSON file.

    Raises:
        ValueError: With line and column information when parsing fails
    """
    text = str(value)
    source = "inline JSON"
    if not text.lstrip().startswith(("{", "[")):
        path = Path(text)
        if not path.exists():
            raise ValueError(f"{text} is neither inline JSON nor an existing file")
        text = path.read_text(encoding="utf-8")
        source = str(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from e
