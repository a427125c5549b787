"""Utility functions for errors, validation, logging and reports."""

from .errors import ContractViolationError, InternalSimulationError, SizeLimitError
from .validators import validate_run_config, validate_spec_json
from .helpers import format_number, get_output_path, load_json_argument, setup_logging
from .report_writer import ReportWriter, write_report

__all__ = [
    "ContractViolationError",
    "InternalSimulationError",
    "SizeLimitError",
    "validate_run_config",
    "validate_spec_json",
    "format_number",
    "get_output_path",
    "load_json_argument",
    "setup_logging",
    "ReportWriter",
    "write_report",
]
