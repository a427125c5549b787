"""LangGraph run pipeline behind the command-line front end."""

from .state import RunConfig, RunState
from .workflow import create_workflow, exit_code, run_workflow

__all__ = ["RunConfig", "RunState", "create_workflow", "exit_code", "run_workflow"]
