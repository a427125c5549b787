"""LangGraph pipeline for one CLI run."""

import logging
from typing import Any, Dict

from langgraph.graph import END, StateGraph

from graph.nodes import (
    execute_command_node,
    prepare_inputs_node,
    route_after,
    validate_config_node,
    write_report_node,
)
from graph.state import RunState, create_initial_state

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2


def create_workflow():
    """
    Create and compile the run pipeline.

    validate_config -> prepare_inputs -> execute_command -> write_report,
    with every step routed to END as soon as an error is recorded.

    Returns:
        Compiled StateGraph workflow
    """
    workflow = StateGraph(RunState)

    workflow.add_node("validate_config", validate_config_node)
    workflow.add_node("prepare_inputs", prepare_inputs_node)
    workflow.add_node("execute_command", execute_command_node)
    workflow.add_node("write_report", write_report_node)

    workflow.set_entry_point("validate_config")
    workflow.add_conditional_edges("validate_config", route_after, {"continue": "prepare_inputs", "end": END})
    workflow.add_conditional_edges("prepare_inputs", route_after, {"continue": "execute_command", "end": END})
    workflow.add_conditional_edges("execute_command", route_after, {"continue": "write_report", "end": END})
    workflow.add_edge("write_report", END)

    return workflow.compile()


def exit_code(final_state: Dict[str, Any]) -> int:
    """0 on success, 1 on a REJECT verdict, 2 on any recorded error."""
    if final_state.get("errors"):
        return EXIT_USAGE
    if final_state.get("verdict") is False:
        return EXIT_REJECT
    return EXIT_OK


def run_workflow(raw_config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Run the pipeline on raw RunConfig fields.

    Args:
        raw_config: Fields from flags and/or a config file

    Returns:
        Final state dictionary
    """
    final_state = create_workflow().invoke(create_initial_state(raw_config))
    for error in final_state.get("errors", []):
        logger.warning(f"Error in {error.get('node', 'unknown')}: {error.get('error_message', '')}")
    return final_state
