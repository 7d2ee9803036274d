"""Structured logging configuration."""

import logging
import sys
from typing import Any

import numpy as np
import structlog


def configure_logging(log_level: str = "WARNING", log_format: str = "console") -> None:
    """Configure structured logging.

    Log lines go to stderr; stdout is reserved for JSON and CSV artifacts.
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=level,
    )

    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.TimeStamper(fmt="iso"),
        coerce_numpy_values,
    ]

    if log_format == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )


def _stderr_logger(*args: Any) -> structlog.PrintLogger:
    # sys.stderr is looked up per logger, not at configure time.
    return structlog.PrintLogger(file=sys.stderr)


def get_logger(name: str) -> Any:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


def coerce_numpy_values(logger: Any, method_name: str, event_dict: dict) -> dict:
    """Turn numpy scalars and arrays into plain Python values before rendering."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray):
            event_dict[key] = value.tolist()
    return event_dict


def format_error_message(error: Exception, context: dict[str, Any] | None = None) -> str:
    """Format error message for user-friendly display.

    Args:
        error: Exception that occurred
        context: Additional context about where the error occurred

    Returns:
        User-friendly error message
    """
    error_type = type(error).__name__
    error_msg = str(error)

    error_mappings = {
        "GeometryError": "Invalid model point",
        "DomainError": "Distance undefined",
        "NumericalRangeError": "Point outside the safe numerical range",
        "CollisionError": "Collision",
        "NoSolutionError": "No relative equilibrium",
        "NonpositiveMassError": "No positive mass balance",
        "NonpositiveOmegaSqError": "No positive angular velocity",
        "ConfigError": "Invalid configuration",
        "FileNotFoundError": "File not found",
        "ValueError": "Invalid input",
    }

    base_message = error_mappings.get(error_type, f"Error: {error_type}")

    if context:
        stage = context.get("stage")
        if stage:
            base_message = f"{base_message} during {stage}"

    if error_msg and len(error_msg) < 200:
        base_message = f"{base_message}: {error_msg}"

    return base_message
