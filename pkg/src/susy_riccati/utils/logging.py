"""Structured logging configuration using structlog."""

import functools
import logging
import sys
from typing import Any, Callable, TypeVar

import structlog
from rich.console import Console
from rich.logging import RichHandler

F = TypeVar("F", bound=Callable[..., Any])


def setup_logging(log_level: str = "WARNING", structured: bool = True) -> None:
    """Configure structured logging for the application.

    Output always goes to stderr so traces written to stdout stay parseable.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        structured: Whether to use structured logging format
    """
    level = getattr(logging, log_level)
    logging.basicConfig(
        level=level,
        handlers=[],
        format="%(message)s",
    )

    if structured:
        structlog.configure(
            processors=[
                structlog.contextvars.merge_contextvars,
                structlog.processors.add_log_level,
                structlog.processors.TimeStamper(fmt="iso"),
                structlog.processors.CallsiteParameterAdder(
                    parameters=[structlog.processors.CallsiteParameter.FUNC_NAME]
                ),
                structlog.dev.ConsoleRenderer(colors=False),
            ],
            wrapper_class=structlog.make_filtering_bound_logger(level),
            logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
            cache_logger_on_first_use=False,
        )
    else:
        console = Console(stderr=True)
        rich_handler = RichHandler(
            console=console,
            show_path=True,
            markup=False,
            rich_tracebacks=True,
        )

        root_logger = logging.getLogger()
        root_logger.handlers = [rich_handler]
        root_logger.setLevel(level)

        structlog.configure(
            processors=[
                structlog.contextvars.merge_contextvars,
                structlog.processors.add_log_level,
                structlog.processors.TimeStamper(fmt="iso"),
                structlog.dev.ConsoleRenderer(colors=False),
            ],
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.make_filtering_bound_logger(level),
            cache_logger_on_first_use=False,
        )


def get_logger(name: str) -> Any:
    """Get a configured logger instance.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured structlog logger
    """
    return structlog.get_logger(name)


class RunContext:
    """Bind a run identifier (subcommand, suite) to every log line inside the block."""

    def __init__(self, **context: Any):
        self.context = context

    def __enter__(self) -> "RunContext":
        structlog.contextvars.clear_contextvars()
        structlog.contextvars.bind_contextvars(**self.context)
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        structlog.contextvars.clear_contextvars()


def log_call(logger: Any) -> Callable[[F], F]:
    """Decorator to log function calls with parameters and results."""

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            logger.debug(
                "Function called",
                function=func.__name__,
                args=len(args),
                kwargs=list(kwargs.keys()),
            )
            try:
                result = func(*args, **kwargs)
                logger.debug("Function completed", function=func.__name__, success=True)
                return result
            except Exception as e:
                logger.error(
                    "Function failed",
                    function=func.__name__,
                    error=str(e),
                    error_type=type(e).__name__,
                )
                raise

        return wrapper  # type: ignore[return-value]

    return decorator
