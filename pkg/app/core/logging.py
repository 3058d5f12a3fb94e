"""Structured logging configuration.

Records always go to stderr so that CSV written to stdout stays clean.
Field values coming out of the numerics (numpy scalars, complex weak values)
are converted to plain JSON types before rendering.
"""

import logging
import sys
from typing import Any, Optional

import numpy as np
import orjson
import structlog
from structlog.processors import JSONRenderer, TimeStamper, add_log_level
from structlog.stdlib import add_logger_name
from structlog.typing import EventDict, WrappedLogger

from app.core.config import settings


def _plain_value(value: Any) -> Any:
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain_value(v) for v in value.tolist()]
    return value


def numeric_fields(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    """Make complex and numpy values serializable."""
    return {key: _plain_value(value) for key, value in event_dict.items()}


def _orjson_dumps(obj: Any, **_: Any) -> str:
    return orjson.dumps(obj, option=orjson.OPT_SERIALIZE_NUMPY, default=str).decode()


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None) -> None:
    """Configure structlog over the stdlib logger, writing to stderr."""
    level = level or settings.LOG_LEVEL
    log_format = log_format or settings.LOG_FORMAT

    if log_format == "json":
        renderer: Any = JSONRenderer(serializer=_orjson_dumps)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.contextvars.merge_contextvars,
            add_log_level,
            add_logger_name,
            numeric_fields,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            TimeStamper(fmt="iso"),
            structlog.processors.dict_tracebacks,
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level),
        force=True,
    )


def bind_run_context(command: str, **fields: Any) -> None:
    """Attach the running command (and e.g. the preset) to every later record."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(command=command, **fields)
