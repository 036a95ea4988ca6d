from __future__ import annotations

from collections.abc import Callable
import functools
from typing import Any, TypeVar

import typer

from polarzf import telemetry
from polarzf.exceptions import PolarZFError


logger = telemetry.get_logger(__name__)

T = TypeVar("T")

INVALID_INPUT_EXIT = 2


def fail(message: str, exit_code: int) -> typer.Exit:
    typer.echo(f"error: {' '.join(message.split())}", err=True)
    return typer.Exit(exit_code)


def handle_exceptions(fn: Callable[..., T]) -> Callable[..., T]:
    """Turn library errors into one `error: ...` line on stderr and an exit code."""

    @functools.wraps(fn)
    def wrapped(*args: Any, **kwargs: Any) -> T:
        try:
            return fn(*args, **kwargs)
        except PolarZFError as e:
            logger.debug("%s raised %s", fn.__name__, type(e).__name__)
            raise fail(str(e), e.exit_code) from e
        except ValueError as e:
            raise fail(str(e), INVALID_INPUT_EXIT) from e

    return wrapped
