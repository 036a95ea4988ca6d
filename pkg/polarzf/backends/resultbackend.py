from __future__ import annotations

import os

import typer
import upath

from polarzf import telemetry


logger = telemetry.get_logger(__name__)


class ResultBackend:
    """Writes command results to a file, or to stdout without a target."""

    def __init__(self, target: str | os.PathLike[str] | None = None):
        """Constructor.

        Args:
            target: Output file (any upath-supported location); stdout if None
        """
        self.target = upath.UPath(target) if target is not None else None

    def emit(self, text: str):
        if self.target is None:
            typer.echo(text, nl=False)
            return
        logger.debug("%s: Writing %r", type(self).__name__, str(self.target))
        self.target.parent.mkdir(parents=True, exist_ok=True)
        self.target.write_text(text, encoding="utf-8")
