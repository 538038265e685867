"""
Console logging through rich.
"""
import logging

from rich.console import Console
from rich.logging import RichHandler

# Human-facing output goes to stderr; stdout is reserved for machine-readable paths.
console = Console(stderr=True)

_configured = False


def setup_logging(level: str = "INFO", rich_tracebacks: bool = True) -> None:
    """Install a RichHandler on the root logger (idempotent)."""
    global _configured
    root = logging.getLogger()
    root.setLevel(level.upper())
    if _configured:
        return
    handler = RichHandler(
        console=console,
        rich_tracebacks=rich_tracebacks,
        show_path=False,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    root.addHandler(handler)
    _configured = True
