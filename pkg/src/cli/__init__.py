"""Command-line plumbing: run configuration, I/O and command handlers."""

from .commands import (
    COMMANDS,
    cmd_designs,
    cmd_diagnose,
    cmd_estimate,
    cmd_simulate,
    cmd_sweep,
    run_command,
)
from .io import emit, read_dataset, sanitize_record
from .run_config import RunConfig

__all__ = [
    "COMMANDS",
    "RunConfig",
    "cmd_designs",
    "cmd_diagnose",
    "cmd_estimate",
    "cmd_simulate",
    "cmd_sweep",
    "emit",
    "read_dataset",
    "run_command",
    "sanitize_record",
]
