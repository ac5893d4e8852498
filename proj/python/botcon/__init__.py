"""Python access to the botcon core: run commands, compute losses and metrics."""

import json

from ._core import (
    ConfigError,
    DataError,
    DefinitionError,
    DimensionError,
    Error,
    ParseError,
    build_id,
    command_names,
    contrastive_loss,
    replacement_count,
)
from . import _core

__all__ = [
    "ConfigError",
    "DataError",
    "DefinitionError",
    "DimensionError",
    "Error",
    "ParseError",
    "build_id",
    "command_names",
    "config",
    "contrastive_loss",
    "grad_check",
    "metrics",
    "replacement_count",
    "run",
]


def run(command, config="", overrides=(), normalized=False, axis="corruption_rate"):
    """Runs one CLI command in-process. Returns {exit_code, report_path, report}."""
    return json.loads(_core.run_command(command, config, list(overrides), normalized, axis))


def config(text="", overrides=()):
    """Effective configuration after overrides, as a dict."""
    return json.loads(_core.config_json(text, list(overrides)))


def grad_check(kind, **kwargs):
    return json.loads(_core.grad_check(kind, **kwargs))


def metrics(predictions, labels):
    return json.loads(_core.metrics(list(predictions), list(labels)))
