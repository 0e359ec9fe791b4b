"""Python bindings for the fire-alert system simulator."""

from __future__ import annotations

import json
from typing import Any

from ._core import (
    __version__,
    adc_sample,
    amplify,
    at_transcript,
    compare_traces,
    divider_voltage,
    ldr_resistance,
    lm35_output,
    parse_remote_command,
    scatter_fraction,
    smoke_chain_output,
    threshold_code,
)
from ._core import System as _System
from ._core import default_config_json
from ._core import run as _run

__all__ = [
    "System",
    "__version__",
    "adc_sample",
    "amplify",
    "at_transcript",
    "compare_traces",
    "default_config",
    "divider_voltage",
    "ldr_resistance",
    "lm35_output",
    "parse_remote_command",
    "run",
    "scatter_fraction",
    "smoke_chain_output",
    "threshold_code",
]


def _dump(obj: Any) -> str | None:
    if obj is None:
        return None
    return obj if isinstance(obj, str) else json.dumps(obj)


def default_config() -> dict:
    return json.loads(default_config_json())


def run(scenario: Any, duration_ms: int, config: Any = None) -> dict:
    """Run a scenario (dict, list or JSON text) on a fresh system."""
    result = _run(_dump(scenario), duration_ms, _dump(config))
    result["events"] = [json.loads(line) for line in result["trace_jsonl"].splitlines()]
    return result


class System:
    """A live simulated installation, stepped explicitly."""

    def __init__(self, config: Any = None) -> None:
        self._sys = _System(_dump(config))

    @property
    def now(self) -> int:
        return self._sys.now

    def step(self, ticks: int) -> int:
        return self._sys.step(ticks)

    def submit(self, op: str, **args: Any) -> None:
        self._sys.submit(json.dumps({"op": op, **args}))

    def state(self) -> dict:
        return json.loads(self._sys.state_json())

    def events(self) -> list[dict]:
        return [json.loads(line) for line in self._sys.trace_jsonl().splitlines()]
