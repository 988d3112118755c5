"""Prioritized cooperative pathfinding: CA, SDPP, ADPP and IADPP on grid graphs.

Scenarios, paths, reports and experiment specs are plain dicts in the same JSON layout the
command-line tool reads and writes.
"""

import json

from ._dpp import (
    SCHEMA_VERSION,
    ExperimentError,
    FormatError,
    InvalidArgument,
    SimulationError,
)
from . import _dpp

ALGORITHMS = ("ca", "sdpp", "adpp", "iadpp")

__all__ = [
    "ALGORITHMS",
    "SCHEMA_VERSION",
    "ExperimentError",
    "FormatError",
    "InvalidArgument",
    "SimulationError",
    "generate",
    "solve",
    "plan_single",
    "run_experiment",
    "in_conflict",
]


def generate(generator, seed=0, **params):
    """Build a scenario dict; keyword arguments are generator parameters."""
    return json.loads(_dpp.generate(generator, seed, json.dumps(params)))


def solve(scenario, algorithm="adpp", seed=0, cost_model=None, threaded=False, max_events=20_000_000):
    """Run one algorithm; returns {"report", "solution", "schedule", "trace"}."""
    return json.loads(
        _dpp.solve(json.dumps(scenario), algorithm, seed, json.dumps(cost_model), threaded, max_events)
    )


def plan_single(scenario, agent, avoids=()):
    """Best path for one agent (1-based priority) against fixed avoid paths."""
    return json.loads(_dpp.plan_single(json.dumps(scenario), agent, json.dumps(list(avoids))))


def run_experiment(spec):
    """Run an experiment spec dict; returns {"csv", "runs"}."""
    return json.loads(_dpp.experiment(json.dumps(spec)))


def in_conflict(a, b, separation=0.8):
    return _dpp.in_conflict(json.dumps(a), json.dumps(b), separation)
