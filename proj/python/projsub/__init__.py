"""Projected subgradient methods over intersections of convex sets.

Sets and run configs are plain dicts in the same schema as the CLI's JSON configs.
"""

import json as _json

from . import _projsub
from ._projsub import ConfigError, Error, Run, counterexample, grid_reference, problem_info, problem_names

__all__ = [
    "ConfigError",
    "Error",
    "Run",
    "contains",
    "counterexample",
    "distance",
    "grid_reference",
    "problem_info",
    "problem_names",
    "project",
    "run",
]


def project(set_spec, x):
    """Nearest point of the set to x, e.g. project({"kind": "ball", "center": [0, 0], "radius": 1}, [3, 4])."""
    return _projsub.project(_json.dumps(set_spec), list(x))


def distance(set_spec, x):
    return _projsub.distance(_json.dumps(set_spec), list(x))


def contains(set_spec, x):
    return _projsub.contains(_json.dumps(set_spec), list(x))


def run(config):
    """Solve a run config (dict, JSON text or path to a JSON file) and return the Run."""
    if isinstance(config, dict):
        text = _json.dumps(config)
    elif isinstance(config, str) and config.lstrip().startswith("{"):
        text = config
    else:
        with open(config) as f:
            text = f.read()
    return _projsub.run(text)
