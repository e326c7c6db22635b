"""Fairness-aware coverage planning on demographic grid maps.

Specs and planner parameters are plain dicts in the same shape as the JSON
wire format. Fronts and solutions come back as dicts too.
"""

import json

from . import _fairnav
from ._fairnav import (
    City,
    FairnavError,
    GuardLimitError,
    InfeasibleError,
    MismatchError,
    ParseError,
    UnsupportedSpecError,
    ValidationError,
    city_distribution,
    generate_city,
    js_distance,
    parse_city,
    preset_names,
)

__all__ = [
    "City",
    "FairnavError",
    "GuardLimitError",
    "InfeasibleError",
    "MismatchError",
    "ParseError",
    "UnsupportedSpecError",
    "ValidationError",
    "city_distribution",
    "evolve_pareto",
    "generate_city",
    "hypervolume",
    "js_distance",
    "load_city",
    "oracle_pareto",
    "parse_city",
    "path_audit",
    "preset_names",
    "refine",
    "surrogate_plan",
    "unfairness",
]


def _steps(path):
    if isinstance(path, dict):
        path = path["path"]
    return [tuple(p) for p in path]


def load_city(filename):
    with open(filename, encoding="utf-8") as f:
        return parse_city(f.read())


def path_audit(city, path, attribute, sensor_radius=0):
    return json.loads(_fairnav.path_audit(city, _steps(path), attribute, sensor_radius))


def unfairness(city, path, spec, sensor_radius=0):
    return _fairnav.unfairness(city, _steps(path), json.dumps(spec), sensor_radius)


def evolve_pareto(city, spec, params=None):
    return json.loads(_fairnav.evolve_pareto(city, json.dumps(spec), json.dumps(params or {})))


def refine(city, front, waypoints, params=None):
    """Re-plans `front` (a front document) so every tour visits `waypoints`."""
    if params is None:
        params = front.get("params", {})
    pins = [tuple(w) for w in waypoints]
    return json.loads(_fairnav.refine(city, json.dumps(front), pins, json.dumps(params)))


def surrogate_plan(city, spec, weight, params=None):
    return json.loads(_fairnav.surrogate_plan(city, json.dumps(spec), json.dumps(params or {}), weight))


def oracle_pareto(city, spec, budget, sensor_radius=0):
    return json.loads(_fairnav.oracle_pareto(city, json.dumps(spec), budget, sensor_radius))


def hypervolume(front, reference=None):
    return _fairnav.hypervolume(json.dumps(front), reference)
