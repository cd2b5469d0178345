"""Killing-field orbit foliations: fields, brackets, flows, orbits and classification."""

import json as _json

from ._core import (
    AffineField,
    Expression,
    OrbitfolError,
    catalog,
    bracket,
    closure,
    differentiate,
    evaluate,
    flow_affine,
    generic_rank,
    killing_check,
    orbit_dimension,
    parse_expr,
    run_command,
    sample_orbit,
    scenario_names,
    trajectory,
)
from . import _core


def classify(fields, tol=1e-9, seed=0):
    """Classify a family of affine Killing fields on R^3; returns a dict."""
    return _json.loads(_core.classify_json(list(fields), tol, seed))


def scenario_run(name="all"):
    """Run a built-in scenario (or all of them); returns the parsed report list."""
    return _json.loads(_core.scenario_json(name))


__all__ = [
    "AffineField",
    "Expression",
    "OrbitfolError",
    "catalog",
    "bracket",
    "classify",
    "closure",
    "differentiate",
    "evaluate",
    "flow_affine",
    "generic_rank",
    "killing_check",
    "orbit_dimension",
    "parse_expr",
    "run_command",
    "sample_orbit",
    "scenario_names",
    "scenario_run",
    "trajectory",
]
