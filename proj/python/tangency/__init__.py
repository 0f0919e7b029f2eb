"""Tangent cones, set limits, differentials and first-order extremum conditions."""

import json

from . import _core
from ._core import InputError, chain_rule_row, peano_derivative, run

__all__ = [
    "InputError",
    "chain_rule_row",
    "check_regula",
    "hausdorff_distance",
    "peano_derivative",
    "run",
    "tangent_cone",
]


def tangent_cone(set_spec, point, kind="upper", force_sampled=False):
    """Cone of `set_spec` (a problem-file set description) at `point`."""
    return _core.tangent_cone(json.dumps(set_spec), list(point), kind, force_sampled)


def check_regula(function, set_spec, point, mode="max"):
    """First-order necessary condition for `function` on `set_spec` at `point`."""
    return _core.check_regula(function, json.dumps(set_spec), list(point), mode)


def hausdorff_distance(a, b, dim, density=200, seed=1):
    return _core.hausdorff_distance(json.dumps(a), json.dumps(b), dim, density, seed)
