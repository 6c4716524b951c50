"""Helly-type selection for convex sets and log-concave functions."""

import json

from . import _core
from ._core import HellyError, h_ball, h_integral, sparsify, steinitz_threshold

__all__ = [
    "HellyError",
    "colorful_func",
    "diam_select",
    "func_select",
    "generate_instance",
    "h_ball",
    "h_integral",
    "oracle",
    "run_experiment",
    "sparsify",
    "steinitz_threshold",
]


def _dump(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def generate_instance(kind, d, seed, n=5, sets=3, inject=False):
    return json.loads(_core.generate_instance(kind, d, seed, n, sets, inject))


def diam_select(instance):
    return json.loads(_core.diam_select(_dump(instance)))


def func_select(instance, tol=1e-9):
    return json.loads(_core.func_select(_dump(instance), tol))


def colorful_func(instance):
    return json.loads(_core.colorful_func(_dump(instance)))


def oracle(kind, instance):
    return json.loads(_core.oracle(kind, _dump(instance)))


def run_experiment(config):
    """Returns (csv_text, passed_rows)."""
    return _core.run_experiment(_dump(config))
