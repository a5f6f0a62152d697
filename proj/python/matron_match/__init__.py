"""Generalized equilibrium matchings and order checks.

The numeric helpers come straight from the C++ core. The document-level
functions accept dicts (or JSON text) in the same formats as the
matron-match command-line tool and return dicts.
"""

import json

from ._core import (  # noqa: F401
    ConditioningError,
    ContractError,
    DomainError,
    Error,
    IterationLimitError,
    SchemaError,
    ShapeError,
    SizeError,
    SolverIntegrityError,
    StateError,
    __version__,
    lcp_solve,
    logit_demand,
    logit_multipliers,
    logit_value,
    quadratic_residual,
)
from . import _core


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve(instance, verify_tol=1e-6, tol=None, max_iter=None, update_rule=None):
    """Run deferred acceptance. Returns (result, trace) where trace is a list of
    per-iteration dicts."""
    result, trace = _core.solve_json(_text(instance), verify_tol, tol, max_iter, update_rule)
    return json.loads(result), [json.loads(line) for line in trace.splitlines() if line]


def verify(instance, result, tol=1e-6):
    return json.loads(_core.verify_json(_text(instance), _text(result), tol))


def check_order(spec):
    return json.loads(_core.check_order_json(_text(spec)))


def conjugate(grid, dual_axes=None):
    return json.loads(_core.conjugate_json(_text(grid), dual_axes))
