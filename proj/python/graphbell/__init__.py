"""Bell inequalities for qudit graph states.

Thin dict-friendly wrapper over the compiled ``_core`` module. Graphs and
expressions are plain dicts mirroring the CLI's JSON layout; the heavy lifting
(construction, enumeration, operator checks) stays in C++.
"""

import json
import os
import sys

try:
    from . import _core
except ImportError:
    # development layout: the compiled module sits in the CMake build tree,
    # pointed at by GRAPHBELL_BUILD_DIR (set by ctest for the smoke tests)
    _build_dir = os.environ.get("GRAPHBELL_BUILD_DIR")
    if not _build_dir:
        raise
    sys.path.insert(0, _build_dir)
    import _core

InputError = _core.InputError
ConstraintError = _core.ConstraintError
BudgetError = _core.BudgetError
InternalCheckError = _core.InternalCheckError

__version__ = _core.__version__

__all__ = [
    "InputError",
    "ConstraintError",
    "BudgetError",
    "InternalCheckError",
    "graph",
    "builtin_names",
    "build",
    "quantum_bound",
    "quantum_value",
    "exact_bound",
    "heuristic_bound",
    "sos_residual",
    "selftest",
    "state_amplitudes",
]


def _graph_text(g):
    """Accept a builtin name, an edge-list/JSON string, or a graph dict."""
    if isinstance(g, dict):
        return json.dumps(g)
    if isinstance(g, str):
        stripped = g.lstrip()
        if stripped.startswith("{") or "\n" in g or " " in stripped:
            return g
        return _core.builtin_graph(g)
    raise TypeError("graph must be a dict, a JSON/edge-list string, or a builtin name")


def _expr_text(e):
    if isinstance(e, dict):
        return json.dumps(e)
    if isinstance(e, str):
        return e
    raise TypeError("expression must be a dict or JSON text")


def graph(g):
    """Normalize any accepted graph form to a dict."""
    return json.loads(_core.parse_graph(_graph_text(g)))


def builtin_names():
    """Help lines for the built-in graph families."""
    return _core.builtin_graph_names()


def build(g, v1=0, v2=0):
    """Bell expression for a graph; pivots are 1-based, 0 picks them automatically."""
    return json.loads(_core.build_expression(_graph_text(g), v1, v2))


def quantum_bound(expr):
    return _core.quantum_bound(_expr_text(expr))


def quantum_value(expr, threads=1):
    """Expectation value at the ideal realization."""
    return _core.quantum_value_ideal(_expr_text(expr), threads)


def exact_bound(expr, budget=10**9, threads=1):
    return _core.exact_bound(_expr_text(expr), budget, threads)


def heuristic_bound(expr, restarts=50, seed=0, threads=1):
    return _core.heuristic_bound(_expr_text(expr), restarts, seed, threads)


def sos_residual(expr, realization_seed=None, trials=20, seed=0):
    """Squares-identity residual; omit realization_seed for the ideal realization."""
    rs = -1 if realization_seed is None else int(realization_seed)
    return _core.sos_residual(_expr_text(expr), rs, trials, seed)


def selftest(expr):
    return _core.selftest(_expr_text(expr))


def state_amplitudes(g):
    """Graph state amplitudes in row-major site order."""
    return _core.state_amplitudes(_graph_text(g))
