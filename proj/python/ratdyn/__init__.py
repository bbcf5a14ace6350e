"""Dynamics of the rational family f(z) = z^2 + c + b/(z - a).

Parameters are dicts: {"a": .., "b": .., "c": ..} or {"k": .., "w": ..}; values
may be Python numbers, complex numbers or [re, im] pairs. Reports come back as
plain dicts decoded from the native JSON output.
"""

import json

from . import _core

__all__ = [
    "Error",
    "error_kind",
    "params",
    "to_kw",
    "escape_radius",
    "classify",
    "fixed_points",
    "green",
    "solve_event",
    "basin_mask",
    "exotic_verdict",
    "verify_shift",
    "scan_csv",
    "cli",
]

Error = _core.Error


def error_kind(err):
    """Kind name of a native error, e.g. "HypothesisFailed"."""
    return str(err).split(":", 1)[0]


def _encode(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _params(p):
    return json.dumps({key: _encode(val) for key, val in p.items()})


def params(p):
    return json.loads(_core.params(_params(p)))


def to_kw(p):
    return json.loads(_core.to_kw(_params(p)))


def escape_radius(p):
    return _core.escape_radius(_params(p))


def classify(p, max_iter=10000):
    return json.loads(_core.classify(_params(p), max_iter))


def fixed_points(p, tol=1e-2):
    return json.loads(_core.fixed_points(_params(p), tol))


def green(p, z):
    return json.loads(_core.green(_params(p), complex(z)))


def solve_event(k, event, lo, hi):
    return json.loads(_core.solve_event(k, event, lo, hi))


def basin_mask(p, window, resolution, jobs=1, w=None):
    """Label raster (rows top to bottom) and its sidecar dict.

    w marks the attracting fixed point labelled W; slice maps find it themselves.
    """
    labels, sidecar = _core.basin_mask(_params(p), list(window), resolution, jobs, None if w is None else complex(w))
    return labels, json.loads(sidecar)


def exotic_verdict(p, resolution=512, jobs=1):
    return json.loads(_core.exotic_verdict(_params(p), resolution, jobs))


def verify_shift(p, depth=10, resolution=400, jobs=1):
    return json.loads(_core.verify_shift(_params(p), depth, resolution, jobs))


def scan_csv(k_range, w_range, nk, nw, jobs=1):
    return _core.scan_csv(k_range[0], k_range[1], w_range[0], w_range[1], nk, nw, jobs)


def cli(*args):
    """Run the command-line interface in-process; returns (exit_code, stdout, stderr)."""
    return _core.cli([str(a) for a in args])
