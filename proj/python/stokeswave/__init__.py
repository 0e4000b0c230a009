"""Steady deep-water Stokes waves and the pressure beneath them."""

import json

from ._core import (
    InputError,
    InvalidConfig,
    Solution,
    SolverError,
    __version__,
    estimate_limit,
    load,
    solve,
    surface,
)
from ._core import verify as _verify


def verify(solution, nq=256, np=128):
    """Run every grid check and return the report as a dict."""
    return json.loads(_verify(solution, nq, np))


__all__ = [
    "InputError",
    "InvalidConfig",
    "Solution",
    "SolverError",
    "__version__",
    "estimate_limit",
    "load",
    "solve",
    "surface",
    "verify",
]
