"""
fronttrack
==========

Instrumented wave-front tracking for one-dimensional strictly hyperbolic systems of
conservation laws. Besides evolving piecewise-constant approximate solutions, the package
keeps the complete space-time history of every run and derives from it:

- Glimm functionals and interaction / cancellation measures
- wave balance and jump balance measures per characteristic family
- maximal shock fronts and jump sets
- generalized characteristics, region balances and decay checks

Most users will drive it through ``python -m fronttrack`` with a scenario file.
"""

from importlib.metadata import version

try:
    __version__ = version("fronttrack")
except Exception:
    __version__ = "0.0.0"

__all__ = [
    "model",
    "riemann",
    "engine",
    "measures",
    "genealogy",
    "analysis",
    "config",
    "evaluation",
    "cli",
]
