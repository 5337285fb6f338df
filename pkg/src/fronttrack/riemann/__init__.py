from .waves import SolverKind, SubJump, Wave, WaveFan, WaveKind
from .solver import build_wave, classify, discretize_rarefaction, invert_lax_map, solve_riemann, sub_jump_count
from .simplified import solve_simplified
from .admissibility import LaxReport, lax_check

__all__ = [
    "SolverKind",
    "SubJump",
    "Wave",
    "WaveFan",
    "WaveKind",
    "build_wave",
    "classify",
    "discretize_rarefaction",
    "invert_lax_map",
    "solve_riemann",
    "sub_jump_count",
    "solve_simplified",
    "LaxReport",
    "lax_check",
]
