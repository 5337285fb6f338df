from .atomic import ATOM_COLUMNS, Atom, AtomicSpaceTimeMeasure, combine_atoms
from .balance import icj_measure, jump_balance_measure, np_projection, wave_atom, wave_balance_measure
from .glimm import GlimmSeries, GlimmSnapshot, glimm_series, interaction_potential
from .interaction import interaction_amounts, interaction_measures

__all__ = [
    "ATOM_COLUMNS",
    "Atom",
    "AtomicSpaceTimeMeasure",
    "GlimmSeries",
    "GlimmSnapshot",
    "combine_atoms",
    "glimm_series",
    "icj_measure",
    "interaction_amounts",
    "interaction_measures",
    "interaction_potential",
    "jump_balance_measure",
    "np_projection",
    "wave_atom",
    "wave_balance_measure",
]
