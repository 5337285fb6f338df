from .characteristics import (
    CharacteristicPath,
    Selection,
    admissible_speed,
    characteristic,
    maximal_characteristic,
    minimal_characteristic,
    states_around,
)
from .decay import ContDecayReport, DecayCheckTrace, DecayVerdict, check_cont_decay, check_positive_decay, union_length
from .exceptional import DEFAULT_JUMP_THRESHOLD, ExceptionalTime, exceptional_times
from .regions import (
    CharRegion,
    FluxAtom,
    FluxLedger,
    RegionBalanceReport,
    boundary_flux,
    characteristic_region,
    region_balance_check,
    region_union,
)
from .wave_measure import SignedAtomicMeasure1D, WaveMeasures, wave_measure_at, wave_measure_before

__all__ = [
    "CharacteristicPath",
    "Selection",
    "admissible_speed",
    "characteristic",
    "maximal_characteristic",
    "minimal_characteristic",
    "states_around",
    "ContDecayReport",
    "DecayCheckTrace",
    "DecayVerdict",
    "check_cont_decay",
    "check_positive_decay",
    "union_length",
    "DEFAULT_JUMP_THRESHOLD",
    "ExceptionalTime",
    "exceptional_times",
    "CharRegion",
    "FluxAtom",
    "FluxLedger",
    "RegionBalanceReport",
    "boundary_flux",
    "characteristic_region",
    "region_balance_check",
    "region_union",
    "SignedAtomicMeasure1D",
    "WaveMeasures",
    "wave_measure_at",
    "wave_measure_before",
]
