from .systems import (
    FieldKind,
    PolynomialTerm,
    SystemModel,
    as_state,
    burgers,
    model_from_description,
    p_system,
    polynomial_system,
)
from .eigen import EigenStructure, eigen_at, max_characteristic_speed, np_speed
from .averaging import (
    averaged_left_vectors,
    averaged_matrix,
    averaged_speed,
    lax_margins,
    projected_strengths,
    rh_residual,
)
from .curves import (
    curve_agreement_slope,
    hugoniot_point,
    lax_composite,
    rarefaction_point,
    wave_curve_point,
)
from .validation import ModelReport, estimate_gn_constant, validate_model

__all__ = [
    "FieldKind",
    "PolynomialTerm",
    "SystemModel",
    "as_state",
    "burgers",
    "model_from_description",
    "p_system",
    "polynomial_system",
    "EigenStructure",
    "eigen_at",
    "max_characteristic_speed",
    "np_speed",
    "averaged_left_vectors",
    "averaged_matrix",
    "averaged_speed",
    "lax_margins",
    "projected_strengths",
    "rh_residual",
    "curve_agreement_slope",
    "hugoniot_point",
    "lax_composite",
    "rarefaction_point",
    "wave_curve_point",
    "ModelReport",
    "estimate_gn_constant",
    "validate_model",
]
