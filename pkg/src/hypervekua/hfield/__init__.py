"""Fields over (x, t), d/dz and d/dzbar, path integrals, and A / Abar."""

from .antiderivative import (
    AntiderivativeResult,
    antiderivative,
    antiderivative_A,
    antiderivative_Abar,
    antiderivative_field,
    compatibility_residual,
)
from .field import (
    FD_STEP,
    Domain,
    HField,
    Jet,
    as_xt,
    d_holomorphy_residual,
    dz,
    dzbar,
    holomorphic_from_components,
)
from .quadrature import DEFAULT_QUAD, Path, QuadratureSettings, path_integral, segment_integral

__all__ = [
    "AntiderivativeResult", "DEFAULT_QUAD", "Domain", "FD_STEP", "HField", "Jet", "Path",
    "QuadratureSettings", "antiderivative", "antiderivative_A", "antiderivative_Abar",
    "antiderivative_field", "as_xt", "compatibility_residual", "d_holomorphy_residual",
    "dz", "dzbar", "holomorphic_from_components", "path_integral", "segment_integral",
]
