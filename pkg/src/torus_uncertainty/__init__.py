"""Uncertainty products of trigonometric polynomials and periodic wavelet frames on T^d."""

from .lattice_fourier import CoeffMap, DimensionError
from .uncertainty import Status, UPReport, closed_form_up, up_directional, up_gg

__version__ = "0.1.0"

__all__ = [
    "CoeffMap",
    "DimensionError",
    "Status",
    "UPReport",
    "closed_form_up",
    "up_directional",
    "up_gg",
    "__version__",
]
