"""Phase-space and photon-statistics toolkit for the isotropic 3D harmonic oscillator."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.1.0"

from .coherent import CoherentLabel, coherent_coefficients, coherent_overlap, coherent_position_amplitude, evolve_coherent
from .oscillator import NATURAL_UNITS, FockCoefficients, OscillatorParams, PhasePoint, TripleIndex, make_params
from .phase_space import wigner_coherent, wigner_fock, wigner_numeric
from .photon_statistics import mandel_q, quadrature_variances, squeeze_border
from .squeezed import SqueezeLabel, squeezed_fock_coefficients, squeezed_position_amplitude

__all__ = [
    "CoherentLabel",
    "FockCoefficients",
    "NATURAL_UNITS",
    "OscillatorParams",
    "PhasePoint",
    "SqueezeLabel",
    "TripleIndex",
    "coherent_coefficients",
    "coherent_overlap",
    "coherent_position_amplitude",
    "evolve_coherent",
    "make_params",
    "mandel_q",
    "quadrature_variances",
    "squeeze_border",
    "squeezed_fock_coefficients",
    "squeezed_position_amplitude",
    "wigner_coherent",
    "wigner_fock",
    "wigner_numeric",
]
