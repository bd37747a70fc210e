"""Displaced squeezed states D(alpha) S(s)|0> with S(s) = exp[(s a^+2 - s* a^2)/2] per axis.

The Gaussian wavefunction is evaluated in the kappa-scaled (dimensionless)
frame, x = kappa * x_phys, and mapped back with a kappa**1.5 Jacobian.

Two forms of the chirp parameter h are available:

* ``"gain"`` (default): h = s2 sinh(r) / (2 r G), which reproduces the
  squeeze operator exactly.
* ``"exp"``: h = s2 sinh(r) / (2 r e^r).  Still a normalized Gaussian, but
  it disagrees with the operator whenever the squeeze phase is nonzero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherent import as_complex_triple
from .oscillator import NATURAL_UNITS, FockCoefficients, OscillatorParams, _normalize_cutoff
from .special_functions import MAX_DEGREE, DegreeOverflowError, hermite_functions, scaled_hermite_rule

H_FORMS = ("gain", "exp")
_SMALL_R = 1e-6


@dataclass(frozen=True)
class SqueezeLabel:
    s: np.ndarray
    alpha: np.ndarray

    def __init__(self, s=(0, 0, 0), alpha=(0, 0, 0)):
        s = as_complex_triple(s)
        alpha = as_complex_triple(alpha)
        s.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "alpha", alpha)

    @property
    def s1(self) -> np.ndarray:
        return self.s.real

    @property
    def s2(self) -> np.ndarray:
        return self.s.imag

    @property
    def r0(self) -> np.ndarray:
        """Scaled displacement in position, alpha = (r0 + i p0)/sqrt(2)."""
        return math.sqrt(2.0) * self.alpha.real

    @property
    def p0(self) -> np.ndarray:
        return math.sqrt(2.0) * self.alpha.imag


@dataclass(frozen=True)
class AxisSqueezeParams:
    r_iota: float
    theta_iota: float
    g_iota: float
    h_iota: float
    c_iota: complex


def _sinhc(r: float) -> float:
    if r < _SMALL_R:
        return 1.0 + r * r / 6.0
    return math.sinh(r) / r


def squeeze_axis_params(s_component: complex, h_form: str = "gain") -> AxisSqueezeParams:
    if h_form not in H_FORMS:
        raise ValueError(f"h_form must be one of {H_FORMS}, got {h_form!r}")
    s_component = complex(s_component)
    r = abs(s_component)
    theta = math.atan2(s_component.imag, s_component.real)
    g = math.exp(r) * math.cos(theta / 2) ** 2 + math.exp(-r) * math.sin(theta / 2) ** 2
    # s2 * sinh(r) / r, finite at r = 0
    chirp = s_component.imag * _sinhc(r)
    h = chirp / (2.0 * g) if h_form == "gain" else chirp / (2.0 * math.exp(r))
    c = complex(np.sqrt(complex(g * (1 + 2j * h))))
    return AxisSqueezeParams(r, theta, g, h, c)


def squeezed_axis_amplitude(s_component: complex, alpha_component: complex, x, h_form: str = "gain"):
    """One-axis factor in the scaled frame; ``x`` may be complex."""
    ax = squeeze_axis_params(s_component, h_form)
    x0 = math.sqrt(2.0) * complex(alpha_component).real
    p0 = math.sqrt(2.0) * complex(alpha_component).imag
    x = np.asarray(x)
    width = 1.0 / (2.0 * ax.g_iota * ax.c_iota**2) - 1j * ax.h_iota
    return (
        math.pi**-0.25
        / ax.c_iota
        * np.exp(-0.5j * x0 * p0 + 1j * x * p0 - (x - x0) ** 2 * width)
    )


def squeezed_position_amplitude(label: SqueezeLabel, r, params: OscillatorParams = NATURAL_UNITS, h_form: str = "gain"):
    """<r|s, alpha> at physical positions ``r`` of shape (..., 3)."""
    x = params.kappa * np.asarray(r)
    out = params.kappa**1.5
    for i in range(3):
        out = out * squeezed_axis_amplitude(label.s[i], label.alpha[i], x[..., i], h_form)
    return out


def _projection_rule(order: int):
    # nodes spread to match the exp(-x^2/2) decay of the basis functions
    u, w = scaled_hermite_rule(order)
    return math.sqrt(2.0) * u, math.sqrt(2.0) * w


def squeezed_axis_coefficients(s_component: complex, alpha_component: complex, cutoff: int, quadrature_order: int, h_form: str = "gain"):
    x, w = _projection_rule(quadrature_order)
    basis = hermite_functions(cutoff, x)
    values = squeezed_axis_amplitude(s_component, alpha_component, x, h_form)
    return basis @ (w * values)


def squeezed_fock_coefficients(label: SqueezeLabel, cutoff, quadrature_order: int = 100, h_form: str = "gain", axis_order=(0, 1, 2)) -> FockCoefficients:
    """Project the squeezed wavefunction onto the Fock basis, one axis at a time.

    ``axis_order`` only changes the order in which the axis projections are
    computed; the result must not depend on it.
    """
    cut = _normalize_cutoff(cutoff)
    if max(cut) > MAX_DEGREE:
        raise DegreeOverflowError(f"cutoff {max(cut)} exceeds {MAX_DEGREE}")
    if sorted(axis_order) != [0, 1, 2]:
        raise ValueError("axis_order must be a permutation of (0, 1, 2)")
    factors: list = [None, None, None]
    for i in axis_order:
        factors[i] = squeezed_axis_coefficients(label.s[i], label.alpha[i], cut[i], quadrature_order, h_form)
    state = FockCoefficients(factors=factors)
    return FockCoefficients(factors=factors, tail_mass=max(0.0, 1.0 - state.norm2()))
