"""Per-axis photon statistics of displaced squeezed states.

Closed forms for the Mandel Q parameter and the quadrature variances, the
squeezing classification and the squeezed/de-squeezed border, plus Fock-space
moment oracles for checking them.

The Mandel closed form depends on an angle delta built from the squeeze phase
theta and the displacement phase phi.  ``delta_convention`` selects how:

* ``"squeeze_half"`` (default): delta = theta/2 - phi.  Agrees with the
  Fock-moment oracle for S(s) = exp[(s a^+2 - s* a^2)/2] and D(alpha).
* ``"displacement_half"``: delta = theta - phi/2.  Kept for comparison; it
  only matches the oracle when the cos(2 delta) terms happen to coincide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oscillator import AXES, FockCoefficients, inner_product, ladder_apply
from .squeezed import SqueezeLabel

DELTA_CONVENTIONS = ("squeeze_half", "displacement_half")
VACUUM_VARIANCE = 0.25
TAIL_LIMIT = 1e-6


class TruncationError(ValueError):
    """State carries too much probability beyond its cutoff for a moment estimate."""


@dataclass(frozen=True)
class AxisStatistics:
    q_mandel: float
    var_quad1: float
    var_quad2: float
    squeezed: bool


@dataclass(frozen=True)
class AxisAngles:
    phi_iota: float
    delta_iota: float


def axis_angles(label: SqueezeLabel, delta_convention: str = "squeeze_half") -> list[AxisAngles]:
    if delta_convention not in DELTA_CONVENTIONS:
        raise ValueError(f"delta_convention must be one of {DELTA_CONVENTIONS}")
    out = []
    for s, a in zip(label.s, label.alpha):
        theta = math.atan2(s.imag, s.real)
        phi = math.atan2(a.imag, a.real)
        delta = theta / 2 - phi if delta_convention == "squeeze_half" else theta - phi / 2
        out.append(AxisAngles(phi, delta))
    return out


def mandel_q_closed(r: float, alpha_sq: float, delta: float) -> float:
    """Q for one axis from squeeze magnitude r, |alpha|^2 and the angle delta."""
    if alpha_sq == 0.0:
        # exact simplification; r = 0 is 0/0 and takes the coherent (Poissonian) value
        return math.cosh(2 * r) if r != 0.0 else 0.0
    sh2 = math.sinh(r) ** 2
    denom = alpha_sq + sh2
    spread = math.exp(2 * r) * math.cos(delta) ** 2 + math.exp(-2 * r) * math.sin(delta) ** 2
    return (alpha_sq * spread + 2 * sh2 * math.cosh(r) ** 2) / denom - 1.0


def mandel_q(label: SqueezeLabel, delta_convention: str = "squeeze_half") -> np.ndarray:
    angles = axis_angles(label, delta_convention)
    return np.array([
        mandel_q_closed(abs(s), abs(a) ** 2, ang.delta_iota)
        for s, a, ang in zip(label.s, label.alpha, angles)
    ])


def _check_tail(state: FockCoefficients):
    if state.tail_mass > TAIL_LIMIT:
        raise TruncationError(f"tail mass {state.tail_mass:.3g} exceeds {TAIL_LIMIT:g}; raise the cutoff")


def mandel_q_oracle(state: FockCoefficients) -> np.ndarray:
    """Q per axis from the quanta distribution of a truncated state."""
    _check_tail(state)
    out = np.zeros(3)
    for axis in range(3):
        probs = state.axis_probabilities(axis)
        probs = probs / probs.sum()
        k = np.arange(probs.size, dtype=float)
        mean = probs @ k
        if mean < 1e-14:
            continue
        var = probs @ (k * k) - mean * mean
        out[axis] = (var - mean) / mean
    return out


def quadrature_variances(r_iota: float, angle: float) -> tuple[float, float]:
    c2 = math.cos(angle / 2) ** 2
    s2 = math.sin(angle / 2) ** 2
    up, down = math.exp(2 * r_iota), math.exp(-2 * r_iota)
    return 0.25 * (up * c2 + down * s2), 0.25 * (up * s2 + down * c2)


def classify_squeezing(var1: float, var2: float) -> bool:
    """True when either quadrature variance is strictly below the vacuum value."""
    return min(var1, var2) < VACUUM_VARIANCE


def squeeze_border(angle: float) -> tuple[float, float]:
    """Nontrivial border radii: e^{2 r_plus} = tan^2(angle/2) and e^{-2 r_minus} = tan^2(angle/2).

    r_plus puts the first variance exactly on 1/4, r_minus the second.  Where
    tan(angle/2) vanishes the logarithm is undefined and (inf, inf) is returned.
    """
    t = abs(math.tan(angle / 2))
    if t == 0.0 or not math.isfinite(t):
        return math.inf, math.inf
    r = math.log(t)
    return r, -r


def statistics_oracle_variances(state: FockCoefficients) -> list[tuple[float, float]]:
    """Quadrature variances per axis from ladder-operator moments."""
    _check_tail(state)
    norm = state.norm2()
    out = []
    for axis in AXES:
        lowered = ladder_apply(axis, "lower", state)
        a1 = inner_product(state, lowered) / norm
        a2 = inner_product(state, ladder_apply(axis, "lower", lowered)) / norm
        n = lowered.norm2() / norm
        var1 = 0.25 * (2 * a2.real + 2 * n + 1) - a1.real**2
        var2 = 0.25 * (-2 * a2.real + 2 * n + 1) - a1.imag**2
        out.append((var1, var2))
    return out


def axis_statistics(label: SqueezeLabel, delta_convention: str = "squeeze_half", angle_source: str = "squeeze") -> list[AxisStatistics]:
    """Closed-form statistics bundle per axis.

    ``angle_source`` picks the angle fed to the variance formulas: the squeeze
    phase theta ("squeeze", which the ladder-moment oracle confirms) or the
    displacement phase phi ("displacement").
    """
    q = mandel_q(label, delta_convention)
    stats = []
    for i, (s, a) in enumerate(zip(label.s, label.alpha)):
        angle = math.atan2(s.imag, s.real) if angle_source == "squeeze" else math.atan2(a.imag, a.real)
        v1, v2 = quadrature_variances(abs(s), angle)
        stats.append(AxisStatistics(float(q[i]), v1, v2, classify_squeezing(v1, v2)))
    return stats
