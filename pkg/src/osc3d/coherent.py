"""Displaced-vacuum (coherent) states of the 3D oscillator."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .oscillator import NATURAL_UNITS, FockCoefficients, OscillatorParams, _normalize_cutoff
from .special_functions import MAX_DEGREE, DegreeOverflowError, log_factorials, make_quadrature


def as_complex_triple(value) -> np.ndarray:
    arr = np.asarray(value, dtype=complex).reshape(-1)
    if arr.size == 1:
        arr = np.array([arr[0], 0, 0], dtype=complex)
    if arr.size != 3:
        raise ValueError(f"expected 3 complex components, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("complex triple has non-finite components")
    return arr


@dataclass(frozen=True)
class CoherentLabel:
    alpha: np.ndarray

    def __post_init__(self):
        alpha = as_complex_triple(self.alpha)
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    def __eq__(self, other):
        return isinstance(other, CoherentLabel) and np.array_equal(self.alpha, other.alpha)

    def __hash__(self):
        return hash(self.alpha.tobytes())


@dataclass(frozen=True)
class CoherentEvalTerms:
    r_bar: np.ndarray
    p_bar: np.ndarray
    phi_zp: float
    a_delta: complex


def poisson_tail(mean: float, cutoff: int) -> float:
    """P(N > cutoff) for N ~ Poisson(mean)."""
    if mean == 0.0:
        return 0.0
    return float(special.gammainc(cutoff + 1, mean))


def coherent_factor(alpha: complex, cutoff: int) -> np.ndarray:
    """1D coefficients exp(-|a|^2/2) a^m / sqrt(m!) for m = 0..cutoff."""
    m = np.arange(cutoff + 1)
    out = np.zeros(cutoff + 1, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    log_mag = m * math.log(abs(alpha)) - 0.5 * log_factorials(cutoff) - 0.5 * abs(alpha) ** 2
    return np.exp(log_mag + 1j * m * np.angle(alpha))


def coherent_coefficients(label: CoherentLabel, cutoff) -> FockCoefficients:
    """Truncated Fock expansion of |alpha>.

    The tail mass comes from the per-axis Poisson tails, which avoids the
    cancellation in 1 - sum |c|^2 when the truncation is nearly exact.
    """
    cut = _normalize_cutoff(cutoff)
    if min(cut) < 1:
        raise ValueError("cutoff components must be >= 1")
    factors = [coherent_factor(a, c) for a, c in zip(label.alpha, cut)]
    tails = [poisson_tail(abs(a) ** 2, c) for a, c in zip(label.alpha, cut)]
    tail = -math.expm1(sum(math.log1p(-t) for t in tails)) if max(tails) < 1 else 1.0
    return FockCoefficients(factors=factors, tail_mass=tail)


def coherent_overlap(beta: CoherentLabel, alpha: CoherentLabel) -> complex:
    """<beta|alpha> in closed form."""
    b, a = beta.alpha, alpha.alpha
    phase = 0.5 * (np.dot(b.conj(), a) - np.dot(b, a.conj()))
    d = b - a
    return complex(np.exp(phase) * np.exp(-0.5 * np.vdot(d, d).real))


def resolve_identity_matrix(max_index: int, radial_order: int, angular_order: int) -> np.ndarray:
    """pi^-3 times the coherent-state integral of |alpha><alpha|, projected.

    Each axis is integrated in polar form alpha = rho e^{i theta}; with
    gamma = rho^2 the radial part is a Gauss-Laguerre integral and the angular
    part a periodic trapezoid sum.  The 3D matrix is the Kronecker product of
    the three identical axis matrices, over indices 0..max_index per axis.
    """
    if max_index > MAX_DEGREE:
        raise DegreeOverflowError(f"max_index {max_index} exceeds {MAX_DEGREE}")
    radial = make_quadrature("gauss_laguerre", radial_order)
    angular = make_quadrature("trapezoid_periodic", angular_order)
    n = np.arange(max_index + 1)
    lf = log_factorials(max_index)
    gamma = radial.nodes[radial.weights > 0]
    w_gamma = radial.weights[radial.weights > 0]
    # radial[n, p] = 1/2 * int e^-g g^((n+p)/2) dg / sqrt(n! p!)
    expo = 0.5 * (n[:, None] + n[None, :])
    log_terms = expo[..., None] * np.log(gamma) - 0.5 * (lf[:, None, None] + lf[None, :, None])
    radial_part = 0.5 * np.exp(log_terms) @ w_gamma
    diff = n[:, None] - n[None, :]
    angular_part = np.exp(1j * diff[..., None] * angular.nodes) @ angular.weights
    axis = radial_part * angular_part / math.pi
    return np.kron(np.kron(axis, axis), axis)


def resolve_identity_residual(max_index: int, radial_order: int, angular_order: int) -> float:
    mat = resolve_identity_matrix(max_index, radial_order, angular_order)
    return float(np.max(np.abs(mat - np.eye(mat.shape[0]))))


def evolve_coherent(label: CoherentLabel, t: float, params: OscillatorParams = NATURAL_UNITS):
    """Free evolution: returns (label at time t, unwrapped global phase)."""
    wt = params.omega * t
    return CoherentLabel(label.alpha * np.exp(-1j * wt)), -1.5 * wt


def coherent_eval_terms(label: CoherentLabel, t: float, params: OscillatorParams = NATURAL_UNITS):
    wt = params.omega * t
    beta = np.exp(-1j * wt) * label.alpha
    r_bar = math.sqrt(2.0) / params.kappa * beta.real
    p_bar = math.sqrt(2.0) * params.hbar * params.kappa * beta.imag
    rot = np.exp(-2j * wt)
    i_a_delta = 0.5 * (rot * np.vdot(label.alpha, label.alpha) - (rot * np.dot(label.alpha, label.alpha)).real)
    return CoherentEvalTerms(r_bar, p_bar, 1.5 * wt, complex(-1j * i_a_delta))


def a_delta_forms(label: CoherentLabel, t: float, params: OscillatorParams = NATURAL_UNITS):
    """Both expressions for i*A_delta: (centroid form, rotation form).

    Expanding kappa^2 |r_bar|^2 shows they are the same function; this exists
    so that the agreement can be checked numerically.
    """
    wt = params.omega * t
    terms = coherent_eval_terms(label, t, params)
    a2 = np.vdot(label.alpha, label.alpha).real
    left = 0.5 * a2 * (1 + np.exp(-2j * wt)) - 0.5 * params.kappa**2 * np.dot(terms.r_bar, terms.r_bar)
    return complex(left), complex(1j * terms.a_delta)


def coherent_position_amplitude(label: CoherentLabel, r, t: float = 0.0, params: OscillatorParams = NATURAL_UNITS):
    """<r|alpha(t)> as a Gaussian centred on the classical trajectory.

    The momentum phase is p_bar.(r - r_bar/2)/hbar, which is what the
    exponential-of-linear form in alpha reduces to; ``r`` may be complex.
    """
    terms = coherent_eval_terms(label, t, params)
    r = np.asarray(r)
    d = r - terms.r_bar
    kappa, hbar = params.kappa, params.hbar
    log_amp = (
        0.75 * math.log(kappa**2 / math.pi)
        - 0.5 * kappa**2 * np.sum(d * d, axis=-1)
        + 1j / hbar * (r @ terms.p_bar - 0.5 * np.dot(terms.p_bar, terms.r_bar))
        - 1j * terms.phi_zp
    )
    return np.exp(log_amp)
