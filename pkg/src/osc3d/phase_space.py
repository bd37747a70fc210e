"""Wigner functions, marginals and harmonic Liouville flow."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coherent import CoherentLabel, coherent_eval_terms
from .oscillator import NATURAL_UNITS, OscillatorParams, PhasePoint, TripleIndex
from .special_functions import (
    MAX_ORDER,
    UnsupportedOrderError,
    laguerre_poly,
    make_quadrature,
    scaled_hermite_rule,
)

COORDINATES = ("x", "y", "z", "px", "py", "pz")

PhaseFunction = Callable[[PhasePoint], np.ndarray]


def _scaled(point: PhasePoint, params: OscillatorParams):
    u = params.kappa * point.position
    q = point.momentum / (params.hbar * params.kappa)
    return u, q


def wigner_fock(index, point: PhasePoint, params: OscillatorParams = NATURAL_UNITS):
    """Closed-form Wigner function of |m, n, l>; vectorized over batched points."""
    idx = TripleIndex.of(index)
    u, q = _scaled(point, params)
    rho2 = u * u + q * q
    out = (-1) ** idx.total / (math.pi * params.hbar) ** 3 * np.exp(-np.sum(rho2, axis=-1))
    for axis, n in enumerate(idx):
        out = out * laguerre_poly(n, 2.0 * rho2[..., axis])
    return out


def wigner_coherent(label: CoherentLabel, point: PhasePoint, params: OscillatorParams = NATURAL_UNITS, t: float = 0.0):
    """Wigner function of the coherent state |alpha e^{-i omega t}>: a displaced vacuum Gaussian."""
    terms = coherent_eval_terms(label, t, params)
    du = params.kappa * (point.position - terms.r_bar)
    dq = (point.momentum - terms.p_bar) / (params.hbar * params.kappa)
    return np.exp(-np.sum(du * du + dq * dq, axis=-1)) / (math.pi * params.hbar) ** 3


def _check_order(order: int) -> int:
    order = int(order)
    if order < 1 or order > MAX_ORDER:
        raise UnsupportedOrderError(f"quadrature order must be in [1, {MAX_ORDER}], got {order}")
    return order


def _shifted_nodes(order: int, width: np.ndarray, shift: np.ndarray):
    """Per-axis complex nodes and log-weights for int e^{-a u^2 - 2 i q u} G(u) du.

    Completing the square moves the contour to u = xi/sqrt(a) - i q/a; the
    Gaussian factor becomes the Gauss-Hermite weight.  Returned log-weights
    include the compensating exp(a u^2) so that the caller integrates
    F(u) = e^{-a u^2} G(u) directly.
    """
    rule = make_quadrature("gauss_hermite", order)
    xi = rule.nodes[None, :]
    a = width[:, None]
    q = shift[:, None]
    nodes = xi / np.sqrt(a) - 1j * q / a
    with np.errstate(divide="ignore"):
        log_w = np.log(rule.weights)[None, :] - 0.5 * np.log(a) - q * q / a + a * nodes * nodes
    return nodes, log_w


def _tensor_sum(log_w: np.ndarray, values: np.ndarray) -> complex:
    n = log_w.shape[1]
    w = np.exp(log_w[0][:, None, None] + log_w[1][None, :, None] + log_w[2][None, None, :])
    return complex(np.sum(w * values.reshape(n, n, n)))


def _axis_grid(nodes: np.ndarray) -> np.ndarray:
    gx, gy, gz = np.meshgrid(nodes[0], nodes[1], nodes[2], indexing="ij")
    return np.stack([gx, gy, gz], axis=-1).reshape(-1, 3)


def wigner_numeric(psi, point: PhasePoint, params: OscillatorParams = NATURAL_UNITS, order: int = 60, width=1.0, full_output: bool = False):
    """Wigner function of a pure state by quadrature of the defining integral.

    ``psi`` maps positions of shape (N, 3) to amplitudes and must accept
    complex positions (every state in this package is entire in r).  In the
    kappa-scaled variable u = kappa*zeta/2 the integrand carries a Gaussian
    exp(-width*u^2) per axis; ``width`` = 1 is exact for Fock and coherent
    states and should be set to the state's own Gaussian width otherwise.

    With ``full_output`` returns (W, imaginary residual).
    """
    order = _check_order(order)
    width = np.broadcast_to(np.asarray(width, dtype=float), (3,)).copy()
    u_r, q = _scaled(point, params)
    if u_r.ndim != 1:
        raise ValueError("wigner_numeric takes a single phase point")
    nodes, log_w = _shifted_nodes(order, width, q)
    u = _axis_grid(nodes)
    r = point.position
    kappa = params.kappa
    left = np.conj(psi(np.conj(r - u / kappa)))
    right = psi(r + u / kappa)
    total = _tensor_sum(log_w, left * right)
    value = total * (2.0 / kappa) ** 3 / (2.0 * math.pi * params.hbar) ** 3
    if full_output:
        return value.real, value.imag
    return value.real


def momentum_amplitude(psi, p, params: OscillatorParams = NATURAL_UNITS, order: int = 60, width=1.0) -> complex:
    """Momentum-space amplitude (2 pi hbar)^{-3/2} int e^{-i p.r/hbar} psi(r) d^3r.

    Same contour-shift treatment as :func:`wigner_numeric`; ``width`` is the
    Gaussian exponent of psi in kappa-scaled units (1 for Fock/coherent states).
    """
    order = _check_order(order)
    width = np.broadcast_to(np.asarray(width, dtype=float), (3,)).copy()
    p = np.asarray(p, dtype=float)
    q = p / (params.hbar * params.kappa)
    # e^{-a u^2/2 - i q u}: rescale v = u/sqrt(2) to reuse the e^{-a v^2 - 2 i (q/sqrt 2) v} form
    nodes, log_w = _shifted_nodes(order, width, q / math.sqrt(2.0))
    u = math.sqrt(2.0) * _axis_grid(nodes)
    total = _tensor_sum(log_w, psi(u / params.kappa))
    jac = (math.sqrt(2.0) / params.kappa) ** 3
    return total * jac / (2.0 * math.pi * params.hbar) ** 1.5


def _marginal(index, fixed: np.ndarray, params: OscillatorParams, order: int, over_momentum: bool) -> float:
    order = _check_order(order)
    x, w = scaled_hermite_rule(order)
    grid = _axis_grid(np.stack([x, x, x]))
    weights = (w[:, None, None] * w[None, :, None] * w[None, None, :]).reshape(-1)
    fixed = np.asarray(fixed, dtype=float)
    if over_momentum:
        scale = params.hbar * params.kappa
        pts = PhasePoint(np.broadcast_to(fixed, grid.shape), scale * grid)
    else:
        scale = 1.0 / params.kappa
        pts = PhasePoint(scale * grid, np.broadcast_to(fixed, grid.shape))
    return float(np.dot(weights, wigner_fock(index, pts, params)) * scale**3)


def wigner_marginal_position(index, r, params: OscillatorParams = NATURAL_UNITS, order: int = 20) -> float:
    """int W(r, p) d^3p for |m, n, l>; should equal |psi(r)|^2."""
    return _marginal(index, r, params, order, over_momentum=True)


def wigner_marginal_momentum(index, p, params: OscillatorParams = NATURAL_UNITS, order: int = 20) -> float:
    """int W(r, p) d^3r for |m, n, l>; should equal |phi(p)|^2."""
    return _marginal(index, p, params, order, over_momentum=False)


def backward_characteristic(point: PhasePoint, t: float, params: OscillatorParams = NATURAL_UNITS) -> PhasePoint:
    """Phase point at time 0 that the harmonic flow carries to ``point`` at time t."""
    c, s = math.cos(params.omega * t), math.sin(params.omega * t)
    m_omega = params.mass * params.omega
    r, p = point.position, point.momentum
    return PhasePoint(r * c - p / m_omega * s, p * c + m_omega * r * s)


def evolve_wigner_harmonic(w0: PhaseFunction, point: PhasePoint, t: float, params: OscillatorParams = NATURAL_UNITS):
    """W(point, t) for the harmonic Liouville flow: w0 pulled back along characteristics."""
    return w0(backward_characteristic(point, t, params))


def liouville_residual(w: Callable[[PhasePoint, float], float], point: PhasePoint, t: float, params: OscillatorParams = NATURAL_UNITS, fd_step: float = 1e-4) -> float:
    """|dW/dt + (p/M).grad_r W - grad U . grad_p W| by central differences."""
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    h = fd_step
    r, p = point.position, point.momentum
    dw_dt = (w(point, t + h) - w(point, t - h)) / (2 * h)
    grad_r = np.empty(3)
    grad_p = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        grad_r[i] = (w(PhasePoint(r + e, p), t) - w(PhasePoint(r - e, p), t)) / (2 * h)
        grad_p[i] = (w(PhasePoint(r, p + e), t) - w(PhasePoint(r, p - e), t)) / (2 * h)
    grad_u = params.mass * params.omega**2 * r
    return float(abs(dw_dt + np.dot(p, grad_r) / params.mass - np.dot(grad_u, grad_p)))


@dataclass(frozen=True)
class WignerGridSpec:
    """A 2D slice through the 6D phase space.

    ``axes`` names the two varying coordinates (from COORDINATES); each has a
    (min, max, count) range.  All other coordinates sit at ``fixed`` values
    (default 0).
    """

    axes: tuple[str, str]
    ranges: tuple[tuple[float, float, int], tuple[float, float, int]]
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.axes) != 2 or len(set(self.axes)) != 2:
            raise ValueError("exactly two distinct varying axes are required")
        for name in (*self.axes, *self.fixed):
            if name not in COORDINATES:
                raise ValueError(f"unknown phase-space coordinate {name!r}")
        if set(self.axes) & set(self.fixed):
            raise ValueError("a coordinate cannot be both varying and fixed")
        for lo, hi, count in self.ranges:
            if not lo < hi:
                raise ValueError("grid needs min < max")
            if int(count) < 2:
                raise ValueError("grid needs at least 2 points per axis")

    def axis_values(self):
        return [np.linspace(lo, hi, int(count)) for lo, hi, count in self.ranges]

    def points(self):
        """Yield (a, b, PhasePoint) in row-major grid order."""
        va, vb = self.axis_values()
        base = np.zeros(6)
        for name, value in self.fixed.items():
            base[COORDINATES.index(name)] = value
        ia, ib = (COORDINATES.index(a) for a in self.axes)
        for a in va:
            for b in vb:
                coords = base.copy()
                coords[ia] = a
                coords[ib] = b
                yield float(a), float(b), PhasePoint(coords[:3], coords[3:])
