"""Isotropic 3D oscillator: parameters, Fock-basis states, ladder operators,
energies and stationary position wavefunctions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .special_functions import hermite_functions, hermite_poly, log_factorial

AXES = ("x", "y", "z")


class Axis(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2

    @classmethod
    def parse(cls, value) -> "Axis":
        if isinstance(value, str):
            return cls(AXES.index(value.lower()))
        return cls(value)


class Direction(str, enum.Enum):
    LOWER = "lower"
    RAISE = "raise"


class CutoffMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class OscillatorParams:
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    kappa: float = field(init=False)

    def __post_init__(self):
        for name in ("mass", "omega", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "kappa", math.sqrt(self.mass * self.omega / self.hbar))


NATURAL_UNITS = OscillatorParams(1.0, 1.0, 1.0)


def make_params(mass: float, omega: float, hbar: float) -> OscillatorParams:
    return OscillatorParams(float(mass), float(omega), float(hbar))


class TripleIndex(NamedTuple):
    m: int
    n: int
    l: int

    @classmethod
    def of(cls, m, n=None, l=None) -> "TripleIndex":
        if n is None and l is None:
            m, n, l = m
        idx = cls(int(m), int(n), int(l))
        if min(idx) < 0:
            raise ValueError(f"quantum numbers must be non-negative, got {tuple(idx)}")
        return idx

    @property
    def total(self) -> int:
        return self.m + self.n + self.l


@dataclass(frozen=True)
class PhasePoint:
    """Phase-space point(s).  Arrays of shape (..., 3) are allowed for batches."""

    position: np.ndarray
    momentum: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.position, dtype=float)
        p = np.asarray(self.momentum, dtype=float)
        if r.shape[-1:] != (3,) or p.shape[-1:] != (3,):
            raise ValueError("position and momentum need a trailing axis of length 3")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(p))):
            raise ValueError("phase point has non-finite components")
        object.__setattr__(self, "position", r)
        object.__setattr__(self, "momentum", p)

    @classmethod
    def origin(cls) -> "PhasePoint":
        return cls(np.zeros(3), np.zeros(3))


def _normalize_cutoff(cutoff) -> tuple[int, int, int]:
    if np.isscalar(cutoff):
        cutoff = (cutoff,) * 3
    cut = tuple(int(c) for c in cutoff)
    if len(cut) != 3 or min(cut) < 0:
        raise ValueError(f"cutoff must be three non-negative integers, got {cutoff!r}")
    return cut


class FockCoefficients:
    """Truncated coefficient tensor c[m, n, l] over the Fock basis.

    Separable states can be stored as three 1D factors; the dense tensor is
    then built lazily.  ``tail_mass`` estimates the probability that lives
    beyond the cutoff.
    """

    def __init__(self, coeffs=None, tail_mass: float = 0.0, *, factors=None):
        if (coeffs is None) == (factors is None):
            raise ValueError("give exactly one of coeffs or factors")
        if factors is not None:
            factors = tuple(np.asarray(f, dtype=complex) for f in factors)
            if len(factors) != 3 or any(f.ndim != 1 or f.size < 1 for f in factors):
                raise ValueError("factors must be three non-empty 1D vectors")
            self._factors = factors
            self._dense = None
            shape = tuple(f.size for f in factors)
        else:
            dense = np.asarray(coeffs, dtype=complex)
            if dense.ndim != 3:
                raise ValueError("coefficient tensor must be 3D")
            self._factors = None
            self._dense = dense
            shape = dense.shape
        if tail_mass < 0:
            raise ValueError("tail_mass must be non-negative")
        self.tail_mass = float(tail_mass)
        self.cutoff = tuple(s - 1 for s in shape)

    @classmethod
    def basis(cls, index, cutoff, amplitude: complex = 1.0) -> "FockCoefficients":
        """Pure |m, n, l> (times ``amplitude``) inside a tensor of the given cutoff."""
        idx = TripleIndex.of(index)
        cut = _normalize_cutoff(cutoff)
        if any(i > c for i, c in zip(idx, cut)):
            raise ValueError(f"index {tuple(idx)} lies outside cutoff {cut}")
        factors = [np.zeros(c + 1, complex) for c in cut]
        for f, i in zip(factors, idx):
            f[i] = 1.0
        factors[0] = factors[0] * amplitude
        return cls(factors=factors)

    @property
    def shape(self) -> tuple[int, int, int]:
        return tuple(c + 1 for c in self.cutoff)

    @property
    def factors(self):
        return self._factors

    @property
    def coeffs(self) -> np.ndarray:
        if self._dense is None:
            fx, fy, fz = self._factors
            self._dense = np.einsum("i,j,k->ijk", fx, fy, fz)
        return self._dense

    def norm2(self) -> float:
        if self._factors is not None:
            return float(np.prod([np.vdot(f, f).real for f in self._factors]))
        return float(np.vdot(self._dense, self._dense).real)

    def axis_probabilities(self, axis) -> np.ndarray:
        """Marginal quanta distribution along one axis (unnormalized)."""
        axis = Axis.parse(axis)
        if self._factors is not None:
            others = np.prod([np.vdot(f, f).real for i, f in enumerate(self._factors) if i != axis])
            return np.abs(self._factors[axis]) ** 2 * others
        probs = np.abs(self._dense) ** 2
        return probs.sum(axis=tuple(i for i in range(3) if i != axis))

    def __repr__(self) -> str:
        kind = "separable" if self._factors is not None else "dense"
        return f"FockCoefficients(cutoff={self.cutoff}, {kind}, tail_mass={self.tail_mass:.3g})"


def ladder_apply(axis, direction, state: FockCoefficients) -> FockCoefficients:
    """Apply a_axis or a_axis^dagger coefficient-wise.

    Raising pushes the top slice past the cutoff; its probability is added to
    the tail mass of the result instead of raising an error.
    """
    axis = Axis.parse(axis)
    direction = Direction(direction)
    if state.cutoff[axis] < 1:
        raise ValueError(f"cutoff on axis {AXES[axis]} must be >= 1")
    c = np.moveaxis(state.coeffs, axis, 0)
    size = c.shape[0]
    k = np.arange(size, dtype=float).reshape((-1, 1, 1))
    out = np.zeros_like(c)
    tail = state.tail_mass
    if direction is Direction.LOWER:
        out[:-1] = np.sqrt(k[1:]) * c[1:]
    else:
        out[1:] = np.sqrt(k[1:]) * c[:-1]
        tail += size * float(np.sum(np.abs(c[-1]) ** 2))
    return FockCoefficients(np.moveaxis(out, 0, axis), tail_mass=tail)


def energy(index, params: OscillatorParams = NATURAL_UNITS) -> float:
    idx = TripleIndex.of(index)
    return params.hbar * params.omega * (idx.total + 1.5)


def eigenfunction(index, r, params: OscillatorParams = NATURAL_UNITS):
    """Stationary wavefunction <r|m, n, l> at position(s) ``r`` of shape (..., 3).

    Complex positions are accepted; the function is entire in r.
    """
    idx = TripleIndex.of(index)
    r = np.asarray(r)
    kr = params.kappa * r
    log_norm = -0.5 * (idx.total * math.log(2.0) + sum(log_factorial(k) for k in idx))
    log_norm += 0.75 * math.log(params.kappa**2 / math.pi)
    envelope = np.exp(-0.5 * np.sum(kr * kr, axis=-1))
    poly = (
        hermite_poly(idx.m, kr[..., 0])
        * hermite_poly(idx.n, kr[..., 1])
        * hermite_poly(idx.l, kr[..., 2])
    )
    return math.exp(log_norm) * envelope * poly


def inner_product(a: FockCoefficients, b: FockCoefficients) -> complex:
    """<a|b>, conjugating the first argument."""
    if a.cutoff != b.cutoff:
        raise CutoffMismatchError(f"cutoffs differ: {a.cutoff} vs {b.cutoff}")
    if a.factors is not None and b.factors is not None:
        return complex(np.prod([np.vdot(fa, fb) for fa, fb in zip(a.factors, b.factors)]))
    return complex(np.vdot(a.coeffs, b.coeffs))


def position_amplitude(state: FockCoefficients, r, params: OscillatorParams = NATURAL_UNITS):
    """Resynthesize sum_{mnl} c_{mnl} <r|m,n,l> at positions ``r`` (..., 3)."""
    r = np.asarray(r, dtype=float)
    kr = params.kappa * r
    scale = params.kappa**0.5
    tables = [
        scale * hermite_functions(c, kr[..., i]) for i, c in enumerate(state.cutoff)
    ]
    if state.factors is not None:
        out = np.ones(r.shape[:-1], dtype=complex)
        for f, table in zip(state.factors, tables):
            out = out * np.tensordot(f, table, axes=(0, 0))
        return out
    return np.einsum("ijk,i...,j...,k...->...", state.coeffs, *tables)
