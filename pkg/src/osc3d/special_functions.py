"""Orthogonal polynomials, log-factorials and quadrature rules.

Everything here is pure; rules are immutable once built and can be shared.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special
from scipy.linalg import eigh_tridiagonal

MAX_DEGREE = 512
MAX_ORDER = 512


class DegreeOverflowError(ValueError):
    """Requested polynomial degree exceeds the configured ceiling."""


class UnsupportedOrderError(ValueError):
    """Requested quadrature order is outside the supported range."""


def _check_degree(n: int, max_degree: int = MAX_DEGREE) -> int:
    n = int(n)
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    if n > max_degree:
        raise DegreeOverflowError(f"degree {n} exceeds max degree {max_degree}")
    return n


def hermite_poly(n: int, x, max_degree: int = MAX_DEGREE):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence.

    ``x`` may be a scalar or array, real or complex.
    """
    n = _check_degree(n, max_degree)
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return h_prev if h_prev.ndim else h_prev[()]
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if np.ndim(h) else h[()]


def laguerre_poly(n: int, x, max_degree: int = MAX_DEGREE):
    """Laguerre polynomial L_n(x) by three-term recurrence."""
    n = _check_degree(n, max_degree)
    x = np.asarray(x)
    l_prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return l_prev if l_prev.ndim else l_prev[()]
    lag = 1.0 - x
    for k in range(1, n):
        l_prev, lag = lag, ((2 * k + 1 - x) * lag - k * l_prev) / (k + 1)
    return lag if np.ndim(lag) else lag[()]


def hermite_functions(nmax: int, x):
    """Table of normalized 1D oscillator eigenfunctions psi_k(x), k = 0..nmax.

    Uses the stable normalized recurrence, so it does not overflow at high k
    the way H_k(x) / sqrt(2^k k!) would.  Returns shape ``(nmax + 1,) + x.shape``.
    """
    nmax = _check_degree(nmax)
    x = np.asarray(x)
    out = np.empty((nmax + 1,) + x.shape, dtype=np.result_type(x, float))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, nmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


_log_factorial_table = np.zeros(1)


def log_factorial(n: int) -> float:
    """ln(n!) from a memoized cumulative sum of ln k."""
    global _log_factorial_table
    n = int(n)
    if n < 0:
        raise ValueError(f"log_factorial needs n >= 0, got {n}")
    if n >= _log_factorial_table.size:
        size = max(n + 1, 2 * _log_factorial_table.size)
        logs = np.log(np.arange(1, size, dtype=float))
        # compensated running sum keeps the error at a few ulp for large n
        table = np.empty(size)
        table[0] = 0.0
        acc = math.fsum([])
        partials: list[float] = []
        for k, v in enumerate(logs, start=1):
            partials.append(v)
            if len(partials) == 64:
                acc = math.fsum([acc, *partials])
                partials = []
            table[k] = math.fsum([acc, *partials])
        _log_factorial_table = table
    return float(_log_factorial_table[n])


def log_factorials(nmax: int) -> np.ndarray:
    """Array of ln(k!) for k = 0..nmax."""
    log_factorial(nmax)
    return _log_factorial_table[: nmax + 1].copy()


class RuleKind(str, enum.Enum):
    GAUSS_HERMITE = "gauss_hermite"
    GAUSS_LAGUERRE = "gauss_laguerre"
    TRAPEZOID_PERIODIC = "trapezoid_periodic"


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.size < 1:
            raise ValueError("nodes and weights must have equal length >= 1")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> complex | float:
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def _laguerre_golub_welsch(order: int):
    # eigen-decomposition of the Jacobi matrix; used where scipy's Newton
    # refinement overflows (order >~ 350)
    k = np.arange(order, dtype=float)
    nodes, vectors = eigh_tridiagonal(2.0 * k + 1.0, k[1:])
    return nodes, vectors[0] ** 2


@lru_cache(maxsize=64)
def make_quadrature(kind: RuleKind | str, order: int) -> QuadratureRule:
    """Nodes and weights for a Gauss-Hermite, Gauss-Laguerre or periodic trapezoid rule.

    Gauss rules use weight functions exp(-x^2) on the real line and exp(-x)
    on [0, inf).  The periodic rule covers [0, 2*pi) with equal weights.
    At high Laguerre orders the outermost weights underflow to zero.
    """
    kind = RuleKind(kind)
    order = int(order)
    if order < 1 or order > MAX_ORDER:
        raise UnsupportedOrderError(f"order must be in [1, {MAX_ORDER}], got {order}")
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        if kind is RuleKind.GAUSS_HERMITE:
            nodes, weights = special.roots_hermite(order)
        elif kind is RuleKind.GAUSS_LAGUERRE:
            nodes, weights = special.roots_laguerre(order)
            if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
                nodes, weights = _laguerre_golub_welsch(order)
        else:
            nodes = 2.0 * np.pi * np.arange(order) / order
            weights = np.full(order, 2.0 * np.pi / order)
    return QuadratureRule(np.asarray(nodes, float), np.asarray(weights, float), kind)


def scaled_hermite_rule(order: int):
    """Gauss-Hermite nodes with weights w_k * exp(x_k^2), for plain integrals over R.

    Weights that underflow in the unscaled rule are returned as zero.
    """
    rule = make_quadrature(RuleKind.GAUSS_HERMITE, order)
    scaled = np.zeros_like(rule.weights)
    pos = rule.weights > 0
    scaled[pos] = np.exp(np.log(rule.weights[pos]) + rule.nodes[pos] ** 2)
    return rule.nodes, scaled
