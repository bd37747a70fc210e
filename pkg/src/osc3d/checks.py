"""Oracle and invariant checks behind ``osc3d check`` and the acceptance tests.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
tolerance.  Random samples come from fixed seeds so runs are reproducible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .coherent import (
    CoherentLabel,
    coherent_coefficients,
    coherent_eval_terms,
    coherent_overlap,
    coherent_position_amplitude,
    evolve_coherent,
    resolve_identity_residual,
)
from .oscillator import (
    NATURAL_UNITS,
    FockCoefficients,
    OscillatorParams,
    PhasePoint,
    eigenfunction,
    energy,
    inner_product,
    position_amplitude,
)
from .phase_space import (
    backward_characteristic,
    evolve_wigner_harmonic,
    liouville_residual,
    momentum_amplitude,
    wigner_coherent,
    wigner_fock,
    wigner_marginal_momentum,
    wigner_marginal_position,
    wigner_numeric,
)
from .photon_statistics import (
    classify_squeezing,
    mandel_q,
    mandel_q_oracle,
    quadrature_variances,
    squeeze_border,
    statistics_oracle_variances,
)
from .special_functions import scaled_hermite_rule
from .squeezed import H_FORMS, SqueezeLabel, squeeze_axis_params, squeezed_fock_coefficients, squeezed_position_amplitude


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: " + "; ".join(self.details)


class _Collector:
    def __init__(self, name: str):
        self.result = CheckResult(name, True)

    def require(self, label: str, value: float, limit: float, *, above: bool = False):
        ok = value > limit if above else value <= limit
        ok = ok and math.isfinite(value)
        self.result.passed &= ok
        op = ">" if above else "<="
        self.result.details.append(f"{label}={value:.3g} ({op} {limit:g}){'' if ok else ' FAILED'}")

    def flag(self, label: str, ok: bool):
        self.result.passed &= bool(ok)
        self.result.details.append(f"{label}={'ok' if ok else 'FAILED'}")

    def note(self, text: str):
        self.result.details.append(text)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _random_disk(rng, radius: float, size) -> np.ndarray:
    mag = radius * np.sqrt(rng.uniform(0, 1, size))
    return mag * np.exp(1j * rng.uniform(-math.pi, math.pi, size))


def fock_indices(max_total: int):
    for m, n, l in itertools.product(range(max_total + 1), repeat=3):
        if m + n + l <= max_total:
            yield (m, n, l)


def squeeze_operator_factor(s: complex, alpha: complex, cutoff: int, dim: int = 200) -> np.ndarray:
    """Reference 1D coefficients of D(alpha) S(s)|0> by matrix exponentials.

    Built in a truncated Fock space of size ``dim`` and cut down to
    ``cutoff``; independent of any closed-form wavefunction.
    """
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1)
    raise_ = lower.T
    squeeze = expm(0.5 * (s * raise_ @ raise_ - np.conj(s) * lower @ lower))
    displace = expm(alpha * raise_ - np.conj(alpha) * lower)
    vac = np.zeros(dim, complex)
    vac[0] = 1.0
    return (displace @ (squeeze @ vac))[: cutoff + 1]


def quadrature_norm(psi, scales, order: int = 80) -> float:
    """int |psi|^2 d^3r with Gauss-Hermite nodes stretched by ``scales`` per axis."""
    u, w = scaled_hermite_rule(order)
    xs = [u * s for s in scales]
    ws = [w * s for s in scales]
    grid = np.stack(np.meshgrid(*xs, indexing="ij"), axis=-1).reshape(-1, 3)
    weights = (ws[0][:, None, None] * ws[1][None, :, None] * ws[2][None, None, :]).reshape(-1)
    return float(weights @ np.abs(psi(grid)) ** 2)


def _squeezed_scales(label: SqueezeLabel, params: OscillatorParams, h_form: str):
    scales = []
    for s in label.s:
        ax = squeeze_axis_params(s, h_form)
        b = (1.0 / (ax.g_iota * ax.c_iota**2)).real
        scales.append(1.0 / (params.kappa * math.sqrt(b)))
    return scales


# -- criteria -----------------------------------------------------------------


def check_wigner_equivalence(n_points: int = 20, order: int = 60, seed: int = 1) -> CheckResult:
    c = _Collector("1 wigner closed form vs quadrature")
    rng = _rng(seed)
    worst = 0.0
    for idx in fock_indices(4):
        for _ in range(n_points):
            pt = PhasePoint(rng.normal(size=3), rng.normal(size=3))
            exact = wigner_fock(idx, pt)
            if abs(exact) <= 1e-8:
                continue
            num = wigner_numeric(lambda r, idx=idx: eigenfunction(idx, r), pt, order=order)
            worst = max(worst, abs(num - exact) / abs(exact))
    c.require("max rel err", worst, 1e-6)
    ground = wigner_fock((0, 0, 0), PhasePoint.origin())
    c.require("|W_000(0) - 1/pi^3|", abs(ground - math.pi**-3), 1e-10)
    return c.result


def check_marginals(n_points: int = 10, order: int = 20, seed: int = 2) -> CheckResult:
    c = _Collector("2 wigner marginals")
    rng = _rng(seed)
    err_r = err_p = 0.0
    for idx in fock_indices(3):
        for _ in range(n_points):
            r = rng.normal(size=3)
            p = rng.normal(size=3)
            err_r = max(err_r, abs(wigner_marginal_position(idx, r, order=order) - abs(eigenfunction(idx, r)) ** 2))
            phi = momentum_amplitude(lambda x, idx=idx: eigenfunction(idx, x), p, order=order)
            err_p = max(err_p, abs(wigner_marginal_momentum(idx, p, order=order) - abs(phi) ** 2))
    c.require("position marginal err", err_r, 1e-6)
    c.require("momentum marginal err", err_p, 1e-6)
    return c.result


def check_overcompleteness(n_pairs: int = 50, seed: int = 3) -> CheckResult:
    c = _Collector("3 over-completeness and overlaps")
    c.require("identity residual", resolve_identity_residual(3, 40, 16), 1e-4)
    rng = _rng(seed)
    law = series = 0.0
    for _ in range(n_pairs):
        a = CoherentLabel(_random_disk(rng, 2.0, 3))
        b = CoherentLabel(_random_disk(rng, 2.0, 3))
        ov = coherent_overlap(b, a)
        d = b.alpha - a.alpha
        law = max(law, abs(abs(ov) ** 2 - math.exp(-np.vdot(d, d).real)))
        trunc = inner_product(coherent_coefficients(b, 40), coherent_coefficients(a, 40))
        series = max(series, abs(trunc - ov))
    c.require("|<b|a>|^2 law err", law, 1e-12)
    c.require("closed vs series err", series, 1e-8)
    return c.result


def check_coherent_evolution(seed: int = 4) -> CheckResult:
    c = _Collector("4 coherent evolution")
    rng = _rng(seed)
    label = CoherentLabel([0.7 + 0.3j, -0.2, 0.5j])
    worst_label = worst_phase = worst_fd = worst_amp = worst_series = 0.0
    for params in (NATURAL_UNITS, OscillatorParams(2.0, 0.5, 3.0)):
        period = 2 * math.pi / params.omega
        evolved, phase = evolve_coherent(label, period, params)
        worst_label = max(worst_label, float(np.max(np.abs(evolved.alpha - label.alpha))))
        worst_phase = max(worst_phase, abs(phase + 3 * math.pi))
        h = 1e-5
        for t in rng.uniform(0, period, 5):
            plus = coherent_eval_terms(label, t + h, params)
            minus = coherent_eval_terms(label, t - h, params)
            now = coherent_eval_terms(label, t, params)
            dr = (plus.r_bar - minus.r_bar) / (2 * h)
            dp = (plus.p_bar - minus.p_bar) / (2 * h)
            worst_fd = max(
                worst_fd,
                float(np.max(np.abs(dr - now.p_bar / params.mass))),
                float(np.max(np.abs(dp + params.mass * params.omega**2 * now.r_bar))),
            )
            r = rng.normal(size=(10, 3)) / params.kappa
            moved, ph = evolve_coherent(label, t, params)
            lhs = coherent_position_amplitude(label, r, t, params)
            rhs = np.exp(1j * ph) * coherent_position_amplitude(moved, r, 0.0, params)
            worst_amp = max(worst_amp, float(np.max(np.abs(lhs - rhs))))
            # independent route: evolve the Fock expansion with exp(-i E t / hbar)
            coeffs = coherent_coefficients(label, 40)
            phases = [np.exp(-1j * params.omega * t * (np.arange(41) + 0.5))] * 3
            evolved_state = FockCoefficients(factors=[f * p for f, p in zip(coeffs.factors, phases)])
            worst_series = max(worst_series, float(np.max(np.abs(position_amplitude(evolved_state, r, params) - lhs))))
    c.require("period label err", worst_label, 1e-12)
    c.require("period phase err vs -3pi", worst_phase, 1e-12)
    c.require("centroid EOM fd residual", worst_fd, 1e-7)
    c.require("amplitude evolution identity", worst_amp, 1e-10)
    c.require("Fock-series evolution err", worst_series, 1e-8)
    return c.result


def check_normalization(seed: int = 5, order: int = 80) -> CheckResult:
    c = _Collector("5 normalization")
    rng = _rng(seed)
    worst_coh = 0.0
    for params in (NATURAL_UNITS, OscillatorParams(2.0, 0.5, 3.0)):
        for _ in range(4):
            label = CoherentLabel(_random_disk(rng, 2.0, 3))
            t = rng.uniform(0, 3)
            norm = quadrature_norm(lambda r: coherent_position_amplitude(label, r, t, params), [1 / params.kappa] * 3, order)
            worst_coh = max(worst_coh, abs(norm - 1))
    c.require("coherent |norm-1|", worst_coh, 1e-7)
    labels = [
        SqueezeLabel([0.5, -0.3j, 0.8 * np.exp(0.25j * math.pi)], [1, 1j, 0]),
        SqueezeLabel([1, 1j, -1], [2, 2j, -1.4 - 1.4j]),
        SqueezeLabel([1, 1, 1], [0, 0, 0]),
    ] + [SqueezeLabel(_random_disk(rng, 1.0, 3), _random_disk(rng, 2.0, 3)) for _ in range(4)]
    surviving = []
    for h_form in H_FORMS:
        worst = 0.0
        for label in labels:
            for params in (NATURAL_UNITS, OscillatorParams(2.0, 0.5, 3.0)):
                scales = _squeezed_scales(label, params, h_form)
                norm = quadrature_norm(lambda r: squeezed_position_amplitude(label, r, params, h_form), scales, order)
                worst = max(worst, abs(norm - 1))
        c.note(f"h_form={h_form} worst |norm-1|={worst:.3g}")
        if worst <= 1e-7:
            surviving.append(h_form)
    c.flag("default h_form normalizes", "gain" in surviving)
    # normalization cannot separate the two forms; the operator oracle does
    label = SqueezeLabel([0.6 * np.exp(0.9j), 0.5j, -0.4], [0.8 - 0.4j, 0.3, 1j])
    for h_form in H_FORMS:
        state = squeezed_fock_coefficients(label, 40, 120, h_form=h_form)
        err = max(
            float(np.max(np.abs(f - squeeze_operator_factor(s, a, 40))))
            for f, s, a in zip(state.factors, label.s, label.alpha)
        )
        c.note(f"h_form={h_form} vs operator oracle err={err:.3g}")
        if h_form == "gain":
            c.require("gain form vs operator oracle", err, 1e-8)
    c.note("surviving(normalization)=" + ",".join(surviving))
    return c.result


ROUND_TRIP_LABELS = (
    SqueezeLabel([0.5, -0.3j, 0.8 * np.exp(0.25j * math.pi)], [1, 1j, 0]),
    SqueezeLabel([0.8, 0, 0], [0, 0, 0]),
    SqueezeLabel([0, 0.8j, 0], [0, 0, 0]),
    SqueezeLabel([0, 0, -0.8], [0.5, 0, 0.5j]),
    SqueezeLabel([0.8 * np.exp(-1j * math.pi / 3), 0, 0], [0, 0.5, 0]),
    SqueezeLabel([0.8, 0.8j, -0.8], [0, 0, 0]),
)


def check_round_trip(cutoff: int = 50, order: int = 200, seed: int = 6) -> CheckResult:
    c = _Collector("6 squeezed projection round trip")
    rng = _rng(seed)
    r = rng.normal(size=(20, 3))
    worst = 0.0
    for label in ROUND_TRIP_LABELS:
        state = squeezed_fock_coefficients(label, cutoff, order)
        err = float(np.max(np.abs(position_amplitude(state, r) - squeezed_position_amplitude(label, r))))
        worst = max(worst, err)
        if err > 1e-6:
            c.note(f"s={np.round(label.s, 3).tolist()} err={err:.3g}")
    c.require("resynthesis err", worst, 1e-6)
    vac = squeezed_fock_coefficients(SqueezeLabel([0.8, 0.5j, -0.3 + 0.4j], [0, 0, 0]), cutoff, order)
    odd = max(float(np.max(np.abs(f[1::2]))) for f in vac.factors)
    c.require("squeezed vacuum odd coeffs", odd, 1e-10)
    return c.result


def check_mandel(cutoff: int = 60, order: int = 120) -> CheckResult:
    c = _Collector("7 mandel Q closed form vs Fock moments")
    phis = (0.3, -1.1, 2.0)
    worst = {"squeeze_half": 0.0, "displacement_half": 0.0}
    for r in np.linspace(0, 0.8, 5):
        for amp in np.linspace(0, 1.5, 5):
            for delta in (0.0, math.pi / 4, math.pi / 2):
                # delta = theta/2 - phi per axis
                thetas = [2 * (delta + phi) for phi in phis]
                label = SqueezeLabel(
                    [r * np.exp(1j * th) for th in thetas],
                    [amp * np.exp(1j * phi) for phi in phis],
                )
                oracle = mandel_q_oracle(squeezed_fock_coefficients(label, cutoff, order))
                for conv in worst:
                    worst[conv] = max(worst[conv], float(np.max(np.abs(mandel_q(label, conv) - oracle))))
    c.require("closed vs oracle", worst["squeeze_half"], 1e-4)
    c.note(f"delta=theta-phi/2 deviates by up to {worst['displacement_half']:.3g}; delta=theta/2-phi repairs it")
    spread = 0.0
    for r in np.linspace(0, 2, 9):
        values = [mandel_q(SqueezeLabel([r * np.exp(1j * th), 0, 0], [0, 0, 0]))[0] for th in np.linspace(-math.pi, math.pi, 13)]
        spread = max(spread, max(values) - min(values))
        if r > 0:
            # r = 0 is the vacuum limit Q = 0
            spread = max(spread, max(abs(v - math.cosh(2 * r)) for v in values))
    c.require("alpha=0 spread vs cosh(2r)", spread, 1e-12)
    return c.result


def border_angles(count: int = 50, margin: float = 0.05) -> np.ndarray:
    """Angles in (0, 2 pi) away from multiples of pi/2, where the border degenerates."""
    angles = np.linspace(0, 2 * math.pi, 4 * count, endpoint=False)
    quarter = math.pi / 2
    dist = np.abs(angles / quarter - np.round(angles / quarter)) * quarter
    keep = angles[dist > margin]
    return keep[np.linspace(0, keep.size - 1, count).astype(int)]


def check_quadrature_squeezing() -> CheckResult:
    c = _Collector("8 quadrature squeezing")
    min_product = math.inf
    exchange = 0.0
    for r in np.linspace(-2, 2, 41):
        for a in np.linspace(0, 2 * math.pi, 73):
            v1, v2 = quadrature_variances(r, a)
            w1, w2 = quadrature_variances(-r, a)
            min_product = min(min_product, v1 * v2 - 1 / 16)
            exchange = max(exchange, abs(v1 - w2), abs(v2 - w1))
    c.require("-(min var1*var2 - 1/16)", -min_product, 1e-12)
    c.require("r -> -r exchange err", exchange, 1e-12)
    border_err = 0.0
    flips = True
    for a in border_angles(50):
        r_plus, r_minus = squeeze_border(a)
        v1 = quadrature_variances(r_plus, a)[0]
        v2 = quadrature_variances(r_minus, a)[1]
        border_err = max(border_err, abs(v1 - 0.25), abs(v2 - 0.25))
        for r in (r_plus, r_minus):
            below = classify_squeezing(*quadrature_variances(r - 1e-3, a))
            above = classify_squeezing(*quadrature_variances(r + 1e-3, a))
            flips &= below != above
    c.require("border variance err", border_err, 1e-12)
    c.flag("classification flips across border", flips)
    vac = squeezed_fock_coefficients(SqueezeLabel([0.5, 0, 0], [0, 0, 0]), 60, 120)
    v1, v2 = statistics_oracle_variances(vac)[0]
    c.flag("oracle squeezed vacuum has a component below 1/4", min(v1, v2) < 0.25)
    c.require("oracle |var1*var2 - 1/16|", abs(v1 * v2 - 1 / 16), 1e-6)
    # which angle do the variance formulas want: squeeze phase or displacement phase?
    label = SqueezeLabel([0.6 * np.exp(0.9j), 0, 0], [1.2 * np.exp(0.4j), 0, 0])
    ov = statistics_oracle_variances(squeezed_fock_coefficients(label, 60, 120))[0]
    err_theta = max(abs(x - y) for x, y in zip(ov, quadrature_variances(0.6, 0.9)))
    err_phi = max(abs(x - y) for x, y in zip(ov, quadrature_variances(0.6, 0.4)))
    c.note(f"variance angle: squeeze phase err={err_theta:.2g}, displacement phase err={err_phi:.2g}")
    return c.result


def _forward_characteristic_wigner(w0, params):
    # negative control: the flow with the momentum coupling sign reversed
    def w(point: PhasePoint, t: float):
        cs, sn = math.cos(params.omega * t), math.sin(params.omega * t)
        mw = params.mass * params.omega
        r, p = point.position, point.momentum
        return w0(PhasePoint(r * cs + p / mw * sn, p * cs - mw * r * sn))
    return w


def check_liouville(n_samples: int = 20, fd_step: float = 1e-4, seed: int = 9) -> CheckResult:
    c = _Collector("9 harmonic Liouville flow")
    rng = _rng(seed)
    params = NATURAL_UNITS
    label = CoherentLabel([1.0, 0.5j, -0.3 + 0.2j])

    def w0(point):
        return wigner_coherent(label, point, params)

    def w(point, t):
        return evolve_wigner_harmonic(w0, point, t, params)

    worst = 0.0
    for _ in range(n_samples):
        pt = PhasePoint(rng.normal(size=3), rng.normal(size=3))
        worst = max(worst, liouville_residual(w, pt, rng.uniform(0, 2 * math.pi), params, fd_step))
    c.require("evolved coherent residual", worst, 1e-6)
    ground = max(
        liouville_residual(lambda p, t: wigner_fock((0, 0, 0), p), PhasePoint(rng.normal(size=3), rng.normal(size=3)), 0.3, params, fd_step)
        for _ in range(5)
    )
    c.require("stationary ground residual", ground, 1e-8)
    wrong = _forward_characteristic_wigner(w0, params)
    # probe on the support of the wrongly evolved state, off its centroid
    t = 0.7
    start = coherent_eval_terms(label, 0.0, params)
    centre = backward_characteristic(PhasePoint(start.r_bar, start.p_bar), t, params)
    generic = PhasePoint(centre.position + 0.3 * np.array([1.0, -1.0, 0.5]), centre.momentum + 0.3 * np.array([-0.5, 1.0, 1.0]))
    c.require("sign-flipped control residual", liouville_residual(wrong, generic, t, params, fd_step), 1e-2, above=True)
    return c.result


ALL_CHECKS = (
    check_wigner_equivalence,
    check_marginals,
    check_overcompleteness,
    check_coherent_evolution,
    check_normalization,
    check_round_trip,
    check_mandel,
    check_quadrature_squeezing,
    check_liouville,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
