import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from osc3d.coherent import (
    CoherentLabel,
    a_delta_forms,
    coherent_coefficients,
    coherent_eval_terms,
    coherent_overlap,
    coherent_position_amplitude,
    evolve_coherent,
    poisson_tail,
    resolve_identity_matrix,
    resolve_identity_residual,
)
from osc3d.oscillator import NATURAL_UNITS, OscillatorParams, inner_product, ladder_apply, position_amplitude
from osc3d.special_functions import scaled_hermite_rule

component = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
triple = st.tuples(component, component, component)
UNITS = [NATURAL_UNITS, OscillatorParams(2.0, 0.5, 3.0)]


def test_vacuum_coefficients():
    state = coherent_coefficients(CoherentLabel([0, 0, 0]), 5)
    expected = np.zeros((6, 6, 6))
    expected[0, 0, 0] = 1
    np.testing.assert_array_equal(state.coeffs, expected)
    assert state.tail_mass == 0


def test_real_alpha_coefficients():
    state = coherent_coefficients(CoherentLabel([1, 0, 0]), (10, 1, 1))
    assert state.shape == (11, 2, 2)
    expected = [math.exp(-0.5) / math.sqrt(math.factorial(m)) for m in range(11)]
    np.testing.assert_allclose(state.coeffs[:, 0, 0], expected, rtol=1e-14)


def test_poisson_normalization():
    state = coherent_coefficients(CoherentLabel([1, 0, 0]), 40)
    assert state.norm2() == pytest.approx(1.0, abs=1e-12)


@given(triple, st.integers(3, 30))
def test_norm_plus_tail_is_one(alpha, cutoff):
    state = coherent_coefficients(CoherentLabel(alpha), cutoff)
    assert state.tail_mass >= 0
    assert state.norm2() + state.tail_mass == pytest.approx(1.0, abs=1e-12)


def test_poisson_tail_direct_sum():
    mean, cutoff = 2.5, 6
    head = sum(math.exp(-mean) * mean**k / math.factorial(k) for k in range(cutoff + 1))
    assert poisson_tail(mean, cutoff) == pytest.approx(1 - head, rel=1e-12)


def test_overlap_examples():
    a = CoherentLabel([1, 0, 0])
    assert coherent_overlap(a, a) == pytest.approx(1.0)
    assert coherent_overlap(CoherentLabel([0, 0, 0]), a) == pytest.approx(math.exp(-0.5), rel=1e-14)
    value = coherent_overlap(CoherentLabel([1j, 0, 0]), a)
    assert value == pytest.approx(math.exp(-1) * np.exp(-1j), rel=1e-14)
    series = inner_product(coherent_coefficients(CoherentLabel([1j, 0, 0]), 40), coherent_coefficients(a, 40))
    assert abs(series - value) <= 1e-12


@given(triple, triple)
def test_overlap_law(beta, alpha):
    b, a = CoherentLabel(beta), CoherentLabel(alpha)
    d = np.asarray(beta) - np.asarray(alpha)
    assert abs(coherent_overlap(b, a)) ** 2 == pytest.approx(math.exp(-np.vdot(d, d).real), abs=1e-12)
    series = inner_product(coherent_coefficients(b, 40), coherent_coefficients(a, 40))
    assert abs(series - coherent_overlap(b, a)) <= 1e-8


def test_identity_resolution_examples():
    assert resolve_identity_residual(0, 20, 8) <= 1e-6
    assert abs(resolve_identity_matrix(1, 20, 8)[0, 1]) <= 1e-10
    assert resolve_identity_residual(3, 40, 16) <= 1e-4


def test_evolve_examples():
    a = CoherentLabel([0.3 - 0.1j, 1, 2j])
    assert evolve_coherent(a, 0.0) == (a, 0.0)
    params = OscillatorParams(1.0, 2.0, 1.0)
    label, phase = evolve_coherent(a, 2 * math.pi / params.omega, params)
    np.testing.assert_allclose(label.alpha, a.alpha, atol=1e-14)
    assert phase == pytest.approx(-3 * math.pi, abs=1e-12)
    label, phase = evolve_coherent(CoherentLabel([1, 0, 0]), math.pi / 2)
    np.testing.assert_allclose(label.alpha, [-1j, 0, 0], atol=1e-15)
    assert phase == pytest.approx(-0.75 * math.pi)


def test_phase_is_unwrapped():
    _, phase = evolve_coherent(CoherentLabel([1, 0, 0]), 10 * math.pi)
    assert phase == pytest.approx(-15 * math.pi)


def test_eval_terms_examples():
    t = coherent_eval_terms(CoherentLabel([1, 0, 0]), 0.0)
    np.testing.assert_allclose(t.r_bar, [math.sqrt(2), 0, 0])
    np.testing.assert_allclose(t.p_bar, 0)
    t = coherent_eval_terms(CoherentLabel([1j, 0, 0]), 0.0)
    np.testing.assert_allclose(t.r_bar, 0, atol=1e-16)
    np.testing.assert_allclose(t.p_bar, [math.sqrt(2), 0, 0])
    assert coherent_eval_terms(CoherentLabel([0.4, -1.2, 2.0]), 0.0).a_delta == 0
    assert coherent_eval_terms(CoherentLabel([1, 1, 1]), 0.7).phi_zp == pytest.approx(1.05)


@given(triple, st.floats(-5, 5))
def test_a_delta_printed_forms_agree(alpha, t):
    # kappa^2 |r_bar|^2 / 2 expands to (|alpha|^2 + Re{e^{-2i w t} alpha.alpha}) / 2,
    # so the two printed expressions for i*A_delta are the same function
    left, right = a_delta_forms(CoherentLabel(alpha), t)
    assert abs(left - right) <= 1e-12 * max(1.0, np.vdot(alpha, alpha).real)


def test_amplitude_examples():
    r = np.random.default_rng(0).normal(size=(10, 3))
    vac0 = np.abs(coherent_position_amplitude(CoherentLabel([0, 0, 0]), r, 0.0))
    for t in (0.3, 2.0):
        np.testing.assert_allclose(np.abs(coherent_position_amplitude(CoherentLabel([0, 0, 0]), r, t)), vac0, rtol=1e-14)
    peak = coherent_position_amplitude(CoherentLabel([1, 0, 0]), [math.sqrt(2), 0, 0], 0.0)
    assert abs(peak) == pytest.approx(math.pi**-0.75, rel=1e-14)


def _norm(label, t, params, order=60):
    x, w = scaled_hermite_rule(order)
    x = x / params.kappa
    w = w / params.kappa
    grid = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    weights = (w[:, None, None] * w[None, :, None] * w[None, None, :]).reshape(-1)
    return weights @ np.abs(coherent_position_amplitude(label, grid, t, params)) ** 2


@pytest.mark.parametrize("params", UNITS)
def test_amplitude_normalized(params):
    assert _norm(CoherentLabel([0.7 + 0.3j, -0.2, 0.5j]), 1.3, params) == pytest.approx(1.0, abs=1e-10)


def test_real_alpha_matches_plain_gaussian():
    # for real alpha at t = 0 the amplitude is the real displaced Gaussian
    alpha = np.array([0.8, -0.3, 1.1])
    r = np.random.default_rng(1).normal(size=(15, 3))
    expected = math.pi**-0.75 * np.exp(-0.5 * np.sum((r - math.sqrt(2) * alpha) ** 2, axis=-1))
    np.testing.assert_allclose(coherent_position_amplitude(CoherentLabel(alpha), r), expected, rtol=1e-13)


@pytest.mark.parametrize("params", UNITS)
def test_series_matches_closed_form(rng, params):
    for _ in range(4):
        label = CoherentLabel(2 * np.sqrt(rng.uniform(size=3)) * np.exp(2j * np.pi * rng.uniform(size=3)))
        r = rng.normal(size=(20, 3)) / params.kappa
        series = position_amplitude(coherent_coefficients(label, 40), r, params)
        assert np.max(np.abs(series - coherent_position_amplitude(label, r, 0.0, params))) <= 1e-8


def test_printed_centroid_phase_breaks_series_agreement():
    # a momentum phase of p_bar.r_bar instead of p_bar.(r - r_bar/2) misses the Fock series
    label = CoherentLabel([0.5 + 0.8j, -0.4j, 0.3])
    r = np.random.default_rng(2).normal(size=(20, 3))
    terms = coherent_eval_terms(label, 0.0)
    printed = math.pi**-0.75 * np.exp(-0.5 * np.sum((r - terms.r_bar) ** 2, axis=-1) + 1j * terms.p_bar @ terms.r_bar)
    series = position_amplitude(coherent_coefficients(label, 40), r)
    assert np.max(np.abs(series - coherent_position_amplitude(label, r))) <= 1e-8
    assert np.max(np.abs(series - printed)) > 1e-2


@given(triple)
def test_eigenstate_property(alpha):
    state = coherent_coefficients(CoherentLabel(alpha), 45)
    for axis in range(3):
        lowered = ladder_apply(axis, "lower", state).coeffs[:41, :41, :41]
        expected = alpha[axis] * state.coeffs[:41, :41, :41]
        assert np.max(np.abs(lowered - expected)) <= 1e-10


@pytest.mark.parametrize("params", UNITS)
@given(alpha=triple, t=st.floats(-5, 5))
def test_evolution_consistency(params, alpha, t):
    label = CoherentLabel(alpha)
    r = np.array([[0.2, -0.5, 0.9], [1.3, 0.0, -0.7]]) / params.kappa
    moved, phase = evolve_coherent(label, t, params)
    lhs = coherent_position_amplitude(label, r, t, params)
    rhs = np.exp(1j * phase) * coherent_position_amplitude(moved, r, 0.0, params)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


@pytest.mark.parametrize("params", UNITS)
def test_centroid_obeys_classical_motion(params):
    label = CoherentLabel([0.7 + 0.3j, -0.2, 0.5j])
    h = 1e-5
    for t in (0.0, 0.9, 4.1):
        plus, minus, now = (coherent_eval_terms(label, t + d, params) for d in (h, -h, 0.0))
        np.testing.assert_allclose((plus.r_bar - minus.r_bar) / (2 * h), now.p_bar / params.mass, atol=1e-7)
        np.testing.assert_allclose((plus.p_bar - minus.p_bar) / (2 * h), -params.mass * params.omega**2 * now.r_bar, atol=1e-7)


def test_label_is_immutable_and_hashable():
    a = CoherentLabel([1, 2j, 0])
    with pytest.raises(ValueError):
        a.alpha[0] = 5
    assert {a, CoherentLabel([1, 2j, 0])} == {a}
    with pytest.raises(ValueError):
        CoherentLabel([1, np.nan, 0])
