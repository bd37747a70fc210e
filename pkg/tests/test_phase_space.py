import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from osc3d.coherent import CoherentLabel, coherent_eval_terms, coherent_position_amplitude
from osc3d.oscillator import NATURAL_UNITS, OscillatorParams, PhasePoint, eigenfunction
from osc3d.phase_space import (
    WignerGridSpec,
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
from osc3d.special_functions import UnsupportedOrderError, scaled_hermite_rule
from osc3d.squeezed import SqueezeLabel, squeeze_axis_params, squeezed_position_amplitude

PI3 = math.pi**-3
ODD_UNITS = OscillatorParams(2.0, 0.5, 3.0)
coord = st.floats(-2.5, 2.5, allow_nan=False)


def point(r, p):
    return PhasePoint(np.asarray(r, float), np.asarray(p, float))


def test_wigner_fock_examples():
    assert wigner_fock((0, 0, 0), PhasePoint.origin()) == pytest.approx(PI3, rel=1e-15)
    assert PI3 == pytest.approx(0.03225153, abs=1e-8)
    assert wigner_fock((1, 0, 0), PhasePoint.origin()) == pytest.approx(-PI3, rel=1e-15)
    assert wigner_fock((1, 0, 0), point([2**-0.5, 0, 0], [0, 0, 0])) == pytest.approx(0, abs=1e-16)


def test_wigner_fock_vectorizes(rng):
    r, p = rng.normal(size=(5, 3)), rng.normal(size=(5, 3))
    batch = wigner_fock((2, 0, 1), PhasePoint(r, p))
    single = [wigner_fock((2, 0, 1), point(r[i], p[i])) for i in range(5)]
    np.testing.assert_allclose(batch, single, rtol=1e-14)


def test_numeric_examples(rng):
    ground = wigner_numeric(lambda r: eigenfunction((0, 0, 0), r), PhasePoint.origin())
    assert ground == pytest.approx(PI3, abs=1e-8)
    for _ in range(10):
        pt = point(rng.normal(size=3), rng.normal(size=3))
        exact = wigner_fock((2, 1, 0), pt)
        num = wigner_numeric(lambda r: eigenfunction((2, 1, 0), r), pt)
        if abs(exact) > 1e-8:
            assert abs(num - exact) <= 1e-6 * abs(exact)
    label = CoherentLabel([1, 0, 0])
    terms = coherent_eval_terms(label, 0.0)
    peak = wigner_numeric(lambda r: coherent_position_amplitude(label, r), point(terms.r_bar, terms.p_bar))
    assert peak == pytest.approx(PI3, abs=1e-8)


def test_numeric_imaginary_residual_is_small(rng):
    label = CoherentLabel([0.5 + 0.5j, -1, 0.2j])
    for _ in range(5):
        pt = point(rng.normal(size=3), rng.normal(size=3))
        _, imag = wigner_numeric(lambda r: coherent_position_amplitude(label, r), pt, full_output=True)
        assert abs(imag) <= 1e-9


def test_numeric_order_limits():
    with pytest.raises(UnsupportedOrderError):
        wigner_numeric(lambda r: eigenfunction((0, 0, 0), r), PhasePoint.origin(), order=513)


def test_numeric_matches_coherent_closed_form(rng):
    label = CoherentLabel([0.7 - 0.2j, 0.4j, -0.5])
    for params in (NATURAL_UNITS, ODD_UNITS):
        for _ in range(5):
            pt = point(rng.normal(size=3) / params.kappa, rng.normal(size=3) * params.hbar * params.kappa)
            num = wigner_numeric(lambda r: coherent_position_amplitude(label, r, 0.0, params), pt, params)
            assert num == pytest.approx(wigner_coherent(label, pt, params), abs=1e-12 / params.hbar**3)


@pytest.mark.parametrize("h_form", ["gain", "exp"])
def test_squeezed_wigner_peaks_at_centroid(h_form):
    # a pure Gaussian state reaches 1/(pi hbar)^3 at its phase-space centre
    label = SqueezeLabel([0.6 * np.exp(0.7j), -0.4j, 0.3], [0.5 - 0.3j, 1j, -0.2])
    width = [(1 / (p.g_iota * p.c_iota**2)).real for p in (squeeze_axis_params(s, h_form) for s in label.s)]
    centre = point(label.r0, label.p0)
    value = wigner_numeric(lambda r: squeezed_position_amplitude(label, r, h_form=h_form), centre, order=60, width=width)
    assert value == pytest.approx(PI3, abs=1e-9)


def test_marginal_examples():
    assert wigner_marginal_position((0, 0, 0), [0, 0, 0]) == pytest.approx(math.pi**-1.5, abs=1e-8)
    assert math.pi**-1.5 == pytest.approx(0.17958712, abs=1e-8)
    assert wigner_marginal_position((1, 0, 0), [0, 0, 0]) == pytest.approx(0, abs=1e-10)
    assert wigner_marginal_position((0, 0, 0), [1, 1, 1]) == pytest.approx(math.pi**-1.5 * math.exp(-3), abs=1e-8)


def test_ground_momentum_amplitude():
    p = np.array([0.3, -1.0, 0.5])
    expected = math.pi**-0.75 * math.exp(-0.5 * p @ p)
    assert momentum_amplitude(lambda r: eigenfunction((0, 0, 0), r), p) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("params", [NATURAL_UNITS, ODD_UNITS])
def test_marginals_match_densities(rng, params):
    for index in [(0, 0, 0), (1, 0, 2), (0, 3, 0), (1, 1, 1)]:
        r = rng.normal(size=3) / params.kappa
        p = rng.normal(size=3) * params.hbar * params.kappa
        assert wigner_marginal_position(index, r, params) == pytest.approx(abs(eigenfunction(index, r, params)) ** 2, abs=1e-6)
        phi = momentum_amplitude(lambda x: eigenfunction(index, x, params), p, params, order=20)
        assert wigner_marginal_momentum(index, p, params) == pytest.approx(abs(phi) ** 2, abs=1e-6)


@pytest.mark.parametrize("params", [NATURAL_UNITS, ODD_UNITS])
def test_wigner_integrates_to_one(params):
    x, w = scaled_hermite_rule(8)
    grid = np.stack(np.meshgrid(*[x] * 6, indexing="ij"), axis=-1).reshape(-1, 6)
    weights = np.ones(1)
    for _ in range(6):
        weights = np.multiply.outer(weights, w).reshape(-1)
    pts = PhasePoint(grid[:, :3] / params.kappa, grid[:, 3:] * params.hbar * params.kappa)
    for index in [i for i in itertools.product(range(4), repeat=3) if sum(i) <= 3]:
        total = weights @ wigner_fock(index, pts, params) * params.hbar**3
        assert total == pytest.approx(1.0, abs=1e-6)


def test_boundedness_and_negativity():
    g = np.linspace(-3, 3, 13)
    grid = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    zeros = np.zeros((grid.shape[0], 2))
    pts = PhasePoint(np.column_stack([grid[:, 0], zeros]), np.column_stack([grid[:, 1], zeros]))
    bound = PI3 * (1 + 1e-12)
    for index in [i for i in itertools.product(range(7), repeat=3) if sum(i) <= 6]:
        assert np.max(np.abs(wigner_fock(index, pts))) <= bound
    assert np.min(wigner_fock((1, 0, 0), pts)) < 0
    label = CoherentLabel([0.8 - 0.5j, 0.2, 1j])
    coh = wigner_coherent(label, pts)
    assert np.min(coh) >= -1e-12 and np.max(coh) <= bound
    sq = SqueezeLabel([0.7, 0, 0], [0, 0, 0])
    width = [(1 / (p.g_iota * p.c_iota**2)).real for p in map(squeeze_axis_params, sq.s)]
    for a, b in grid[::17]:
        value = wigner_numeric(lambda r: squeezed_position_amplitude(sq, r), point([a, 0, 0], [b, 0, 0]), order=30, width=width)
        assert -1e-12 <= value <= bound


def test_evolution_examples():
    label = CoherentLabel([1, 0, 0])

    def w0(pt):
        return wigner_coherent(label, pt)

    pt = point([0.3, -0.1, 0.4], [0.2, 0.5, -0.6])
    assert evolve_wigner_harmonic(w0, pt, 0.0) == w0(pt)
    for t in (0.4, 2.2):
        assert evolve_wigner_harmonic(lambda q: wigner_fock((0, 0, 0), q), pt, t) == pytest.approx(wigner_fock((0, 0, 0), pt), rel=1e-13)
    terms = coherent_eval_terms(label, 0.0)
    reflected = point(-terms.r_bar, -terms.p_bar)
    assert evolve_wigner_harmonic(w0, reflected, math.pi) == pytest.approx(PI3, abs=1e-10)


@given(st.tuples(coord, coord, coord, coord, coord, coord), st.floats(-7, 7))
def test_characteristics_match_coherent_evolution(coords, t):
    label = CoherentLabel([0.5 + 0.2j, -0.7j, 0.3])
    for params in (NATURAL_UNITS, ODD_UNITS):
        pt = point(coords[:3], coords[3:])
        flowed = evolve_wigner_harmonic(lambda q: wigner_coherent(label, q, params), pt, t, params)
        assert flowed == pytest.approx(wigner_coherent(label, pt, params, t), abs=1e-13)


def test_backward_characteristic_inverts_forward():
    pt = point([0.3, -1.0, 2.0], [0.5, 0.0, -0.4])
    back = backward_characteristic(backward_characteristic(pt, 0.7, ODD_UNITS), -0.7, ODD_UNITS)
    np.testing.assert_allclose(back.position, pt.position, atol=1e-14)
    np.testing.assert_allclose(back.momentum, pt.momentum, atol=1e-14)


def test_liouville_residual_examples(rng):
    for _ in range(5):
        pt = point(rng.normal(size=3), rng.normal(size=3))
        assert liouville_residual(lambda q, t: wigner_fock((0, 0, 0), q), pt, 0.5) <= 1e-8
    label = CoherentLabel([1.0, 0.5j, -0.3 + 0.2j])
    for params in (NATURAL_UNITS, ODD_UNITS):
        def w(q, t):
            return evolve_wigner_harmonic(lambda x: wigner_coherent(label, x, params), q, t, params)
        for _ in range(5):
            pt = point(rng.normal(size=3) / params.kappa, rng.normal(size=3) * params.hbar * params.kappa)
            assert liouville_residual(w, pt, rng.uniform(0, 6), params) <= 1e-6 / params.hbar**3
    with pytest.raises(ValueError):
        liouville_residual(lambda q, t: 0.0, PhasePoint.origin(), 0.0, fd_step=0)


def test_grid_spec_validation_and_order():
    spec = WignerGridSpec(("x", "pz"), ((-1, 1, 3), (0, 2, 2)), {"y": 0.5})
    rows = list(spec.points())
    assert [(a, b) for a, b, _ in rows] == [(-1, 0), (-1, 2), (0, 0), (0, 2), (1, 0), (1, 2)]
    assert rows[1][2].position.tolist() == [-1, 0.5, 0]
    assert rows[1][2].momentum.tolist() == [0, 0, 2]
    for bad in [
        dict(axes=("x", "x"), ranges=((0, 1, 2), (0, 1, 2))),
        dict(axes=("x", "q"), ranges=((0, 1, 2), (0, 1, 2))),
        dict(axes=("x", "y"), ranges=((1, 0, 2), (0, 1, 2))),
        dict(axes=("x", "y"), ranges=((0, 1, 1), (0, 1, 2))),
        dict(axes=("x", "y"), ranges=((0, 1, 2), (0, 1, 2)), fixed={"x": 1.0}),
    ]:
        with pytest.raises(ValueError):
            WignerGridSpec(**bad)
