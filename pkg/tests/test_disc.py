import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from blaschke_lab.disc import (BoundaryGrid, FourierCoefficients, continuous_argument, fourier, grid_angles,
                               harmonic_extension, inverse_fourier, mobius, square_root_lift)
from blaschke_lab.errors import DomainError, PreconditionError, ResolutionError

disc_points = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
                        st.floats(0.0, 0.95), st.floats(0.0, 2 * math.pi))


@given(disc_points, st.floats(0.0, 2 * math.pi))
def test_mobius_is_unimodular_on_circle(a, t):
    assert abs(abs(mobius(a, np.exp(1j * t))) - 1.0) < 1e-12


@given(disc_points, disc_points)
def test_mobius_is_an_involution(a, z):
    assert abs(mobius(a, mobius(a, z)) - z) < 1e-9


def test_mobius_rejects_outside_parameter():
    with pytest.raises(DomainError):
        mobius(1.2, 0.0)


def test_grid_requires_power_of_two():
    with pytest.raises(PreconditionError):
        BoundaryGrid(np.ones(100))
    with pytest.raises(PreconditionError):
        BoundaryGrid(np.ones(4))


def test_grid_is_read_only():
    g = BoundaryGrid(np.ones(16))
    with pytest.raises(ValueError):
        g.values[0] = 2.0


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=15))
def test_fourier_round_trip(pairs):
    coeffs = {k - len(pairs) // 2: complex(a, b) for k, (a, b) in enumerate(pairs)}
    fc = FourierCoefficients.from_dict(coeffs)
    grid = inverse_fourier(fc, 64)
    back = fourier(grid)
    for k, c in coeffs.items():
        assert abs(back[k] - c) < 1e-12
    assert np.max(np.abs(inverse_fourier(back, 64).values - grid.values)) < 1e-12


def test_fourier_matches_direct_sum(rng):
    vals = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    th = grid_angles(32)
    c = fourier(BoundaryGrid(vals))
    for k in (-5, 0, 3, 15):
        assert abs(c[k] - np.mean(vals * np.exp(-1j * k * th))) < 1e-13


def test_nyquist_coefficient_is_split():
    th = grid_angles(16)
    c = fourier(BoundaryGrid(np.cos(8 * th)))
    assert abs(c[8] - 0.5) < 1e-14 and abs(c[-8] - 0.5) < 1e-14


def test_coefficients_outside_range_are_zero():
    c = FourierCoefficients.from_dict({2: 1.0})
    assert c[7] == 0 and c[-3] == 0


def test_json_round_trips():
    g = BoundaryGrid.from_function(lambda z: z**2 + 0.1j, 16)
    assert np.array_equal(BoundaryGrid.from_json(g.to_json()).values, g.values)
    c = FourierCoefficients.from_dict({-1: 0.5j, 3: 2.0})
    assert FourierCoefficients.from_json(c.to_json()).as_dict() == c.as_dict()


def _poisson_oracle(u, r, t):
    kernel = lambda s: (1 - r * r) / (1 - 2 * r * math.cos(t - s) + r * r)
    return quad(lambda s: u(s) * kernel(s), 0, 2 * math.pi, limit=200)[0] / (2 * math.pi)


def test_harmonic_extension_against_poisson_quadrature():
    u = lambda s: math.cos(s) + 0.3 * math.sin(2 * s) + 0.1 * math.cos(5 * s) ** 2
    grid = BoundaryGrid(np.array([u(s) for s in grid_angles(256)]))
    for r, t in [(0.0, 0.0), (0.5, 1.0), (0.9, 4.0)]:
        U, _ = harmonic_extension(grid, r, t)
        assert abs(U - _poisson_oracle(u, r, t)) < 1e-10


def test_harmonic_conjugate_of_cosine():
    grid = BoundaryGrid(np.cos(grid_angles(64)))
    U, V = harmonic_extension(grid, 0.5, 0.7)
    z = 0.5 * np.exp(0.7j)
    assert abs(U - z.real) < 1e-14 and abs(V - z.imag) < 1e-14


def test_harmonic_extension_domain():
    grid = BoundaryGrid(np.ones(16))
    with pytest.raises(DomainError):
        harmonic_extension(grid, 1.0, 0.0)
    with pytest.raises(PreconditionError):
        harmonic_extension(BoundaryGrid(np.full(16, 1j)), 0.5, 0.0)


@pytest.mark.parametrize("func,winding", [
    (lambda t: np.exp(1j * (t + 0.5 * np.sin(3 * t))), 1),
    (lambda t: np.exp(3j * t), 3),
    (lambda t: np.exp(-2j * t), -2),
    (lambda t: np.exp(1j * np.sin(t)), 0),
])
def test_winding_numbers(func, winding):
    lift = continuous_argument(BoundaryGrid(func(grid_angles(256))))
    assert lift.winding == winding
    assert np.max(np.abs(np.exp(1j * lift.phi) - func(grid_angles(256)))) < 1e-12


def test_unresolved_jump_raises():
    vals = np.ones(16, dtype=complex)
    vals[5] = -1.0
    with pytest.raises(ResolutionError):
        continuous_argument(BoundaryGrid(vals))


def test_non_unimodular_argument_rejected():
    with pytest.raises(PreconditionError):
        continuous_argument(BoundaryGrid(np.full(16, 0.5)))


@pytest.mark.parametrize("power,parity", [(2, "even"), (3, "odd"), (-1, "odd")])
def test_square_root_lift(power, parity):
    th = grid_angles(128)
    f = np.exp(1j * (power * th + 0.3 * np.cos(th)))
    g, got = square_root_lift(BoundaryGrid(f))
    assert got == parity
    rebuilt = g.values**2 * (np.exp(1j * th) if parity == "odd" else 1.0)
    assert np.max(np.abs(rebuilt - f)) < 1e-12
    assert continuous_argument(g).winding == (power - (parity == "odd")) // 2
