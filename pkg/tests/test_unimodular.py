import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import hankel, svdvals

from blaschke_lab import catalog
from blaschke_lab.blaschke import FiniteBlaschkeProduct
from blaschke_lab.combination import ConvexCombination, FactoredCombination
from blaschke_lab.disc import BoundaryGrid, FourierCoefficients, grid_angles, inverse_fourier
from blaschke_lab.errors import CapacityError, InsufficientDataError, PreconditionError
from blaschke_lab.unimodular import (UnimodularGridFunction, hankel_distance_estimate, helson_sarason,
                                     marshall_average, max_negative_coefficient, negative_frequency_ratio,
                                     riemann_unimodular_combo, vallee_poussin_coefficients)


def test_convex_combination_validation():
    B = FiniteBlaschkeProduct(1.0)
    with pytest.raises(PreconditionError):
        ConvexCombination([0.5, 0.6], (B, B))
    with pytest.raises(PreconditionError):
        ConvexCombination([1.5, -0.5], (B, B))
    with pytest.raises(PreconditionError):
        ConvexCombination([1.0], ())


def test_grid_items_only_on_their_grid():
    g = BoundaryGrid(np.ones(16))
    combo = ConvexCombination([1.0], (g,))
    assert np.allclose(combo.on_grid(16), 1.0)
    with pytest.raises(PreconditionError):
        combo.evaluate(np.zeros(8))


def test_factored_combination_json():
    A = ConvexCombination([0.5, 0.5], (FiniteBlaschkeProduct(1.0), FiniteBlaschkeProduct(-1.0)))
    F = FactoredCombination((A, A, A))
    assert F.to_json()["expanded_size"] == 8
    assert abs(F.evaluate(0.3) - F.expand().evaluate(0.3)) < 1e-15


def test_unimodular_grid_function_validation():
    with pytest.raises(PreconditionError):
        UnimodularGridFunction(np.full(16, 0.9))


def test_negative_frequency_measures():
    th = grid_angles(64)
    assert negative_frequency_ratio(np.exp(2j * th)) < 1e-30
    assert abs(negative_frequency_ratio(np.exp(-1j * th)) - 1.0) < 1e-14
    size, k = max_negative_coefficient(np.exp(1j * th) + 0.25 * np.exp(-3j * th))
    assert abs(size - 0.25) < 1e-14 and k == -3


@given(st.floats(0.05, 0.9), st.integers(1, 60), st.floats(0.0, 1.0), st.floats(0, 2 * math.pi))
def test_riemann_combo_bound(eps, N, radius, phase):
    th = grid_angles(64)
    f = BoundaryGrid(radius * np.exp(1j * (phase + np.sin(th))))
    combo, rep = riemann_unimodular_combo(f, eps, N)
    assert rep.achieved <= rep.bound
    assert len(combo) == N
    for item in combo.items[:3]:
        assert np.max(np.abs(np.abs(item.values) - 1.0)) < 1e-12


def test_riemann_combo_zero_function():
    _, rep = riemann_unimodular_combo(BoundaryGrid(np.zeros(256)), 0.1, 1000)
    assert rep.achieved <= 1e-14


def test_riemann_combo_preconditions():
    with pytest.raises(PreconditionError):
        riemann_unimodular_combo(BoundaryGrid(np.full(64, 1.5)), 0.1, 10)
    with pytest.raises(PreconditionError):
        riemann_unimodular_combo(BoundaryGrid(np.zeros(64)), 1.0, 10)


def test_marshall_average_of_analytic_centre():
    th = grid_angles(256)
    z = np.exp(1j * th)
    g = BoundaryGrid(0.4 * z**2 + 0.1)
    omega0 = BoundaryGrid(z**3)
    combo, rep = marshall_average(g, omega0, 0.3, 64)
    assert rep.achieved <= rep.bound
    assert rep.extra["inner_negative_energy"] < 1e-20


def test_marshall_average_rejects_non_analytic():
    th = grid_angles(256)
    with pytest.raises(PreconditionError):
        marshall_average(BoundaryGrid(0.3 * np.exp(-1j * th)), BoundaryGrid(np.ones(256)), 0.3, 8)


@pytest.mark.parametrize("m", [1, 2, 4, 8])
def test_vallee_poussin_reproduces_polynomials(m):
    coeffs = {k: complex(1.0 / (1 + abs(k)), 0.1 * k) for k in range(-m, m + 1)}
    grid = inverse_fourier(FourierCoefficients.from_dict(coeffs), 64)
    out = vallee_poussin_coefficients(grid, m)
    assert set(out) == set(coeffs)
    assert max(abs(out[k] - v) for k, v in coeffs.items()) < 1e-13


@pytest.mark.parametrize("name", ["power3", "power4", "conj_factor", "conj_fbp2", "winding_sin3"])
@pytest.mark.parametrize("eps", [0.3, 0.1])
def test_helson_sarason_catalog(name, eps):
    f = catalog.resolve(name)
    res = helson_sarason(f, eps)
    q = res.quotient.evaluate(f.points)
    assert res.report.achieved < eps
    assert np.max(np.abs(np.abs(q) - 1.0)) < 1e-10
    assert abs(np.max(np.abs(q - f.values)) - res.report.achieved) < 1e-12


def test_helson_sarason_odd_parity_on_identity():
    th = grid_angles(256)
    res = helson_sarason(BoundaryGrid(np.exp(1j * th)), 0.1)
    assert res.parity == "odd"
    assert res.report.achieved < 1e-12


def test_helson_sarason_capacity():
    # a fast oscillation needs a degree far above the cap
    th = grid_angles(256)
    f = BoundaryGrid(np.exp(1j * 3 * np.sin(20 * th)))
    with pytest.raises(CapacityError):
        helson_sarason(f, 0.01, degree_cap=4)


def test_hankel_distance_values():
    assert hankel_distance_estimate({0: 1.0, 2: 0.5}, 4).lower == 0.0
    assert abs(hankel_distance_estimate({-1: 1.0}, 3).lower - 1.0) < 1e-10
    assert abs(hankel_distance_estimate({-1: 0.3, 2: 1.0}, 3).lower - 0.3) < 1e-10


@given(st.lists(st.complex_numbers(max_magnitude=1.0), min_size=1, max_size=8))
def test_hankel_against_scipy(negs):
    coeffs = {-(k + 1): c for k, c in enumerate(negs)}
    M = len(negs)
    col = np.array(negs, dtype=complex)
    oracle = svdvals(hankel(col))[0]
    assert abs(hankel_distance_estimate(coeffs, M).lower - oracle) < 1e-12
    ladder = [hankel_distance_estimate(coeffs, m).lower for m in range(1, M + 2)]
    assert all(b >= a - 1e-14 for a, b in zip(ladder, ladder[1:]))


def test_hankel_from_grid():
    th = grid_angles(64)
    g = BoundaryGrid(0.5 * np.exp(-2j * th) + np.exp(1j * th))
    assert abs(hankel_distance_estimate(g, 4).lower - 0.5) < 1e-12
    with pytest.raises(InsufficientDataError):
        hankel_distance_estimate(g, 20)
