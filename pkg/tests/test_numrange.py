import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blaschke_lab import catalog
from blaschke_lab.blaschke import FiniteBlaschkeProduct
from blaschke_lab.errors import PreconditionError
from blaschke_lab.numrange import (apply_fbp_to_operator, as_matrix, berger_stampfli_check,
                                   berger_stampfli_ensemble, matrix_from_json, matrix_to_json, numerical_radius,
                                   power_inequality_gap, random_operator, resolvent_partial_fraction_check,
                                   spectral_radius)


def test_nilpotent_radius():
    assert abs(numerical_radius(catalog.resolve("jordan2")).radius - 0.5) < 1e-9
    assert abs(numerical_radius(catalog.resolve("scaled_shift")).radius - 1.0) < 1e-9


def test_jordan_block_radius():
    # w of a 3x3 nilpotent Jordan block is cos(pi / 4); the shift by 1/2 adds 1/2
    assert abs(numerical_radius(catalog.resolve("jordan3_half")).radius - (0.5 + math.cos(math.pi / 4))) < 1e-10


def test_normal_and_hermitian():
    D = catalog.resolve("normal_diag")
    assert abs(numerical_radius(D).radius - 1.0) < 1e-12
    H = catalog.resolve("hermitian2")
    assert abs(numerical_radius(H).radius - np.linalg.norm(H, 2)) < 1e-12


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_radius_bounds(dim, seed):
    T = random_operator(np.random.default_rng(seed), dim)
    w = numerical_radius(T, 180).radius
    norm = np.linalg.norm(T, 2)
    assert norm / 2 - 1e-12 <= w <= norm + 1e-12
    assert spectral_radius(T) <= w + 1e-12


def test_range_contains_rayleigh_quotients(rng):
    T = random_operator(rng, 4)
    rep = numerical_radius(T)
    x = rng.standard_normal((200, 4)) + 1j * rng.standard_normal((200, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    pts = np.einsum("ij,jk,ik->i", np.conj(x), T, x)
    assert np.all(rep.contains(pts, tol=1e-9))
    assert np.all(rep.contains(rep.polygon, tol=1e-9))
    assert not rep.contains(np.array([10.0 * rep.radius]))[0]


def test_matrix_validation_and_json():
    with pytest.raises(PreconditionError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(PreconditionError):
        as_matrix(np.eye(65))
    with pytest.raises(PreconditionError):
        numerical_radius(np.eye(2), m=10)
    T = np.array([[1, 2j], [0, -1]])
    assert np.array_equal(matrix_from_json(matrix_to_json(T)), T)


def test_apply_fbp_to_diagonal(rng):
    B = FiniteBlaschkeProduct.random(rng, 3, with_origin=True)
    eig = np.array([0.1, -0.5j, 0.7])
    out = apply_fbp_to_operator(B, np.diag(eig))
    assert np.max(np.abs(np.diag(out) - B.evaluate(eig))) < 1e-12
    assert np.max(np.abs(out - np.diag(np.diag(out)))) < 1e-14


def test_apply_fbp_preconditions():
    B = FiniteBlaschkeProduct(1.0, (0.0,))
    with pytest.raises(PreconditionError):
        apply_fbp_to_operator(FiniteBlaschkeProduct(1.0, (0.3,)), np.zeros((2, 2)))
    with pytest.raises(PreconditionError):
        apply_fbp_to_operator(B, 2 * np.eye(2))


@pytest.mark.parametrize("gamma", np.exp(1j * np.array([0.1, 1.7, 3.3, 5.0])))
def test_resolvent_identity(rng, gamma):
    T = random_operator(rng, 4)
    T = 0.8 * T / numerical_radius(T).radius
    B = FiniteBlaschkeProduct.random(rng, 4, with_origin=True)
    assert resolvent_partial_fraction_check(T, B, gamma) < 1e-9


def test_berger_stampfli_catalog():
    rep = berger_stampfli_check(catalog.resolve("jordan3_half"), FiniteBlaschkeProduct(1.0, (0.0, 0.5)))
    assert rep.passed and rep.wBT <= 1.0
    assert rep.to_json()["pass"]


def test_berger_stampfli_monomial_is_tight():
    # B(z) = z gives w(rT / w(T)) = r
    rep = berger_stampfli_check(catalog.resolve("jordan2"), FiniteBlaschkeProduct(1.0, (0.0,)))
    assert abs(rep.wBT - rep.r) < 1e-10


def test_power_inequality(rng):
    for _ in range(10):
        assert power_inequality_gap(random_operator(rng, 3)) <= 1e-8


def test_ensemble_is_deterministic_across_workers():
    a = berger_stampfli_ensemble(20, seed=4)
    b = berger_stampfli_ensemble(20, seed=4, workers=3)
    assert a == b and a.failures == 0
