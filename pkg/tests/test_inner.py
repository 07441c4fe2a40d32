import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from blaschke_lab import catalog
from blaschke_lab.blaschke import FiniteBlaschkeProduct
from blaschke_lab.errors import DomainError, PreconditionError, SearchError
from blaschke_lab.inner import (InnerFunction, ShiftedInner, disc_grid, extrapolate_limit, frostman_approximate,
                                frostman_shift, is_blaschke_test, radial_log_mean)

zero = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))


def _jensen(zeros, r):
    """``int log|B(r e^{it})| dt`` for a Blaschke product, from Jensen's formula."""
    return 2 * math.pi * sum(math.log(max(abs(a), r)) for a in zeros)


@given(st.lists(zero, min_size=1, max_size=4), st.sampled_from([0.3, 0.9, 0.99]))
def test_log_mean_matches_jensen(zeros, r):
    # a zero within 1e-3 of the circle needs more nodes than the grid cap
    assume(all(abs(abs(a) - r) > 1e-3 for a in zeros))
    phi = InnerFunction(FiniteBlaschkeProduct(1.0, tuple(zeros)))
    assert abs(radial_log_mean(phi, r) - _jensen(zeros, r)) < 1e-8


@pytest.mark.parametrize("mass", [0.5, math.pi, 2 * math.pi])
@pytest.mark.parametrize("r", [0.5, 0.99, 0.9999])
def test_log_mean_of_atom_is_minus_mass(mass, r):
    phi = InnerFunction(atoms=((1.3, mass),))
    assert abs(radial_log_mean(phi, r) + mass) < 1e-9


def test_log_mean_with_zero_on_the_circle():
    phi = InnerFunction(FiniteBlaschkeProduct(1.0, (0.5,)))
    assert abs(radial_log_mean(phi, 0.5) - _jensen([0.5], 0.5)) < 1e-4


def test_log_mean_domain():
    phi = InnerFunction()
    with pytest.raises(DomainError):
        radial_log_mean(phi, 1.0)
    with pytest.raises(PreconditionError):
        radial_log_mean(phi, 0.5, grid_n=64)


def test_evaluate_and_log_abs():
    phi = catalog.resolve("fbp_atom_pi")
    z = np.array([0.0, 0.5j, -0.3 + 0.2j])
    assert np.allclose(phi.log_abs(z), np.log(np.abs(phi.evaluate(z))), atol=1e-12)
    with pytest.raises(DomainError):
        phi.evaluate(1.0)


def test_inner_function_validation_and_json():
    with pytest.raises(PreconditionError):
        InnerFunction(atoms=((0.0, -1.0),))
    phi = InnerFunction(FiniteBlaschkeProduct(1j, (0.2,)), ((7.0, 1.0),))
    assert 0 <= phi.atoms[0][0] < 2 * math.pi
    back = InnerFunction.from_json(phi.to_json())
    assert abs(back.evaluate(0.3) - phi.evaluate(0.3)) < 1e-15
    both = phi * catalog.resolve("atom_pi")
    assert abs(both.total_mass - (1.0 + math.pi)) < 1e-15


def test_extrapolation_is_exact_on_quadratics():
    radii = np.array([0.9, 0.99, 0.999])
    h = np.sqrt(1 - radii)
    assert abs(extrapolate_limit(radii, 2.0 - 3.0 * h + 0.5 * h * h) - 2.0) < 1e-12


@pytest.mark.parametrize("name,mass", [("atom_pi", math.pi), ("atom_2pi", 2 * math.pi), ("fbp3_atom_2pi", 2 * math.pi)])
def test_mass_estimates(name, mass):
    v = is_blaschke_test(catalog.resolve(name))
    assert not v.verdict
    assert abs(v.estimated_mass - mass) <= 0.05 * mass


@pytest.mark.parametrize("name", ["fbp3_inner"])
def test_blaschke_products_pass(name):
    assert is_blaschke_test(catalog.resolve(name)).verdict


def test_ladder_validation():
    with pytest.raises(PreconditionError):
        is_blaschke_test(InnerFunction(), r_ladder=(0.9, 0.8))
    with pytest.raises(PreconditionError):
        is_blaschke_test(InnerFunction(), r_ladder=(0.9, 1.0))


def test_shift_of_atom_is_blaschke():
    phi = catalog.resolve("atom_2pi")
    shifted = frostman_shift(phi, 0.3j)
    assert is_blaschke_test(shifted).verdict
    with pytest.raises(DomainError):
        ShiftedInner(phi, 1.0)


@pytest.mark.parametrize("eps", [1.0, 0.5, 0.2])
def test_frostman_certificate(eps):
    phi = catalog.resolve("fbp_atom_pi")
    B, cert = frostman_approximate(phi, eps, seed=3)
    assert cert.achieved <= cert.bound < eps
    z = disc_grid()
    assert abs(np.max(np.abs(phi.evaluate(z) - B.evaluate(z))) - cert.achieved) < 1e-12
    assert cert.to_json()["certified"]


def test_frostman_is_seed_deterministic():
    phi = catalog.resolve("atom_pi")
    assert frostman_approximate(phi, 0.5, seed=7)[1] == frostman_approximate(phi, 0.5, seed=7)[1]


def test_frostman_search_failure():
    class NeverBlaschke:
        # a constant inside the disc has log-mean far from zero for every shift
        def evaluate(self, z):
            return np.full(np.shape(z), 0.0j)

        def log_abs(self, z):
            return np.full(np.shape(z), -5.0)

    with pytest.raises(SearchError):
        frostman_approximate(NeverBlaschke(), 0.5, n_angles=2, restarts=1)


def test_frostman_eps_range():
    with pytest.raises(PreconditionError):
        frostman_approximate(InnerFunction(), 1.5)
