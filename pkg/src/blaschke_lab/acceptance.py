"""Acceptance checks shared by ``blaschke-lab selftest`` and the test suite.

Each check returns a :class:`CriterionResult` carrying the measured
quantities next to their thresholds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import catalog
from .approx_fbp import caratheodory_approximant, exp_shift_series, fisher_approximate, fisher_decompose_product
from .blaschke import FiniteBlaschkeProduct
from .disc import grid_angles
from .douglas_rudin import ArcSet, build_map, two_valued_approximate
from .elliptic import EllipticParameters, complete_elliptic_K, jacobi_sn, modulus_residual, solve_modulus
from .inner import R_LADDER, frostman_approximate, frostman_shift, is_blaschke_test
from .numrange import berger_stampfli_ensemble, numerical_radius, power_inequality_gap, random_operator
from .unimodular import hankel_distance_estimate, helson_sarason, riemann_unimodular_combo


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    runtime: float = 0.0

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:2d}: {self.title}"

    def to_json(self, timing=False):
        out = {"criterion": self.number, "title": self.title, "pass": self.passed, "details": self.details}
        if timing:
            out["timings"] = dict(self.timings, total_s=self.runtime)
        return out


def _circle(n=1024):
    return np.exp(1j * grid_angles(n))


def caratheodory_criterion():
    f = exp_shift_series()
    t0 = time.perf_counter()
    coeff_err, ratio = 0.0, 0.0
    for n in (2, 4, 6, 8):
        B = caratheodory_approximant(f, n)
        coeff_err = max(coeff_err, float(np.max(np.abs(B.taylor(n) - f.coeffs[: n + 1]))))
        for r in (0.3, 0.6, 0.9):
            z = r * _circle(512)
            ratio = max(ratio, float(np.max(np.abs(f.evaluate(z) - B.evaluate(z)))) / (2 * r**n))
    runtime = time.perf_counter() - t0
    ok = coeff_err <= 1e-9 and ratio <= 1.0 and runtime < 1.0
    return CriterionResult(1, "Caratheodory coefficient match and |f - B_n| <= 2 r^n", ok,
                           {"coeff_err": coeff_err, "max_error_over_bound": ratio}, {"runtime_s": runtime})


def fisher_criterion(seed=2, trials=30):
    rng = np.random.default_rng(seed)
    zeta = _circle(1024)
    resid, weight_sum_err, min_weight = 0.0, 0.0, math.inf
    for i in range(trials):
        B = FiniteBlaschkeProduct.random(rng, 1 + i % 3)
        B = B.rotate(np.exp(1j * rng.uniform(0, 2 * math.pi)))
        for t in (0.5, 0.9):
            combo = fisher_decompose_product(B, t)
            resid = max(resid, float(np.max(np.abs(combo.evaluate(zeta) - B.evaluate(t * zeta)))))
            weight_sum_err = max(weight_sum_err, abs(float(np.sum(combo.weights)) - 1.0))
            min_weight = min(min_weight, float(np.min(combo.weights)))
    res = fisher_approximate(exp_shift_series(), 0.15)
    ok = resid <= 1e-10 and weight_sum_err <= 1e-12 and min_weight >= 0.0 and res.achieved < 0.15
    return CriterionResult(2, "Fisher decomposition exactness and end-to-end eps = 0.15", ok,
                           {"residual": resid, "weight_sum_err": weight_sum_err, "min_weight": min_weight,
                            "exp_shift_achieved": res.achieved, "t": res.t, "order": res.order})


COMBO_FUNCTIONS = ("exp_shift_boundary", "half_rotation", "winding_sin3", "step_upper", "conj_fbp2", "zero_grid")


def combo_criterion():
    worst_margin, zero_err = math.inf, 0.0
    for eps, N in ((0.1, 1000), (0.3, 200)):
        for name in COMBO_FUNCTIONS:
            _, rep = riemann_unimodular_combo(catalog.resolve(name), eps, N)
            worst_margin = min(worst_margin, rep.bound - rep.achieved)
            if name == "zero_grid":
                zero_err = max(zero_err, rep.achieved)
    ok = worst_margin >= 0.0 and zero_err <= 1e-14
    return CriterionResult(3, "Riemann unimodular combination within eps + 4 pi/(eps N)", ok,
                           {"worst_margin": worst_margin, "zero_function_error": zero_err})


HS_FUNCTIONS = ("power3", "power4", "conj_factor", "conj_fbp2", "winding_sin3")


def helson_sarason_criterion():
    worst, unimod = {}, 0.0
    for eps in (0.3, 0.1):
        for name in HS_FUNCTIONS:
            res = helson_sarason(catalog.resolve(name), eps)
            worst[f"{name}@{eps}"] = res.report.achieved / eps
            q = res.quotient.evaluate(_circle(1024))
            unimod = max(unimod, float(np.max(np.abs(np.abs(q) - 1.0))))
    ratio = max(worst.values())
    ok = ratio < 1.0 and unimod <= 1e-10
    return CriterionResult(4, "Helson-Sarason quotient certified below eps", ok,
                           {"max_achieved_over_eps": ratio, "unimodular_deviation": unimod})


def frostman_criterion(seed=0):
    masses = {}
    for name, target in (("atom_pi", math.pi), ("atom_2pi", 2 * math.pi)):
        est = is_blaschke_test(catalog.resolve(name)).estimated_mass
        masses[name] = abs(est - target) / target
    phi = catalog.resolve("fbp_atom_pi")
    rho = 0.9 * 0.5 / 2.5
    angles = grid_angles(32) + math.pi / 32
    hits = sum(is_blaschke_test(frostman_shift(phi, rho * np.exp(1j * a)), R_LADDER).verdict for a in angles)
    certs = {}
    for eps in (1.0, 0.5):
        _, cert = frostman_approximate(phi, eps, seed=seed)
        certs[eps] = cert
    cert_ok = all(c.achieved <= c.bound < c.eps for c in certs.values())
    ok = max(masses.values()) <= 0.05 and hits >= 31 and cert_ok
    return CriterionResult(5, "Frostman mass estimate, shift success rate, certified bound", ok,
                           {"relative_mass_error": masses, "shift_successes_of_32": int(hits),
                            "certificates": {str(e): c.to_json() for e, c in certs.items()}})


def _quad_K(k):
    return quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, math.pi / 2, epsabs=0.0, epsrel=1e-12)[0]


def elliptic_criterion():
    p = EllipticParameters.from_modulus(1.0 / math.sqrt(2.0))
    sym = abs(p.K - p.K_prime)
    oracle = max(abs(complete_elliptic_K(k) - _quad_K(k)) for k in np.arange(1, 10) / 10)
    sn_err = 0.0
    for k in (0.1, 0.5, 0.9):
        K = complete_elliptic_K(k)
        sn_err = max(sn_err, abs(jacobi_sn(0.0, k)), abs(jacobi_sn(K, k) - 1.0))
    cases = [(math.pi / 2, math.pi / 6), (math.pi / 2, 0.2), (1.0, 0.3), (2.5, 0.5), (0.4, 0.1)]
    resid = max(modulus_residual(solve_modulus(a, e), a, e) for a, e in cases)
    worked = solve_modulus(math.pi / 2, math.pi / 6)
    ok = sym <= 1e-10 and oracle <= 1e-8 and sn_err <= 1e-8 and resid <= 1e-12 and abs(worked - 0.2115) <= 1e-3
    return CriterionResult(6, "Elliptic integrals, sn values and the modulus relation", ok,
                           {"K_minus_Kprime": sym, "agm_vs_quadrature": oracle, "sn_err": sn_err,
                            "modulus_residual": resid, "k_worked": worked})


def douglas_rudin_criterion():
    m = build_map(math.pi / 2, 0.2)
    images, targets = m.anchors()
    anchor_err = float(np.max(np.abs(images - targets)))
    t = grid_angles(512) + math.pi / 512
    boundary = np.concatenate([m.params.r_inner * np.exp(1j * t), m.params.R_outer * np.exp(1j * t)])
    ring_err = float(np.max(np.abs(np.abs(m.evaluate(boundary)) - 1.0)))
    t0 = time.perf_counter()
    # upper half circle with endpoints between grid nodes
    arcs = ArcSet.from_mask(grid_angles(4096) < math.pi)
    _, rep = two_valued_approximate(arcs, math.pi / 2, 0.2, grid_n=4096)
    runtime = time.perf_counter() - t0
    ok = (anchor_err <= 1e-10 and ring_err <= 1e-8 and rep.achieved <= 0.2 and runtime < 30.0
          and rep.inner_negative_energy <= 1e-4)
    return CriterionResult(7, "Douglas-Rudin map anchors, annulus images, two-valued pipeline", ok,
                           {"anchor_err": anchor_err, "annulus_unimodular_err": ring_err,
                            "achieved": rep.achieved, "inner_negative_energy": rep.inner_negative_energy,
                           }, {"runtime_s": runtime})


def partial_fraction_criterion(seed=8, trials=20):
    rng = np.random.default_rng(seed)
    r = np.linspace(0.0, 0.9, 10)
    z = (r[:, None] * np.exp(1j * grid_angles(64))[None, :]).ravel()
    gammas = np.exp(1j * (grid_angles(16) + 0.1))
    resid, sum_err, min_c = 0.0, 0.0, math.inf
    for i in range(trials):
        B = FiniteBlaschkeProduct.random(rng, 1 + i % 5, with_origin=True)
        Bz = B.evaluate(z)
        for g in gammas:
            zetas, cs = B.partial_fractions(g)
            lhs = 1.0 / (1.0 - np.conj(g) * Bz)
            rhs = np.sum(cs[:, None] / (1.0 - np.conj(zetas)[:, None] * z[None, :]), axis=0)
            resid = max(resid, float(np.max(np.abs(lhs - rhs))))
            sum_err = max(sum_err, abs(float(np.sum(cs)) - 1.0))
            min_c = min(min_c, float(np.min(np.real(cs))))
    ok = resid <= 1e-9 and sum_err <= 1e-10 and min_c > 0.0
    return CriterionResult(8, "Boundary partial fractions of 1/(1 - conj(gamma) B)", ok,
                           {"identity_residual": resid, "sum_err": sum_err, "min_c": min_c})


def berger_stampfli_criterion(seed=9, trials=1000):
    ens = berger_stampfli_ensemble(trials, seed)
    rng = np.random.default_rng(seed + 1)
    gap = max(power_inequality_gap(random_operator(rng, int(rng.integers(1, 7)))) for _ in range(100))
    nil = abs(numerical_radius(catalog.resolve("jordan2")).radius - 0.5)
    ok = ens.failures == 0 and gap <= 1e-8 and nil <= 1e-9
    return CriterionResult(9, "Berger-Stampfli ensemble, power inequality, nilpotent radius", ok,
                           {"ensemble": ens.to_json(), "power_gap": gap, "nilpotent_err": nil})


def distance_criterion():
    analytic = hankel_distance_estimate({0: 0.5, 1: 0.3, 4: -0.2j}, 6).lower
    unit = hankel_distance_estimate({-1: 1.0}, 6).lower
    mixed = hankel_distance_estimate({-1: 0.3, 2: 1.0}, 6).lower
    symbol = {-1: 0.4, -2: 0.3j, -3: -0.2, -5: 0.1, 1: 0.5}
    ladder = [hankel_distance_estimate(symbol, M).lower for M in range(1, 9)]
    monotone = all(b >= a - 1e-14 for a, b in zip(ladder, ladder[1:]))
    ok = analytic == 0.0 and abs(unit - 1.0) <= 1e-10 and abs(mixed - 0.3) <= 1e-10 and monotone
    return CriterionResult(10, "Hankel distance estimates and monotonicity", ok,
                           {"analytic": analytic, "unit": unit, "mixed": mixed, "ladder": ladder})


CRITERIA = (
    caratheodory_criterion, fisher_criterion, combo_criterion, helson_sarason_criterion,
    frostman_criterion, elliptic_criterion, douglas_rudin_criterion, partial_fraction_criterion,
    berger_stampfli_criterion, distance_criterion,
)


def run_criterion(check):
    t0 = time.perf_counter()
    res = check()
    res.runtime = time.perf_counter() - t0
    return res


def run_all(checks=CRITERIA):
    return [run_criterion(c) for c in checks]
