"""Numerical range and radius of matrices, and Blaschke products of operators.

``W(T) = {<Tx, x> : |x| = 1}`` is convex and its support function in
direction ``e^{i phi}`` is the top eigenvalue of the Hermitian part of
``e^{-i phi} T``. Sweeping ``phi`` gives both ``w(T)`` and a polygon
hugging the boundary of ``W(T)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .blaschke import FiniteBlaschkeProduct
from .errors import NumericalError, PreconditionError

DIM_CAP = 64
SPECTRAL_MARGIN = 1e-6
COND_CAP = 1e12


def as_matrix(T, cap=DIM_CAP):
    T = np.array(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise PreconditionError("operator must be a square matrix")
    if T.shape[0] > cap:
        raise PreconditionError(f"matrix dimension {T.shape[0]} exceeds cap {cap}")
    if not np.all(np.isfinite(T)):
        raise PreconditionError("matrix has non-finite entries")
    return T


def matrix_to_json(T):
    T = np.asarray(T, dtype=complex)
    return {"n": int(T.shape[0]), "re": T.real.tolist(), "im": T.imag.tolist()}


def matrix_from_json(data):
    T = np.array(data["re"], dtype=float) + 1j * np.array(data.get("im", np.zeros_like(data["re"])), dtype=float)
    if "n" in data and T.shape != (int(data["n"]), int(data["n"])):
        raise PreconditionError("matrix JSON: 'n' does not match the entries")
    return as_matrix(T)


def _top_eigen(T, phi):
    A = np.exp(-1j * phi) * T
    H = 0.5 * (A + A.conj().T)
    vals, vecs = np.linalg.eigh(H)
    return vals[-1], vecs[:, -1]


@dataclass(frozen=True)
class RangeReport:
    """Numerical radius plus the support data of the sweep."""

    radius: float
    angles: np.ndarray
    support: np.ndarray
    polygon: np.ndarray

    @property
    def m(self):
        return self.angles.size

    def contains(self, z, tol=1e-6):
        """Whether ``z`` satisfies every sampled support inequality up to ``tol``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        proj = (np.exp(-1j * self.angles)[None, :] * z[:, None]).real
        return np.all(proj <= self.support[None, :] + tol, axis=1)

    def to_json(self):
        return {"radius": self.radius, "angles": int(self.m),
                "polygon": [[p.real, p.imag] for p in self.polygon]}


def numerical_radius(T, m=720):
    """``w(T) = max_phi lambda_max((e^{-i phi} T + e^{i phi} T*) / 2)``.

    The maximum over ``m`` equispaced angles is refined by a bounded scalar
    search in the neighbouring cells.
    """
    if m < 64:
        raise PreconditionError("angle count m must be at least 64")
    T = as_matrix(T)
    angles = 2.0 * math.pi * np.arange(m) / m
    try:
        A = np.exp(-1j * angles)[:, None, None] * T[None, :, :]
        vals, vecs = np.linalg.eigh(0.5 * (A + np.conj(np.swapaxes(A, 1, 2))))
        support = vals[:, -1]
        x = vecs[:, :, -1]
        polygon = np.einsum("ji,ik,jk->j", np.conj(x), T, x)
        best = int(np.argmax(support))
        step = 2.0 * math.pi / m
        res = minimize_scalar(lambda p: -_top_eigen(T, p)[0],
                              bounds=(angles[best] - step, angles[best] + step),
                              method="bounded", options={"xatol": 1e-12})
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-solver failed: {exc}") from exc
    radius = max(float(support[best]), float(-res.fun), 0.0)
    return RangeReport(radius, angles, support, polygon)


def spectral_radius(T):
    return float(np.max(np.abs(np.linalg.eigvals(T)))) if np.size(T) else 0.0


def _require_origin_zero(B):
    if not any(abs(a) <= 1e-14 for a in B.zeros):
        raise PreconditionError("the Blaschke product must vanish at the origin")


def apply_fbp_to_operator(B, T):
    """``c prod_k (a_k I - T)(I - conj(a_k) T)^{-1}`` for ``B(0) = 0`` and spectral radius < 1."""
    T = as_matrix(T)
    _require_origin_zero(B)
    if spectral_radius(T) >= 1.0 - SPECTRAL_MARGIN:
        raise PreconditionError("operator spectrum must lie strictly inside the unit disc")
    n = T.shape[0]
    eye = np.eye(n)
    out = B.constant * eye
    for a in B.zeros:
        D = eye - np.conj(a) * T
        if np.linalg.cond(D) > COND_CAP:
            raise NumericalError(f"I - conj(a) T is ill-conditioned for a = {a}")
        out = out @ np.linalg.solve(D.T, (a * eye - T).T).T
    return out


def resolvent_partial_fraction_check(T, B, gamma):
    """Residual ``|(I - conj(g) B(T))^{-1} - sum c_k (I - conj(z_k) T)^{-1}|``.

    ``(z_k, c_k)`` are the boundary partial fractions of ``B`` at level
    ``gamma``; the residual is measured in the spectral norm.
    """
    T = as_matrix(T)
    BT = apply_fbp_to_operator(B, T)
    n = T.shape[0]
    eye = np.eye(n)
    M = eye - np.conj(gamma) * BT
    if np.linalg.cond(M) > COND_CAP:
        raise PreconditionError("I - conj(gamma) B(T) is not safely invertible")
    lhs = np.linalg.inv(M)
    zetas, cs = B.partial_fractions(gamma)
    rhs = sum(c * np.linalg.inv(eye - np.conj(z) * T) for z, c in zip(zetas, cs))
    return float(np.linalg.norm(lhs - rhs, 2))


@dataclass(frozen=True)
class BergerStampfliReport:
    wT: float
    wBT: float
    r: float
    tol: float

    @property
    def passed(self):
        return self.wBT <= 1.0 + self.tol

    def to_json(self):
        return {"wT": self.wT, "wBT": self.wBT, "r": self.r, "tol": self.tol, "pass": self.passed}


def berger_stampfli_check(T, B, tol=1e-8, r=0.999, m=720):
    """Check ``w(B(rT / w(T))) <= 1 + tol`` for a product with ``B(0) = 0``."""
    T = as_matrix(T)
    _require_origin_zero(B)
    wT = numerical_radius(T, m).radius
    if wT == 0.0:
        return BergerStampfliReport(0.0, 0.0, r, tol)
    BT = apply_fbp_to_operator(B, (r / wT) * T)
    return BergerStampfliReport(wT, numerical_radius(BT, m).radius, r, tol)


def power_inequality_gap(T, n_max=5, m=720):
    """``max_n (w(T^n) - w(T)^n)`` for ``1 <= n <= n_max``; never positive in exact arithmetic."""
    T = as_matrix(T)
    w = numerical_radius(T, m).radius
    P = np.eye(T.shape[0], dtype=complex)
    worst = -math.inf
    for n in range(1, n_max + 1):
        P = P @ T
        worst = max(worst, numerical_radius(P, m).radius - w**n)
    return worst


def random_operator(rng, dim):
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)


def random_pair(rng, max_dim=6, max_degree=4):
    """Random ``(T, B)`` with ``B(0) = 0`` for falsification runs."""
    dim = int(rng.integers(1, max_dim + 1))
    degree = int(rng.integers(1, max_degree + 1))
    return random_operator(rng, dim), FiniteBlaschkeProduct.random(rng, degree, with_origin=True)


@dataclass(frozen=True)
class EnsembleReport:
    trials: int
    failures: int
    worst_margin: float
    seed: int

    def to_json(self):
        return {"trials": self.trials, "failures": self.failures, "worst_wBT_minus_1": self.worst_margin,
                "seed": self.seed, "pass": self.failures == 0}


def berger_stampfli_ensemble(trials, seed, tol=1e-8, r=0.999, m=720, max_dim=6, max_degree=4, workers=1):
    """Run ``trials`` random checks; pairs are drawn sequentially so ``workers`` never changes the result."""
    rng = np.random.default_rng(seed)
    pairs = [random_pair(rng, max_dim, max_degree) for _ in range(trials)]
    check = lambda pair: berger_stampfli_check(pair[0], pair[1], tol, r, m)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(check, pairs))
    else:
        reports = [check(p) for p in pairs]
    failures = sum(not rep.passed for rep in reports)
    worst = max((rep.wBT - 1.0 for rep in reports), default=-math.inf)
    return EnsembleReport(trials, failures, worst, seed)
