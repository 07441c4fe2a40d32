"""Approximation of unimodular and ball-valued boundary functions.

Covers quotients of Blaschke products approximating continuous unimodular
functions, equal-weight averages of unimodular functions approximating
ball-valued ones, the averaging of inner functions around an analytic
centre, and the Hankel lower estimate for the distance to H^infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeQuotient, FiniteBlaschkeProduct, quotient_from_meromorphic
from .combination import ConvexCombination
from .disc import BoundaryGrid, FourierCoefficients, fourier, square_root_lift
from .errors import CapacityError, InsufficientDataError, PreconditionError

UNIMODULAR_GRID_TOL = 1e-10


@dataclass(frozen=True)
class UnimodularGridFunction(BoundaryGrid):
    """Boundary grid whose samples all have modulus one."""

    def __post_init__(self):
        super().__post_init__()
        dev = float(np.max(np.abs(np.abs(self.values) - 1.0)))
        if dev > UNIMODULAR_GRID_TOL:
            raise PreconditionError(f"grid is not unimodular (max deviation {dev:.3e})")


def _grid(f):
    return f if isinstance(f, BoundaryGrid) else BoundaryGrid(f)


def negative_frequency_ratio(values):
    """Share of the l2 energy carried by negative Fourier indices."""
    c = fourier(_grid(values))
    total = float(np.sum(np.abs(c.values) ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sum(np.abs(c.negative_part()) ** 2)) / total


def max_negative_coefficient(values):
    c = fourier(_grid(values))
    neg = np.abs(c.negative_part())
    if neg.size == 0:
        return 0.0, 0
    k = int(np.argmax(neg))
    return float(neg[k]), -(k + 1)


@dataclass(frozen=True)
class ApproximationReport:
    """Certified bound and achieved sup error on a boundary grid."""

    bound: float
    achieved: float
    grid: int
    extra: dict

    @property
    def certified(self):
        return self.achieved <= self.bound

    def to_json(self):
        out = {"bound": self.bound, "achieved": self.achieved, "grid": self.grid,
               "margin": self.bound - self.achieved, "certified": self.certified}
        out.update(self.extra)
        return out


# -- equal-weight unimodular averages ------------------------------------------


def riemann_unimodular_combo(f, eps, N):
    """Average of ``N`` unimodular functions within ``eps + 4 pi / (eps N)`` of ``f``.

    The items are ``u_k = (w_k + (1 - eps) f) / (1 + (1 - eps) conj(f) w_k)``
    with ``w_k = exp(2 pi i k / N)``, each a disc automorphism applied to a
    root of unity and hence unimodular.

    Returns
    -------
    (ConvexCombination, ApproximationReport)
    """
    f = _grid(f)
    if not 0.0 < eps < 1.0:
        raise PreconditionError("eps must lie in (0, 1)")
    if N < 1:
        raise PreconditionError("N must be at least 1")
    if np.max(np.abs(f.values)) > 1.0 + 1e-12:
        raise PreconditionError("f must satisfy |f| <= 1 on the grid")
    s = (1.0 - eps) * f.values
    items = []
    for k in range(N):
        w = np.exp(2j * np.pi * k / N)
        u = (w + s) / (1.0 + np.conj(s) * w)
        items.append(UnimodularGridFunction(u / np.abs(u)))
    combo = ConvexCombination(np.full(N, 1.0 / N), tuple(items))
    achieved = float(np.max(np.abs(f.values - combo.evaluate(f.points))))
    return combo, ApproximationReport(eps + 4.0 * np.pi / (eps * N), achieved, f.n, {"N": N, "eps": eps})


def marshall_average(g, omega0, eps, N, analytic_tol=1e-8, inner_tol=1e-6):
    """Average ``N`` inner functions around an analytic centre ``g``.

    Items are ``w_k = (omega0 e_k + g) / (1 + conj(g) omega0 e_k)`` with
    ``e_k = exp(2 pi i k / N)``. When ``g``, ``omega0`` and ``omega0 conj(g)``
    are analytic each item is inner, which is certified by its negative
    Fourier energy.

    Returns
    -------
    (ConvexCombination, ApproximationReport)
        The bound is ``((1 + max|g|) / (1 - max|g|)) * 2 pi / N``.
    """
    g = _grid(g)
    omega0 = UnimodularGridFunction(_grid(omega0).values)
    if g.n != omega0.n:
        raise PreconditionError("g and omega0 must live on the same grid")
    gmax = float(np.max(np.abs(g.values)))
    if gmax > 1.0 - eps + 1e-12:
        raise PreconditionError(f"need |g| <= 1 - eps on the grid, found max {gmax:.6g}")
    if N < 1:
        raise PreconditionError("N must be at least 1")
    checks = {"g": g.values, "omega0": omega0.values, "omega0*conj(g)": omega0.values * np.conj(g.values)}
    for name, vals in checks.items():
        size, k = max_negative_coefficient(vals)
        if size > analytic_tol:
            raise PreconditionError(f"{name} is not analytic: coefficient {k} has modulus {size:.3e}")
    items = []
    for k in range(N):
        rot = omega0.values * np.exp(2j * np.pi * k / N)
        w = (rot + g.values) / (1.0 + np.conj(g.values) * rot)
        items.append(UnimodularGridFunction(w / np.abs(w)))
    inner_mass = max(negative_frequency_ratio(item) for item in items)
    if inner_mass > inner_tol:
        raise PreconditionError(f"averaged items fail the inner certificate (negative energy {inner_mass:.3e})")
    combo = ConvexCombination(np.full(N, 1.0 / N), tuple(items))
    achieved = float(np.max(np.abs(g.values - combo.evaluate(g.points))))
    bound = (1.0 + gmax) / (1.0 - gmax) * 2.0 * np.pi / N
    return combo, ApproximationReport(bound, achieved, g.n, {"N": N, "inner_negative_energy": inner_mass})


# -- quotients of Blaschke products --------------------------------------------


def vallee_poussin_coefficients(grid, m):
    """Coefficients of the de la Vallée Poussin mean ``2 F_{2m} - F_m``.

    The mean reproduces trigonometric polynomials of degree ``m`` and its
    uniform error is at most four times the best approximation of degree
    ``m``.
    """
    c = fourier(grid)
    k = np.abs(c.indices)
    weight = np.clip((2 * m - k) / m, 0.0, 1.0) if m > 0 else (k == 0).astype(float)
    keep = np.abs(c.indices) < 2 * m if m > 0 else c.indices == 0
    # drop rounding-level coefficients so exact polynomials keep their degree
    floor = 1e-13 * float(np.max(np.abs(c.values)))
    return {int(i): complex(w * v) for i, v, w, kp in zip(c.indices, c.values, weight, keep) if kp and abs(w * v) > floor}


@dataclass(frozen=True)
class HelsonSarasonResult:
    quotient: BlaschkeQuotient
    parity: str
    degree: int
    trig_error: float
    report: ApproximationReport


def helson_sarason(f, eps, degree_cap=None):
    """Quotient of Blaschke products within ``eps`` of a continuous unimodular ``f``.

    Writes ``f = g^2`` or ``f = zeta g^2``, approximates ``g`` by a
    trigonometric polynomial ``p`` to within ``eps / 2`` (de la Vallée
    Poussin means of doubling degree), then factors ``p / p*`` as
    ``c B1 / B2``. The returned quotient already carries ``c`` and the
    extra ``zeta`` for odd parity.
    """
    f = UnimodularGridFunction(_grid(f).values)
    if not 0.0 < eps < 1.0:
        raise PreconditionError("eps must lie in (0, 1)")
    g, parity = square_root_lift(f)
    cap = degree_cap or f.n // 8
    zeta = f.points
    m = 1
    best = np.inf
    while m <= cap:
        coeffs = vallee_poussin_coefficients(g, m)
        p = FourierCoefficients.from_dict(coeffs)
        trig_error = float(np.max(np.abs(g.values - p.evaluate(zeta))))
        if trig_error < eps / 2:
            quotient, c = quotient_from_meromorphic(coeffs)
            if parity == "odd":
                quotient = BlaschkeQuotient(quotient.numerator * FiniteBlaschkeProduct.monomial(1), quotient.denominator)
            quotient = quotient.rotate(c)
            achieved = float(np.max(np.abs(f.values - quotient.evaluate(zeta))))
            best = min(best, achieved)
            if achieved < eps:
                report = ApproximationReport(eps, achieved, f.n, {"degree": m, "parity": parity, "trig_error": trig_error})
                return HelsonSarasonResult(quotient, parity, m, trig_error, report)
        m *= 2
    raise CapacityError(f"trigonometric degree cap {cap} reached before certifying eps={eps}", achieved=best)


# -- distance to H^infinity ------------------------------------------------------


@dataclass(frozen=True)
class DistanceReport:
    lower: float
    matrix_size: int

    def to_json(self):
        return {"lower": self.lower, "matrix_size": self.matrix_size}


def hankel_matrix(f, M):
    """``H[i, j] = f_{-(i + j + 1)}`` built from the anti-analytic coefficients."""
    idx = np.add.outer(np.arange(M), np.arange(M)) + 1
    return np.vectorize(lambda k: f[-k], otypes=[complex])(idx)


def hankel_distance_estimate(f, M):
    """Largest singular value of the ``M x M`` Hankel matrix of ``f``.

    A lower estimate of ``dist(f, H^infinity)`` that is nondecreasing in
    ``M`` and exact once ``M`` covers the anti-analytic support. ``f`` may
    be :class:`FourierCoefficients` or a mapping (zero outside its
    support) or a :class:`BoundaryGrid`, in which case ``2M - 1`` must not
    exceed ``n / 2``.
    """
    if M < 1:
        raise PreconditionError("truncation M must be at least 1")
    if isinstance(f, BoundaryGrid):
        if 2 * M - 1 > f.n // 2:
            raise InsufficientDataError(f"grid of size {f.n} has no coefficient of index {-(2 * M - 1)}")
        f = fourier(f)
    elif not isinstance(f, FourierCoefficients):
        f = FourierCoefficients.from_dict(f)
    H = hankel_matrix(f, M)
    return DistanceReport(float(np.linalg.norm(H, 2)), M)
