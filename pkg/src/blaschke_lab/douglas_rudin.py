"""Unimodular step functions as quotients of inner functions.

The conformal chain is ``g(z) = (K'/pi) log z`` from the slit annulus
``r < |z| < R`` onto the rectangle ``(-K, K) x (-K', K')``, then Jacobi
``sn`` onto the doubly slit plane, then a Möbius map ``M`` sending the
real line to the unit circle. The composite ``Phi = M o sn o g`` maps the
inner circle onto the arc from ``1`` to ``e^{-i eps}`` and the outer
circle onto the arc from ``e^{i(theta0 + eps)}`` to ``e^{i theta0}``.

For a set of arcs ``E`` the step ``u = +-pi K / K'`` has an explicit
analytic completion ``U + iV``, and ``Psi = Phi(exp(U + iV))`` is within
``eps`` of the two-valued function ``e^{i theta0} 1_E + 1_{T \\ E}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .disc import BoundaryGrid, grid_angles
from .elliptic import EllipticParameters, _check_gap, _sn_cn_dn, _small_root
from .errors import NumericalError, PreconditionError, ResolutionError
from .unimodular import negative_frequency_ratio

TWO_PI = 2.0 * math.pi


# -- arc sets --------------------------------------------------------------------


@dataclass(frozen=True)
class ArcSet:
    """Finite union of disjoint arcs ``[a, b)`` with ``0 <= a < 2 pi`` and ``a < b <= a + 2 pi``."""

    arcs: tuple = ()

    def __post_init__(self):
        arcs = []
        for a, b in self.arcs:
            a, b = float(a), float(b)
            if not b > a:
                raise PreconditionError(f"arc [{a}, {b}) is empty or reversed")
            if b - a > TWO_PI + 1e-12:
                raise PreconditionError("an arc cannot exceed the full circle")
            shift = math.floor(a / TWO_PI) * TWO_PI
            arcs.append((a - shift, min(b - shift, a - shift + TWO_PI)))
        arcs.sort()
        if len(arcs) > 1:
            for (a1, b1), (a2, _) in zip(arcs, arcs[1:] + [(arcs[0][0] + TWO_PI, 0.0)]):
                if b1 > a2 + 1e-12:
                    raise PreconditionError("arcs overlap")
        object.__setattr__(self, "arcs", tuple(arcs))

    @classmethod
    def full(cls):
        return cls(((0.0, TWO_PI),))

    @property
    def measure(self):
        return sum(b - a for a, b in self.arcs)

    @property
    def is_full(self):
        return abs(self.measure - TWO_PI) < 1e-12

    def endpoints(self):
        if self.is_full:
            return np.array([])
        return np.array([x % TWO_PI for arc in self.arcs for x in arc])

    def contains(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        out = np.zeros(theta.shape, dtype=bool)
        for a, b in self.arcs:
            out |= np.mod(theta - a, TWO_PI) < (b - a)
        if self.is_full:
            out[:] = True
        return out

    @classmethod
    def from_mask(cls, mask):
        """Arcs covering the masked grid samples, with edges halfway between samples."""
        mask = np.asarray(mask, dtype=bool)
        n = mask.size
        h = TWO_PI / n
        if mask.all():
            return cls.full()
        if not mask.any():
            return cls()
        start = int(np.argmin(mask))  # a sample outside the set
        rolled = np.roll(mask, -start)
        arcs = []
        j = 0
        while j < n:
            if rolled[j]:
                i = j
                while j < n and rolled[j]:
                    j += 1
                a = ((i + start) % n - 0.5) * h
                b = a + (j - i) * h
                arcs.append((a % TWO_PI, a % TWO_PI + (b - a)))
            else:
                j += 1
        return cls(tuple(arcs))

    def to_json(self):
        return {"arcs": [[a, b] for a, b in self.arcs]}


def arc_indicator_analytic(a, b, z):
    """Holomorphic ``H`` on the disc with ``Re H = 1_{[a, b)}`` on the circle and ``H(0)`` real.

    ``H(z) = (1 / (pi i)) log((e^{ib} - z) / (e^{ia} - z)) - (b - a) / (2 pi)``
    with the argument taken in ``[0, 2 pi)``. The formula stays valid at
    boundary points other than the two endpoints.
    """
    z = np.asarray(z, dtype=complex)
    if b - a >= TWO_PI - 1e-15:
        return np.ones(z.shape, dtype=complex)
    w = (np.exp(1j * b) - z) / (np.exp(1j * a) - z)
    arg = np.mod(np.angle(w), TWO_PI)
    return arg / math.pi - 1j * np.log(np.abs(w)) / math.pi - (b - a) / TWO_PI


def step_completion(arcs, level, z):
    """``U + iV`` for the step ``u = +level`` on the arcs and ``-level`` elsewhere, ``V(0) = 0``."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, -level, dtype=complex)
    for a, b in arcs.arcs:
        out = out + 2.0 * level * arc_indicator_analytic(a, b, z)
    return out


# -- the conformal map -------------------------------------------------------------


def anchor_modulus(theta0, eps):
    """Modulus for which one Möbius map realizes all four boundary anchors.

    Matching the cross-ratio of ``(-1/k, -1, 1, 1/k)`` with that of
    ``(1, e^{-i eps}, e^{i(theta0 + eps)}, e^{i theta0})`` gives
    ``(k - 1)^2 / (4k) = sin^2(eps/2) / (sin(theta0/2) sin(theta0/2 + eps))``.
    """
    _check_gap(theta0, eps)
    s = math.sin(eps / 2.0) ** 2 / (math.sin(theta0 / 2.0) * math.sin(theta0 / 2.0 + eps))
    return _small_root(s)


@dataclass(frozen=True)
class DouglasRudinMap:
    """``Phi = M o sn o g`` from the annulus ``r < |z| < R`` to the plane minus two arcs."""

    params: EllipticParameters
    theta0: float
    eps: float
    alpha: float
    beta: float
    ell: float
    ell_prime: float
    pole: complex = 0j
    bound_C: float = math.nan
    pole_residual: float = math.nan

    def mobius(self, x):
        """``M(x) = (k(i - a) x + (i b - a)) / (k(i + a) x + (i b + a))``; ``M(inf) = (i - a)/(i + a)``."""
        k, a, b = self.params.k, self.alpha, self.beta
        x = np.asarray(x, dtype=complex)
        inf = ~np.isfinite(x)
        xs = np.where(inf, 0.0, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (k * (1j - a) * xs + (1j * b - a)) / (k * (1j + a) * xs + (1j * b + a))
        out = np.where(inf, (1j - a) / (1j + a), out)
        return complex(out) if out.ndim == 0 else out

    @property
    def mobius_pole(self):
        k, a, b = self.params.k, self.alpha, self.beta
        return -(1j * b + a) / (k * (1j + a))

    def g(self, z):
        return (self.params.K_prime / math.pi) * np.log(np.asarray(z, dtype=complex))

    def h(self, z):
        return _sn_cn_dn(self.g(z), self.params.k)[0]

    def evaluate(self, z):
        out = self.mobius(self.h(z))
        return out

    __call__ = evaluate

    def anchors(self):
        """Images of ``-1/k, -1, 1, 1/k`` and their targets."""
        k = self.params.k
        pts = np.array([-1.0 / k, -1.0, 1.0, 1.0 / k])
        targets = np.exp(1j * np.array([0.0, -self.eps, self.theta0 + self.eps, self.theta0]))
        return self.mobius(pts), targets

    def to_json(self):
        return {"params": self.params.to_json(), "theta0": self.theta0, "eps": self.eps,
                "alpha": self.alpha, "beta": self.beta, "ell": self.ell, "ell_prime": self.ell_prime,
                "pole": [self.pole.real, self.pole.imag], "C": self.bound_C,
                "pole_residual": self.pole_residual}


def _solve_sn(target, k, K, Kp, tol=1e-10):
    """``w`` in the rectangle with ``sn(w) = target`` by seeded Newton."""
    xs = np.linspace(-K, K, 81)[1:-1]
    ys = np.linspace(-Kp, Kp, 81)[1:-1]
    W = xs[None, :] + 1j * ys[:, None]
    S = _sn_cn_dn(W, k)[0]
    w = complex(W.flat[int(np.nanargmin(np.abs(S - target)))])
    trace = []
    for _ in range(60):
        s, c, d = (complex(v) for v in _sn_cn_dn(w, k))
        res = abs(s - target)
        trace.append(res)
        if res <= tol * max(1.0, abs(target)) * 1e-3:
            break
        w = w - (s - target) / (c * d)
        w = complex(min(max(w.real, -K), K), min(max(w.imag, -Kp), Kp))
    s = complex(_sn_cn_dn(w, k)[0])
    res = abs(s - target)
    if res > tol:
        raise NumericalError(f"pole Newton stalled; residual trace {trace[-5:]}", residual=res)
    return w, res


def build_map(theta0, eps, n_sample=(48, 256)):
    """Construct ``Phi`` with its Möbius data, pole ``p`` and bound ``C >= |(z - p) Phi(z)|``."""
    k = anchor_modulus(theta0, eps)
    params = EllipticParameters.from_modulus(k)
    ell = math.tan(theta0 / 2.0)
    te = math.tan(eps / 2.0)
    den = ell * (1.0 - k) + 2.0 * te
    alpha = (1.0 + k) * ell * te / den
    beta = (-(1.0 - k) * ell + 2.0 * k * te) / den
    ell_prime = ell * (1.0 + (k - 1.0) ** 2 / (4.0 * k))
    m = DouglasRudinMap(params, theta0, eps, alpha, beta, ell, ell_prime)
    w, res = _solve_sn(m.mobius_pole, k, params.K, params.K_prime)
    pole = complex(np.exp(math.pi * w / params.K_prime))
    radii = np.exp(np.linspace(-params.log_radius, params.log_radius, n_sample[0]))
    t = grid_angles(n_sample[1]) + math.pi / n_sample[1] - math.pi
    z = (radii[:, None] * np.exp(1j * t)[None, :]).ravel()
    C = float(np.max(np.abs((z - pole) * m.evaluate(z))))
    return DouglasRudinMap(params, theta0, eps, alpha, beta, ell, ell_prime, pole, C, res)


# -- two-valued approximation ------------------------------------------------------


def _endpoint_distance(theta, endpoints):
    if endpoints.size == 0:
        return np.full(np.shape(theta), np.inf)
    d = np.abs(np.mod(theta[:, None] - endpoints[None, :] + math.pi, TWO_PI) - math.pi)
    return d.min(axis=1)


def check_resolution(arcs, n):
    """Raise if an arc endpoint sits on a grid node or two endpoints share a grid cell."""
    ends = np.sort(arcs.endpoints())
    h = TWO_PI / n
    if ends.size == 0:
        return
    offset = np.abs(np.mod(ends / h + 0.5, 1.0) - 0.5)
    if np.min(offset) < 1e-9:
        raise ResolutionError("an arc endpoint coincides with a grid node; shift the arcs or change the grid")
    gaps = np.diff(np.append(ends, ends[0] + TWO_PI))
    if np.min(gaps) < h:
        raise ResolutionError("two arc endpoints fall within one grid step; refine the grid")


@dataclass(frozen=True)
class TwoValuedQuotient:
    """``Psi = Phi o exp(U + iV)`` for a step on ``arcs``; conjugated when ``conjugate``."""

    map: DouglasRudinMap
    arcs: ArcSet
    conjugate: bool = False

    def F(self, z):
        return np.exp(step_completion(self.arcs, self.map.params.log_radius, z))

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.map.evaluate(self.F(z))
        if self.conjugate:
            # on the circle conj(Psi) = 1 / Psi, again a quotient of inner functions
            out = 1.0 / out
        return out

    __call__ = evaluate

    @property
    def target_angle(self):
        return -self.map.theta0 if self.conjugate else self.map.theta0

    def to_json(self):
        return {"map": self.map.to_json(), "arcs": self.arcs.to_json(), "conjugate": self.conjugate}


@dataclass(frozen=True)
class DouglasRudinReport:
    bound: float
    achieved: float
    grid: int
    buffer: int
    excluded: int
    unimodular_deviation: float
    inner_negative_energy: float
    extra: dict = field(default_factory=dict)

    @property
    def certified(self):
        return self.achieved <= self.bound

    def to_json(self):
        out = {"bound": self.bound, "achieved": self.achieved, "grid": self.grid, "buffer": self.buffer,
               "excluded_samples": self.excluded, "unimodular_deviation": self.unimodular_deviation,
               "inner_negative_energy": self.inner_negative_energy, "certified": self.certified}
        out.update(self.extra)
        return out


def inner_certificate(quotient, grid_n, oversample=16):
    """Relative negative-frequency energy of ``(F - p) Psi`` on the circle.

    ``F`` spirals near each arc endpoint, so samples there alias positive
    frequencies onto negative ones at a rate of order ``1 / n``. The
    certificate therefore samples ``oversample * grid_n`` points, rotated by
    a third of a step so that no node meets an endpoint.
    """
    n = grid_n * oversample
    zeta = np.exp(1j * (grid_angles(n) + math.pi / (3 * n)))
    F = quotient.F(zeta)
    psi = quotient.map.evaluate(F)
    return negative_frequency_ratio(BoundaryGrid((F - quotient.map.pole) * psi))


def two_valued_approximate(E, theta0, eps, grid_n=4096, buffer=2):
    """Quotient of inner functions within ``eps`` of ``e^{i theta0} 1_E + 1_{T \\ E}``.

    Returns
    -------
    (TwoValuedQuotient, DouglasRudinReport)
        The report certifies the sup error over grid samples more than
        ``buffer`` steps away from every arc endpoint, the unimodularity
        of ``Psi`` there, and the inner certificate of ``(F - p) Psi``.
    """
    if not isinstance(E, ArcSet):
        E = ArcSet(tuple(E))
    check_resolution(E, grid_n)
    m = build_map(theta0, eps)
    q = TwoValuedQuotient(m, E)
    theta = grid_angles(grid_n)
    zeta = np.exp(1j * theta)
    psi = q.evaluate(zeta)
    target = np.where(E.contains(theta), np.exp(1j * theta0), 1.0)
    keep = _endpoint_distance(theta, E.endpoints()) >= buffer * TWO_PI / grid_n
    achieved = float(np.max(np.abs(target - psi)[keep]))
    unimod = float(np.max(np.abs(np.abs(psi[keep]) - 1.0)))
    report = DouglasRudinReport(eps, achieved, grid_n, buffer, int((~keep).sum()), unimod,
                                inner_certificate(q, grid_n), {"theta0": theta0, "k": m.params.k})
    return q, report


# -- general unimodular functions ---------------------------------------------------


@dataclass(frozen=True)
class QuotientProduct:
    """Product of two-valued quotients, itself a quotient of inner functions."""

    factors: tuple
    constant: complex = 1.0 + 0j

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for f in self.factors:
            out = out * f.evaluate(z)
        return out

    __call__ = evaluate

    def to_json(self):
        return {"constant": [self.constant.real, self.constant.imag],
                "factors": [f.to_json() for f in self.factors]}


def _level_factors(arcs, angle, accuracy):
    """Two-valued quotients for the step ``e^{i angle}`` on ``arcs``, ``angle`` in ``(0, 2 pi)``."""
    if abs(angle - math.pi) < 1e-12:
        return _level_factors(arcs, math.pi / 2, accuracy / 2) * 2
    conj = angle > math.pi
    theta = TWO_PI - angle if conj else angle
    gap = min(accuracy, 0.5 * min(theta, math.pi - theta))
    return [TwoValuedQuotient(build_map(theta, gap), arcs, conjugate=conj)]


def _two_values(values, tol=1e-12):
    """``theta0`` when the grid takes only the values 1 and ``e^{i theta0}``, ``0 < theta0 < pi``."""
    other = values[np.abs(values - 1.0) > tol]
    if other.size == 0 or np.max(np.abs(other - other[0])) > tol:
        return None
    theta0 = float(np.angle(other[0]))
    return theta0 if 0.0 < theta0 < math.pi else None


def douglas_rudin_approximate(phi, eps, buffer=2):
    """Product of quotients of inner functions within ``2 eps`` of a unimodular grid ``phi``.

    ``phi`` is rounded to ``N = ceil(2 pi / eps) + 1`` levels
    ``e^{2 pi i k / N}``; each level set becomes a two-valued step
    approximated to ``eps / N``. Steps with angle above ``pi`` use the
    conjugate construction and the step at ``pi`` is split into two steps
    at ``pi / 2``.

    Returns
    -------
    (QuotientProduct, DouglasRudinReport)
    """
    phi = phi if isinstance(phi, BoundaryGrid) else BoundaryGrid(phi)
    vals = phi.values
    if np.max(np.abs(np.abs(vals) - 1.0)) > 1e-10:
        raise PreconditionError("phi must be unimodular on the grid")
    if not 0.0 < eps < 1.0:
        raise PreconditionError("eps must lie in (0, 1)")
    n = phi.n
    theta = phi.theta
    shortcut = _two_values(vals)
    if shortcut is not None and eps < min(shortcut, math.pi - shortcut):
        E = ArcSet.from_mask(np.abs(vals - 1.0) > 1e-12)
        q, rep = two_valued_approximate(E, shortcut, eps, n, buffer)
        return QuotientProduct((q,)), rep
    N = math.ceil(TWO_PI / eps) + 1
    args = np.mod(np.angle(vals), TWO_PI)
    level = np.minimum(np.floor(args * N / TWO_PI).astype(int) + 1, N)
    factors, endpoints = [], []
    for k in range(1, N):  # level N has value e^{2 pi i} = 1
        mask = level == k
        if not mask.any():
            continue
        arcs = ArcSet.from_mask(mask)
        endpoints.append(arcs.endpoints())
        factors.extend(_level_factors(arcs, TWO_PI * k / N, eps / N))
    product = QuotientProduct(tuple(factors))
    zeta = phi.points
    psi = product.evaluate(zeta)
    ends = np.concatenate(endpoints) if endpoints else np.array([])
    keep = _endpoint_distance(theta, ends) >= buffer * TWO_PI / n
    achieved = float(np.max(np.abs(vals - psi)[keep])) if keep.any() else 0.0
    unimod = float(np.max(np.abs(np.abs(psi[keep]) - 1.0))) if keep.any() else 0.0
    energies = [inner_certificate(f, n) for f in factors]
    report = DouglasRudinReport(2.0 * eps, achieved, n, buffer, int((~keep).sum()), unimod,
                                max(energies, default=0.0), {"levels": N, "factors": len(factors)})
    return product, report
