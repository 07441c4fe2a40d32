"""Inner functions with atomic singular part and Frostman shifts.

Masses follow the un-normalized convention: the singular factor of an
atom of mass ``m`` at angle ``theta`` is
``exp(-(m / 2 pi) (e^{i theta} + z) / (e^{i theta} - z))``, and the
radial log-mean ``int_0^{2 pi} log|phi(r e^{it})| dt`` of such a factor is
exactly ``-m`` at every radius.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .blaschke import FiniteBlaschkeProduct
from .disc import grid_angles
from .errors import DomainError, PreconditionError, SearchError

log = logging.getLogger(__name__)

R_LADDER = (0.9, 0.99, 0.999, 0.9999)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InnerFunction:
    """Finite Blaschke product times an atomic singular inner function."""

    blaschke: FiniteBlaschkeProduct = FiniteBlaschkeProduct()
    atoms: tuple = ()

    def __post_init__(self):
        atoms = []
        for theta, mass in self.atoms:
            if not mass > 0:
                raise PreconditionError(f"atom masses must be positive, got {mass}")
            atoms.append((float(theta) % TWO_PI, float(mass)))
        object.__setattr__(self, "atoms", tuple(atoms))

    @property
    def total_mass(self):
        return sum(m for _, m in self.atoms)

    def singular_exponent(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for theta, mass in self.atoms:
            e = np.exp(1j * theta)
            out = out - (mass / TWO_PI) * (e + z) / (e - z)
        return out

    def _check_interior(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise DomainError("inner functions are evaluated strictly inside the disc")
        return z

    def evaluate(self, z):
        z = self._check_interior(z)
        out = np.asarray(self.blaschke.evaluate(z)) * np.exp(self.singular_exponent(z))
        return complex(out) if out.ndim == 0 else out

    __call__ = evaluate

    def log_abs(self, z):
        """``log|phi(z)|`` without underflow near heavy atoms."""
        z = self._check_interior(z)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.blaschke.evaluate(z))) + self.singular_exponent(z).real

    def __mul__(self, other):
        if isinstance(other, InnerFunction):
            return InnerFunction(self.blaschke * other.blaschke, self.atoms + other.atoms)
        return NotImplemented

    def to_json(self):
        return {"fbp": self.blaschke.to_json(), "atoms": [{"theta": t, "mass": m} for t, m in self.atoms]}

    @classmethod
    def from_json(cls, data):
        fbp = FiniteBlaschkeProduct.from_json(data.get("fbp", {}))
        atoms = tuple((a["theta"], a["mass"]) for a in data.get("atoms", []))
        return cls(fbp, atoms)


@dataclass(frozen=True)
class ShiftedInner:
    """``sign * tau_w(phi(z))`` with ``tau_w(x) = (w - x) / (1 - conj(w) x)``."""

    base: object
    w: complex
    sign: float = 1.0

    def __post_init__(self):
        if abs(self.w) >= 1.0:
            raise DomainError("shift parameter must lie in the open disc")

    def evaluate(self, z):
        v = np.asarray(self.base.evaluate(z))
        out = self.sign * (self.w - v) / (1.0 - np.conj(self.w) * v)
        return complex(out) if out.ndim == 0 else out

    __call__ = evaluate

    def log_abs(self, z):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(np.asarray(self.evaluate(z))))

    def to_json(self):
        return {"shift": [self.w.real, self.w.imag], "sign": self.sign, "base": self.base.to_json()}


def frostman_shift(phi, w):
    """The evaluator ``z -> tau_w(phi(z))``."""
    return ShiftedInner(phi, complex(w))


GRID_CAP = 1 << 18


def _radial_grid_size(r, grid_n, zeros=()):
    # log|phi(r e^{it})| is analytic in a strip of width ~ (1 - r), and of
    # width |log(|a| / r)| around a zero a; the periodic trapezoid rule then
    # converges like exp(-n * width)
    width = 1.0 - r
    for a in zeros:
        if abs(a) > 0:
            width = min(width, abs(math.log(abs(a) / r)) if r > 0 else math.inf)
    need = 40.0 / max(width, 40.0 / GRID_CAP)
    return max(grid_n, 1 << int(math.ceil(math.log2(need))))


def radial_log_mean(phi, r, grid_n=256):
    """Trapezoid value of ``int_0^{2 pi} log|phi(r e^{it})| dt``.

    ``grid_n`` is raised automatically so that the rule resolves the
    boundary layer of width ``1 - r`` and, for an :class:`InnerFunction`,
    the log singularities of zeros near the circle of radius ``r``.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError("radius must lie in [0, 1)")
    if grid_n < 256:
        raise PreconditionError("grid_n must be at least 256")
    zeros = getattr(getattr(phi, "blaschke", None), "zeros", ())
    n = _radial_grid_size(r, grid_n, zeros)
    t = grid_angles(n)
    vals = phi.log_abs(r * np.exp(1j * t))
    if not np.all(np.isfinite(vals)):
        log.info("grid node hit a zero at r=%g; shifting nodes by half a step", r)
        vals = phi.log_abs(r * np.exp(1j * (t + math.pi / n)))
    return float(TWO_PI * np.mean(vals))


def extrapolate_limit(radii, values):
    """Limit as ``r -> 1`` of a fit ``L + a h + b h^2`` in ``h = sqrt(1 - r)``.

    Uses the last three ladder points (fewer terms for shorter ladders).
    Pure Blaschke products with finitely many zeros behave like ``h^2``;
    Frostman shifts of singular functions add the ``h`` term.
    """
    radii = np.asarray(radii, dtype=float)[-3:]
    values = np.asarray(values, dtype=float)[-3:]
    h = np.sqrt(1.0 - radii)
    A = np.vander(h, len(h), increasing=True)
    return float(np.linalg.solve(A, values)[0])


@dataclass(frozen=True)
class BlaschkeVerdict:
    verdict: bool
    estimated_mass: float
    tol: float
    ladder: tuple
    log_means: tuple

    def to_json(self):
        return {"verdict": self.verdict, "estimated_mass": self.estimated_mass, "tol": self.tol,
                "ladder": list(self.ladder), "log_means": list(self.log_means)}


def is_blaschke_test(phi, r_ladder=R_LADDER, tol=None, grid_n=256):
    """Decide from radial log-means whether ``phi`` is a Blaschke product.

    The log-mean tends to ``-sigma(T)``; the limit is extrapolated from
    ``r_ladder`` and ``estimated_mass = max(0, -limit)``. The default
    tolerance is ``1e-2 * (1 + |I(r_0)| / (2 pi))``.
    """
    r_ladder = tuple(float(r) for r in r_ladder)
    if len(r_ladder) < 2 or any(b <= a for a, b in zip(r_ladder, r_ladder[1:])):
        raise PreconditionError("r_ladder must be strictly increasing with at least two radii")
    if r_ladder[0] < 0 or r_ladder[-1] >= 1:
        raise PreconditionError("r_ladder must lie in [0, 1)")
    values = tuple(radial_log_mean(phi, r, grid_n) for r in r_ladder)
    mass = max(0.0, -extrapolate_limit(r_ladder, values))
    if tol is None:
        tol = 1e-2 * (1.0 + abs(values[0]) / TWO_PI)
    return BlaschkeVerdict(mass <= tol, mass, tol, r_ladder, values)


@dataclass(frozen=True)
class FrostmanCertificate:
    w: complex
    rho: float
    bound: float
    eps: float
    residual_mass: float
    tol: float
    achieved: float
    attempts: int

    def to_json(self):
        return {"w": [self.w.real, self.w.imag], "rho": self.rho, "bound": self.bound, "eps": self.eps,
                "residual_mass": self.residual_mass, "tol": self.tol, "achieved": self.achieved,
                "attempts": self.attempts, "certified": self.achieved <= self.bound < self.eps}


def disc_grid(radii=None, n_angles=256):
    radii = np.linspace(0.0, 0.999, 40) if radii is None else np.asarray(radii)
    t = grid_angles(n_angles)
    return (radii[:, None] * np.exp(1j * t)[None, :]).ravel()


def frostman_approximate(phi, eps, seed=0, n_angles=64, r_ladder=R_LADDER, restarts=64, grid_n=256):
    """Blaschke product ``-tau_w o phi`` within ``2 rho / (1 - rho) < eps`` of ``phi``.

    ``rho = 0.9 eps / (2 + eps)``; the angle of ``w = rho e^{i theta}`` is
    scanned over ``n_angles`` equispaced values and then over ``restarts``
    seeded random angles until the shift passes :func:`is_blaschke_test`.

    Returns
    -------
    (ShiftedInner, FrostmanCertificate)
    """
    if not 0.0 < eps <= 1.0:
        raise PreconditionError("eps must lie in (0, 1]")
    rho = 0.9 * eps / (2.0 + eps)
    bound = 2.0 * rho / (1.0 - rho)
    rng = np.random.default_rng(seed)
    angles = list(grid_angles(n_angles)) + list(rng.uniform(0.0, TWO_PI, restarts))
    for attempt, theta in enumerate(angles, start=1):
        w = rho * complex(math.cos(theta), math.sin(theta))
        shifted = frostman_shift(phi, w)
        verdict = is_blaschke_test(shifted, r_ladder, grid_n=grid_n)
        if verdict.verdict:
            z = disc_grid()
            achieved = float(np.max(np.abs(phi.evaluate(z) + shifted.evaluate(z))))
            B = ShiftedInner(phi, w, sign=-1.0)
            cert = FrostmanCertificate(w, rho, bound, eps, verdict.estimated_mass, verdict.tol, achieved, attempt)
            return B, cert
    raise SearchError(f"no Frostman shift of modulus {rho:.4g} passed the Blaschke test in {len(angles)} tries")
