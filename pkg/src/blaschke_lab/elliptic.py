"""Complete elliptic integrals and Jacobi elliptic functions.

Everything is driven by the arithmetic-geometric mean chain of
``(1, k')``: the complete integral is ``pi / (2 AGM)`` and the real
Jacobi functions come from the descending Landen recursion over the
same chain. Complex ``sn`` uses the addition theorem with the
complementary modulus along the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, PreconditionError

_AGM_TOL = 1e-15
_MAX_CHAIN = 64


def _check_modulus(k):
    if not 0.0 < k < 1.0:
        raise PreconditionError(f"elliptic modulus must lie in (0, 1), got {k!r}")


def agm_chain(k):
    """Lists ``a_n, c_n`` of the AGM chain started at ``a_0 = 1, b_0 = k'``.

    ``c_0 = k`` and ``c_{n+1} = (a_n - b_n) / 2``.
    """
    a, b, c = 1.0, math.sqrt((1.0 - k) * (1.0 + k)), k
    a_list, c_list = [a], [c]
    while abs(c) > _AGM_TOL * a:
        if len(a_list) > _MAX_CHAIN:
            raise NumericalError("AGM chain did not converge")
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_list.append(a)
        c_list.append(c)
    return a_list, c_list


def complete_elliptic_K(k):
    """``K(k) = int_0^1 dt / sqrt((1 - t^2)(1 - k^2 t^2))`` via the AGM."""
    _check_modulus(k)
    a_list, _ = agm_chain(k)
    return math.pi / (2.0 * a_list[-1])


def jacobi_real(u, k):
    """``(sn, cn, dn)`` at real ``u`` for ``0 <= k < 1`` by descending Landen.

    Vectorized over ``u``.
    """
    u = np.asarray(u, dtype=float)
    if k == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    a_list, c_list = agm_chain(k)
    n = len(a_list) - 1
    phi = (2.0**n) * a_list[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c_list[j] * np.sin(phi) / a_list[j], -1.0, 1.0)))
    sn, cn = np.sin(phi), np.cos(phi)
    # dn > 0 on the real axis; the square root avoids the 0/0 of the
    # Landen ratio cos(phi_0) / cos(phi_1 - phi_0) at odd multiples of K
    dn = np.sqrt((1.0 - k * sn) * (1.0 + k * sn))
    return sn, cn, dn


@dataclass(frozen=True)
class EllipticParameters:
    """Modulus ``k`` with its quarter periods and the associated annulus radii."""

    k: float
    k_prime: float
    K: float
    K_prime: float
    r_inner: float
    R_outer: float

    @classmethod
    def from_modulus(cls, k):
        _check_modulus(k)
        kp = math.sqrt((1.0 - k) * (1.0 + k))
        K = complete_elliptic_K(k)
        Kp = complete_elliptic_K(kp)
        ratio = math.pi * K / Kp
        return cls(k, kp, K, Kp, math.exp(-ratio), math.exp(ratio))

    @property
    def log_radius(self):
        """``pi K / K'``, the log of the outer radius."""
        return math.pi * self.K / self.K_prime

    def to_json(self):
        return {"k": self.k, "k_prime": self.k_prime, "K": self.K, "K_prime": self.K_prime,
                "r_inner": self.r_inner, "R_outer": self.R_outer}


def _sn_cn_dn(z, k):
    """Complex ``sn, cn, dn`` by the addition theorem (no domain check)."""
    z = np.asarray(z, dtype=complex)
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    s, c, d = jacobi_real(z.real, k)
    s1, c1, d1 = jacobi_real(z.imag, kp)
    den = c1 * c1 + (k * s * s1) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        sn = (s * d1 + 1j * c * d * s1 * c1) / den
        cn = (c * c1 - 1j * s * d * s1 * d1) / den
        dn = (d * c1 * d1 - 1j * k * k * s * c * s1) / den
    # den vanishes quadratically at the poles +-iK' (mod periods)
    pole = den <= 1e-24
    if np.any(pole):
        sn = np.where(pole, complex(np.inf, 0.0), sn)
    return sn, cn, dn


def jacobi_sn(z, k, params=None):
    """Jacobi ``sn(z | k)`` on the closed rectangle ``[-K, K] x [-K', K']``.

    Maps the open rectangle conformally onto the plane slit along
    ``(-inf, -1]`` and ``[1, inf)``. The poles ``+-iK'`` return complex
    infinity.
    """
    _check_modulus(k)
    params = params or EllipticParameters.from_modulus(k)
    z = np.asarray(z, dtype=complex)
    slack = 1e-9
    if np.any(np.abs(z.real) > params.K * (1 + slack)) or np.any(np.abs(z.imag) > params.K_prime * (1 + slack)):
        raise DomainError("jacobi_sn argument lies outside the fundamental rectangle")
    sn = _sn_cn_dn(z, k)[0]
    return complex(sn) if sn.ndim == 0 else sn


def solve_modulus(theta0, eps):
    """Root in ``(0, 1)`` of ``(k - 1)^2 / (4k) = tan((theta0 + eps)/2) / tan(theta0/2) - 1``.

    Equivalent to the quadratic ``k^2 - (2 + 4R) k + 1 = 0``; the smaller
    root is taken in the cancellation-free form ``2 / (b + sqrt(b^2 - 4))``.
    """
    _check_gap(theta0, eps)
    R = math.tan((theta0 + eps) / 2.0) / math.tan(theta0 / 2.0) - 1.0
    if R <= 0:
        raise NumericalError("modulus relation has a nonpositive right-hand side")
    return _small_root(R)


def modulus_residual(k, theta0, eps):
    R = math.tan((theta0 + eps) / 2.0) / math.tan(theta0 / 2.0) - 1.0
    return abs((k - 1.0) ** 2 / (4.0 * k) - R)


def _small_root(R):
    b = 2.0 + 4.0 * R
    return 2.0 / (b + math.sqrt(b * b - 4.0))


def _check_gap(theta0, eps):
    if not 0.0 < theta0 < math.pi:
        raise PreconditionError("theta0 must lie in (0, pi)")
    if not 0.0 < eps < min(theta0, math.pi - theta0):
        raise PreconditionError("eps must lie in (0, min(theta0, pi - theta0))")
