"""Coefficient-matching Blaschke approximants and convex decompositions.

The first half builds the Carathéodory sequence: a finite Blaschke
product ``B_n`` whose Taylor coefficients agree with those of ``f``
through order ``n``. The second half writes a dilated product
``B(tz)`` exactly as a convex combination of Blaschke products, which
together give convex combinations approximating any ``f`` in the ball
of the disc algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blaschke import FiniteBlaschkeProduct
from .combination import ConvexCombination, FactoredCombination
from .disc import BoundaryGrid, grid_angles
from .errors import CapacityError, DegenerateInputError, DomainError, InsufficientDataError, PreconditionError

UNIT_TOL = 1e-12
DEFAULT_ORDER_CAP = 64
DEFAULT_ITEM_CAP = 4**8
T_LADDER = (0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.88, 0.9, 0.92, 0.94, 0.95,
            0.96, 0.97, 0.98, 0.99, 0.995, 0.999)


@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients ``c_0 .. c_N`` of a power series centred at 0."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).ravel()
        if coeffs.size == 0:
            raise PreconditionError("Taylor series needs at least c_0")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self):
        return self.coeffs.size - 1

    def __getitem__(self, k):
        return complex(self.coeffs[k])

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return complex(out) if out.ndim == 0 else out

    __call__ = evaluate

    @classmethod
    def from_function_samples(cls, func, order, radius=0.5, n=None):
        """Coefficients from samples of ``func`` on a circle of the given radius."""
        n = n or max(256, 4 * (order + 1))
        z = radius * np.exp(1j * grid_angles(n))
        c = np.fft.fft(func(z)) / n
        k = np.arange(order + 1)
        return cls(c[: order + 1] / radius**k)

    def to_json(self):
        return {"coeffs": {str(k): [c.real, c.imag] for k, c in enumerate(self.coeffs)}}


def exp_shift_series(order=DEFAULT_ORDER_CAP - 1):
    """Taylor series of ``exp(z - 1)``, which has sup-norm 1 on the disc."""
    return TaylorSeries([math.exp(-1.0) / math.factorial(k) for k in range(order + 1)])


def _series_divide(num, den, order):
    """First ``order + 1`` coefficients of ``num / den`` (``den[0] != 0``)."""
    q = np.zeros(order + 1, dtype=complex)
    for n in range(order + 1):
        m = min(n, den.size - 1)
        acc = num[n] if n < num.size else 0j
        if m:
            acc -= np.dot(den[1 : m + 1], q[n - 1 :: -1][:m])
        q[n] = acc / den[0]
    return q


def caratheodory_step(f):
    """Coefficients of ``g(z) = tau_{c0}(f(z)) / z`` to order ``N - 1``.

    ``tau_{c0}(w) = (c0 - w) / (1 - conj(c0) w)`` is composed with ``f`` as
    power series, so ``g_0 = -c_1 / (1 - |c_0|^2)``.
    """
    c = f.coeffs
    c0 = c[0]
    if abs(c0) >= 1.0:
        raise PreconditionError("caratheodory_step needs |c_0| < 1")
    if f.order < 1:
        raise InsufficientDataError("caratheodory_step needs at least c_0 and c_1")
    num = -c.copy()
    num[0] += c0
    den = -np.conj(c0) * c
    den[0] += 1.0
    q = _series_divide(num, den, f.order)
    return TaylorSeries(q[1:])


def caratheodory_approximant(f, n):
    """Blaschke product of degree ``<= n`` matching ``c_0 .. c_n`` of ``f``.

    Parameters
    ----------
    f : TaylorSeries
        Coefficients of a function with sup norm at most 1 on the disc.
    n : int
        Number of matched coefficients beyond ``c_0``.

    Returns
    -------
    FiniteBlaschkeProduct
        ``B_0(z) = (z + c_0) / (1 + conj(c_0) z)`` and
        ``B_n = tau_{c0}(z * B_{n-1}[g])`` where ``g`` is the
        :func:`caratheodory_step` of ``f``. If ``|c_0| = 1`` the constant
        ``c_0`` is returned.
    """
    if n < 0:
        raise PreconditionError("order n must be nonnegative")
    if n > f.order:
        raise InsufficientDataError(f"order {n} requested but only {f.order + 1} coefficients given")
    c0 = f[0]
    if abs(c0) >= 1.0 - UNIT_TOL:
        return FiniteBlaschkeProduct(c0 / abs(c0))
    if n == 0:
        return FiniteBlaschkeProduct(-1.0, (-c0,))
    inner = caratheodory_approximant(caratheodory_step(f), n - 1)
    return (FiniteBlaschkeProduct.monomial(1) * inner).compose_mobius(c0)


# -- convex decompositions of dilated products -------------------------------


def fisher_decompose_factor(alpha, t):
    """Write ``(alpha - t z) / (1 - conj(alpha) t z)`` as a convex combination.

    The four items are the factor with zero ``alpha t``, the constant
    ``exp(i arg alpha)`` and the constants ``+1`` and ``-1``.
    """
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise DomainError("factor zero must lie in the open disc")
    if not 0.0 < t <= 1.0:
        raise DegenerateInputError("dilation t must lie in (0, 1]")
    a = abs(alpha)
    den = 1.0 - a * a * t * t
    w_factor = t * (1.0 - a * a) / den
    w_phase = a * (1.0 - t * t) / den
    w_pm = (1.0 - t) * (1.0 - a) / (2.0 * (1.0 + a * t))
    phase = np.exp(1j * np.angle(alpha)) if a > 0 else 1.0 + 0j
    items = (
        FiniteBlaschkeProduct(1.0, (alpha * t,)),
        FiniteBlaschkeProduct(phase),
        FiniteBlaschkeProduct(1.0),
        FiniteBlaschkeProduct(-1.0),
    )
    weights = np.array([w_factor, w_phase, w_pm, w_pm])
    # the closed forms sum to one exactly; absorb rounding into the largest weight
    weights[np.argmax(weights)] += 1.0 - weights.sum()
    return ConvexCombination(weights, items)


def fisher_factors(B, t):
    """Per-factor decompositions of ``B(tz)`` as a :class:`FactoredCombination`."""
    if B.degree == 0:
        return FactoredCombination((ConvexCombination([1.0], (B,)),))
    parts = [fisher_decompose_factor(a, t) for a in B.zeros]
    head = parts[0]
    parts[0] = ConvexCombination(head.weights, tuple(item.rotate(B.constant) for item in head.items))
    return FactoredCombination(tuple(parts))


def fisher_decompose_product(B, t, cap=DEFAULT_ITEM_CAP):
    """``B(tz)`` as a flat convex combination of at most ``4**degree`` products."""
    return fisher_factors(B, t).expand(cap)


@dataclass(frozen=True)
class FisherResult:
    combination: object
    t: float
    order: int
    achieved: float
    eps: float
    grid_n: int

    def certificate(self):
        return {
            "bound": self.eps,
            "achieved": self.achieved,
            "grid": self.grid_n,
            "t": self.t,
            "order": self.order,
            "certified": self.achieved < self.eps,
        }


def fisher_approximate(f, eps, grid=None, grid_n=1024, ladder=T_LADDER,
                       order_cap=DEFAULT_ORDER_CAP, item_cap=DEFAULT_ITEM_CAP):
    """Convex combination of Blaschke products within ``eps`` of ``f`` on the circle.

    Parameters
    ----------
    f : TaylorSeries or FiniteBlaschkeProduct
        The target; a product is returned as itself with weight one.
    eps : float
        Requested sup-norm accuracy on the boundary grid.
    grid : BoundaryGrid, optional
        Boundary samples of ``f``; computed from the series when omitted.

    Returns
    -------
    FisherResult
        ``combination`` is the dilated Carathéodory approximant ``B_n(tz)``
        written as a convex combination. When the flat expansion fits in
        ``item_cap`` items it is a :class:`ConvexCombination`, otherwise the
        equivalent :class:`FactoredCombination`. ``(t, n)`` is chosen by
        scanning ``n`` upward and ``t`` over ``ladder`` until the grid error
        is below ``eps``.
    """
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    zeta = np.exp(1j * grid_angles(grid_n))
    if isinstance(f, FiniteBlaschkeProduct):
        combo = ConvexCombination([1.0], (f,))
        return FisherResult(combo, 1.0, f.degree, 0.0, eps, grid_n)
    values = grid.values if isinstance(grid, BoundaryGrid) else f.evaluate(zeta)
    if grid is not None:
        grid_n = values.size
        zeta = np.exp(1j * grid_angles(grid_n))
    if np.max(np.abs(values)) > 1.0 + 1e-9:
        raise PreconditionError(f"sup norm {np.max(np.abs(values)):.6g} exceeds 1")
    if np.max(np.abs(f.coeffs)) == 0.0:
        combo = ConvexCombination([0.5, 0.5], (FiniteBlaschkeProduct(1.0), FiniteBlaschkeProduct(-1.0)))
        return FisherResult(combo, 0.0, 0, float(np.max(np.abs(values))), eps, grid_n)

    best = math.inf
    for n in range(min(order_cap, f.order) + 1):
        B = caratheodory_approximant(f, n)
        errs = [(float(np.max(np.abs(values - B.evaluate(t * zeta)))), t) for t in ladder]
        err, t = min(errs)
        best = min(best, err)
        if err < eps:
            factored = fisher_factors(B, t)
            achieved = float(np.max(np.abs(values - factored.evaluate(zeta))))
            if achieved >= eps:
                continue
            combo = factored.expand(item_cap) if factored.size <= item_cap else factored
            return FisherResult(combo, t, n, achieved, eps, grid_n)
        if B.degree == 0:
            break
    raise CapacityError(f"no (t, n) certified eps={eps} up to order {order_cap}; best {best:.4g}", achieved=best)
