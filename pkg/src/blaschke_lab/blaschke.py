"""Finite Blaschke products and quotients of them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .disc import FourierCoefficients, grid_angles
from .errors import DegenerateInputError, DomainError, NumericalError, PreconditionError

CONSTANT_TOL = 1e-9
ROOT_RESIDUAL_TOL = 1e-10


def _as_points(z):
    return np.asarray(z, dtype=complex)


def _scalar_or_array(out):
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class FiniteBlaschkeProduct:
    """``c * prod_k (a_k - z) / (1 - conj(a_k) z)`` with ``|c| = 1`` and ``|a_k| < 1``.

    Zeros are stored with multiplicity by repetition. Degree 0 is the
    unimodular constant ``c``.
    """

    constant: complex = 1.0 + 0j
    zeros: tuple = ()

    def __post_init__(self):
        c = complex(self.constant)
        if abs(abs(c) - 1.0) > CONSTANT_TOL:
            raise PreconditionError(f"Blaschke constant must be unimodular, got |c|={abs(c)!r}")
        zeros = tuple(complex(a) for a in np.atleast_1d(np.asarray(self.zeros, dtype=complex)))
        for a in zeros:
            if not abs(a) < 1.0:
                raise DomainError(f"Blaschke zero {a} is not inside the unit disc")
        object.__setattr__(self, "constant", c / abs(c))
        object.__setattr__(self, "zeros", zeros)

    # -- constructors -------------------------------------------------

    @classmethod
    def monomial(cls, n, constant=1.0):
        """``constant * z**n``."""
        return cls(constant * (-1) ** n, (0j,) * n)

    @classmethod
    def factor(cls, a):
        """The single factor ``(a - z) / (1 - conj(a) z)``."""
        return cls(1.0, (a,))

    @classmethod
    def random(cls, rng, degree, radius=0.9, with_origin=False):
        """Random product with zeros uniform in the disc of the given radius."""
        n_free = degree - 1 if with_origin else degree
        mod = radius * np.sqrt(rng.uniform(0.0, 1.0, n_free))
        zeros = list(mod * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n_free)))
        if with_origin:
            zeros = [0j] + zeros
        return cls(np.exp(2j * np.pi * rng.uniform()), tuple(zeros))

    # -- basic structure ----------------------------------------------

    @property
    def degree(self):
        return len(self.zeros)

    def __mul__(self, other):
        if isinstance(other, FiniteBlaschkeProduct):
            return FiniteBlaschkeProduct(self.constant * other.constant, self.zeros + other.zeros)
        return NotImplemented

    def rotate(self, u):
        """Multiply by the unimodular constant ``u``."""
        return FiniteBlaschkeProduct(self.constant * u, self.zeros)

    def numerator_denominator(self):
        """Polynomial coefficients (ascending powers) of ``B = N / D``."""
        num = np.array([self.constant])
        den = np.array([1.0 + 0j])
        for a in self.zeros:
            num = np.convolve(num, [a, -1.0])
            den = np.convolve(den, [1.0, -np.conj(a)])
        return num, den

    # -- evaluation ---------------------------------------------------

    def evaluate(self, z):
        z = _as_points(z)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a in self.zeros:
            out = out * (a - z) / (1.0 - np.conj(a) * z)
        return _scalar_or_array(out)

    __call__ = evaluate

    def derivative(self, z):
        """``B'(z)`` by the product rule (safe at the zeros themselves)."""
        z = _as_points(z)
        factors = [(a - z) / (1.0 - np.conj(a) * z) for a in self.zeros]
        slopes = [(abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * z) ** 2 for a in self.zeros]
        out = np.zeros(z.shape, dtype=complex)
        for k in range(self.degree):
            term = slopes[k]
            for j in range(self.degree):
                if j != k:
                    term = term * factors[j]
            out = out + term
        return _scalar_or_array(self.constant * out)

    def log_derivative_boundary(self, zeta):
        """``zeta B'(zeta) / B(zeta) = sum (1 - |a|^2) / |zeta - a|^2`` on the circle."""
        if self.degree == 0:
            raise DegenerateInputError("log-derivative of a constant product is identically zero")
        zeta = _as_points(zeta)
        if np.any(np.abs(np.abs(zeta) - 1.0) > 1e-10):
            raise DomainError("log_derivative_boundary expects points on the unit circle")
        out = np.zeros(zeta.shape)
        for a in self.zeros:
            out = out + (1.0 - abs(a) ** 2) / np.abs(zeta - a) ** 2
        return float(out) if out.ndim == 0 else out

    def taylor(self, order):
        """Taylor coefficients ``b_0 .. b_order`` at the origin."""
        k = np.arange(order + 1)
        series = np.zeros(order + 1, dtype=complex)
        series[0] = self.constant
        for a in self.zeros:
            ac = np.conj(a)
            fac = np.empty(order + 1, dtype=complex)
            fac[0] = a
            if order >= 1:
                fac[1:] = ac ** (k[1:] - 1) * (abs(a) ** 2 - 1.0)
            series = np.convolve(series, fac)[: order + 1]
        return series

    # -- level sets and partial fractions -----------------------------

    def solve_level_set(self, gamma):
        """The ``n`` distinct solutions of ``B(zeta) = gamma``, all on the circle.

        Returned sorted by argument in ``[0, 2 pi)``.
        """
        if self.degree == 0:
            raise DegenerateInputError("level set of a constant product")
        gamma = complex(gamma)
        if abs(abs(gamma) - 1.0) > 1e-12:
            raise DomainError("level-set target must be unimodular")
        num, den = self.numerator_denominator()
        poly = num - gamma * den
        roots = np.roots(poly[::-1])
        t = np.angle(roots)
        # Newton in the angle: arg(B(e^{it}) / gamma) has derivative zeta B'/B > 0
        for _ in range(60):
            zeta = np.exp(1j * t)
            h = np.angle(self.evaluate(zeta) / gamma)
            t = t - h / self.log_derivative_boundary(zeta)
            if np.max(np.abs(h)) < 1e-15:
                break
        t = np.mod(t, 2.0 * np.pi)
        t.sort()
        zeta = np.exp(1j * t)
        residual = float(np.max(np.abs(self.evaluate(zeta) - gamma)))
        if residual > ROOT_RESIDUAL_TOL:
            raise NumericalError(f"level-set solve residual {residual:.3e}", residual=residual)
        gaps = np.diff(np.append(t, t[0] + 2.0 * np.pi))
        if self.degree > 1 and np.min(gaps) <= 1e-12:
            raise NumericalError("level-set roots collapsed; expected simple roots", residual=residual)
        return zeta

    def partial_fractions(self, gamma):
        """Expansion ``1/(1 - conj(gamma) B(z)) = sum c_k / (1 - conj(zeta_k) z)``.

        Requires ``B(0) = 0``. Returns ``(zetas, cs)`` with every ``c_k > 0``
        and ``sum c_k = 1``.
        """
        if not any(abs(a) <= 1e-14 for a in self.zeros):
            raise PreconditionError("partial_fractions requires B(0) = 0 (a zero at the origin)")
        zetas = self.solve_level_set(gamma)
        cs = 1.0 / self.log_derivative_boundary(zetas)
        return zetas, cs

    # -- composition --------------------------------------------------

    def compose_mobius(self, w):
        """The product equal to ``tau_w o B``.

        Zeros are the ``n`` solutions of ``B(z) = w`` in the disc; the
        constant is fixed by matching at the probe point ``zeta = 1``.
        """
        w = complex(w)
        if abs(w) >= 1.0:
            raise DomainError("compose_mobius needs |w| < 1")
        if self.degree == 0:
            val = (w - self.constant) / (1.0 - np.conj(w) * self.constant)
            return FiniteBlaschkeProduct(val, ())
        if w == 0:
            zeros = np.array(self.zeros)
        else:
            num, den = self.numerator_denominator()
            zeros = np.roots((num - w * den)[::-1])
            for _ in range(40):
                step = (self.evaluate(zeros) - w) / self.derivative(zeros)
                zeros = zeros - step
                if np.max(np.abs(step)) < 1e-16:
                    break
        if np.any(np.abs(zeros) >= 1.0):
            raise NumericalError("interior root of B(z) = w escaped the disc")
        bare = FiniteBlaschkeProduct(1.0, tuple(zeros))
        b1 = self.evaluate(1.0)
        target = (w - b1) / (1.0 - np.conj(w) * b1)
        out = bare.rotate(target / bare.evaluate(1.0))
        grid = np.exp(1j * grid_angles(256))
        bz = self.evaluate(grid)
        direct = (w - bz) / (1.0 - np.conj(w) * bz)
        residual = float(np.max(np.abs(out.evaluate(grid) - direct)))
        if residual > 1e-9:
            raise NumericalError(f"compose_mobius grid mismatch {residual:.3e}", residual=residual)
        return out

    # -- serialization ------------------------------------------------

    def to_json(self):
        return {
            "c": [self.constant.real, self.constant.imag],
            "zeros": [[a.real, a.imag] for a in self.zeros],
        }

    @classmethod
    def from_json(cls, data):
        c = complex(*data.get("c", [1.0, 0.0]))
        zeros = tuple(complex(re, im) for re, im in data.get("zeros", []))
        return cls(c, zeros)


@dataclass(frozen=True)
class BlaschkeQuotient:
    """``numerator / denominator`` evaluated on the unit circle."""

    numerator: FiniteBlaschkeProduct
    denominator: FiniteBlaschkeProduct

    def evaluate(self, zeta):
        return self.numerator.evaluate(zeta) / self.denominator.evaluate(zeta)

    __call__ = evaluate

    def rotate(self, u):
        return BlaschkeQuotient(self.numerator.rotate(u), self.denominator)

    def to_json(self):
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(
            FiniteBlaschkeProduct.from_json(data["numerator"]),
            FiniteBlaschkeProduct.from_json(data["denominator"]),
        )


def _trig_terms(p) -> dict:
    if isinstance(p, FourierCoefficients):
        p = p.as_dict()
    terms = {int(k): complex(v) for k, v in dict(p).items() if complex(v) != 0}
    if not terms:
        raise PreconditionError("trigonometric polynomial is identically zero")
    return terms


def quotient_from_meromorphic(p, boundary_margin=1e-6, check_n=512):
    """Factor ``p / p*`` on the circle as ``c * B1 / B2``.

    ``p`` is a trigonometric polynomial ``sum_k p_k z^k`` (a mapping from
    integer index to coefficient, or :class:`FourierCoefficients`) with no
    zeros on the circle, and ``p*(z) = conj(p(1/conj(z)))``.

    Returns
    -------
    (BlaschkeQuotient, complex)
        The quotient ``B1 / B2`` (both with constant 1) and the unimodular
        constant ``c``.
    """
    terms = _trig_terms(p)
    lo, hi = min(terms), max(terms)
    poly = np.array([terms.get(k, 0j) for k in range(lo, hi + 1)])
    roots = np.roots(poly[::-1]) if hi > lo else np.array([], dtype=complex)
    if roots.size and np.min(np.abs(np.abs(roots) - 1.0)) < boundary_margin:
        raise PreconditionError("trigonometric polynomial has a zero on (or too near) the unit circle")
    inside = [r for r in roots if abs(r) < 1.0]
    outside = [1.0 / np.conj(r) for r in roots if abs(r) > 1.0]
    shift = lo + hi
    num = FiniteBlaschkeProduct(1.0, tuple([0j] * max(0, shift) + inside))
    den = FiniteBlaschkeProduct(1.0, tuple([0j] * max(0, -shift) + outside))
    quotient = BlaschkeQuotient(num, den)

    def target(z):
        val = sum(v * z**k for k, v in terms.items())
        return val / np.conj(val)

    c = complex(target(1.0 + 0j) / quotient.evaluate(1.0))
    c /= abs(c)
    zeta = np.exp(1j * grid_angles(check_n))
    residual = float(np.max(np.abs(c * quotient.evaluate(zeta) - target(zeta))))
    if residual > 1e-9:
        raise NumericalError(f"quotient factorization mismatch {residual:.3e}", residual=residual)
    return quotient, c


def as_fbp(obj) -> FiniteBlaschkeProduct:
    """Coerce JSON dicts or ``(c, zeros)`` pairs to a product."""
    if isinstance(obj, FiniteBlaschkeProduct):
        return obj
    if isinstance(obj, dict):
        return FiniteBlaschkeProduct.from_json(obj)
    c, zeros = obj
    return FiniteBlaschkeProduct(c, tuple(zeros))


def product(items: Sequence[FiniteBlaschkeProduct]) -> FiniteBlaschkeProduct:
    out = FiniteBlaschkeProduct()
    for b in items:
        out = out * b
    return out
