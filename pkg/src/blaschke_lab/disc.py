"""Shared primitives on the unit disc and circle.

Functions on the circle are represented by equispaced samples at
``exp(2j*pi*j/n)``; every spectral operation below works on that grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError, ResolutionError

UNIMODULAR_TOL = 1e-8


def mobius(a, z):
    """Disc automorphism ``(a - z) / (1 - conj(a) z)``.

    Vectorized over ``z``. The map is an involution of the closed disc.
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"mobius parameter must lie in the open disc, got |a|={abs(a)}")
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(a) * z
    if np.any(den == 0):
        raise DomainError("mobius denominator vanishes")
    out = (a - z) / den
    return out if out.ndim else complex(out)


def _is_power_of_two(n):
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class BoundaryGrid:
    """Samples of a function at ``n`` equispaced points of the unit circle."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).ravel()
        n = values.size
        if n < 8 or not _is_power_of_two(n):
            raise PreconditionError(f"grid size must be a power of two >= 8, got {n}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.values.size

    @property
    def theta(self):
        return grid_angles(self.n)

    @property
    def points(self):
        return np.exp(1j * self.theta)

    def __len__(self):
        return self.n

    @classmethod
    def from_function(cls, func, n):
        """Sample ``func(zeta)`` at the ``n`` grid points."""
        return cls(func(np.exp(1j * grid_angles(n))))

    def sup_distance(self, other):
        other_vals = other.values if isinstance(other, BoundaryGrid) else np.asarray(other)
        return float(np.max(np.abs(self.values - other_vals)))

    def to_json(self):
        return {"n": self.n, "values": [[float(v.real), float(v.imag)] for v in self.values]}

    @classmethod
    def from_json(cls, data):
        vals = np.array([complex(re, im) for re, im in data["values"]])
        if "n" in data and int(data["n"]) != vals.size:
            raise PreconditionError("grid JSON: 'n' does not match number of values")
        return cls(vals)


def grid_angles(n):
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class FourierCoefficients:
    """Coefficients ``c_k`` for ``k = -m..m``, stored densely.

    ``values[k + m]`` holds ``c_k``. Indices outside ``[-m, m]`` are zero.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).ravel()
        if values.size % 2 != 1:
            raise PreconditionError("coefficient array must have odd length 2m+1")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def m(self):
        return (self.values.size - 1) // 2

    @property
    def indices(self):
        return np.arange(-self.m, self.m + 1)

    def __getitem__(self, k):
        k = int(k)
        if abs(k) > self.m:
            return 0j
        return complex(self.values[k + self.m])

    def negative_part(self):
        """Coefficients with index < 0, ordered k = -1, -2, ..., -m."""
        return self.values[: self.m][::-1]

    def as_dict(self, tol=0.0):
        return {int(k): complex(v) for k, v in zip(self.indices, self.values) if abs(v) > tol}

    @classmethod
    def from_dict(cls, coeffs):
        coeffs = {int(k): complex(v) for k, v in coeffs.items()}
        m = max((abs(k) for k in coeffs), default=0)
        arr = np.zeros(2 * m + 1, dtype=complex)
        for k, v in coeffs.items():
            arr[k + m] = v
        return cls(arr)

    def evaluate(self, z):
        """Evaluate ``sum c_k z^k`` (intended for ``|z| = 1``)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, c in zip(self.indices, self.values):
            if c != 0:
                out = out + c * z ** int(k)
        return out

    def to_json(self, tol=0.0):
        return {"coeffs": {str(k): [v.real, v.imag] for k, v in self.as_dict(tol).items()}}

    @classmethod
    def from_json(cls, data):
        raw = data["coeffs"] if "coeffs" in data else data
        return cls.from_dict({int(k): complex(re, im) for k, (re, im) in raw.items()})


def fourier(grid):
    """Discrete Fourier coefficients ``(1/n) sum_j v_j exp(-2j*pi*j*k/n)``.

    The Nyquist coefficient is split evenly between ``+n/2`` and ``-n/2``
    so that real-valued grids give conjugate-symmetric coefficients.
    """
    if not isinstance(grid, BoundaryGrid):
        grid = BoundaryGrid(grid)
    n = grid.n
    m = n // 2
    c = np.fft.fft(grid.values) / n
    out = np.zeros(2 * m + 1, dtype=complex)
    out[m : 2 * m] = c[:m]  # k = 0..m-1
    out[1:m] = c[m + 1 :]  # k = -(m-1)..-1
    out[0] = out[2 * m] = c[m] / 2
    return FourierCoefficients(out)


def inverse_fourier(coeffs, n):
    """Sample ``sum c_k exp(i k theta)`` on the ``n``-point grid (aliasing folded)."""
    if not _is_power_of_two(n) or n < 8:
        raise PreconditionError(f"grid size must be a power of two >= 8, got {n}")
    folded = np.zeros(n, dtype=complex)
    np.add.at(folded, coeffs.indices % n, coeffs.values)
    return BoundaryGrid(np.fft.ifft(folded) * n)


def harmonic_extension(u, r, theta):
    """Poisson extension ``U`` and conjugate ``V`` of real boundary data.

    ``U + iV`` is the holomorphic function with real boundary values ``u``
    and ``V(0) = 0``. ``r`` and ``theta`` broadcast against each other.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r >= 1.0) or np.any(r < 0.0):
        raise DomainError("harmonic extension requires 0 <= r < 1")
    if not isinstance(u, BoundaryGrid):
        u = BoundaryGrid(u)
    if np.max(np.abs(u.values.imag)) > 1e-12 * max(1.0, np.max(np.abs(u.values))):
        raise PreconditionError("harmonic extension expects real boundary data")
    coeffs = fourier(BoundaryGrid(u.values.real))
    r, theta = np.broadcast_arrays(r, theta)
    # analytic completion: 2 * (positive part) + c_0 has real part U, imag part V
    ks = np.arange(0, coeffs.m + 1)
    weights = np.array([coeffs[k] for k in ks])
    weights[1:] *= 2.0
    z = (r * np.exp(1j * theta)).ravel()
    out = np.zeros(z.shape, dtype=complex)
    chunk = 4096
    for start in range(0, z.size, chunk):
        zz = z[start : start + chunk]
        # Horner in z over the analytic coefficients
        acc = np.zeros(zz.shape, dtype=complex)
        for w in weights[::-1]:
            acc = acc * zz + w
        out[start : start + chunk] = acc
    out = out.reshape(r.shape)
    U, V = out.real, out.imag
    if U.ndim == 0:
        return float(U), float(V)
    return U, V


@dataclass(frozen=True)
class ArgumentLift:
    phi: np.ndarray
    winding: int


def _unimodular_values(f):
    vals = f.values if isinstance(f, BoundaryGrid) else np.asarray(f, dtype=complex)
    dev = np.max(np.abs(np.abs(vals) - 1.0))
    if dev > UNIMODULAR_TOL:
        raise PreconditionError(f"function is not unimodular on the grid (max deviation {dev:.3e})")
    return vals


def continuous_argument(f):
    """Continuous lift ``phi`` with ``exp(i phi_j) = f_j`` plus the winding number."""
    vals = _unimodular_values(f)
    jumps = np.abs(np.diff(np.append(vals, vals[0])))
    worst = int(np.argmax(jumps))
    if jumps[worst] >= 2.0:
        raise ResolutionError(
            f"adjacent samples {worst},{(worst + 1) % vals.size} differ by {jumps[worst]:.3f} >= 2; refine the grid"
        )
    phi = np.unwrap(np.angle(vals))
    closing = np.angle(vals[0] * np.conj(vals[-1]))
    total = phi[-1] - phi[0] + closing
    return ArgumentLift(phi=phi, winding=int(round(total / (2.0 * np.pi))))


def square_root_lift(f):
    """Return ``(g, parity)`` with ``f = g**2`` (even) or ``f = zeta g**2`` (odd)."""
    lift = continuous_argument(f)
    n = lift.phi.size
    if lift.winding % 2 == 0:
        g = np.exp(0.5j * lift.phi)
        parity = "even"
    else:
        g = np.exp(0.5j * (lift.phi - grid_angles(n)))
        parity = "odd"
    return BoundaryGrid(g), parity
