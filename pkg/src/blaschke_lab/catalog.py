"""Named test objects shared by the CLI, the self-test and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .approx_fbp import exp_shift_series
from .blaschke import FiniteBlaschkeProduct
from .disc import BoundaryGrid, grid_angles
from .errors import PreconditionError
from .inner import InnerFunction


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # fbp | inner | grid | taylor | matrix
    description: str
    build: Callable = field(repr=False)
    params: dict = field(default_factory=dict)

    def resolve(self, grid_n=1024):
        return self.build(grid_n) if self.kind == "grid" else self.build()


def _grid(func):
    return lambda n: BoundaryGrid(func(grid_angles(n)))


def _blaschke_trace(zeros):
    B = FiniteBlaschkeProduct(1.0, tuple(zeros))
    return lambda th: B.evaluate(np.exp(1j * th))


FBP_EXAMPLES = {
    "fbp_deg1": FiniteBlaschkeProduct(1.0, (0.5,)),
    "fbp_deg2": FiniteBlaschkeProduct(1j, (0.3 + 0.4j, -0.6)),
    "fbp_deg3": FiniteBlaschkeProduct(-1.0, (0.0, 0.7j, -0.2 - 0.5j)),
    "fbp_deg4": FiniteBlaschkeProduct(np.exp(0.3j), (0.1, 0.8 * np.exp(2.0j), -0.4j, 0.55 + 0.1j)),
}


def _entries():
    out = [
        CatalogEntry("exp_shift", "taylor", "exp(z - 1), sup norm 1 on the disc", exp_shift_series),
        CatalogEntry("zero", "taylor", "the zero function", lambda: exp_shift_series(8).__class__([0.0] * 9)),
    ]
    for name, B in FBP_EXAMPLES.items():
        out.append(CatalogEntry(name, "fbp", f"Blaschke product of degree {B.degree}", lambda B=B: B,
                                {"zeros": [str(a) for a in B.zeros]}))
    grids = [
        ("winding_sin3", "exp(i(theta + 0.5 sin 3 theta)), winding 1",
         lambda th: np.exp(1j * (th + 0.5 * np.sin(3 * th)))),
        ("power3", "exp(3 i theta)", lambda th: np.exp(3j * th)),
        ("power4", "exp(4 i theta)", lambda th: np.exp(4j * th)),
        ("conj_factor", "conjugate boundary trace of the factor with zero 0.4",
         lambda th: np.conj(_blaschke_trace([0.4])(th))),
        ("conj_fbp2", "conjugate boundary trace of a degree-2 product",
         lambda th: np.conj(_blaschke_trace([0.5j, -0.3 + 0.2j])(th))),
        ("step_upper", "exp(i pi/2) on the upper half circle, 1 elsewhere",
         lambda th: np.where(th < math.pi, 1j, 1.0 + 0j)),
        ("step_two_arcs", "exp(i) on two arcs, 1 elsewhere",
         lambda th: np.where((th < 1.0) | ((th >= 3.0) & (th < 4.5)), np.exp(1j), 1.0 + 0j)),
        ("half_rotation", "0.5 exp(i theta), inside the ball", lambda th: 0.5 * np.exp(1j * th)),
        ("exp_shift_boundary", "boundary values of exp(z - 1)", lambda th: np.exp(np.exp(1j * th) - 1.0)),
        ("zero_grid", "identically zero", lambda th: np.zeros_like(th, dtype=complex)),
    ]
    for name, desc, func in grids:
        out.append(CatalogEntry(name, "grid", desc, _grid(func)))
    inners = [
        ("atom_2pi", "singular inner function with one atom of mass 2 pi at angle 0",
         lambda: InnerFunction(FiniteBlaschkeProduct(), ((0.0, 2 * math.pi),))),
        ("atom_pi", "singular inner function with one atom of mass pi at angle 1",
         lambda: InnerFunction(FiniteBlaschkeProduct(), ((1.0, math.pi),))),
        ("fbp_atom_pi", "degree-2 Blaschke product times an atom of mass pi",
         lambda: InnerFunction(FiniteBlaschkeProduct(1.0, (0.3, -0.5j)), ((1.0, math.pi),))),
        ("fbp3_atom_2pi", "degree-3 Blaschke product times an atom of mass 2 pi",
         lambda: InnerFunction(FBP_EXAMPLES["fbp_deg3"], ((0.0, 2 * math.pi),))),
        ("fbp3_inner", "degree-3 Blaschke product with no singular part",
         lambda: InnerFunction(FBP_EXAMPLES["fbp_deg3"])),
    ]
    for name, desc, func in inners:
        out.append(CatalogEntry(name, "inner", desc, func))
    matrices = [
        ("jordan2", "nilpotent 2x2 Jordan block, radius 1/2", lambda: np.array([[0, 1], [0, 0]], dtype=complex)),
        ("jordan3_half", "3x3 Jordan block with eigenvalue 1/2",
         lambda: np.array([[0.5, 1, 0], [0, 0.5, 1], [0, 0, 0.5]], dtype=complex)),
        ("normal_diag", "diag(1, i, -0.5)", lambda: np.diag([1.0, 1j, -0.5]).astype(complex)),
        ("hermitian2", "self-adjoint 2x2", lambda: np.array([[2, 1j], [-1j, -3]], dtype=complex)),
        ("scaled_shift", "[[0, 2], [0, 0]], radius 1", lambda: np.array([[0, 2], [0, 0]], dtype=complex)),
    ]
    for name, desc, func in matrices:
        out.append(CatalogEntry(name, "matrix", desc, func))
    return out


_CATALOG = {e.name: e for e in _entries()}


def catalog():
    """All built-in entries, in a stable order."""
    return list(_CATALOG.values())


def get(name):
    try:
        return _CATALOG[name]
    except KeyError:
        raise PreconditionError(f"unknown catalog entry {name!r}") from None


def resolve(name, grid_n=1024):
    return get(name).resolve(grid_n)
