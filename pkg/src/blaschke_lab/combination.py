"""Convex combinations of Blaschke products, grid functions or evaluators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product as cartesian

import numpy as np

from .disc import BoundaryGrid, grid_angles
from .errors import CapacityError, PreconditionError

WEIGHT_SUM_TOL = 1e-12


def _item_values(item, z):
    if isinstance(item, BoundaryGrid):
        if np.shape(z) != item.values.shape:
            raise PreconditionError("grid item can only be evaluated on its own grid")
        return item.values
    return item(z)


@dataclass(frozen=True)
class ConvexCombination:
    """``sum_j weights[j] * items[j]`` with nonnegative weights summing to one."""

    weights: np.ndarray
    items: tuple

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).ravel()
        items = tuple(self.items)
        if not items:
            raise PreconditionError("convex combination needs at least one item")
        if weights.size != len(items):
            raise PreconditionError("weights and items differ in length")
        if np.any(weights < 0):
            raise PreconditionError("convex weights must be nonnegative")
        if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise PreconditionError(f"convex weights sum to {weights.sum()!r}, not 1")
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for w, item in zip(self.weights, self.items):
            if w:
                out = out + w * _item_values(item, z)
        return out

    __call__ = evaluate

    def on_grid(self, n):
        return self.evaluate(np.exp(1j * grid_angles(n)))

    def to_json(self):
        return {
            "weights": [float(w) for w in self.weights],
            "items": [item.to_json() for item in self.items],
        }


@dataclass(frozen=True)
class FactoredCombination:
    """Product of convex combinations, itself a convex combination.

    Multiplying out ``prod_k (sum_j l_kj B_kj)`` gives weights
    ``prod_k l_kj`` on the products ``prod_k B_kj``. The expansion can be
    exponentially large, so evaluation uses the factored form and the
    expansion is built only on request.
    """

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise PreconditionError("factored combination needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def size(self):
        return reduce(lambda acc, f: acc * len(f), self.factors, 1)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        for f in self.factors:
            out = out * f.evaluate(z)
        return out

    __call__ = evaluate

    def on_grid(self, n):
        return self.evaluate(np.exp(1j * grid_angles(n)))

    def expand(self, cap=4**8):
        """Multiply out into a flat :class:`ConvexCombination`."""
        if self.size > cap:
            raise CapacityError(f"expansion has {self.size} items, cap is {cap}", achieved=self.size)
        weights, items = [], []
        for choice in cartesian(*(zip(f.weights, f.items) for f in self.factors)):
            weights.append(float(np.prod([w for w, _ in choice])))
            items.append(reduce(lambda a, b: a * b, [it for _, it in choice]))
        return ConvexCombination(np.array(weights), tuple(items))

    def to_json(self):
        return {"factors": [f.to_json() for f in self.factors], "expanded_size": self.size}
