"""Gowers uniformity norms of scalar and matrix-valued functions.

All values are computed by exact enumeration over ``x, h_1, ..., h_k``.
Iterated derivatives are nested right to left: ``Delta_{h_k}`` is applied
first and ``Delta_{h_1}`` last. For scalars the order is immaterial; for
matrices it is fixed so that every caller sees the same expression.

``k = 1`` is supported even though U^1 is only a seminorm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from .errors import InvalidArgumentError, ResourceLimitError
from .groups import FiniteAbelianGroup, is_prime, make_cyclic
from .linalg import operator_norm

ENUMERATION_BUDGET = 10**9
DERIVATIVE_ORDER = "right-to-left"
# elements materialised at once before the enumeration is split into chunks
_CHUNK = 1 << 21


@dataclass(frozen=True)
class ScalarFunction:
    group: FiniteAbelianGroup
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.group.order,):
            raise InvalidArgumentError(
                f"expected {self.group.order} values for {self.group}, got shape {values.shape}"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        return self.values[self.group.index(x)]

    def to_json(self) -> dict:
        return {
            "group": self.group.descriptor,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> ScalarFunction:
        group = FiniteAbelianGroup.parse(obj["group"])
        return cls(group, np.array([complex(a, b) for a, b in obj["values"]], dtype=complex))


@dataclass(frozen=True)
class MatrixFunction:
    group: FiniteAbelianGroup
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        n = self.group.order
        if values.ndim != 3 or values.shape[0] != n or values.shape[1] != values.shape[2]:
            raise InvalidArgumentError(
                f"expected shape ({n}, d, d) for {self.group}, got {values.shape}"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __call__(self, x):
        return self.values[self.group.index(x)]

    @classmethod
    def from_scalar(cls, f: ScalarFunction, d: int = 1) -> MatrixFunction:
        return cls(f.group, f.values[:, None, None] * np.eye(d))


# -- derivatives -----------------------------------------------------------

def _scalar_delta(G, shift):
    # (..., N) -> (..., N_h, N_x)
    return np.conj(G)[..., None, :] * G[..., shift]


def _matrix_delta(G, shift):
    # (..., N, d, d) -> (..., N_h, N_x, d, d)
    adj = np.conj(np.swapaxes(G, -1, -2))
    return adj[..., None, :, :, :] @ G[..., shift, :, :]


def multiplicative_derivative(F, h):
    """``Delta_h F``: ``conj(f(x)) f(x+h)`` or ``F(x)^* F(x+h)``."""
    g = F.group
    shifted = g.add_table[g.index(h)]
    if isinstance(F, ScalarFunction):
        return ScalarFunction(g, np.conj(F.values) * F.values[shifted])
    return MatrixFunction(g, np.conj(np.swapaxes(F.values, -1, -2)) @ F.values[shifted])


def iterated_derivative(F, hs):
    """``Delta_{h_1} ... Delta_{h_k} F`` with ``Delta_{h_k}`` applied first."""
    for h in reversed(list(hs)):
        F = multiplicative_derivative(F, h)
    return F


# -- enumeration -------------------------------------------------------------

def _derivative_sum(values, k, delta, shift, inner_ndim):
    """Partial sums of ``(Delta_{h_1}...Delta_{h_k} F)(x)`` over ``x, h_1..h_k``.

    The enumeration is split over ``h_k`` (and deeper, if needed); partial
    sums come back in index order so the total does not depend on the
    worker count.
    """
    n = values.shape[0]
    unit = math.prod(values.shape[1:])

    def vectorised(G, remaining):
        for _ in range(remaining):
            G = delta(G, shift)
        return G.sum(axis=tuple(range(G.ndim - inner_ndim)))

    def partials_of(G, remaining):
        if n ** (remaining + 1) * unit <= _CHUNK:
            return [vectorised(G, remaining)]
        D = delta(G, shift)
        out = []
        for h in range(n):
            out.extend(partials_of(D[h], remaining - 1))
        return out

    if n ** (k + 1) * unit <= _CHUNK:
        return [vectorised(values, k)]
    D = delta(values, shift)
    chunks = ordered_map(lambda h: partials_of(D[h], k - 1), range(n))
    return [p for chunk in chunks for p in chunk]


def _check_budget(group, k, units):
    if k < 1:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    cost = group.order ** (k + 1) * units
    if cost > ENUMERATION_BUDGET:
        raise ResourceLimitError(
            f"U^{k} enumeration over {group} needs {cost:.3g} operations, "
            f"budget is {ENUMERATION_BUDGET:.0e}"
        )
    return group.order ** (k + 1)


def gowers_average(f: ScalarFunction, k: int) -> complex:
    """``E_{x,h_1..h_k} (Delta_{h_1}...Delta_{h_k} f)(x)`` before modulus and root."""
    if k > 4:
        raise InvalidArgumentError(f"scalar Gowers norms are supported for k <= 4, got {k}")
    count = _check_budget(f.group, k, 1)
    parts = _derivative_sum(f.values, k, _scalar_delta, f.group.add_table, 0)
    re = math.fsum(float(np.real(p)) for p in parts)
    im = math.fsum(float(np.imag(p)) for p in parts)
    return complex(re, im) / count


def scalar_gowers_norm(f: ScalarFunction, k: int) -> float:
    return abs(gowers_average(f, k)) ** (1.0 / 2**k)


def matrix_gowers_average(F: MatrixFunction, k: int) -> np.ndarray:
    if k > 3:
        raise InvalidArgumentError(f"matrix Gowers norms are supported for k <= 3, got {k}")
    count = _check_budget(F.group, k, F.dim**3)
    parts = _derivative_sum(F.values, k, _matrix_delta, F.group.add_table, 2)
    total = np.zeros((F.dim, F.dim), dtype=complex)
    for p in parts:
        total = total + p
    return total / count


def matrix_gowers_norm(F: MatrixFunction, k: int) -> float:
    return operator_norm(matrix_gowers_average(F, k)) ** (1.0 / 2**k)


# -- witness functions -------------------------------------------------------

def weil_cubic_function(p: int) -> ScalarFunction:
    """``x -> exp(2 pi i x^3 / p)`` on Z_p for a prime ``p >= 5``."""
    if p < 5 or not is_prime(p):
        raise InvalidArgumentError(f"p must be a prime >= 5, got {p}")
    cubes = np.array([pow(x, 3, p) for x in range(p)], dtype=float)
    return ScalarFunction(make_cyclic(p), np.exp(2j * np.pi * cubes / p))


def random_sign_function(g: FiniteAbelianGroup, seed: int = 0) -> ScalarFunction:
    rng = np.random.default_rng(seed)
    return ScalarFunction(g, rng.choice([-1.0, 1.0], size=g.order).astype(complex))


def constant_function(g: FiniteAbelianGroup, value: complex = 1.0) -> ScalarFunction:
    return ScalarFunction(g, np.full(g.order, value, dtype=complex))
