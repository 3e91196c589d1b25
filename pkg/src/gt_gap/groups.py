"""Finite abelian groups Z_{n1} x ... x Z_{nr}.

Elements are tuples of residues. The flat index of an element is its
mixed-radix value with the first coordinate most significant, which is
also its position in :meth:`FiniteAbelianGroup.enumerate`. Every tensor
and file format in the package is laid out in this order.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError

_DESCRIPTOR = re.compile(r"^Z(\d+)(?:xZ(\d+))*$")


@dataclass(frozen=True)
class FiniteAbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if not moduli:
            raise InvalidArgumentError("a group needs at least one modulus")
        if any(m < 1 for m in moduli):
            raise InvalidArgumentError(f"moduli must be positive, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    @property
    def descriptor(self) -> str:
        return "x".join(f"Z{m}" for m in self.moduli)

    def __str__(self):
        return self.descriptor

    @classmethod
    def parse(cls, text: str) -> FiniteAbelianGroup:
        """Parse a descriptor such as ``"Z5"`` or ``"Z2xZ4"``."""
        text = text.strip()
        if not _DESCRIPTOR.match(text):
            raise InvalidArgumentError(f"bad group descriptor {text!r}")
        return cls(tuple(int(part[1:]) for part in text.split("x")))

    def _coords(self, a) -> tuple[int, ...]:
        if isinstance(a, (int, np.integer)):
            a = (int(a),)
        a = tuple(a)
        if len(a) != self.rank:
            raise InvalidArgumentError(
                f"element {a} has arity {len(a)}, group {self} has rank {self.rank}"
            )
        return tuple(int(c) % m for c, m in zip(a, self.moduli))

    def element(self, a) -> tuple[int, ...]:
        """Canonical (reduced) form of ``a``; plain ints are accepted for rank 1."""
        return self._coords(a)

    def add(self, a, b) -> tuple[int, ...]:
        a, b = self._coords(a), self._coords(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % m for x, m in zip(self._coords(a), self.moduli))

    def scale(self, k: int, a) -> tuple[int, ...]:
        return tuple((k * x) % m for x, m in zip(self._coords(a), self.moduli))

    def enumerate(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.moduli)))

    def index(self, a) -> int:
        idx = 0
        for c, m in zip(self._coords(a), self.moduli):
            idx = idx * m + c
        return idx

    def from_index(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.order:
            raise InvalidArgumentError(f"index {idx} out of range for {self}")
        coords = []
        for m in reversed(self.moduli):
            idx, c = divmod(idx, m)
            coords.append(c)
        return tuple(reversed(coords))

    @cached_property
    def _coord_array(self) -> np.ndarray:
        # (order, rank) array of coordinates in flat order
        return np.array(self.enumerate(), dtype=np.int64).reshape(self.order, self.rank)

    def _flatten(self, coords: np.ndarray) -> np.ndarray:
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for r, m in enumerate(self.moduli):
            idx = idx * m + coords[..., r] % m
        return idx

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[a, b]`` is the flat index of ``a + b``."""
        c = self._coord_array
        table = self._flatten(c[:, None, :] + c[None, :, :])
        table.flags.writeable = False
        return table

    def scale_indices(self, k: int) -> np.ndarray:
        """Flat index of ``k * a`` for every flat index ``a``."""
        return self._flatten(k * self._coord_array)

    def neg_indices(self) -> np.ndarray:
        return self.scale_indices(-1)


def make_cyclic(n: int) -> FiniteAbelianGroup:
    if int(n) < 1:
        raise InvalidArgumentError(f"cyclic group order must be >= 1, got {n}")
    return FiniteAbelianGroup((int(n),))


def is_prime(n: int) -> bool:
    """Trial division; intended for the small primes used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True
