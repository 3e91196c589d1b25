"""Trilinear forms on l_inf^n stored as dense ``n x n x n`` complex tensors.

``T[i, j, k]`` is the value of the form on the standard basis triple
``(e_i, e_j, e_k)``. Indices are zero based throughout, including the three
auxiliary coordinates used by :func:`symmetrize` (labelled 0, 1, 2).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .gowers import ScalarFunction
from .groups import FiniteAbelianGroup
from .linalg import KRON_CAP, operator_norms

SYMMETRY_TOL = 1e-12
# product lifts of tensors at most this dense iterate over nonzero entries
SPARSE_DENSITY = 0.1


@dataclass(frozen=True)
class TrilinearForm:
    entries: np.ndarray
    group: FiniteAbelianGroup | None = None

    def __post_init__(self):
        T = np.asarray(self.entries, dtype=complex)
        if T.ndim != 3 or not (T.shape[0] == T.shape[1] == T.shape[2]) or T.shape[0] < 1:
            raise InvalidArgumentError(f"expected an n x n x n tensor, got shape {T.shape}")
        if not np.all(np.isfinite(T)):
            raise InvalidArgumentError("tensor has non-finite entries")
        if self.group is not None and self.group.order != T.shape[0]:
            raise InvalidArgumentError(f"group {self.group} does not match n = {T.shape[0]}")
        T = T.copy()
        T.flags.writeable = False
        object.__setattr__(self, "entries", T)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx):
        return self.entries[idx]

    def scaled(self, c) -> TrilinearForm:
        return TrilinearForm(c * self.entries, self.group)


@dataclass(frozen=True)
class Permutation3:
    """A permutation of {1, 2, 3} given by ``images = (pi(1), pi(2), pi(3))``."""

    images: tuple[int, int, int]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != [1, 2, 3]:
            raise InvalidArgumentError(f"{images} is not a permutation of (1, 2, 3)")
        object.__setattr__(self, "images", images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> Permutation3:
        inv = [0, 0, 0]
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return Permutation3(tuple(inv))

    @staticmethod
    def all() -> list[Permutation3]:
        return [Permutation3(p) for p in itertools.permutations((1, 2, 3))]


IDENTITY = Permutation3((1, 2, 3))


def zero_form(n: int) -> TrilinearForm:
    return TrilinearForm(np.zeros((n, n, n), dtype=complex))


def ap_form(f0: ScalarFunction, g: FiniteAbelianGroup) -> TrilinearForm:
    """The 3-term progression form ``sum_{x,y} f0(y) f1(x) f2(x+y) f3(x+2y)``.

    Its tensor has ``T[a, b, c] = f0(b - a)`` when ``a + c = 2b`` and zero
    otherwise.
    """
    if f0.group != g:
        raise InvalidArgumentError(f"f0 lives on {f0.group}, not on {g}")
    n = g.order
    add = g.add_table
    x = np.repeat(np.arange(n), n)
    y = np.tile(np.arange(n), n)
    b = add[x, y]
    c = add[b, y]
    T = np.zeros((n, n, n), dtype=complex)
    np.add.at(T, (x, b, c), f0.values[y])
    return TrilinearForm(T, g)


def get_slice(T: TrilinearForm, axis: int, index: int) -> np.ndarray:
    """The matrix obtained by fixing coordinate ``axis`` (1, 2 or 3) to ``index``."""
    if axis not in (1, 2, 3):
        raise InvalidArgumentError(f"axis must be 1, 2 or 3, got {axis}")
    if not 0 <= index < T.n:
        raise InvalidArgumentError(f"slice index {index} out of range for n = {T.n}")
    return np.take(T.entries, index, axis=axis - 1)


def slice_norms(T: TrilinearForm) -> np.ndarray:
    """Operator norms of all slices, shape ``(3, n)``."""
    E = T.entries
    stacks = [E, np.moveaxis(E, 1, 0), np.moveaxis(E, 2, 0)]
    return np.stack([operator_norms(s) for s in stacks])


def delta(T: TrilinearForm) -> float:
    """Largest operator norm over the ``3n`` slices."""
    return float(slice_norms(T).max())


def l2_norm_sq(T: TrilinearForm) -> float:
    return float(np.sum(np.abs(T.entries) ** 2))


def permute(T: TrilinearForm, pi: Permutation3) -> TrilinearForm:
    """The form ``T o pi`` with ``(T o pi)[i1, i2, i3] = T[i_{pi^-1(1)}, i_{pi^-1(2)}, i_{pi^-1(3)}]``."""
    # output axis q carries the index that T receives in slot pi(q)
    axes = tuple(pi(q) - 1 for q in (1, 2, 3))
    return TrilinearForm(np.transpose(T.entries, axes), T.group)


def is_symmetric(T: TrilinearForm, tol: float = SYMMETRY_TOL) -> bool:
    E = T.entries
    return all(
        np.allclose(permute(T, pi).entries, E, rtol=0.0, atol=tol) for pi in Permutation3.all()
    )


def symmetrize(T: TrilinearForm) -> TrilinearForm:
    """Symmetrize with the auxiliary form ``E(u, v, w) = u_0 v_1 w_2``.

    The result lives on ``3n`` points with flat index ``3 * i + a``. Entry
    ``((i1, a1), (i2, a2), (i3, a3))`` is nonzero only when ``(a1, a2, a3)``
    is a permutation of ``(0, 1, 2)``, in which case it is ``T`` evaluated
    with the index carrying label 0 first, label 1 second, label 2 third.
    """
    n = T.n
    out = np.zeros((n, 3, n, 3, n, 3), dtype=complex)
    for labels in itertools.permutations(range(3)):
        # transpose axes=labels puts T's axis labels[m] at output position m
        out[:, labels[0], :, labels[1], :, labels[2]] = np.transpose(T.entries, labels)
    return TrilinearForm(out.reshape(3 * n, 3 * n, 3 * n))


def embed(T: TrilinearForm, n: int) -> TrilinearForm:
    """Zero-pad ``T`` to an ``n x n x n`` tensor."""
    if n < T.n:
        raise InvalidArgumentError(f"cannot embed a size {T.n} form into size {n}")
    if n == T.n:
        return T
    out = np.zeros((n, n, n), dtype=complex)
    m = T.n
    out[:m, :m, :m] = T.entries
    return TrilinearForm(out)


def _stack(mats, n, name):
    A = np.asarray(mats, dtype=complex)
    if A.ndim != 3 or A.shape[0] != n or A.shape[1] != A.shape[2]:
        raise InvalidArgumentError(f"{name} must be {n} square matrices, got shape {A.shape}")
    return A


def _support(A):
    return np.flatnonzero(A.any(axis=1)), np.flatnonzero(A.any(axis=0))


def _product_lift_sparse(E, X, Y, Z):
    """``sum T[i,j,k] X(i) Y(j) Z(k)`` restricted to nonzero entries and supports."""
    d = X.shape[1]
    y_sup = [_support(A) for A in Y]
    z_sup = [_support(A) for A in Z]
    total = np.zeros((d, d), dtype=complex)
    for i in range(E.shape[0]):
        js, ks = np.nonzero(E[i])
        if js.size == 0:
            continue
        V = np.zeros((d, d), dtype=complex)
        for j, k, t in zip(js, ks, E[i][js, ks]):
            (yr, yc), (zr, zc) = y_sup[j], z_sup[k]
            inner = np.intersect1d(yc, zr, assume_unique=True)
            if inner.size:
                V[np.ix_(yr, zc)] += t * (Y[j][np.ix_(yr, inner)] @ Z[k][np.ix_(inner, zc)])
        total += X[i] @ V
    return total


def lift_eval(T: TrilinearForm, X, Y, Z, mode: str = "product", cap: int = KRON_CAP) -> np.ndarray:
    """Evaluate the matrix lift of ``T`` on the families ``X, Y, Z``.

    ``product`` returns ``sum T[i,j,k] X(i) Y(j) Z(k)`` (size d);
    ``tensor`` returns ``sum T[i,j,k] X(i) (x) Y(j) (x) Z(k)`` (size d^3).
    """
    n = T.n
    X, Y, Z = _stack(X, n, "X"), _stack(Y, n, "Y"), _stack(Z, n, "Z")
    d = X.shape[1]
    if Y.shape[1] != d or Z.shape[1] != d:
        raise InvalidArgumentError("X, Y, Z must share a common dimension")
    norms = np.concatenate([operator_norms(A) for A in (X, Y, Z)])
    if norms.max() > 1 + 1e-9:
        warnings.warn(f"lift evaluated outside the unit ball (max norm {norms.max():.6g})")

    E = T.entries
    if mode == "product":
        if np.count_nonzero(E) <= SPARSE_DENSITY * E.size:
            return _product_lift_sparse(E, X, Y, Z)
        total = np.zeros((d, d), dtype=complex)
        Z_flat = Z.reshape(n, d * d)
        for i in range(n):
            S = E[i]
            rows = np.flatnonzero(S.any(axis=1))
            if rows.size == 0:
                continue
            cols = np.flatnonzero(S.any(axis=0))
            # stacked sum_k T[i,j,k] Z(k) over the nonzero rows j only
            C = (S[np.ix_(rows, cols)] @ Z_flat[cols]).reshape(rows.size * d, d)
            Y_row = np.concatenate(list(Y[rows]), axis=1)
            total += X[i] @ (Y_row @ C)
        return total
    if mode == "tensor":
        if d**3 > cap:
            raise ResourceLimitError(f"tensor lift dimension {d**3} exceeds cap {cap}")
        out = np.einsum("ijk,iab,jcd,kef->acebdf", E, X, Y, Z, optimize=True)
        return out.reshape(d**3, d**3)
    raise InvalidArgumentError(f"unknown lift mode {mode!r}")
