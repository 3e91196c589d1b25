"""Dense complex matrix helpers.

Matrices are plain ``numpy`` complex arrays. Stacks of matrices have shape
``(..., d, d)``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

# default equality tolerance used throughout the package
TOL = 1e-9
KRON_CAP = 4096


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def operator_norm(M) -> float:
    """Largest singular value, via the top eigenvalue of ``M* M``."""
    M = as_matrix(M)
    return float(operator_norms(M))


def operator_norms(M) -> np.ndarray:
    """Operator norms of a stack of matrices with shape ``(..., r, c)``."""
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise InvalidArgumentError("matrix has non-finite entries")
    if M.size == 0:
        return np.zeros(M.shape[:-2])
    # use the smaller Gram matrix
    if M.shape[-2] < M.shape[-1]:
        gram = M @ np.conj(np.swapaxes(M, -1, -2))
    else:
        gram = np.conj(np.swapaxes(M, -1, -2)) @ M
    top = np.linalg.eigvalsh(gram)[..., -1]
    return np.sqrt(np.clip(top, 0.0, None))


def kron(A, B, cap: int = KRON_CAP) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    rows, cols = A.shape[0] * B.shape[0], A.shape[1] * B.shape[1]
    if max(rows, cols) > cap:
        raise ResourceLimitError(f"kron result {rows}x{cols} exceeds cap {cap}")
    return np.kron(A, B)


def commutator(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(
            f"commutator needs square matrices of equal size, got {A.shape} and {B.shape}"
        )
    return A @ B - B @ A


def commutator_norm(A, B) -> float:
    return operator_norm(commutator(A, B))


def _haar_unitaries(rng, count, d):
    z = (rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def sample_contractions(rng: np.random.Generator, count: int, d: int, mode: str = "unitary") -> np.ndarray:
    """Draw ``count`` matrices of size ``d`` from the contraction ball.

    ``unitary`` gives Haar unitaries; ``scaled-gaussian`` gives a complex
    Gaussian matrix normalised to operator norm 1 and then shrunk by a
    uniform factor in [0, 1].
    """
    if d < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {d}")
    if mode == "unitary":
        return _haar_unitaries(rng, count, d)
    if mode == "scaled-gaussian":
        g = rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))
        norms = operator_norms(g)
        factors = rng.uniform(0.0, 1.0, size=count)
        out = g * (factors / norms)[:, None, None]
        # guard against rounding pushing the norm a hair above 1
        over = operator_norms(out)
        fix = over > 1.0
        out[fix] /= over[fix][:, None, None]
        return out
    raise InvalidArgumentError(f"unknown sampling mode {mode!r}")


def random_contraction(d: int, mode: str = "unitary", seed: int = 0) -> np.ndarray:
    """A single seeded contraction; identical inputs give identical output."""
    return sample_contractions(np.random.default_rng(seed), 1, d, mode)[0]


def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    return {
        "rows": M.shape[0],
        "cols": M.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise InvalidArgumentError(f"expected {rows * cols} entries, got {len(entries)}")
    return np.array([complex(re, im) for re, im in entries], dtype=complex).reshape(rows, cols)
