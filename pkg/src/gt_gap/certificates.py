"""Certified bounds, the commuting-contraction witness and lemma verifiers.

The jcb upper bound comes from the non-commutative generalized von Neumann
inequality (``|G|^2 * ||f0||_{U^3}``); the sym lower bound comes from the
Varopoulos construction (``||T||_2^2 / Delta(T)``), which is realised
explicitly as a family of commuting contractions so that the bound is backed
by a concrete matrix whose norm can be checked.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ._parallel import ordered_map
from .errors import DegenerateInputError, InternalError, InvalidArgumentError
from .gowers import (
    DERIVATIVE_ORDER,
    MatrixFunction,
    ScalarFunction,
    matrix_gowers_norm,
    random_sign_function,
    scalar_gowers_norm,
    weil_cubic_function,
)
from .groups import FiniteAbelianGroup, is_prime, make_cyclic
from .linalg import operator_norm, operator_norms, sample_contractions
from .trilinear import TrilinearForm, ap_form, delta, is_symmetric, l2_norm_sq, lift_eval, symmetrize

INEQUALITY_TOL = 1e-9
WITNESS_TOL = 1e-6
CONTRACTION_TOL = 1e-10
COMMUTATOR_TOL = 1e-10


# -- reports -----------------------------------------------------------------

@dataclass
class GapReport:
    p: int
    u3_exact: float
    u3_closed_form: float
    u3_rounded_bound: float
    jcb_upper_base: float
    sym_lower_base: float
    jcb_upper_sym: float
    sym_lower_sym: float
    varopoulos_value: float
    gap_ratio: float
    paper_floor: float
    certified: bool
    derivative_order: str = DERIVATIVE_ORDER
    tolerances: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    CSV_COLUMNS = (
        "p", "u3_exact", "u3_closed_form", "jcb_upper_sym", "sym_lower_sym",
        "varopoulos_value", "gap_ratio", "paper_floor",
    )

    @property
    def passed(self) -> bool:
        return self.certified

    def to_dict(self, timings: bool = True) -> dict:
        out = asdict(self)
        if not timings:
            out.pop("timings")
        return out

    def csv_rows(self):
        return [[getattr(self, c) for c in self.CSV_COLUMNS]]


@dataclass
class VerificationReport:
    lemma: str
    seed: int
    tolerance: float
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    CSV_COLUMNS = ("trial", "lhs", "rhs", "margin", "pass")

    @property
    def trials(self) -> int:
        return len(self.lhs)

    @property
    def margins(self) -> list:
        return [r - l for l, r in zip(self.lhs, self.rhs)]

    @property
    def trial_passes(self) -> list:
        return [m >= -self.tolerance for m in self.margins]

    @property
    def passed(self) -> bool:
        return all(self.trial_passes)

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "lemma": self.lemma,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margins,
            "trial_pass": self.trial_passes,
            "pass": self.passed,
        }
        if timings:
            out["timings"] = self.timings
        return out

    def csv_rows(self):
        return [
            [t, l, r, m, ok]
            for t, (l, r, m, ok) in enumerate(zip(self.lhs, self.rhs, self.margins, self.trial_passes))
        ]


@dataclass
class SurveyRow:
    size: int
    k: int
    trials: int
    min: float
    median: float
    max: float
    normalized_min: float
    normalized_median: float
    normalized_max: float
    outliers: list


@dataclass
class SurveyTable:
    k: int
    seed: int
    rows: list
    band: tuple = (0.3, 3.0)
    timings: dict = field(default_factory=dict)

    CSV_COLUMNS = (
        "size", "k", "trials", "min", "median", "max",
        "normalized_min", "normalized_median", "normalized_max", "outliers",
    )

    @property
    def passed(self) -> bool:
        return all(not row.outliers for row in self.rows)

    def to_dict(self, timings: bool = True) -> dict:
        out = {"k": self.k, "seed": self.seed, "band": list(self.band),
               "rows": [asdict(r) for r in self.rows]}
        if timings:
            out["timings"] = self.timings
        return out

    def csv_rows(self):
        return [
            [getattr(r, c) if c != "outliers" else len(r.outliers) for c in self.CSV_COLUMNS]
            for r in self.rows
        ]


# -- closed forms and bounds -------------------------------------------------

def _check_prime(p):
    if not isinstance(p, (int, np.integer)) or p < 5 or not is_prime(int(p)):
        raise InvalidArgumentError(f"p must be a prime >= 5, got {p}")


def weil_u3_closed_form(p: int) -> float:
    """``((2p - 1) / p^2)^(1/8)``, the exact U^3 norm of the cubic phase on Z_p."""
    _check_prime(p)
    return ((2 * p - 1) / p**2) ** 0.125


def rounded_u3_bound(p: int) -> float:
    _check_prime(p)
    return (2 / p) ** 0.125


def gap_floor(p: int) -> float:
    """``(p / 2)^(1/8)``, the gap guaranteed by the cruder U^3 bound."""
    return (p / 2) ** 0.125


def jcb_upper_bound(f0: ScalarFunction, g: FiniteAbelianGroup) -> float:
    """Certified upper bound ``|G|^2 ||f0||_{U^3}`` on the jcb norm of ``ap_form(f0, g)``."""
    if f0.group != g:
        raise InvalidArgumentError(f"f0 lives on {f0.group}, not on {g}")
    return g.order**2 * scalar_gowers_norm(f0, 3)


def sym_lower_bound(T: TrilinearForm) -> float:
    """``||T||_2^2 / Delta(T)`` for a symmetric form."""
    if not is_symmetric(T):
        raise InvalidArgumentError("the Varopoulos bound needs a symmetric form")
    dlt = delta(T)
    if dlt == 0:
        raise DegenerateInputError("Delta(T) = 0: the form is zero")
    return l2_norm_sq(T) / dlt


@dataclass
class VaropoulosWitness:
    matrices: np.ndarray
    value: float
    bound: float
    delta: float
    max_norm: float
    max_commutator: float


def varopoulos_matrices(T: TrilinearForm, dlt: float | None = None) -> np.ndarray:
    """Block matrices ``X_i`` of size ``2n + 2`` built from the axis-1 slices.

    Row/column blocks have sizes 1, n, n, 1; ``X_i`` holds ``e_i`` in block
    (2, 1), ``W_i^*`` in block (3, 2) and ``e_i^T`` in block (4, 3), where
    ``W_i = M_i / Delta(T)``.
    """
    n = T.n
    if dlt is None:
        dlt = delta(T)
    W = T.entries / dlt
    D = 2 * n + 2
    X = np.zeros((n, D, D), dtype=complex)
    idx = np.arange(n)
    X[idx, 1 + idx, 0] = 1.0
    X[:, 1 + n:1 + 2 * n, 1:1 + n] = np.conj(np.swapaxes(W, 1, 2))
    X[idx, D - 1, 1 + n + idx] = 1.0
    return X


def _max_pairwise_commutator(X) -> float:
    """Exact max of ``||[X_i, X_j]||`` over pairs.

    Products are restricted to the nonzero rows and columns of ``X_i``. The
    Frobenius norm bounds the operator norm from above, so only pairs whose
    Frobenius norm beats the running maximum get an exact norm.
    """
    n = X.shape[0]
    worst = 0.0
    for i in range(n - 1):
        A = X[i]
        rows = np.flatnonzero(A.any(axis=1))
        cols = np.flatnonzero(A.any(axis=0))
        rest = X[i + 1:]
        C = np.zeros_like(rest)
        if rows.size:
            block = A[np.ix_(rows, cols)]
            C[:, rows, :] += block @ rest[:, cols, :]
            C[:, :, cols] -= rest[:, :, rows] @ block
        frob = np.sqrt(np.sum(np.abs(C) ** 2, axis=(1, 2)))
        for j in np.argsort(-frob, kind="stable"):
            if frob[j] <= worst:
                break
            worst = max(worst, operator_norm(C[j]))
    return float(worst)


def varopoulos_witness(T: TrilinearForm) -> VaropoulosWitness:
    """Commuting contractions whose product lift certifies ``||T||_sym >= value``."""
    if not is_symmetric(T):
        raise InvalidArgumentError(
            "Varopoulos witness needs a symmetric form (commutation uses M_j e_i = M_i e_j)"
        )
    dlt = delta(T)
    if dlt == 0:
        raise DegenerateInputError("Delta(T) = 0: the form is zero")
    X = varopoulos_matrices(T, dlt)
    max_norm = float(operator_norms(X).max())
    if max_norm > 1 + CONTRACTION_TOL:
        raise InternalError(f"witness matrix has norm {max_norm!r} > 1")
    max_comm = _max_pairwise_commutator(X)
    if max_comm > COMMUTATOR_TOL:
        raise InternalError(f"witness matrices fail to commute (norm {max_comm!r})")
    value = operator_norm(lift_eval(T, X, X, X, mode="product"))
    bound = l2_norm_sq(T) / dlt
    if value < bound - WITNESS_TOL:
        raise InternalError(f"witness value {value!r} below the bound {bound!r}")
    return VaropoulosWitness(X, value, bound, dlt, max_norm, max_comm)


def gap_certificate(p: int) -> GapReport:
    """Certified jcb upper and sym lower bounds for the symmetrized cubic AP form on Z_p."""
    _check_prime(p)
    timings = {}
    t0 = time.perf_counter()
    g = make_cyclic(p)
    f0 = weil_cubic_function(p)
    phi = ap_form(f0, g)
    phi_bar = symmetrize(phi)
    timings["construct"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    u3 = scalar_gowers_norm(f0, 3)
    timings["u3"] = time.perf_counter() - t0
    u3_closed = weil_u3_closed_form(p)
    jcb_base = g.order**2 * u3
    # Delta(phi) = 1 and ||phi||_2^2 = p^2 for the AP form; not symmetric itself
    sym_base = l2_norm_sq(phi) / delta(phi)

    t0 = time.perf_counter()
    sym_sym = sym_lower_bound(phi_bar)
    witness = varopoulos_witness(phi_bar)
    timings["varopoulos"] = time.perf_counter() - t0

    jcb_sym = 6 * jcb_base
    ratio = sym_sym / jcb_sym
    floor = gap_floor(p)
    certified = bool(
        witness.value >= sym_sym - WITNESS_TOL
        and abs(u3 - u3_closed) <= INEQUALITY_TOL
        and ratio >= floor - INEQUALITY_TOL
    )
    return GapReport(
        p=int(p),
        u3_exact=u3,
        u3_closed_form=u3_closed,
        u3_rounded_bound=rounded_u3_bound(p),
        jcb_upper_base=jcb_base,
        sym_lower_base=sym_base,
        jcb_upper_sym=jcb_sym,
        sym_lower_sym=sym_sym,
        varopoulos_value=witness.value,
        gap_ratio=ratio,
        paper_floor=floor,
        certified=certified,
        tolerances={
            "inequality": INEQUALITY_TOL,
            "witness": WITNESS_TOL,
            "contraction": CONTRACTION_TOL,
            "commutator": COMMUTATOR_TOL,
        },
        timings=timings,
    )


# -- randomized verifiers ----------------------------------------------------

def _trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def vdc_sides(g: FiniteAbelianGroup, B, F) -> tuple[float, float]:
    """Both sides of the matrix van der Corput inequality.

    ``B`` has shape ``(|S|, d, d)`` and ``F`` has shape ``(|S|, |G|, d, d)``
    with ``F[s, x] = F_s(x)``. Returns
    ``(||E_s E_x B(s) F_s(x)||, ||E_s E_{x,h} F_s(x)^* F_s(x+h)||^(1/2))``.
    """
    B = np.asarray(B, dtype=complex)
    F = np.asarray(F, dtype=complex)
    lhs = operator_norm(np.mean(B[:, None] @ F, axis=(0, 1)))
    adj = np.conj(np.swapaxes(F, -1, -2))
    derivs = adj[:, None, :] @ F[:, g.add_table]  # axes (s, h, x)
    rhs = operator_norm(np.mean(derivs, axis=(0, 1, 2))) ** 0.5
    return lhs, rhs


def verify_vdc(g: FiniteAbelianGroup, d: int, s_count: int, trials: int, seed: int = 0,
               mode: str = "unitary", tol: float = INEQUALITY_TOL) -> VerificationReport:
    """Sample ``B: S -> ball`` and ``F_s: G -> ball`` and check van der Corput."""
    t0 = time.perf_counter()

    def trial(t):
        rng = _trial_rng(seed, t)
        B = sample_contractions(rng, s_count, d, mode)
        F = sample_contractions(rng, s_count * g.order, d, mode).reshape(s_count, g.order, d, d)
        return vdc_sides(g, B, F)

    results = ordered_map(trial, range(trials))
    return VerificationReport(
        lemma="matrix-van-der-corput",
        seed=seed,
        tolerance=tol,
        lhs=[r[0] for r in results],
        rhs=[r[1] for r in results],
        params={"group": g.descriptor, "d": d, "s": s_count, "mode": mode},
        timings={"total": time.perf_counter() - t0},
    )


def commuting_family(f0: ScalarFunction, X, Y, Z) -> list[np.ndarray]:
    """``A_0 = f0 I(x)I(x)I``, ``A_1 = X(x)I(x)I``, ``A_2 = I(x)Y(x)I``, ``A_3 = I(x)I(x)Z``."""
    X, Y, Z = (np.asarray(M, dtype=complex) for M in (X, Y, Z))
    d = X.shape[-1]
    eye = np.eye(d)
    ones = np.eye(d**3)

    def leg(M, pos):
        mats = [eye, eye, eye]
        out = []
        for m in M:
            mats[pos] = m
            out.append(np.kron(np.kron(mats[0], mats[1]), mats[2]))
        return np.array(out)

    A0 = f0.values[:, None, None] * ones
    return [A0, leg(X, 0), leg(Y, 1), leg(Z, 2)]


def max_family_commutator(A) -> float:
    """Largest ``[A_i(x), A_j(y)]`` or ``[A_i(x)^*, A_j(y)]`` norm over distinct ``i, j``."""
    worst = 0.0
    for i in range(len(A)):
        for j in range(len(A)):
            if i == j:
                continue
            for left in (A[i], np.conj(np.swapaxes(A[i], -1, -2))):
                L = left[:, None]
                R = A[j][None, :]
                C = L @ R - R @ L
                worst = max(worst, float(operator_norms(C).max()))
    return worst


def gvn_lhs(g: FiniteAbelianGroup, A) -> float:
    """``|| E_{x,y} A_0(y) A_1(x) A_2(x+y) A_3(x+2y) ||``."""
    add = g.add_table
    n = g.order
    A0, A1, A2, A3 = A
    total = np.zeros(A0.shape[1:], dtype=complex)
    for x in range(n):
        y = np.arange(n)
        xy = add[x, y]
        x2y = add[xy, y]
        total += np.sum(A0[y] @ A1[x] @ A2[xy] @ A3[x2y], axis=0)
    return operator_norm(total / n**2)


def verify_gvn(f0: ScalarFunction, g: FiniteAbelianGroup, d: int, trials: int, seed: int = 0,
               mode: str = "unitary", tol: float = INEQUALITY_TOL) -> VerificationReport:
    """Check the non-commutative generalized von Neumann inequality on tensor-leg families.

    The left side is also a witness for the commuting-family norm of the AP
    form, scaled by ``1 / |G|^2``.
    """
    if f0.group != g:
        raise InvalidArgumentError(f"f0 lives on {f0.group}, not on {g}")
    if np.abs(f0.values).max() > 1 + CONTRACTION_TOL:
        raise InvalidArgumentError("f0 must take values in the unit disc")
    t0 = time.perf_counter()
    n = g.order
    rhs = matrix_gowers_norm(MatrixFunction.from_scalar(f0, d**3), 3)

    def trial(t):
        rng = _trial_rng(seed, t)
        X, Y, Z = sample_contractions(rng, 3 * n, d, mode).reshape(3, n, d, d)
        A = commuting_family(f0, X, Y, Z)
        worst = max_family_commutator(A)
        if worst > COMMUTATOR_TOL:
            raise InternalError(f"tensor-leg family fails to commute ({worst!r})")
        return gvn_lhs(g, A), worst

    results = ordered_map(trial, range(trials))
    commutators = [w for _, w in results]
    return VerificationReport(
        lemma="noncommutative-gvn",
        seed=seed,
        tolerance=tol,
        lhs=[r[0] for r in results],
        rhs=[rhs] * trials,
        params={
            "group": g.descriptor, "d": d, "mode": mode,
            "derivative_order": DERIVATIVE_ORDER,
            "max_commutator": max(commutators, default=0.0),
        },
        timings={"total": time.perf_counter() - t0},
    )


def summarize_survey(size: int, k: int, values, band=(0.3, 3.0)) -> SurveyRow:
    """Quantiles of U^k values; outliers are trials with value 1 or normalized ratio outside ``band``."""
    values = list(values)
    scale = size ** (1.0 / 2**k)
    normalized = [v * scale for v in values]
    outliers = [
        t for t, (v, r) in enumerate(zip(values, normalized))
        if v >= 1 - INEQUALITY_TOL or not band[0] <= r <= band[1]
    ]
    return SurveyRow(
        size=size, k=k, trials=len(values),
        min=min(values), median=statistics.median(values), max=max(values),
        normalized_min=min(normalized), normalized_median=statistics.median(normalized),
        normalized_max=max(normalized),
        outliers=outliers,
    )


def random_sign_survey(sizes, k: int, trials: int, seed: int = 0, sampler=None) -> SurveyTable:
    """U^k statistics of random sign functions on cyclic groups of the given sizes.

    ``sampler(group, seed)`` replaces :func:`random_sign_function` when given.
    """
    if k not in (2, 3):
        raise InvalidArgumentError(f"survey supports k = 2 or 3, got {k}")
    sampler = sampler or random_sign_function
    t0 = time.perf_counter()
    rows = []
    for size in sizes:
        g = make_cyclic(size)
        seeds = [np.random.SeedSequence([seed, size, t]).generate_state(1)[0] for t in range(trials)]
        values = ordered_map(lambda s: scalar_gowers_norm(sampler(g, int(s)), k), seeds)
        rows.append(summarize_survey(size, k, values))
    return SurveyTable(k=k, seed=seed, rows=rows, timings={"total": time.perf_counter() - t0})

