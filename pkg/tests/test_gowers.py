import cmath
import statistics
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gt_gap.errors import InvalidArgumentError, ResourceLimitError
from gt_gap.gowers import (
    MatrixFunction,
    ScalarFunction,
    constant_function,
    iterated_derivative,
    matrix_gowers_norm,
    random_sign_function,
    scalar_gowers_norm,
    weil_cubic_function,
)
from gt_gap.groups import FiniteAbelianGroup, make_cyclic
from oracles import gowers_bruteforce, gowers_recursive, omega


def _random_function(group, seed, unimodular=False):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(group.order) + 1j * rng.standard_normal(group.order)
    if unimodular:
        z = z / np.abs(z)
    return ScalarFunction(group, z)


@pytest.mark.parametrize("moduli", [(5,), (2, 3), (7,)])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_constant_function_has_norm_one(moduli, k):
    assert scalar_gowers_norm(constant_function(FiniteAbelianGroup(moduli)), k) == pytest.approx(1.0, abs=1e-12)


def test_quadratic_phase_u3_is_one():
    g = make_cyclic(5)
    f = ScalarFunction(g, [omega(5, x * x) for x in range(5)])
    assert gowers_bruteforce(g, f.values, 3) == pytest.approx(1.0, abs=1e-12)
    assert scalar_gowers_norm(f, 3) == pytest.approx(1.0, abs=1e-12)


def test_weil_cubic_u3_on_z5():
    # ((2p - 1) / p^2)^(1/8) with p = 5
    value = scalar_gowers_norm(weil_cubic_function(5), 3)
    assert value == pytest.approx(0.36 ** 0.125, abs=1e-12)
    assert value == pytest.approx(0.880112, abs=1e-6)
    assert gowers_bruteforce(make_cyclic(5), weil_cubic_function(5).values, 3) == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("group", [make_cyclic(5), make_cyclic(6), FiniteAbelianGroup((2, 3))])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_enumeration_matches_both_oracles(group, k):
    f = _random_function(group, 100 + k)
    fast = scalar_gowers_norm(f, k)
    assert fast == pytest.approx(gowers_bruteforce(group, f.values, k), abs=1e-10)
    assert fast == pytest.approx(gowers_recursive(group, f.values, k), abs=1e-10)


def test_k4_matches_bruteforce():
    g = make_cyclic(4)
    f = _random_function(g, 3)
    assert scalar_gowers_norm(f, 4) == pytest.approx(gowers_bruteforce(g, f.values, 4), abs=1e-10)


def test_chunked_enumeration_matches_vectorised(monkeypatch):
    import gt_gap.gowers as gw

    f = _random_function(make_cyclic(9), 7)
    whole = gw.gowers_average(f, 3)
    monkeypatch.setattr(gw, "_CHUNK", 50)
    split = gw.gowers_average(f, 3)
    assert abs(whole - split) < 1e-13


def test_worker_count_does_not_change_result(monkeypatch):
    import gt_gap.gowers as gw

    f = _random_function(make_cyclic(11), 8)
    monkeypatch.setattr(gw, "_CHUNK", 200)
    monkeypatch.setenv("GT_GAP_THREADS", "1")
    one = gw.gowers_average(f, 3)
    monkeypatch.setenv("GT_GAP_THREADS", "4")
    four = gw.gowers_average(f, 3)
    assert one == four


def test_budget():
    with pytest.raises(ResourceLimitError):
        scalar_gowers_norm(constant_function(make_cyclic(200)), 4)
    with pytest.raises(InvalidArgumentError):
        scalar_gowers_norm(constant_function(make_cyclic(3)), 5)
    with pytest.raises(ResourceLimitError):
        matrix_gowers_norm(MatrixFunction.from_scalar(constant_function(make_cyclic(100)), 8), 3)


@pytest.mark.parametrize("p", [5, 7])
def test_monotonicity_u2_le_u3(p):
    for seed in range(10):
        f = _random_function(make_cyclic(p), seed, unimodular=True)
        assert scalar_gowers_norm(f, 2) <= scalar_gowers_norm(f, 3) + 1e-9
    f = weil_cubic_function(p)
    assert scalar_gowers_norm(f, 2) <= scalar_gowers_norm(f, 3) + 1e-9


@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_phase_invariance(seed, theta, k):
    f = _random_function(make_cyclic(5), seed)
    g = ScalarFunction(f.group, cmath.exp(1j * theta) * f.values)
    assert abs(scalar_gowers_norm(f, k) - scalar_gowers_norm(g, k)) < 1e-10


@pytest.mark.parametrize("p", [5, 7])
def test_weil_triple_derivative(p):
    f0 = weil_cubic_function(p)
    g = f0.group
    for h1 in range(p):
        for h2 in range(p):
            for h3 in range(p):
                d = iterated_derivative(f0, [h1, h2, h3])
                expected = omega(p, 6 * h1 * h2 * h3)
                assert np.max(np.abs(d.values - expected)) < 1e-12


def test_weil_values():
    f = weil_cubic_function(5)
    assert f.values[0] == 1
    assert abs(f.values[2] - cmath.exp(2j * cmath.pi * 3 / 5)) < 1e-15
    assert np.max(np.abs(np.abs(weil_cubic_function(7).values) - 1)) < 1e-15


@pytest.mark.parametrize("p", [3, 4, 9, 1])
def test_weil_rejects_bad_p(p):
    with pytest.raises(InvalidArgumentError):
        weil_cubic_function(p)


def test_random_signs_range_and_determinism():
    g = make_cyclic(64)
    f = random_sign_function(g, 5)
    assert set(np.real(f.values)) <= {-1.0, 1.0}
    assert np.all(np.imag(f.values) == 0)
    assert np.array_equal(f.values, random_sign_function(g, 5).values)
    assert not np.array_equal(f.values, random_sign_function(g, 6).values)


def _u1_exact_median(n):
    # U^1(f) = |E f| = |2B - n| / n with B ~ Binomial(n, 1/2)
    dist = {}
    for b in range(n + 1):
        v = abs(2 * b - n) / n
        dist[v] = dist.get(v, 0) + comb(n, b) / 2**n
    acc = 0.0
    for v in sorted(dist):
        acc += dist[v]
        if acc >= 0.5:
            return v


def test_u1_is_modulus_of_mean():
    f = random_sign_function(make_cyclic(64), 9)
    assert scalar_gowers_norm(f, 1) == pytest.approx(abs(np.mean(f.values)), abs=1e-14)


def test_u1_of_random_signs():
    g = make_cyclic(64)
    values = [scalar_gowers_norm(random_sign_function(g, s), 1) for s in range(100)]
    median = statistics.median(values)
    exact = _u1_exact_median(64)
    assert exact == pytest.approx(6 / 64)
    assert abs(median - exact) <= 2 / 64
    assert median <= 2 * 64 ** -0.5


# -- matrix norms ---------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_scalar_times_identity(k):
    f = _random_function(make_cyclic(5), 21)
    F = MatrixFunction.from_scalar(f, 3)
    assert matrix_gowers_norm(F, k) == pytest.approx(scalar_gowers_norm(f, k), abs=1e-10)


def test_constant_unitary():
    U = np.linalg.qr(np.random.default_rng(2).standard_normal((3, 3)) + 0j)[0]
    F = MatrixFunction(make_cyclic(5), np.repeat(U[None], 5, axis=0))
    for k in (1, 2, 3):
        assert matrix_gowers_norm(F, k) == pytest.approx(1.0, abs=1e-12)


def test_diagonal_reduces_to_max():
    g = make_cyclic(5)
    f, h = _random_function(g, 1), _random_function(g, 2)
    F = MatrixFunction(g, np.array([np.diag([a, b]) for a, b in zip(f.values, h.values)]))
    k = 2
    pf = gowers_bruteforce(g, f.values, k) ** (2**k)
    ph = gowers_bruteforce(g, h.values, k) ** (2**k)
    assert matrix_gowers_norm(F, k) == pytest.approx(max(pf, ph) ** (1 / 2**k), abs=1e-10)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_d1_agrees_with_scalar(p, k):
    f = _random_function(make_cyclic(p), p * k)
    assert abs(matrix_gowers_norm(MatrixFunction.from_scalar(f, 1), k) - scalar_gowers_norm(f, k)) < 1e-12


def test_matrix_derivative_order_is_right_to_left():
    g = make_cyclic(3)
    rng = np.random.default_rng(4)
    F = MatrixFunction(g, rng.standard_normal((3, 2, 2)) + 1j * rng.standard_normal((3, 2, 2)))
    h1, h2 = 1, 2
    x = 0
    inner = lambda y: F.values[y].conj().T @ F.values[(y + h2) % 3]  # Delta_{h2} first
    expected = inner(x).conj().T @ inner((x + h1) % 3)
    assert np.allclose(iterated_derivative(F, [h1, h2]).values[x], expected)


def test_function_json_round_trip():
    f = weil_cubic_function(7)
    back = ScalarFunction.from_json(f.to_json())
    assert back.group == f.group
    assert back.values.tobytes() == f.values.tobytes()


def test_shape_validation():
    with pytest.raises(InvalidArgumentError):
        ScalarFunction(make_cyclic(5), np.ones(4))
    with pytest.raises(InvalidArgumentError):
        MatrixFunction(make_cyclic(5), np.ones((5, 2, 3)))
