import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opradii.complexmat import DimensionOverflow, op_norm, poly_eval
from opradii.fock import (
    DegreeOverflow, FockTruncation, NcPoly, check_popescu_bounds, coeff_l2_bound,
    creation_matrices, creation_matrix, eval_nc_poly, fock_operator, joint_numerical_radius,
    joint_radius_variational, nc_mobius_series, nc_sup_norm, ncpoly_from_json, ncpoly_to_json,
    series_length,
)
from opradii.radii import numerical_radius

from conftest import N2, random_matrix

# stored asymmetric example: w_J of a tuple and of its adjoints differ
ASYM_TS = (N2, np.diag([1.0, 0.0]).astype(complex))
ASYM_M = 6
ASYM_VALUE = 1.1376120531877112
ASYM_ADJOINT_VALUE = 0.923879532511287


def random_ncpoly(rng, n, degree, zero_constant=False):
    coeffs = {}
    words = [()]
    layer = [()]
    for _ in range(degree):
        layer = [w + (i,) for w in layer for i in range(1, n + 1)]
        words += layer
    for w in words:
        coeffs[w] = complex(rng.standard_normal(), rng.standard_normal())
    if zero_constant:
        coeffs[()] = 0
    return NcPoly(n, coeffs)


def scalar_mobius_taylor(p, K):
    # coefficients of (p - a0)/(1 - conj(a0) p) from h (1 - conj(a0) p) = p - a0
    a0 = p[0]
    q = np.array(p, dtype=complex)
    q[0] = 0
    q = np.concatenate([q, np.zeros(K + 1)])[:K + 1]
    pp = np.concatenate([np.array(p, dtype=complex), np.zeros(K + 1)])[:K + 1]
    h = np.zeros(K + 1, dtype=complex)
    for k in range(K + 1):
        acc = q[k] + np.conj(a0) * sum(pp[j] * h[k - j] for j in range(1, k + 1))
        h[k] = acc / (1 - abs(a0) ** 2)
    return h


# ------------------------------------------------------------------ basis

@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("m", range(7))
def test_basis_count(n, m):
    t = FockTruncation(n, m)
    assert len(t.basis) == t.size == (n ** (m + 1) - 1) // (n - 1)


def test_basis_order_and_index():
    t = FockTruncation(2, 2)
    assert t.basis == ((), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2))
    assert [t.index(w) for w in t.basis] == list(range(7))
    assert FockTruncation(1, 4).size == 5
    with pytest.raises(KeyError):
        t.index((3,))


# ------------------------------------------------------ creation operators

def test_creation_matrix_examples():
    S = creation_matrix(FockTruncation(1, 3), 1)
    np.testing.assert_array_equal(S, np.eye(4, k=-1))
    S1 = creation_matrix(FockTruncation(2, 1), 1)
    np.testing.assert_array_equal(S1, [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        creation_matrix(FockTruncation(2, 1), 3)


@pytest.mark.parametrize("n, m", [(1, 5), (2, 4), (3, 3)])
def test_creation_relations(n, m):
    t = FockTruncation(n, m)
    S = creation_matrices(t)
    low = np.diag([1.0 if len(w) < m else 0.0 for w in t.basis])
    for i in range(n):
        assert np.all(np.sum(S[i] != 0, axis=0) <= 1)
        for j in range(n):
            P = S[i].conj().T @ S[j]
            np.testing.assert_array_equal(P, low if i == j else np.zeros_like(P))


# ------------------------------------------------------------ polynomials

def test_ncpoly_normalises():
    p = NcPoly(2, {(2,): 1, (): 0, (1, 2): 3, (1,): 0.0})
    assert list(p.coeffs) == [(2,), (1, 2)]
    assert p.degree == 2 and p.constant == 0
    with pytest.raises(ValueError):
        NcPoly(2, {(3,): 1})
    assert NcPoly(2, {}).degree == 0


def test_ncpoly_product_is_concatenation(rng):
    a = random_ncpoly(rng, 2, 2)
    b = random_ncpoly(rng, 2, 1)
    prod = a * b
    expected = {}
    for wa, ca in a.coeffs.items():
        for wb, cb in b.coeffs.items():
            expected[wa + wb] = expected.get(wa + wb, 0) + ca * cb
    expected = NcPoly(2, expected)
    assert list(prod.coeffs) == list(expected.coeffs)
    for w, c in expected.coeffs.items():
        assert prod.coeffs[w] == pytest.approx(c, abs=1e-13)


def test_eval_nc_poly_examples(rng):
    A, B = random_matrix(rng, 3), random_matrix(rng, 3)
    np.testing.assert_array_equal(eval_nc_poly(NcPoly(2, {(): 1}), [A, B]), np.eye(3))
    np.testing.assert_allclose(eval_nc_poly(NcPoly(2, {(1, 2): 1}), [A, B]), A @ B)
    with pytest.raises(ValueError, match="DimensionMismatch"):
        eval_nc_poly(NcPoly(2, {(1,): 1}), [A, np.eye(2)])


def test_eval_nc_poly_univariate(rng):
    T = random_matrix(rng, 4, 0.5)
    c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    p = NcPoly(1, {(1,) * k: c[k] for k in range(6)})
    np.testing.assert_allclose(eval_nc_poly(p, [T]), poly_eval(c, T), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_eval_nc_poly_homomorphism(seed):
    rng = np.random.default_rng(seed)
    Ts = [random_matrix(rng, 2, 0.7) for _ in range(2)]
    a = random_ncpoly(rng, 2, 2)
    b = random_ncpoly(rng, 2, 2)
    lhs = eval_nc_poly(a * b, Ts)
    rhs = eval_nc_poly(a, Ts) @ eval_nc_poly(b, Ts)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1, np.max(np.abs(rhs)))


def test_json_roundtrip(rng):
    p = random_ncpoly(rng, 3, 2)
    q = ncpoly_from_json(ncpoly_to_json(p))
    assert q == p
    with pytest.raises(ValueError):
        ncpoly_from_json({"n": 2})
    with pytest.raises(ValueError):
        ncpoly_from_json({"n": 1, "terms": [{"word": [1], "re": float("nan")}]})


# -------------------------------------------------------------- sup norm

def test_nc_sup_norm_examples():
    v, gap = nc_sup_norm(NcPoly(2, {(): 1}), 3)
    assert v == 1.0 and gap == 0.0
    assert nc_sup_norm(NcPoly(2, {(1,): 1}), 3)[0] == pytest.approx(1.0, abs=1e-14)
    v, gap = nc_sup_norm(NcPoly(2, {(1,): 1, (2,): 1}), 4)
    assert v == pytest.approx(math.sqrt(2), abs=1e-12)
    assert abs(gap) < 1e-10
    with pytest.raises(ValueError):
        nc_sup_norm(NcPoly(2, {(1, 1): 1}), 3)
    with pytest.raises(DimensionOverflow):
        nc_sup_norm(NcPoly(3, {(1,): 1}), 9)


def test_nc_sup_norm_monotone_and_above_l2(rng):
    for _ in range(4):
        p = random_ncpoly(rng, 2, 2)
        vals = [nc_sup_norm(p, m)[0] for m in range(4, 8)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert coeff_l2_bound(p) <= vals[-1] + 1e-8


def test_coeff_l2_bound_examples():
    assert coeff_l2_bound(NcPoly(2, {(): 0.6 - 0.8j})) == pytest.approx(1.0)
    assert coeff_l2_bound(NcPoly(2, {(): 1, (1,): 1})) == pytest.approx(math.sqrt(2))


# -------------------------------------------------- joint numerical radius

def test_joint_radius_reduces_to_numerical_radius(rng):
    T = random_matrix(rng, 3)
    rep = joint_numerical_radius([T], 100)
    w = numerical_radius(T).value
    assert abs(rep.value - w) <= 1e-3 * max(1, w)
    assert rep.conv_gap < 1e-4
    assert rep.value <= w + 1e-9 <= rep.upper + 1e-9


def test_joint_radius_examples(rng):
    assert joint_numerical_radius([np.zeros((2, 2))] * 2, 4).value == 0.0
    Ts = [random_matrix(rng, 2) for _ in range(2)]
    base = joint_numerical_radius(Ts, 5).value
    c = 0.7 - 1.3j
    assert joint_numerical_radius([c * T for T in Ts], 5).value == pytest.approx(abs(c) * base, abs=1e-6)
    with pytest.raises(ValueError):
        joint_numerical_radius(Ts, 1)


def test_joint_radius_graded_matches_theta_scan(rng):
    Ts = [random_matrix(rng, 2) for _ in range(2)]
    a = joint_numerical_radius(Ts, 3).value
    b = joint_numerical_radius(Ts, 3, method="theta-scan").value
    assert a == pytest.approx(b, abs=1e-8)


def test_joint_radius_monotone_in_m(rng):
    Ts = [random_matrix(rng, 2) for _ in range(2)]
    vals = [joint_numerical_radius(Ts, m).value for m in range(2, 8)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    rep = joint_numerical_radius(Ts, 7)
    assert rep.previous == pytest.approx(vals[-2]) and rep.conv_gap >= 0


def test_joint_radius_adjoint_asymmetry():
    rep = joint_numerical_radius(ASYM_TS, ASYM_M)
    adj = joint_numerical_radius([T.conj().T for T in ASYM_TS], ASYM_M)
    assert rep.value == pytest.approx(ASYM_VALUE, abs=1e-12)
    assert adj.value == pytest.approx(ASYM_ADJOINT_VALUE, abs=1e-12)
    assert rep.value - adj.value > 1e-3
    # the certified brackets do not overlap either
    assert rep.value > adj.upper


def test_fock_operator_overflow():
    with pytest.raises(DimensionOverflow):
        fock_operator([np.eye(3)] * 3, 7)


def test_joint_radius_variational_examples(rng):
    t = FockTruncation(2, 3)
    assert joint_radius_variational([np.zeros((2, 2))] * 2, t) == 0.0
    m = 8
    v = joint_radius_variational([np.array([[0.5]])], FockTruncation(1, m), restarts=5)
    assert v == pytest.approx(0.5 * math.cos(math.pi / (m + 2)), abs=1e-6)


@pytest.mark.parametrize("seed", [0, 1])
def test_joint_radius_variational_agrees(seed):
    rng = np.random.default_rng(seed)
    Ts = [random_matrix(rng, 2) for _ in range(2)]
    t = FockTruncation(2, 6)
    v = joint_radius_variational(Ts, t, restarts=50, steps=400, seed=seed)
    w = joint_numerical_radius(Ts, 6).value
    assert v <= w + 1e-6
    assert v == pytest.approx(w, abs=1e-3)


# ------------------------------------------------------------ Mobius series

def test_series_length():
    assert series_length(0) == 0
    N = series_length(0.5)
    assert 0.5 ** (N + 1) / 0.5 < 1e-8 <= 0.5 ** N / 0.5
    assert series_length(0.999999) == 200


def test_mobius_series_examples(rng):
    p = random_ncpoly(rng, 2, 2, zero_constant=True)
    assert nc_mobius_series(p, N_terms=5) == p
    assert nc_mobius_series(NcPoly(2, {(): 0.4j}), N_terms=7) == NcPoly(2, {})
    p = random_ncpoly(rng, 2, 2).scale(0.1)
    h = nc_mobius_series(p, degree_cap=4)
    assert h.constant == 0 and () not in h.coeffs
    with pytest.raises(ValueError):
        nc_mobius_series(NcPoly(1, {(): 1.0}))
    with pytest.raises(DegreeOverflow):
        nc_mobius_series(NcPoly(3, {(): 0.5, (1,): 0.1}), degree_cap=12)


@pytest.mark.parametrize("coeffs", [
    [0.5, 0.3],
    [0.2 - 0.4j, 0.1j, -0.25],
    [-0.6, 0.2, 0.1, 0.05j],
])
def test_mobius_series_scalar_oracle(coeffs):
    cap = 10
    p = NcPoly(1, {(1,) * k: c for k, c in enumerate(coeffs)})
    h = nc_mobius_series(p, N_terms=400, degree_cap=cap)
    got = np.array([h.coeffs.get((1,) * k, 0) for k in range(cap + 1)])
    expected = scalar_mobius_taylor(coeffs, cap)
    assert np.max(np.abs(got - expected)) <= 1e-10


# --------------------------------------------------------------- Popescu

def test_popescu_identity_polynomial(rng):
    Ts = [random_matrix(rng, 2) for _ in range(2)]
    scale = joint_numerical_radius(Ts, 6).upper
    rep = check_popescu_bounds([T / scale for T in Ts], [NcPoly(2, {(): 1})])
    drury = [c for c in rep["hard_checks"] if c["name"] == "popescu_drury"][0]
    assert drury["margin"] == pytest.approx(0.25)
    assert not rep["violations"]


def test_popescu_univariate_matches_named_bounds(rng):
    T = random_matrix(rng, 2)
    T /= joint_numerical_radius([T], 60).upper
    ps = [random_ncpoly(rng, 1, 3) for _ in range(5)]
    assert not check_popescu_bounds([T], ps, m=8)["violations"]


def test_popescu_random_pairs(rng):
    Ts = [random_matrix(rng, 2) for _ in range(2)]
    scale = joint_numerical_radius(Ts, 6).upper
    Ts = [T / scale for T in Ts]
    ps = [random_ncpoly(rng, 2, 2, zero_constant=bool(k % 2)) for k in range(6)]
    rep = check_popescu_bounds(Ts, ps)
    assert not rep["violations"]
    assert any(c["name"] == "popescu_berger_stampfli" for c in rep["hard_checks"])
    bad = check_popescu_bounds(Ts, ps, bound_scale=0.1)
    assert bad["violations"]
