import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capslep.flm import (christoffel_darboux_rhs, eval_F, eval_F_column, eval_F_deriv_combo,
                         eval_F_deriv_combo_upper, eval_F_via_U, kernel_K, min_degree,
                         sturm_liouville_residual, zeta)
from capslep.legendre import c_norm, eval_U
from capslep.quadrature import gauss_legendre
from oracles import direct_F, fd

F11_0 = 0.6123724356957945  # c_{1,1}/sqrt(2)


@pytest.mark.parametrize("l,m,x,want", [
    (1, 0, 0.0, math.sqrt(3) / 2),
    (1, 1, 1.0, math.sqrt(1.5)),
    (1, 1, 0.0, F11_0),
    (2, -1, -1.0, -1.5811388300841898),
])
def test_eval_F_examples(l, m, x, want):
    assert eval_F(l, m, x) == pytest.approx(want, abs=2e-16)


def test_F_l0_is_minus_U_l1():
    # -U_{1,1}(0.7) from the rational oracle
    assert eval_F_via_U(1, 0, 0.7) == pytest.approx(0.6184658438426491, abs=1e-16)
    x = np.linspace(-1, 1, 101)
    for l in range(1, 16):
        assert np.max(np.abs(eval_F(l, 0, x) + eval_U(l, 1, x))) <= 1e-13


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_seed_matches_definition(m):
    # the minimal-degree seed uses (2m-1)!!; checked against the definition
    x = np.array([-0.95, -0.4, 0.0, 0.3, 0.77, 1.0])
    for mm in (m, -m):
        assert np.max(np.abs(eval_F(m, mm, x) - direct_F(m, mm, x))) <= 1e-13
    assert eval_F(1, 1, 1.0) == pytest.approx(c_norm(1, 0), abs=1e-16)


def test_route_equivalence():
    x = np.linspace(-0.99, 0.99, 45)
    for l in range(1, 13):
        for m in range(-l, l + 1):
            f = eval_F(l, m, x)
            assert np.max(np.abs(f - eval_F_via_U(l, m, x))) <= 1e-12
            assert np.max(np.abs(f - direct_F(l, m, x))) <= 1e-12
    assert eval_F_via_U(4, 2, -0.5) == pytest.approx(eval_F(4, 2, -0.5), abs=1e-13)


def test_column_examples():
    assert eval_F_column(0, 1, 0.5)[0] == pytest.approx(0.75, abs=1e-16)
    assert eval_F_column(1, 1, 1.0)[0] == pytest.approx(math.sqrt(1.5), abs=1e-16)
    assert eval_F_column(3, 2, 0.3).shape == (0,)
    col = eval_F_column(2, 5, 0.3)
    for i, l in enumerate(range(2, 6)):
        assert col[i] == eval_F(l, 2, 0.3)


def test_index_errors():
    with pytest.raises(ValueError):
        eval_F(0, 0, 0.1)
    with pytest.raises(ValueError):
        eval_F(2, 3, 0.1)
    with pytest.raises(ValueError):
        eval_F(2, 1, 1.01)
    assert min_degree(0) == 1 and min_degree(-4) == 4


def test_zeta():
    assert zeta(2, 0) == pytest.approx(1 / math.sqrt(5))
    assert zeta(3, 3) == 0.0 and zeta(3, -3) == 0.0
    assert zeta(1, 0) == 0.0


def test_orthonormality():
    L = 12
    rule = gauss_legendre(L + 1)
    for m in range(-L, L + 1):
        F = eval_F_column(m, L, rule.nodes)
        G = (F * rule.weights) @ F.T
        assert np.max(np.abs(G - np.eye(G.shape[0]))) <= 1e-12


@given(st.integers(1, 25), st.integers(-25, 25), st.floats(-1, 1))
def test_three_term_recurrence(l, m, x):
    if abs(m) > l:
        m = m % (l + 1)
    col = eval_F_column(m, l + 1, x)
    lm = min_degree(m)
    f = col[l - lm]
    prev = col[l - lm - 1] if l > lm else 0.0
    nxt = col[l - lm + 1]
    res = (x - m / (l * (l + 1))) * f - zeta(l, m) * prev - zeta(l + 1, m) * nxt
    assert abs(res) <= 1e-13 * (1 + abs(f))


@given(st.integers(1, 20), st.integers(-20, 20), st.floats(-1, 1))
def test_symmetry(l, m, x):
    if abs(m) > l:
        m = m % (l + 1)
    assert eval_F(l, -m, -x) == pytest.approx((-1) ** (l + 1) * eval_F(l, m, x), abs=1e-13)


def test_endpoint_values_from_recurrence():
    from capslep.flm import _column
    for l in range(1, 13):
        c = c_norm(l, 0)
        for m in range(-l, l + 1):
            raw = _column(m, l, np.array([1.0, -1.0]), endpoints=False)[-1]
            assert raw[0] == pytest.approx(c if m == 1 else 0.0, abs=1e-12)
            assert raw[1] == pytest.approx((-1) ** (l - 1) * c if m == -1 else 0.0, abs=1e-12)


@pytest.mark.parametrize("x", [-0.9, -0.3, 0.0, 0.6, 1.0])
def test_addition_theorem(x):
    for l in range(1, 21):
        s = sum(eval_F(l, m, x) ** 2 for m in range(-l, l + 1))
        assert s == pytest.approx((2 * l + 1) / 2, rel=1e-11)


def test_deriv_combo_examples():
    assert eval_F_deriv_combo(1, 0, 0.0) == pytest.approx(0.0, abs=1e-16)
    with pytest.raises(ValueError):
        eval_F_deriv_combo(2, 1, 1.0)


@pytest.mark.parametrize("l,m,x", [(2, 1, 0.25), (3, -2, -0.4), (7, 0, 0.55), (9, 5, -0.8)])
def test_deriv_combos_against_finite_differences(l, m, x):
    want = (1 - x * x) * fd(lambda t: eval_F(l, m, t), x)
    assert eval_F_deriv_combo(l, m, x) == pytest.approx(want, abs=1e-7)
    assert eval_F_deriv_combo_upper(l, m, x) == pytest.approx(want, abs=1e-7)


def test_kernel_examples():
    assert kernel_K(1, 1, 0.0, 0.0) == pytest.approx(0.375, abs=1e-15)
    assert kernel_K(0, 1, 1.0, 1.0) == 0.0
    lhs = (0.3 - 0.7) * kernel_K(2, 4, 0.3, 0.7)
    assert lhs == pytest.approx(christoffel_darboux_rhs(2, 4, 0.3, 0.7), abs=1e-12)


@given(st.integers(1, 15), st.integers(-15, 15), st.floats(-1, 1), st.floats(-1, 1))
def test_christoffel_darboux(L, m, x, xp):
    if abs(m) > L:
        m = m % (L + 1)
    lhs = (x - xp) * kernel_K(m, L, x, xp)
    assert abs(lhs - christoffel_darboux_rhs(m, L, x, xp)) <= 1e-12
    assert kernel_K(m, L, x, xp) == pytest.approx(kernel_K(m, L, xp, x), abs=1e-14)


@pytest.mark.parametrize("l", [1, 2, 5, 12])
def test_sturm_liouville(l):
    x = np.linspace(-0.9, 0.9, 19)
    for m in range(-l, l + 1):
        r = sturm_liouville_residual(l, m, x)
        assert np.max(np.abs(r)) <= 1e-9 * l * (l + 1) * np.max(np.abs(eval_F(l, m, x)))
