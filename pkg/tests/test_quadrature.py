import math

import numpy as np
import pytest

from capslep.quadrature import N_MAX, QuadRule, gauss_legendre, map_interval


def ulps(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.spacing(np.abs(b)))


def test_small_rules():
    r1 = gauss_legendre(1)
    assert list(r1.nodes) == [0.0] and list(r1.weights) == [2.0]
    r2 = gauss_legendre(2)
    assert ulps(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)]) <= 2
    assert r2.weights == pytest.approx([1, 1], abs=1e-15)
    r3 = gauss_legendre(3)
    s = math.sqrt(0.6)
    assert r3.nodes[1] == 0.0
    assert ulps(r3.nodes[[0, 2]], [-s, s]) <= 2
    assert r3.weights == pytest.approx([5 / 9, 8 / 9, 5 / 9], abs=1e-15)


def test_against_numpy_leggauss():
    for n in (4, 17, 64, 200):
        x, w = np.polynomial.legendre.leggauss(n)
        r = gauss_legendre(n)
        assert np.max(np.abs(r.nodes - x)) <= 1e-14
        assert np.max(np.abs(r.weights - w)) <= 1e-14


@pytest.mark.parametrize("n", [1, 2, 3, 10, 33, 64])
def test_moments(n):
    r = gauss_legendre(n)
    x = r.nodes
    for k in range(0, 2 * n):
        # odd powers built sign-symmetrically
        vals = np.sign(x) ** k * np.abs(x) ** k
        got = float(r.integrate(vals))
        if k % 2:
            assert got == 0.0
        else:
            assert got == pytest.approx(2 / (k + 1), abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 7, 8, 50, 101])
def test_structure(n):
    r = gauss_legendre(n)
    assert np.array_equal(r.nodes, -r.nodes[::-1])
    assert np.all(np.diff(r.nodes) > 0)
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - 2) <= 1e-14
    assert r.n == n


def test_errors():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(MemoryError):
        gauss_legendre(N_MAX + 1)
    with pytest.raises(ValueError):
        map_interval(gauss_legendre(2), 1.0, 1.0)


def test_map_interval():
    r = map_interval(gauss_legendre(1), 0, 1)
    assert list(r.nodes) == [0.5] and list(r.weights) == [1.0]
    r2 = map_interval(gauss_legendre(2), -1, 1)
    assert np.array_equal(r2.nodes, gauss_legendre(2).nodes)
    r3 = map_interval(gauss_legendre(3), 0.5, 1)
    assert abs(r3.weights.sum() - 0.5) <= 1e-15
    assert np.all((r3.nodes > 0.5) & (r3.nodes < 1))


def test_rules_are_read_only():
    r = gauss_legendre(4)
    with pytest.raises(ValueError):
        r.nodes[0] = 1.0
    with pytest.raises(ValueError):
        QuadRule([0.0, 1.0], [1.0])
