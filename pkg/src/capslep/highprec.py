"""Extended-precision assembly of the concentration matrix ``K_m``.

The reference route of the eigenvector error analysis needs ``K_m`` to far
more digits than binary64 holds. Everything here is written against a small
arithmetic kit, so the same code runs in double-double and in mpmath.
"""
from __future__ import annotations

from fractions import Fraction

from .capop import FixedOrderProblem
from .ddouble import DoubleDouble
from .flm import min_degree

__all__ = ["Arith", "dd_arith", "mp_arith", "gauss_legendre_hp", "F_column_hp", "assemble_K_hp"]


class Arith:
    """Conversion and square root for one number type."""

    def __init__(self, name, from_fraction, sqrt, eps):
        self.name = name
        self.from_fraction = from_fraction
        self.sqrt = sqrt
        self.eps = eps

    def num(self, x):
        """Exact conversion of an int, float or Fraction."""
        return self.from_fraction(Fraction(x))

    def sqrt_ratio(self, p, q):
        return self.sqrt(self.from_fraction(Fraction(p, q)))


def dd_arith() -> Arith:
    return Arith("dd", DoubleDouble, DoubleDouble.sqrt, DoubleDouble(2.0 ** -104))


def mp_arith(dps: int = 100) -> Arith:
    import mpmath

    ctx = mpmath.mp.clone()
    ctx.dps = dps
    return Arith(
        f"mp{dps}",
        lambda f: ctx.mpf(f.numerator) / f.denominator,
        ctx.sqrt,
        ctx.mpf(10) ** (-dps),
    )


def gauss_legendre_hp(n: int, ar: Arith):
    """Gauss-Legendre nodes and weights on ``[-1, 1]`` in the kit's precision."""
    import math

    one = ar.num(1)
    nodes, weights = [], []
    for k in range(1, n // 2 + 1):
        x = ar.num(math.cos(math.pi * (k - 0.25) / (n + 0.5)))
        for _ in range(200):
            p0, p1 = one, x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - one)
            dx = p1 / dp
            x = x - dx
            if abs(dx) <= 4 * ar.eps:
                break
        p0, p1 = one, x
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - one)
        nodes.append(x)
        weights.append(2 / ((one - x * x) * dp * dp))
    mid = []
    if n % 2:
        p0, p1 = one, ar.num(0)
        # P_n'(0) = n P_{n-1}(0)
        for j in range(2, n):
            p0, p1 = p1, (-(j - 1) * p0) / j
        pn1 = p1 if n > 1 else one
        dp0 = n * pn1
        mid = [(ar.num(0), 2 / (dp0 * dp0))]
    neg = [(-x, w) for x, w in zip(nodes, weights)]
    pos = [(x, w) for x, w in reversed(list(zip(nodes, weights)))]
    pairs = neg + mid + pos
    return [x for x, _ in pairs], [w for _, w in pairs]


def F_column_hp(m: int, L: int, x, ar: Arith):
    """``F_{l_m,m}(x), ..., F_{L,m}(x)`` at one point ``x`` of the kit type."""
    lm = min_degree(m)
    one = ar.num(1)
    s = ar.sqrt(one - x * x)
    mm = abs(m)
    if m == 0:
        f = ar.sqrt_ratio(3, 4) * s
    else:
        f = ar.sqrt_ratio(3, 4)
        for k in range(2, mm + 1):
            f = f * ar.sqrt_ratio(2 * k + 1, 2 * k) * s
        f = f * ar.sqrt_ratio(mm, mm + 1)
        if m > 0:
            f = f * (one + x)
            if mm % 2 == 0:
                f = -f
        else:
            f = f * (one - x)
    out = [f]
    prev = 0 * one
    for l in range(lm, L):
        num1 = l * (l + 2) * (l + 1 + m) * (l + 1 - m)
        den1 = (2 * l + 3) * (2 * l + 1) * (l + 1) ** 2
        alpha = ar.sqrt_ratio(den1, num1)
        if l > lm:
            num0 = (l + 1) * (l - 1) * (l + m) * (l - m)
            den0 = (2 * l + 1) * (2 * l - 1) * l * l
            beta = ar.sqrt_ratio(num0 * den1, den0 * num1)
        else:
            beta = 0 * one
        nxt = alpha * (x - ar.num(Fraction(m, l * (l + 1)))) * out[-1] - beta * prev
        prev = out[-1]
        out.append(nxt)
    return out


def assemble_K_hp(problem: FixedOrderProblem, ar: Arith):
    """``K_m`` as a nested list in the kit's precision.

    The cap boundary is the binary64 value ``problem.cap.cos_theta`` taken
    exactly, so this is the exact-arithmetic counterpart of the matrix built
    by :func:`capslep.capop.assemble_K`.
    """
    L, m = problem.L, problem.m
    c = ar.num(problem.cap.cos_theta)
    one = ar.num(1)
    xs, ws = gauss_legendre_hp(L + 1, ar)
    half, mid = (one - c) / 2, (one + c) / 2
    cols = []
    for x, w in zip(xs, ws):
        cols.append((F_column_hp(m, L, mid + half * x, ar), half * w))
    n = problem.size
    K = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = 0 * one
            for F, w in cols:
                acc = acc + w * F[i] * F[j]
            K[i][j] = K[j][i] = acc
    return K
