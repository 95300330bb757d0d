"""Normalized associated Legendre functions ``U_lm`` and their couplings.

``U_lm = c_lm P_l^m`` with the Condon-Shortley phase included in ``P_l^m``,
so that ``int_{-1}^{1} U_lm U_l'm dx = delta_ll'``.

All evaluators accept a scalar or an array ``x``. Values for ``m < 0`` come
from the same recurrence as ``|m|`` followed by the factor ``(-1)^m``.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from .ddouble import dd_mul, dd_mul_d, dd_ratio, dd_sqrt, dd_sub, two_prod

__all__ = [
    "c_norm",
    "xi",
    "a_plus",
    "a_minus",
    "b_plus",
    "b_minus",
    "eval_U",
    "eval_U_column",
    "eval_dU_and_ratio",
    "sturm_liouville_residual",
]


def _check_index(l: int, m: int) -> None:
    if l < 0 or abs(m) > l:
        raise ValueError(f"invalid degree/order (l={l}, m={m}); need |m| <= l")


def _as_x(x, closed=True):
    arr = np.asarray(x, dtype=float)
    if closed:
        bad = np.abs(arr) > 1.0
    else:
        bad = np.abs(arr) >= 1.0
    if np.any(bad | ~np.isfinite(arr)):
        interval = "[-1, 1]" if closed else "(-1, 1)"
        raise ValueError(f"argument outside {interval}")
    return arr


def c_norm(l: int, m: int) -> float:
    """Normalization factor ``sqrt((2l+1)/2 (l-m)!/(l+m)!)``."""
    _check_index(l, m)
    # (l-m)!/(l+m)! as a running product keeps this finite for large l
    ratio = 1.0
    for k in range(l - abs(m) + 1, l + abs(m) + 1):
        ratio = ratio / k if m > 0 else ratio * k
    return math.sqrt((2 * l + 1) / 2 * ratio)


def xi(l: int, m: int) -> float:
    """Three-term coupling ``sqrt((l+m)(l-m)/((2l+1)(2l-1)))``.

    Zero whenever ``|m| >= l``.
    """
    if abs(m) >= l:
        return 0.0
    return math.sqrt((l + m) * (l - m) / ((2 * l + 1) * (2 * l - 1)))


def a_plus(l: int, m: int) -> float:
    return math.sqrt(max((l - m) * (l + m + 1), 0)) / 2


def a_minus(l: int, m: int) -> float:
    return -math.sqrt(max((l + m) * (l - m + 1), 0)) / 2


def b_plus(l: int, m: int) -> float:
    if l < 1:
        return 0.0
    return -math.sqrt((2 * l + 1) / (2 * l - 1)) * math.sqrt(max((l - m) * (l - m - 1), 0)) / 2


def b_minus(l: int, m: int) -> float:
    if l < 1:
        return 0.0
    return -math.sqrt((2 * l + 1) / (2 * l - 1)) * math.sqrt(max((l + m) * (l + m - 1), 0)) / 2


@functools.lru_cache(maxsize=None)
def _sweep_coeffs(mm: int, l: int):
    """Double-double ``(1/xi_{l+1}, xi_l/xi_{l+1})`` for order ``mm >= 0``."""
    den = (l + 1 + mm) * (l + 1 - mm)
    alpha = dd_sqrt(*dd_ratio((2 * l + 3) * (2 * l + 1), den))
    if l > mm:
        beta = dd_sqrt(*dd_ratio((l + mm) * (l - mm) * (2 * l + 3), (2 * l - 1) * den))
    else:
        beta = (0.0, 0.0)
    return alpha, beta


@functools.lru_cache(maxsize=None)
def _seed_ratio(k: int):
    return dd_sqrt(*dd_ratio(2 * k + 1, 2 * k))


def _column(m: int, L: int, x: np.ndarray) -> np.ndarray:
    """Raw upward sweep for ``|m| <= L``; rows are degrees ``|m|..L``.

    The sweep runs in double-double and is rounded once at the end, which
    keeps the result within a few ulp even where the recurrence cancels.
    """
    mm = abs(m)
    out = np.empty((L - mm + 1,) + x.shape)
    zero = np.zeros(x.shape)
    # s = sqrt(1 - x^2) in double-double
    ph, pl = two_prod(x, x)
    sh, sl = dd_sqrt(*dd_sub(np.ones(x.shape), zero, ph, pl))
    # U_kk = -sqrt((2k+1)/(2k)) s U_{k-1,k-1}, U_00 = sqrt(1/2)
    h0, l0 = dd_sqrt(*dd_ratio(1, 2))
    uh, ul = np.full(x.shape, h0), np.full(x.shape, l0)
    for k in range(1, mm + 1):
        uh, ul = dd_mul(uh, ul, *_seed_ratio(k))
        uh, ul = dd_mul(-uh, -ul, sh, sl)
    out[0] = uh + ul
    vh, vl = zero, zero
    for i, l in enumerate(range(mm, L)):
        (ah, al), (bh, bl) = _sweep_coeffs(mm, l)
        th, tl = dd_mul(*dd_mul_d(uh, ul, x), ah, al)
        wh, wl = dd_mul(vh, vl, bh, bl)
        vh, vl = uh, ul
        uh, ul = dd_sub(th, tl, wh, wl)
        out[i + 1] = uh + ul
    if m < 0 and mm % 2:
        out = -out
    # closed forms at the endpoints
    for sgn in (1.0, -1.0):
        hit = x == sgn
        if np.any(hit):
            for i, l in enumerate(range(mm, L + 1)):
                edge = sgn**l * math.sqrt((2 * l + 1) / 2) if m == 0 else 0.0
                out[i] = np.where(hit, edge, out[i])
    return out


def eval_U_column(m: int, L: int, x):
    """Evaluate ``U_{|m|,m}(x), ..., U_{L,m}(x)`` in one recurrence sweep.

    Parameters
    ----------
    m : int
        Order, ``|m| <= L``.
    L : int
        Maximal degree.
    x : float or array_like
        Arguments in ``[-1, 1]``.

    Returns
    -------
    numpy.ndarray
        Shape ``(L - |m| + 1,) + shape(x)``.
    """
    _check_index(L, m)
    return _column(m, L, _as_x(x))


def eval_U(l: int, m: int, x):
    """Normalized associated Legendre function ``U_lm(x)``."""
    _check_index(l, m)
    arr = _as_x(x)
    val = _column(m, l, arr)[-1]
    return float(val) if np.ndim(x) == 0 else val


def _U_or_zero(l: int, m: int, x: np.ndarray) -> np.ndarray:
    if l < 0 or abs(m) > l:
        return np.zeros(x.shape)
    return _column(m, l, x)[-1]


def _dU_ratio(l: int, m: int, x: np.ndarray):
    d1 = a_plus(l, m) * _U_or_zero(l, m + 1, x) + a_minus(l, m) * _U_or_zero(l, m - 1, x)
    if l == 0:
        d2 = np.zeros(x.shape)
    else:
        d2 = (b_plus(l, m) * _U_or_zero(l - 1, m + 1, x)
              + b_minus(l, m) * _U_or_zero(l - 1, m - 1, x))
    return d1, d2


def eval_dU_and_ratio(l: int, m: int, x):
    """Return ``(-sqrt(1-x^2) dU_lm/dx, m U_lm / sqrt(1-x^2))``.

    Both are assembled from order-shifted ``U`` values, so neither needs a
    division by ``sqrt(1-x^2)``. The endpoints are rejected all the same;
    callers use closed forms there.
    """
    _check_index(l, m)
    arr = _as_x(x, closed=False)
    d1, d2 = _dU_ratio(l, m, arr)
    if np.ndim(x) == 0:
        return float(d1), float(d2)
    return d1, d2


def sturm_liouville_residual(l: int, m: int, x):
    """Residual of ``d/dx[(1-x^2) U'] - m^2 U/(1-x^2) + l(l+1) U`` for ``U_lm``.

    ``(1-x^2) U_l' = -l x U_l + (2l+1) xi_lm U_{l-1}`` is differentiated once
    more with the same relation applied to ``U_l`` and ``U_{l-1}``, so no
    finite differences enter.
    """
    _check_index(l, m)
    arr = _as_x(x, closed=False)
    w = 1.0 - arr * arr
    col = _column(m, l, arr)
    u = col[-1]
    u1 = col[-2] if col.shape[0] > 1 else np.zeros(arr.shape)
    u2 = col[-3] if col.shape[0] > 2 else np.zeros(arr.shape)
    A = -l * arr * u + (2 * l + 1) * xi(l, m) * u1
    A1 = -(l - 1) * arr * u1 + (2 * l - 1) * xi(l - 1, m) * u2 if l >= 1 else np.zeros(arr.shape)
    dA = -l * u - l * arr * A / w + (2 * l + 1) * xi(l, m) * A1 / w
    val = dA - m * m * u / w + l * (l + 1) * u
    return float(val) if np.ndim(x) == 0 else val
