"""The Sheppard-Torok functions ``F_lm``.

``F_lm(x) = [sqrt(1-x^2) U_lm'(x) - m U_lm(x)/sqrt(1-x^2)] / sqrt(l(l+1))``
for ``l >= max(1, |m|)``. For fixed ``m`` they are orthonormal on ``[-1, 1]``
and obey a three-term recurrence in ``l``, which is how they are evaluated
here: a closed-form seed at the minimal degree, then an upward sweep.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from .ddouble import dd_add, dd_mul, dd_ratio, dd_sqrt, dd_sub, two_prod, two_sum
from .legendre import _as_x, _dU_ratio, c_norm

__all__ = [
    "min_degree",
    "zeta",
    "eval_F",
    "eval_F_column",
    "eval_F_via_U",
    "eval_F_deriv_combo",
    "eval_F_deriv_combo_upper",
    "kernel_K",
    "christoffel_darboux_rhs",
    "sturm_liouville_residual",
]


def min_degree(m: int) -> int:
    """Minimal degree ``max(1, |m|)`` of order ``m``."""
    return max(1, abs(m))


def _check_index(l: int, m: int) -> None:
    if l < min_degree(m):
        raise ValueError(f"invalid F index (l={l}, m={m}); need l >= max(1, |m|)")


def zeta(l: int, m: int) -> float:
    """Recurrence coupling ``zeta_lm``; zero below the minimal degree."""
    if l < 1 or abs(m) >= l:
        return 0.0
    return math.sqrt((l + 1) * (l - 1) * (l + m) * (l - m) / ((2 * l + 1) * (2 * l - 1))) / l


@functools.lru_cache(maxsize=None)
def _sweep_coeffs(m: int, l: int):
    """Double-double ``(1/zeta_{l+1}, zeta_l/zeta_{l+1}, m/(l(l+1)))``."""
    # zeta_{l+1}^2 = l(l+2)(l+1+m)(l+1-m) / ((2l+3)(2l+1)(l+1)^2)
    num1 = l * (l + 2) * (l + 1 + m) * (l + 1 - m)
    den1 = (2 * l + 3) * (2 * l + 1) * (l + 1) ** 2
    alpha = dd_sqrt(*dd_ratio(den1, num1))
    if l > min_degree(m):
        num0 = (l + 1) * (l - 1) * (l + m) * (l - m)
        den0 = (2 * l + 1) * (2 * l - 1) * l**2
        beta = dd_sqrt(*dd_ratio(num0 * den1, den0 * num1))
    else:
        beta = (0.0, 0.0)
    return alpha, beta, dd_ratio(m, l * (l + 1))


@functools.lru_cache(maxsize=None)
def _seed_factor(k: int):
    return dd_sqrt(*dd_ratio(2 * k + 1, 2 * k))


def _seed(m: int, x: np.ndarray):
    """``F_{l_m, m}(x)`` as a double-double pair."""
    zero = np.zeros(x.shape)
    ph, pl = two_prod(x, x)
    sh, sl = dd_sqrt(*dd_sub(np.ones(x.shape), zero, ph, pl))
    if m == 0:
        return dd_mul(sh, sl, *dd_sqrt(*dd_ratio(3, 4)))
    mm = abs(m)
    # Phi_m = sqrt(m/(m+1)) c_mm (2m-1)!! s^(m-1), built as a running product
    vh, vl = dd_sqrt(*dd_ratio(3, 4))
    vh, vl = np.full(x.shape, vh), np.full(x.shape, vl)
    for k in range(2, mm + 1):
        vh, vl = dd_mul(vh, vl, *_seed_factor(k))
        vh, vl = dd_mul(vh, vl, sh, sl)
    vh, vl = dd_mul(vh, vl, *dd_sqrt(*dd_ratio(mm, mm + 1)))
    if m > 0:
        fh, fl = two_sum(np.ones(x.shape), x)
        if mm % 2 == 0:
            fh, fl = -fh, -fl
    else:
        fh, fl = two_sum(np.ones(x.shape), -x)
    return dd_mul(vh, vl, fh, fl)


def _endpoint(l: int, m: int, sgn: float) -> float:
    if sgn > 0:
        return c_norm(l, 0) if m == 1 else 0.0
    return (-1.0) ** (l - 1) * c_norm(l, 0) if m == -1 else 0.0


def _column(m: int, L: int, x: np.ndarray, endpoints: bool = True) -> np.ndarray:
    lm = min_degree(m)
    out = np.empty((max(L - lm + 1, 0),) + x.shape)
    if L < lm:
        return out
    uh, ul = _seed(m, x)
    out[0] = uh + ul
    zero = np.zeros(x.shape)
    vh, vl = zero, zero
    for i, l in enumerate(range(lm, L)):
        (ah, al), (bh, bl), (ch, cl) = _sweep_coeffs(m, l)
        # F_{l+1} = alpha (x - m/(l(l+1))) F_l - beta F_{l-1}
        th, tl = dd_add(x, zero, -ch, -cl)
        th, tl = dd_mul(*dd_mul(th, tl, uh, ul), ah, al)
        wh, wl = dd_mul(vh, vl, bh, bl)
        vh, vl = uh, ul
        uh, ul = dd_sub(th, tl, wh, wl)
        out[i + 1] = uh + ul
    if endpoints:
        for sgn in (1.0, -1.0):
            hit = x == sgn
            if np.any(hit):
                for i, l in enumerate(range(lm, L + 1)):
                    out[i] = np.where(hit, _endpoint(l, m, sgn), out[i])
    return out


def eval_F_column(m: int, L: int, x):
    """Evaluate ``F_{l_m,m}(x), ..., F_{L,m}(x)``.

    Returns an array of shape ``(L - l_m + 1,) + shape(x)``, empty along the
    first axis when ``L < max(1, |m|)``.
    """
    return _column(m, L, _as_x(x))


def eval_F(l: int, m: int, x):
    """Sheppard-Torok function ``F_lm(x)`` on ``[-1, 1]``."""
    _check_index(l, m)
    arr = _as_x(x)
    val = _column(m, l, arr)[-1]
    return float(val) if np.ndim(x) == 0 else val


def eval_F_via_U(l: int, m: int, x):
    """``F_lm`` from the singularity-free combination of order-shifted ``U``.

    Independent of the ``F`` recurrence; used for cross-validation.
    """
    _check_index(l, m)
    arr = _as_x(x)
    d1, d2 = _dU_ratio(l, m, arr)
    val = -(d1 + d2) / math.sqrt(l * (l + 1))
    return float(val) if np.ndim(x) == 0 else val


def eval_F_deriv_combo(l: int, m: int, x):
    """``(1 - x^2) dF_lm/dx`` from the downward-looking derivative relation.

    ``-l (x - m/l^2) F_lm + (2l+1) zeta_lm F_{l-1,m}`` with ``F_{l_m-1,m} = 0``.
    """
    _check_index(l, m)
    arr = _as_x(x, closed=False)
    col = _column(m, l, arr)
    f = col[-1]
    f_prev = col[-2] if col.shape[0] > 1 else np.zeros(arr.shape)
    val = -l * (arr - m / l**2) * f + (2 * l + 1) * zeta(l, m) * f_prev
    return float(val) if np.ndim(x) == 0 else val


def eval_F_deriv_combo_upper(l: int, m: int, x):
    """``(1 - x^2) dF_lm/dx`` from the upward-looking relation (uses ``F_{l+1}``)."""
    _check_index(l, m)
    arr = _as_x(x, closed=False)
    col = _column(m, l + 1, arr)
    val = ((l + 1) * (arr - m / (l + 1) ** 2) * col[-2]
           - (2 * l + 1) * zeta(l + 1, m) * col[-1])
    return float(val) if np.ndim(x) == 0 else val


def kernel_K(m: int, L: int, x, xp):
    """Concentration kernel ``sum_{l=l_m}^{L} F_lm(x) F_lm(x')``.

    ``x`` and ``xp`` broadcast against each other.
    """
    xa, xb = np.broadcast_arrays(_as_x(x), _as_x(xp))
    if L < min_degree(m):
        val = np.zeros(xa.shape)
    else:
        val = np.sum(_column(m, L, xa) * _column(m, L, xb), axis=0)
    return float(val) if val.ndim == 0 else val


def christoffel_darboux_rhs(m: int, L: int, x, xp):
    """``zeta_{L+1,m} [F_{L+1}(x) F_L(x') - F_L(x) F_{L+1}(x')]``."""
    xa, xb = np.broadcast_arrays(_as_x(x), _as_x(xp))
    a = _column(m, L + 1, xa)
    b = _column(m, L + 1, xb)
    if L < min_degree(m):
        val = np.zeros(xa.shape)
    else:
        val = zeta(L + 1, m) * (a[-1] * b[-2] - a[-2] * b[-1])
    return float(val) if val.ndim == 0 else val


def sturm_liouville_residual(l: int, m: int, x):
    """Residual of ``d/dx[(1-x^2) F'] - (m^2 - 2mx + 1)/(1-x^2) F + l(l+1) F``.

    ``(1-x^2) F_l'`` comes from the downward relation; its derivative needs
    ``F_{l-1}'``, which is taken from the upward relation of degree ``l-1``.
    """
    _check_index(l, m)
    arr = _as_x(x, closed=False)
    w = 1.0 - arr * arr
    col = _column(m, l, arr)
    f = col[-1]
    f1 = col[-2] if col.shape[0] > 1 else np.zeros(arr.shape)
    z = zeta(l, m)
    D = -l * (arr - m / l**2) * f + (2 * l + 1) * z * f1
    # upward relation for degree l - 1; vanishes with zeta when l = l_m
    D1 = l * (arr - m / l**2) * f1 - (2 * l - 1) * z * f if z else np.zeros(arr.shape)
    dD = -l * f - l * (arr - m / l**2) * D / w + (2 * l + 1) * z * D1 / w
    val = dD - (m * m - 2 * m * arr + 1) / w * f + l * (l + 1) * f
    return float(val) if np.ndim(x) == 0 else val
