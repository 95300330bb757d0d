"""Symmetric eigensolvers.

* :func:`eigh_tridiag` -- implicit Wilkinson-shift QL on a symmetric
  tridiagonal matrix, with eigenvector accumulation.
* :func:`eigh_dense` -- cyclic Jacobi on a dense symmetric matrix.
* :func:`eigh_dense_dd` / :func:`eigh_dense_mp` -- the same Jacobi sweep in
  double-double or mpmath arithmetic, for reference computations.

All solvers return an :class:`EigenDecomposition` with ascending values and
the sign convention "largest-magnitude component positive, ties to the
lowest index".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capop import DenseSym, TriDiagSym
from .ddouble import DoubleDouble

__all__ = [
    "EigenDecomposition",
    "ConvergenceError",
    "eigh_tridiag",
    "eigh_dense",
    "eigh_dense_dd",
    "eigh_dense_mp",
    "jacobi_generic",
    "eigval_gap",
    "vector_error",
]

EPS = np.finfo(float).eps


class ConvergenceError(ArithmeticError):
    """An eigensolver hit its iteration limit."""


@dataclass(frozen=True)
class EigenDecomposition:
    """``values[i]`` with eigenvector ``vectors[:, i]``.

    ``values_hp`` / ``vectors_hp`` hold the unrounded extended-precision
    results when a high-precision solver produced the decomposition.
    """

    values: np.ndarray
    vectors: np.ndarray
    values_hp: np.ndarray | None = field(default=None, repr=False)
    vectors_hp: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("values", "vectors"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.values.size


def _sign_index(col) -> int:
    """Index of the first component of largest magnitude."""
    best, idx = abs(col[0]), 0
    for i in range(1, len(col)):
        a = abs(col[i])
        if a > best:
            best, idx = a, i
    return idx


def _finish(values, vectors) -> EigenDecomposition:
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order].copy()
    for j in range(vectors.shape[1]):
        if vectors[_sign_index(vectors[:, j]), j] < 0:
            vectors[:, j] = -vectors[:, j]
    return EigenDecomposition(values, vectors)


def eigh_tridiag(T: TriDiagSym, max_iter: int = 30) -> EigenDecomposition:
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    Implicit QL with Wilkinson shifts, accumulating the plane rotations into
    the eigenvector matrix.

    Raises
    ------
    ConvergenceError
        If any eigenvalue needs more than ``max_iter`` QL sweeps.
    """
    d = np.array(T.diag, dtype=float)
    n = d.size
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(T.offdiag))):
        raise ValueError("tridiagonal input has non-finite entries")
    e = np.zeros(n)
    e[: n - 1] = T.offdiag
    Z = np.eye(n)
    for l in range(n):
        it = 0
        while True:
            # look for a negligible off-diagonal element to split the matrix
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                raise ConvergenceError(f"QL did not converge for eigenvalue {l}")
            it += 1
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            split = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # underflow: the matrix splits, restart this eigenvalue
                    d[i + 1] -= p
                    e[m] = 0.0
                    split = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = Z[:, i].copy()
                Z[:, i] = c * zi - s * Z[:, i + 1]
                Z[:, i + 1] = s * zi + c * Z[:, i + 1]
            if split:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return _finish(d, Z)


def eigh_dense(A: DenseSym, max_sweeps: int = 50) -> EigenDecomposition:
    """Cyclic Jacobi for a dense symmetric matrix.

    Sweeps over all pairs ``p < q`` until the off-diagonal Frobenius norm is
    at most ``eps * ||A||_F``.
    """
    a = np.array(A.entries if isinstance(A, DenseSym) else A, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    n = a.shape[0]
    V = np.eye(n)
    tol = EPS * np.linalg.norm(a)
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol:
            return _finish(np.diag(a).copy(), V)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                if abs(a[p, p]) + g == abs(a[p, p]) and abs(a[q, q]) + g == abs(a[q, q]):
                    # below the resolution of both diagonal entries
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                rp, rq = a[p].copy(), a[q].copy()
                a[p], a[q] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p], V[:, q] = c * vp - s * vq, s * vp + c * vq
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def jacobi_generic(a, sqrt, tol, max_sweeps: int = 50):
    """Cyclic Jacobi on a list-of-lists of any field type.

    Parameters
    ----------
    a : list of list
        Symmetric matrix; modified in place.
    sqrt : callable
        Square root in the element type.
    tol : number
        Relative stopping threshold on the off-diagonal Frobenius norm.

    Returns
    -------
    values, vectors
        Unsorted eigenvalues (list) and eigenvectors (list of columns).
    """
    n = len(a)
    zero, one = a[0][0] * 0, a[0][0] * 0 + 1
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    norm2 = sum((x * x for row in a for x in row), zero)
    thresh = tol * tol * norm2
    for _ in range(max_sweeps + 1):
        off = sum((a[i][j] * a[i][j] for i in range(n) for j in range(n) if i != j), zero)
        if off <= thresh:
            values = [a[i][i] for i in range(n)]
            vectors = [[V[i][j] for i in range(n)] for j in range(n)]
            return values, vectors
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0:
                    continue
                h = a[q][q] - a[p][p]
                if abs(apq) < tol * abs(h):
                    # theta would overflow; t = apq/h to relative order tol^2
                    t = apq / h
                else:
                    theta = h / (2 * apq)
                    t = one / (abs(theta) + sqrt(theta * theta + one))
                    if theta < 0:
                        t = -t
                c = one / sqrt(t * t + one)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                for k in range(n):
                    vkp, vkq = V[k][p], V[k][q]
                    V[k][p] = c * vkp - s * vkq
                    V[k][q] = s * vkp + c * vkq
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def _finish_hp(values, vectors) -> EigenDecomposition:
    order = sorted(range(len(values)), key=lambda i: values[i])
    vals = [values[i] for i in order]
    vecs = []
    for i in order:
        v = vectors[i]
        if v[_sign_index(v)] < 0:
            v = [-x for x in v]
        vecs.append(v)
    vals_hp = np.empty(len(vals), dtype=object)
    vals_hp[:] = vals
    vecs_hp = np.empty((len(vals), len(vals)), dtype=object)
    for j, v in enumerate(vecs):
        vecs_hp[:, j] = v
    return EigenDecomposition(
        np.array([float(v) for v in vals]),
        np.array([[float(x) for x in row] for row in vecs_hp]),
        vals_hp,
        vecs_hp,
    )


def _as_rows(A):
    if isinstance(A, DenseSym):
        return A.entries
    return A


def eigh_dense_dd(A, max_sweeps: int = 50) -> EigenDecomposition:
    """Jacobi in double-double arithmetic.

    ``A`` may be a :class:`DenseSym` or a square nested sequence of floats,
    integers, :class:`fractions.Fraction` or :class:`DoubleDouble`. The
    rounded decomposition is returned together with the double-double values
    and vectors in ``values_hp`` / ``vectors_hp``.
    """
    rows = _as_rows(A)
    a = [[DoubleDouble(x) for x in row] for row in rows]
    vals, vecs = jacobi_generic(a, DoubleDouble.sqrt, DoubleDouble(2.0 ** -104), max_sweeps)
    return _finish_hp(vals, vecs)


def eigh_dense_mp(A, dps: int = 100, max_sweeps: int = 50) -> EigenDecomposition:
    """Jacobi in mpmath arithmetic at ``dps`` decimal digits.

    Entries of ``A`` may be floats, integers, fractions or ``mpf`` values;
    they are converted exactly at the working precision.
    """
    import mpmath

    ctx = mpmath.mp.clone()
    ctx.dps = dps

    def conv(x):
        if hasattr(x, "numerator") and not isinstance(x, float):
            return ctx.mpf(x.numerator) / x.denominator
        return ctx.mpf(x)

    rows = _as_rows(A)
    a = [[conv(x) for x in row] for row in rows]
    tol = ctx.mpf(10) ** (-(dps - 5))
    vals, vecs = jacobi_generic(a, ctx.sqrt, tol, max_sweeps)
    return _finish_hp(vals, vecs)


def eigval_gap(values) -> np.ndarray:
    """``gap_n = min_{j != n} |lambda_n - lambda_j|``.

    Works for float arrays and for object arrays of extended-precision
    numbers (the result is then rounded to float).
    """
    vals = list(values)
    if len(vals) < 2:
        raise ValueError("an eigenvalue gap needs at least two values")
    out = np.empty(len(vals))
    for i, v in enumerate(vals):
        out[i] = float(min(abs(v - w) for j, w in enumerate(vals) if j != i))
    return out


def vector_error(v, v_ref) -> float:
    """Sign-insensitive distance ``min(||v - v_ref||, ||v + v_ref||)``.

    Either argument may hold extended-precision numbers; the difference is
    formed before rounding.
    """
    v = list(v)
    r = list(v_ref)
    if len(v) != len(r):
        raise ValueError("vectors must have equal length")
    for w in (v, r):
        nrm = float(sum(x * x for x in w))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"vector is not unit norm (|v|^2 = {nrm})")
    minus = math.sqrt(sum(float(a - b) ** 2 for a, b in zip(v, r)))
    plus = math.sqrt(sum(float(a + b) ** 2 for a, b in zip(v, r)))
    return min(minus, plus)
