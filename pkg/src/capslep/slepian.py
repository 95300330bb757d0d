"""Per-order Slepian solutions for the polar cap.

For each order ``m`` the coefficient vectors ``g`` are the eigenvectors of the
tridiagonal matrix ``J_m``; they are also eigenvectors of ``K_m`` and the
concentration ratio is ``eta = g^T K_m g``. The scalar eigenfunction is
``G(x) = sum_l g_l F_lm(x)`` and each ``g`` yields two tangential fields,
``G(cos t) e^{+-i m p}/sqrt(2 pi) tau_{+-}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capop import (CapProblem, FixedOrderProblem, assemble_J, assemble_K,
                    partial_shannon)
from .eigen import (eigh_dense, eigh_dense_dd, eigh_dense_mp, eigh_tridiag,
                    eigval_gap, vector_error)
from .flm import eval_F_column, kernel_K
from .harmonics import SpherePoint, TangentValue, _sign
from .highprec import assemble_K_hp, dd_arith, mp_arith

__all__ = [
    "FixedOrderSolution",
    "VectorEigenfield",
    "ErrorAnalysis",
    "solve_order",
    "eval_G",
    "concentration_ratio",
    "eval_eigenfield",
    "verify_fredholm",
    "error_analysis",
    "DEGENERACY_FLAG",
]

# eta gaps below this are reported as numerically degenerate
DEGENERACY_FLAG = 1e-12
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class FixedOrderSolution:
    """Eigen-solution of one order.

    Row ``n - 1`` of ``g`` holds the coefficients ``g_l`` (``l = l_m..L``) of
    the ``n``-th eigenfunction. Rows are sorted by ``chi`` ascending, which is
    ``eta`` descending; ``eta`` is stored as computed, and neighbours closer
    than :data:`DEGENERACY_FLAG` are listed in ``degenerate``.
    """

    problem: FixedOrderProblem
    chi: np.ndarray
    eta: np.ndarray
    g: np.ndarray
    degenerate: tuple = field(default=())

    def __post_init__(self):
        for name in ("chi", "eta", "g"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.problem.m

    @property
    def size(self) -> int:
        return self.chi.size

    def _row(self, n: int) -> np.ndarray:
        if not 1 <= n <= self.size:
            raise IndexError(f"rank {n} outside 1..{self.size}")
        return self.g[n - 1]


@dataclass(frozen=True)
class VectorEigenfield:
    """Tangential eigenfield of rank ``n`` realizing order ``sign * m``."""

    solution: FixedOrderSolution
    n: int
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sign", _sign(self.sign))
        self.solution._row(self.n)

    @property
    def order(self) -> int:
        return self.sign * self.solution.m


def solve_order(problem: FixedOrderProblem) -> FixedOrderSolution:
    """Diagonalize ``J_m`` and attach the concentration ratios from ``K_m``."""
    dec = eigh_tridiag(assemble_J(problem))
    g = dec.vectors.T.copy()
    K = assemble_K(problem).entries
    eta = np.einsum("ni,ij,nj->n", g, K, g)
    flags = tuple(i + 1 for i in range(eta.size - 1) if abs(eta[i] - eta[i + 1]) < DEGENERACY_FLAG)
    return FixedOrderSolution(problem, dec.values, eta, g, flags)


def eval_G(solution: FixedOrderSolution, n: int, x):
    """Scalar eigenfunction ``G_mn(x) = sum_l g_l F_lm(x)``."""
    row = solution._row(n)
    F = eval_F_column(solution.m, solution.problem.L, x)
    val = np.tensordot(row, F, axes=1)
    return float(val) if np.ndim(x) == 0 else val


def concentration_ratio(solution: FixedOrderSolution, n: int) -> float:
    """``eta = g^T K g``, cross-checked against ``int_{cos Theta}^1 G^2 dx``."""
    row = solution._row(n)
    K = assemble_K(solution.problem).entries
    eta = float(row @ K @ row)
    rule = solution.problem.cap_rule
    by_quad = float(rule.integrate(eval_G(solution, n, rule.nodes) ** 2))
    if abs(eta - by_quad) > 1e-11:
        raise ArithmeticError(f"concentration routes disagree: {eta} vs {by_quad}")
    return eta


def eval_eigenfield(field: VectorEigenfield, point) -> TangentValue:
    """Value of a tangential eigenfield.

    Off the poles the result is in the ``tau`` basis with one nonzero
    component. At the poles it is the Cartesian limit.
    """
    p = point if isinstance(point, SpherePoint) else SpherePoint(*point)
    s = field.sign
    if p.theta == 0.0:
        a = eval_G(field.solution, field.n, 1.0) * _INV_SQRT_2PI / _SQRT2
        return TangentValue("cartesian", (a, s * 1j * a, 0.0))
    if p.theta == math.pi:
        a = -eval_G(field.solution, field.n, -1.0) * _INV_SQRT_2PI / _SQRT2
        return TangentValue("cartesian", (a, -s * 1j * a, 0.0))
    G = eval_G(field.solution, field.n, math.cos(p.theta))
    val = G * np.exp(1j * field.order * p.phi) * _INV_SQRT_2PI
    return TangentValue("tau", (val, 0.0) if s > 0 else (0.0, val))


def verify_fredholm(solution: FixedOrderSolution, n: int, samples) -> float:
    """Max over ``samples`` of ``|int_{cos Theta}^1 K(x, x') G(x') dx' - eta G(x)|``."""
    x = np.atleast_1d(np.asarray(samples, dtype=float))
    rule = solution.problem.cap_rule
    Gq = eval_G(solution, n, rule.nodes)
    kern = kernel_K(solution.m, solution.problem.L, x[:, None], rule.nodes[None, :])
    lhs = np.atleast_2d(kern) @ (rule.weights * Gq)
    eta = solution.eta[n - 1]
    return float(np.max(np.abs(lhs - eta * eval_G(solution, n, x))))


@dataclass(frozen=True)
class ErrorAnalysis:
    """Eigenvector error table for one order; rows are ranks ``n = 1..size``."""

    problem: FixedOrderProblem
    n: np.ndarray
    gap_eta: np.ndarray
    gap_chi: np.ndarray
    err_K: np.ndarray
    err_J: np.ndarray
    pairing: str
    reference: str

    def rows(self):
        return list(zip(self.n.tolist(), self.gap_eta.tolist(), self.gap_chi.tolist(),
                        self.err_K.tolist(), self.err_J.tolist()))


def _pair_by_eta(eta, eta_ref):
    """Closest-eta assignment, or ``None`` when it is ambiguous."""
    eta_ref = [float(e) for e in eta_ref]
    perm = []
    for i, e in enumerate(eta_ref):
        d = np.abs(np.asarray(eta) - e)
        j = int(np.argmin(d))
        # the match must be closer than half the distance to any other reference value
        others = [abs(e - f) for k, f in enumerate(eta_ref) if k != i]
        if others and d[j] >= 0.5 * min(others):
            return None
        perm.append(j)
    return perm if len(set(perm)) == len(perm) else None


def _pair_by_overlap(vecs, vecs_ref):
    ov = np.abs(np.asarray(vecs, dtype=float) @ np.asarray(vecs_ref, dtype=float).T)
    perm = [int(np.argmax(ov[:, i])) for i in range(ov.shape[1])]
    if len(set(perm)) != len(perm):
        raise ArithmeticError("eigenvector pairing is not bijective")
    return perm


def error_analysis(cap: CapProblem, m: int, reference: str = "mp", dps: int = 100) -> ErrorAnalysis:
    """Errors of double-precision eigenvectors of ``K_m`` against a reference.

    ``err_K`` compares the eigenvectors of the binary64 ``K_m`` (dense
    Jacobi), ``err_J`` those of the tridiagonal ``J_m``, both against the
    eigenvectors of ``K_m`` assembled and diagonalized in extended precision
    (``reference="mp"`` at ``dps`` digits, or ``"dd"`` for double-double).
    Rows are ranked by reference ``eta`` descending. J-route vectors are
    paired to reference vectors by closest ``eta`` when that assignment is
    unambiguous and by largest overlap otherwise; ``pairing`` records which.
    """
    problem = cap.order(m)
    if reference == "mp":
        Khp = assemble_K_hp(problem, mp_arith(dps))
        ref = eigh_dense_mp(Khp, dps=dps)
        label = f"mpmath {dps} digits"
    elif reference == "dd":
        ref = eigh_dense_dd(assemble_K_hp(problem, dd_arith()))
        label = "double-double"
    else:
        raise ValueError(f"unknown reference {reference!r}")
    size = problem.size
    rank = list(range(size - 1, -1, -1))
    eta_ref = [ref.values_hp[i] for i in rank]
    vec_ref = [list(ref.vectors_hp[:, i]) for i in rank]

    Kdec = eigh_dense(assemble_K(problem))
    err_K = np.array([vector_error(Kdec.vectors[:, i], v) for i, v in zip(rank, vec_ref)])

    sol = solve_order(problem)
    perm = _pair_by_eta(sol.eta, eta_ref)
    pairing = "eta"
    if perm is None:
        perm = _pair_by_overlap(sol.g, [[float(x) for x in v] for v in vec_ref])
        pairing = "overlap"
    err_J = np.array([vector_error(sol.g[j], v) for j, v in zip(perm, vec_ref)])
    if size > 1:
        gap_eta = eigval_gap(eta_ref)
        gap_chi = eigval_gap(sol.chi)[perm]
    else:
        gap_eta = gap_chi = np.array([math.inf])
    return ErrorAnalysis(problem, np.arange(1, size + 1), gap_eta, gap_chi,
                         err_K, err_J, pairing, label)
