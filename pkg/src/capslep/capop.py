"""Per-order concentration matrices ``K_m``, commuting matrices ``J_m`` and
Shannon numbers for an axisymmetric polar cap ``0 <= theta <= Theta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .flm import eval_F_column, kernel_K, min_degree, zeta
from .quadrature import gauss_legendre, map_interval

__all__ = [
    "CapProblem",
    "FixedOrderProblem",
    "DenseSym",
    "TriDiagSym",
    "assemble_K",
    "assemble_J",
    "assemble_J_by_quadrature",
    "J_by_quadrature_dense",
    "partial_shannon",
    "partial_shannon_by_kernel",
    "shannon",
]


@dataclass(frozen=True)
class CapProblem:
    """Bandlimit ``L`` and cap half-angle ``theta`` (radians)."""

    L: int
    theta: float

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"bandlimit must be an integer >= 1, got {self.L}")
        if not (0.0 < self.theta <= math.pi):
            raise ValueError(f"cap half-angle must lie in (0, pi], got {self.theta}")

    @classmethod
    def from_degrees(cls, L: int, theta_deg: float) -> "CapProblem":
        return cls(L, math.radians(theta_deg))

    @property
    def cos_theta(self) -> float:
        return -1.0 if self.theta == math.pi else math.cos(self.theta)

    @property
    def area(self) -> float:
        return 2.0 * math.pi * (1.0 - self.cos_theta)

    @property
    def orders(self) -> range:
        return range(-self.L, self.L + 1)

    def order(self, m: int) -> "FixedOrderProblem":
        return FixedOrderProblem(self, m)


@dataclass(frozen=True)
class FixedOrderProblem:
    cap: CapProblem
    m: int

    def __post_init__(self):
        if abs(self.m) > self.cap.L:
            raise ValueError(f"order {self.m} exceeds bandlimit {self.cap.L}")

    @property
    def L(self) -> int:
        return self.cap.L

    @property
    def l_min(self) -> int:
        return min_degree(self.m)

    @property
    def size(self) -> int:
        return self.L - self.l_min + 1

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.l_min, self.L + 1)

    @cached_property
    def cap_rule(self):
        """``L + 1``-point Gauss-Legendre rule on ``[cos Theta, 1]``."""
        return map_interval(gauss_legendre(self.L + 1), self.cap.cos_theta, 1.0)


@dataclass(frozen=True)
class DenseSym:
    """Dense symmetric matrix; stored in full, symmetric bitwise."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("DenseSym needs a square matrix")
        iu = np.triu_indices(a.shape[0], 1)
        a.T[iu] = a[iu]
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.entries.copy()


@dataclass(frozen=True)
class TriDiagSym:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).ravel()
        e = np.array(self.offdiag, dtype=float).ravel()
        if e.size != max(d.size - 1, 0):
            raise ValueError("offdiag must have n - 1 entries")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def assemble_K(problem: FixedOrderProblem) -> DenseSym:
    """``K_{m,ll'} = int_{cos Theta}^{1} F_lm F_l'm dx``.

    Every integrand is a polynomial of degree at most ``2L``, so the shared
    ``L + 1``-point rule is exact.
    """
    rule = problem.cap_rule
    F = eval_F_column(problem.m, problem.L, rule.nodes)
    return DenseSym((F * rule.weights) @ F.T)


def assemble_J(problem: FixedOrderProblem) -> TriDiagSym:
    """Closed-form tridiagonal matrix of the commuting differential operator."""
    L, m, c = problem.L, problem.m, problem.cap.cos_theta
    LL = L * (L + 2)
    ls = problem.degrees
    diag = [-l * (l + 1) * c + m * (1.0 - (LL + 1) / (l * (l + 1))) for l in ls]
    off = [(l * (l + 2) - LL) * zeta(l + 1, m) for l in ls[:-1]]
    return TriDiagSym(diag, off)


def assemble_J_by_quadrature(problem: FixedOrderProblem) -> TriDiagSym:
    """``J_{m,ll'} = int_{-1}^{1} F_lm (J_m F_l'm) dx`` by quadrature.

    ``J_m F_l' = -l'(l'+1)(cos Theta - x) F_l' - (1-x^2) F_l'' - L(L+2) x F_l'``
    with ``(1-x^2) F'`` taken from the downward derivative relation. Only the
    tridiagonal band is returned; :func:`J_by_quadrature_dense` exposes the
    full matrix.
    """
    J = J_by_quadrature_dense(problem)
    return TriDiagSym(np.diag(J).copy(), np.diag(J, 1).copy())


def J_by_quadrature_dense(problem: FixedOrderProblem) -> np.ndarray:
    L, m, c = problem.L, problem.m, problem.cap.cos_theta
    rule = gauss_legendre(L + 2)
    x = rule.nodes
    F = eval_F_column(m, L, x)
    F_prev = np.vstack([np.zeros((1, x.size)), F[:-1]])
    out = np.empty_like(F)
    for i, l in enumerate(problem.degrees):
        combo = -l * (x - m / l**2) * F[i] + (2 * l + 1) * zeta(l, m) * F_prev[i]
        out[i] = -l * (l + 1) * (c - x) * F[i] - combo - L * (L + 2) * x * F[i]
    J = rule.integrate(F[:, None, :] * out[None, :, :])
    return 0.5 * (J + J.T)


def partial_shannon(problem: FixedOrderProblem) -> float:
    """``N_m = Tr K_m``."""
    return float(np.trace(assemble_K(problem).entries))


def partial_shannon_by_kernel(problem: FixedOrderProblem) -> float:
    """``N_m`` as the cap integral of the kernel diagonal ``K_m(x, x)``."""
    rule = problem.cap_rule
    return float(rule.integrate(kernel_K(problem.m, problem.L, rule.nodes, rule.nodes)))


def shannon(cap: CapProblem) -> float:
    """``N = L(L+2) A_C / (4 pi) = L(L+2)(1 - cos Theta)/2``."""
    return cap.L * (cap.L + 2) * (1.0 - cap.cos_theta) / 2.0
