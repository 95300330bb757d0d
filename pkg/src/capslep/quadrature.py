"""Gauss-Legendre rules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadRule", "gauss_legendre", "map_interval", "N_MAX"]

N_MAX = 1_000_000


@dataclass(frozen=True)
class QuadRule:
    """Nodes and weights of an interpolatory rule; arrays are read-only."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for name in ("nodes", "weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")

    @property
    def n(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> np.ndarray:
        """Apply the rule along the last axis of ``values``.

        Mirrored node pairs are summed first, so an odd integrand on a
        symmetric rule integrates to exactly zero.
        """
        v = np.asarray(values, dtype=float)
        n = self.n
        half = n // 2
        if not np.array_equal(self.nodes[:half], -self.nodes[::-1][:half]):
            return v @ self.weights
        folded = v[..., :half] + v[..., ::-1][..., :half]
        out = folded @ self.weights[:half]
        if n % 2:
            out = out + v[..., half] * self.weights[half]
        return out


def _legendre_and_deriv(n: int, x: np.ndarray):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if n == 0:
        return p0, np.zeros_like(x)
    # P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(n: int) -> QuadRule:
    """``n``-point Gauss-Legendre rule on ``[-1, 1]``.

    Newton iteration on ``P_n`` from the cosine asymptotic guesses, for the
    non-negative half only; the other half is mirrored so that
    ``nodes[i] == -nodes[n-1-i]`` holds bitwise. Exact for polynomials of
    degree up to ``2n - 1``.
    """
    if n < 1:
        raise ValueError("a Gauss-Legendre rule needs n >= 1")
    if n > N_MAX:
        raise MemoryError(f"n={n} exceeds the supported maximum {N_MAX}")
    half = n // 2
    k = np.arange(1, half + 1)
    # positive roots in decreasing order
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_deriv(n, x)
        dx = p / dp
        x = x - dx
        if np.all(np.abs(dx) <= 4 * np.spacing(np.maximum(np.abs(x), 1.0))):
            break
    p, dp = _legendre_and_deriv(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    pos_x = x[::-1]
    pos_w = w[::-1]
    if n % 2:
        _, dp0 = _legendre_and_deriv(n, np.zeros(1))
        mid_w = 2.0 / (dp0 * dp0)
        nodes = np.concatenate([-x, [0.0], pos_x])
        weights = np.concatenate([w, mid_w, pos_w])
    else:
        nodes = np.concatenate([-x, pos_x])
        weights = np.concatenate([w, pos_w])
    return QuadRule(nodes, weights)


def map_interval(rule: QuadRule, a: float, b: float) -> QuadRule:
    """Affinely map a rule on ``[-1, 1]`` to ``[a, b]``."""
    if not a < b:
        raise ValueError(f"empty interval [{a}, {b}]")
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return QuadRule(mid + half * rule.nodes, half * rule.weights)
