"""Scalar and tangential vector spherical harmonics.

Tangential values are carried as :class:`TangentValue` with an explicit basis
tag. The mixed harmonics ``Q^{+-}_lm = F_{l,+-m}(cos t) e^{i m p}/sqrt(2 pi) tau_{+-}``
have a single nonzero component in the ``tau`` basis,
``tau_{+-} = (theta_hat +- i phi_hat)/sqrt(2)``. At the poles ``tau_{+-}`` is
undefined and values are returned in Cartesian components instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .flm import eval_F, eval_F_column, min_degree
from .legendre import _dU_ratio, c_norm, eval_U
from .quadrature import gauss_legendre

__all__ = [
    "SpherePoint",
    "TangentValue",
    "FixedOrderOperatorSpec",
    "eval_Y",
    "eval_Q",
    "eval_YZ",
    "sphere_grid",
    "expand_tangent_field",
    "synthesize_tangent_field",
    "coefficient_count",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
BASES = ("tau", "polar", "cartesian")


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"colatitude {self.theta} outside [0, pi]")
        if not math.isfinite(self.phi):
            raise ValueError("azimuth must be finite")

    @property
    def at_pole(self) -> bool:
        return self.theta == 0.0 or self.theta == math.pi


def _polar_frame(theta, phi):
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    return np.array([ct * cp, ct * sp, -st]), np.array([-sp, cp, 0.0])


@dataclass(frozen=True)
class TangentValue:
    """A tangential vector at one point of the sphere.

    ``components`` holds ``(v_+, v_-)`` for ``basis="tau"``,
    ``(v_theta, v_phi)`` for ``"polar"`` and ``(v_x, v_y, v_z)`` for
    ``"cartesian"``.
    """

    basis: str
    components: tuple

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        comps = tuple(complex(c) for c in self.components)
        if len(comps) != (3 if self.basis == "cartesian" else 2):
            raise ValueError(f"wrong number of components for basis {self.basis!r}")
        object.__setattr__(self, "components", comps)

    def norm2(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.components))

    def to_polar(self) -> "TangentValue":
        if self.basis == "polar":
            return self
        if self.basis == "tau":
            vp, vm = self.components
            return TangentValue("polar", ((vp + vm) / _SQRT2, 1j * (vp - vm) / _SQRT2))
        raise ValueError("cartesian values need a point; use from_cartesian")

    def to_tau(self) -> "TangentValue":
        if self.basis == "tau":
            return self
        vt, vf = self.to_polar().components
        return TangentValue("tau", ((vt - 1j * vf) / _SQRT2, (vt + 1j * vf) / _SQRT2))

    def to_cartesian(self, point: SpherePoint) -> "TangentValue":
        if self.basis == "cartesian":
            return self
        vt, vf = self.to_polar().components
        th, ph = _polar_frame(point.theta, point.phi)
        return TangentValue("cartesian", tuple(vt * th + vf * ph))

    def dot(self, other: "TangentValue") -> complex:
        """Complex dot product ``conj(self) . other`` (same basis required).

        The tau and polar bases are orthonormal for this product.
        """
        if self.basis != other.basis:
            raise ValueError("dot product needs a common basis")
        return sum(a.conjugate() * b for a, b in zip(self.components, other.components))


@dataclass(frozen=True)
class FixedOrderOperatorSpec:
    m: int
    kind: str

    def __post_init__(self):
        if self.kind not in ("scalar-laplacian", "vector-laplacian-diag"):
            raise ValueError(f"unknown operator kind {self.kind!r}")

    def potential(self, x):
        """Zeroth-order term ``q(x)`` of ``d/dx[(1-x^2) d/dx] - q(x)``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "scalar-laplacian":
            return self.m**2 / (1.0 - x * x)
        return (self.m**2 - 2 * self.m * x + 1) / (1.0 - x * x)


def _point(point) -> SpherePoint:
    return point if isinstance(point, SpherePoint) else SpherePoint(*point)


def eval_Y(l: int, m: int, point) -> complex:
    """Scalar spherical harmonic ``U_lm(cos theta) e^{i m phi} / sqrt(2 pi)``."""
    p = _point(point)
    return eval_U(l, m, math.cos(p.theta)) * np.exp(1j * m * p.phi) * _INV_SQRT_2PI


def _pole_value(l: int, m: int, sign: int, north: bool) -> TangentValue:
    zero = TangentValue("cartesian", (0.0, 0.0, 0.0))
    amp = c_norm(l, 0) / (2.0 * math.sqrt(math.pi))
    if north:
        if m != sign:
            return zero
        return TangentValue("cartesian", (amp, sign * 1j * amp, 0.0))
    if m != -sign:
        return zero
    amp *= (-1.0) ** l
    return TangentValue("cartesian", (amp, -sign * 1j * amp, 0.0))


def eval_Q(l: int, m: int, sign, point) -> TangentValue:
    """Mixed vector spherical harmonic ``Q^{sign}_lm`` at ``point``.

    Returns a ``tau``-basis value off the poles and a ``cartesian`` value at
    ``theta = 0`` or ``theta = pi``.
    """
    s = _sign(sign)
    if l < min_degree(m):
        raise ValueError(f"invalid Q index (l={l}, m={m})")
    p = _point(point)
    if p.theta == 0.0:
        return _pole_value(l, m, s, north=True)
    if p.theta == math.pi:
        return _pole_value(l, m, s, north=False)
    val = eval_F(l, s * m, math.cos(p.theta)) * np.exp(1j * m * p.phi) * _INV_SQRT_2PI
    return TangentValue("tau", (val, 0.0) if s > 0 else (0.0, val))


def eval_YZ(l: int, m: int, point):
    """Classical tangential harmonics ``(Y_lm, Z_lm)`` in the polar basis."""
    if l < 1 or abs(m) > l:
        raise ValueError(f"invalid degree/order (l={l}, m={m})")
    p = _point(point)
    if p.at_pole:
        raise ValueError("Y_lm/Z_lm are not defined by components at the poles; use eval_Q")
    d1, d2 = _dU_ratio(l, m, np.asarray(math.cos(p.theta)))
    d1, d2 = float(d1), float(d2)
    k = np.exp(1j * m * p.phi) * _INV_SQRT_2PI / math.sqrt(l * (l + 1))
    Y = TangentValue("polar", (-k * d2, -1j * k * d1))
    Z = TangentValue("polar", (1j * k * d1, -k * d2))
    return Y, Z


def _sign(sign) -> int:
    if sign in ("+", 1, +1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def coefficient_count(L: int) -> int:
    """Dimension ``2 L (L + 2)`` of the bandlimited tangential space."""
    return 2 * L * (L + 2)


def sphere_grid(L: int):
    """Product grid exact for products of two fields bandlimited to ``L``.

    Returns ``(theta, phi, w_theta, w_phi)``: Gauss-Legendre in ``cos theta``
    with ``L + 1`` nodes and the uniform rule with ``2L + 2`` points in phi.
    """
    rule = gauss_legendre(L + 1)
    theta = np.arccos(rule.nodes)
    nphi = 2 * L + 2
    phi = 2.0 * np.pi * np.arange(nphi) / nphi
    return theta, phi, rule.weights.copy(), np.full(nphi, 2.0 * np.pi / nphi)


def expand_tangent_field(sampler: Callable, L: int, basis: str = "polar") -> dict:
    """Coefficients ``v^{+-}_lm`` of a tangential field bandlimited to ``L``.

    ``sampler(theta, phi)`` receives 2-D meshgrid arrays and returns the two
    field components in ``basis`` (``"polar"`` or ``"tau"``). The product
    quadrature is exact for bandlimited input; components above ``L`` alias
    silently.

    Returns a dict keyed by ``(sign, l, m)`` with ``sign`` in ``{"+", "-"}``,
    holding exactly ``2 L (L + 2)`` entries.
    """
    theta, phi, wt, wp = sphere_grid(L)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    a, b = (np.asarray(c, dtype=complex) for c in sampler(tt, pp))
    if basis == "polar":
        vp, vm = (a - 1j * b) / _SQRT2, (a + 1j * b) / _SQRT2
    elif basis == "tau":
        vp, vm = a, b
    else:
        raise ValueError(f"unsupported sampling basis {basis!r}")
    nphi = phi.size
    x = np.cos(theta)
    # sum_j e^{-i m phi_j} v(theta_i, phi_j) for every m, via the FFT
    fp = np.fft.fft(vp, axis=1) * (2.0 * np.pi / nphi) * _INV_SQRT_2PI
    fm = np.fft.fft(vm, axis=1) * (2.0 * np.pi / nphi) * _INV_SQRT_2PI
    coeffs = {}
    for m in range(-L, L + 1):
        col = m % nphi
        for sgn, f in (("+", fp), ("-", fm)):
            s = 1 if sgn == "+" else -1
            F = eval_F_column(s * m, L, x)
            vals = F @ (wt * f[:, col])
            for l, v in zip(range(min_degree(m), L + 1), vals):
                coeffs[(sgn, l, m)] = complex(v)
    return coeffs


def synthesize_tangent_field(coeffs: dict, theta, phi):
    """Evaluate ``sum v^{+-}_lm Q^{+-}_lm`` off the poles; returns ``(v_+, v_-)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x = np.cos(theta)
    vp = np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
    vm = np.zeros_like(vp)
    for (sgn, l, m), c in coeffs.items():
        if c == 0:
            continue
        s = 1 if sgn == "+" else -1
        term = c * eval_F(l, s * m, x) * np.exp(1j * m * phi) * _INV_SQRT_2PI
        if s > 0:
            vp = vp + term
        else:
            vm = vm + term
    return vp, vm
