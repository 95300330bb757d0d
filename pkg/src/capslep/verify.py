"""Invariant suite run by ``capslep verify``.

Each group checks one family of identities at a given bandlimit and cap and
reports its worst deviation against a fixed tolerance. Identity checks that
do not involve the cap run at ``min(L, 12)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import flm, legendre
from .capop import (CapProblem, assemble_J, assemble_J_by_quadrature, assemble_K,
                    partial_shannon, partial_shannon_by_kernel, shannon)
from .eigen import eigh_dense
from .harmonics import eval_Q, expand_tangent_field, sphere_grid
from .quadrature import gauss_legendre
from .slepian import eval_G, solve_order, verify_fredholm

__all__ = ["CheckResult", "GROUPS", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.error <= self.tol)

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: max error {self.error:.3e} (tol {self.tol:.0e})"


_XS = np.array([-0.9, -0.5, -0.123, 0.0, 0.3, 0.5, 0.77, 0.9])


def _u_orthonormality(cap):
    Lq = min(cap.L, 12)
    rule = gauss_legendre(Lq + 1)
    err = 0.0
    for m in range(0, Lq + 1):
        U = legendre.eval_U_column(m, Lq, rule.nodes)
        G = (U * rule.weights) @ U.T
        err = max(err, np.max(np.abs(G - np.eye(G.shape[0]))))
    return err


def _u_symmetry_parity(cap):
    err = 0.0
    for l in range(0, min(cap.L, 12) + 1):
        for m in range(-l, l + 1):
            u = legendre.eval_U(l, m, _XS)
            err = max(err, np.max(np.abs(legendre.eval_U(l, -m, _XS) - (-1) ** m * u)))
            err = max(err, np.max(np.abs(legendre.eval_U(l, m, -_XS) - (-1) ** (l + m) * u)))
    return err


def _u_addition(cap):
    err = 0.0
    for l in range(1, min(cap.L, 12) + 1):
        s0 = s1 = s2 = 0.0
        for m in range(-l, l + 1):
            d1, d2 = legendre.eval_dU_and_ratio(l, m, _XS)
            s0 = s0 + legendre.eval_U(l, m, _XS) ** 2
            s1 = s1 + d1 * d1
            s2 = s2 + d2 * d2
        ref = l * (l + 1) * (2 * l + 1) / 4
        err = max(err, np.max(np.abs(s0 - (2 * l + 1) / 2)) / ((2 * l + 1) / 2))
        err = max(err, np.max(np.abs(s1 - ref)) / ref, np.max(np.abs(s2 - ref)) / ref)
    return err


def _f_orthonormality(cap):
    Lq = min(cap.L, 12)
    rule = gauss_legendre(Lq + 1)
    err = 0.0
    for m in range(-Lq, Lq + 1):
        F = flm.eval_F_column(m, Lq, rule.nodes)
        G = (F * rule.weights) @ F.T
        err = max(err, np.max(np.abs(G - np.eye(G.shape[0]))))
    return err


def _f_routes(cap):
    """Recurrence vs singularity-free form, and ``F_l0 = -U_l1``."""
    err = 0.0
    xs = np.concatenate([_XS, [-1.0, 1.0]])
    for l in range(1, min(cap.L, 12) + 1):
        for m in range(-l, l + 1):
            err = max(err, np.max(np.abs(flm.eval_F(l, m, xs) - flm.eval_F_via_U(l, m, xs))))
        err = max(err, np.max(np.abs(flm.eval_F(l, 0, xs) + legendre.eval_U(l, 1, xs))))
    return err


def _f_symmetry_endpoints(cap):
    err = 0.0
    for l in range(1, min(cap.L, 12) + 1):
        for m in range(-l, l + 1):
            f = flm.eval_F(l, m, _XS)
            err = max(err, np.max(np.abs(flm.eval_F(l, -m, -_XS) - (-1) ** (l + 1) * f)))
            # endpoints from the raw recurrence against the closed forms
            raw = flm._column(m, l, np.array([1.0, -1.0]), endpoints=False)[-1]
            c = legendre.c_norm(l, 0)
            want = [c if m == 1 else 0.0, (-1) ** (l - 1) * c if m == -1 else 0.0]
            err = max(err, np.max(np.abs(raw - want)))
    return err


def _f_addition(cap):
    err = 0.0
    for l in range(1, min(cap.L, 12) + 1):
        s = sum(flm.eval_F(l, m, _XS) ** 2 for m in range(-l, l + 1))
        err = max(err, np.max(np.abs(s - (2 * l + 1) / 2)) / ((2 * l + 1) / 2))
    return err


def _christoffel_darboux(cap):
    Lq = min(cap.L, 12)
    x = _XS[:, None]
    xp = np.array([-0.8, -0.2, 0.45, 0.95])[None, :]
    err = 0.0
    for m in range(-Lq, Lq + 1):
        lhs = (x - xp) * flm.kernel_K(m, Lq, x, xp)
        err = max(err, np.max(np.abs(lhs - flm.christoffel_darboux_rhs(m, Lq, x, xp))))
    return err


def _sturm_liouville(cap):
    err = 0.0
    for l in range(0, min(cap.L, 12) + 1):
        for m in range(-l, l + 1):
            scale = max(1, l * (l + 1)) * np.max(np.abs(legendre.eval_U(l, m, _XS)))
            err = max(err, np.max(np.abs(legendre.sturm_liouville_residual(l, m, _XS))) / scale)
            if l >= flm.min_degree(m):
                scale = l * (l + 1) * np.max(np.abs(flm.eval_F(l, m, _XS)))
                err = max(err, np.max(np.abs(flm.sturm_liouville_residual(l, m, _XS))) / scale)
    return err


def _quadrature_moments(cap):
    err = 0.0
    for n in (1, 2, 5, cap.L + 1, 64):
        rule = gauss_legendre(n)
        x = rule.nodes
        for k in range(0, 2 * n):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            vals = np.sign(x) ** k * np.abs(x) ** k
            err = max(err, abs(float(rule.integrate(vals)) - exact))
    return err


def _j_matrix(cap):
    err = 0.0
    for m in cap.orders:
        p = cap.order(m)
        a, b = assemble_J(p), assemble_J_by_quadrature(p)
        err = max(err, np.max(np.abs(a.diag - b.diag)), np.max(np.abs(a.offdiag - b.offdiag), initial=0.0))
    return err


def _commutation(cap):
    err = 0.0
    for m in cap.orders:
        p = cap.order(m)
        K = assemble_K(p).entries
        J = assemble_J(p).to_dense()
        scale = np.max(np.abs(K)) * np.max(np.abs(J))
        err = max(err, np.max(np.abs(K @ J - J @ K)) / scale)
    return err


def _shannon(cap):
    total = sum(partial_shannon(cap.order(m)) for m in cap.orders)
    err = abs(total - shannon(cap))
    for m in (0, 1, -cap.L):
        p = cap.order(m)
        err = max(err, abs(partial_shannon(p) - partial_shannon_by_kernel(p)))
    return err


def _k_spectrum(cap):
    """Eigenvalues of ``K_m`` inside ``[0, 1]`` up to rounding."""
    err = 0.0
    for m in cap.orders:
        vals = eigh_dense(assemble_K(cap.order(m))).values
        err = max(err, -float(vals.min()), float(vals.max()) - 1.0, 0.0)
    return err


def _double_orthogonality(cap):
    Lq = min(cap.L, 12)
    small = CapProblem(Lq, cap.theta)
    full = gauss_legendre(Lq + 1)
    err = 0.0
    for m in small.orders:
        sol = solve_order(small.order(m))
        crule = sol.problem.cap_rule
        G = np.array([eval_G(sol, n, full.nodes) for n in range(1, sol.size + 1)])
        Gc = np.array([eval_G(sol, n, crule.nodes) for n in range(1, sol.size + 1)])
        err = max(err, np.max(np.abs((G * full.weights) @ G.T - np.eye(sol.size))))
        err = max(err, np.max(np.abs((Gc * crule.weights) @ Gc.T - np.diag(sol.eta))))
    return err


def _fredholm(cap):
    Lq = min(cap.L, 12)
    small = CapProblem(Lq, cap.theta)
    xs = np.linspace(-1.0, 1.0, 50)
    err = 0.0
    for m in sorted({0, min(3, Lq), -min(3, Lq)}):
        sol = solve_order(small.order(m))
        for n in range(1, sol.size + 1):
            err = max(err, verify_fredholm(sol, n, xs))
    return err


def _ordering(cap):
    """``chi`` ascending must coincide with ``eta`` descending where ``eta`` is resolved."""
    bad = 0
    for m in cap.orders:
        sol = solve_order(cap.order(m))
        d = np.diff(sol.eta)
        bad += int(np.sum(d > 1e-12))
        bad += int(np.sum(np.diff(sol.chi) < 0))
    return float(bad)


def _q_expansion(cap):
    Lq = min(cap.L, 4)
    theta, phi, _, _ = sphere_grid(Lq)
    err = 0.0
    for l, m in ((1, 1), (2, -1), (Lq, 0)):
        for sgn in ("+", "-"):
            def sampler(tt, pp, l=l, m=m, sgn=sgn):
                vals = [eval_Q(l, m, sgn, (t, p)).to_polar().components
                        for t, p in zip(tt.ravel(), pp.ravel())]
                arr = np.array(vals).reshape(tt.shape + (2,))
                return arr[..., 0], arr[..., 1]
            coeffs = expand_tangent_field(sampler, Lq)
            for key, v in coeffs.items():
                want = 1.0 if key == (sgn, l, m) else 0.0
                err = max(err, abs(v - want))
    return err


def _q_poles(cap):
    err = 0.0
    for l in range(1, min(cap.L, 12) + 1):
        amp = legendre.c_norm(l, 0) / (2 * math.sqrt(math.pi))
        for m in range(-l, l + 1):
            for sgn, s in (("+", 1), ("-", -1)):
                north = eval_Q(l, m, sgn, (0.0, 0.3)).components
                want = (amp, s * 1j * amp, 0) if m == s else (0, 0, 0)
                err = max(err, max(abs(a - b) for a, b in zip(north, want)))
                south = eval_Q(l, m, sgn, (math.pi, 0.3)).components
                a2 = (-1) ** l * amp
                want = (a2, -s * 1j * a2, 0) if m == -s else (0, 0, 0)
                err = max(err, max(abs(a - b) for a, b in zip(south, want)))
    return err


GROUPS = [
    ("legendre orthonormality", _u_orthonormality, 1e-12),
    ("legendre symmetry and parity", _u_symmetry_parity, 1e-13),
    ("legendre addition theorems", _u_addition, 1e-11),
    ("F orthonormality", _f_orthonormality, 1e-12),
    ("F route equivalence and F_l0 = -U_l1", _f_routes, 1e-12),
    ("F symmetry and endpoint values", _f_symmetry_endpoints, 1e-12),
    ("F addition theorem", _f_addition, 1e-11),
    ("Christoffel-Darboux", _christoffel_darboux, 1e-12),
    ("Sturm-Liouville residuals", _sturm_liouville, 1e-9),
    ("quadrature moments", _quadrature_moments, 1e-14),
    ("J closed form vs quadrature", _j_matrix, 1e-11),
    ("K/J commutation", _commutation, 1e-11),
    ("Shannon number accounting", _shannon, 1e-9),
    ("K spectrum within [0, 1]", _k_spectrum, 1e-13),
    ("double orthogonality", _double_orthogonality, 1e-11),
    ("Fredholm residual", _fredholm, 1e-10),
    ("chi/eta opposite ordering", _ordering, 0.0),
    ("Q expansion round trip", _q_expansion, 1e-12),
    ("Q pole values", _q_poles, 1e-14),
]


def run_suite(cap: CapProblem):
    """Run every group; returns a list of :class:`CheckResult`."""
    return [CheckResult(name, float(fn(cap)), tol) for name, fn, tol in GROUPS]
