"""Command-line front end.

Every command writes CSV (or JSON for ``solve``) to ``--out`` or stdout.
CSV uses ``,`` separators, ``#``-prefixed header lines echoing the run
configuration, and 17 significant digits so floats round-trip exactly.

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 computation error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .capop import CapProblem, partial_shannon, shannon
from .flm import eval_F, min_degree
from .harmonics import TangentValue, _polar_frame
from .quadrature import gauss_legendre
from .slepian import (FixedOrderSolution, VectorEigenfield, error_analysis, eval_eigenfield,
                      eval_G, solve_order)
from .verify import run_suite

__all__ = ["main", "RunConfig", "ConfigError", "dump_solution", "load_solution", "SCHEMA"]

SCHEMA = "capslep-solution/1"
EPS_M = 2.0 ** -53
EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_COMPUTE = 0, 1, 2, 3
COMMANDS = ("shannon", "spectrum", "solve", "eval", "flm", "error-analysis", "verify")
ORDERING = "rows sorted by chi ascending (eta descending); n = 1 is the most concentrated"
SIGN_CONVENTION = "largest-magnitude coefficient positive, ties to the lowest degree"


class ConfigError(ValueError):
    """Invalid command-line configuration."""


def _fmt(x) -> str:
    # shortest repr that round-trips, never more than 17 significant digits
    return repr(float(x))


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be start:stop:count, got {text!r}")
        try:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from None
        if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
            raise ConfigError(f"bad grid {text!r}")
        return cls(a, b, n)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self) -> str:
        return f"{self.start:g}:{self.stop:g}:{self.count}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    L: int | None = None
    theta_deg: float | None = None
    m: int | None = None
    n: int | None = None
    l: int | None = None
    matrix: str = "K"
    grid: Grid | None = None
    out: str | None = None
    fmt: str = "csv"
    threads: int = 0
    solution: str | None = None
    basis: str = "scalar"
    phi_deg: float = 0.0
    sign: str = "+"
    reference: str = "mp"

    @property
    def cap(self) -> CapProblem:
        return CapProblem.from_degrees(self.L, self.theta_deg)

    def echo(self) -> list[str]:
        keys = ["command", "L", "theta_deg", "m", "n", "l", "matrix", "grid",
                "basis", "phi_deg", "sign", "solution", "reference"]
        used = _USED[self.command]
        return [f"# {k} = {getattr(self, k)}" for k in keys
                if k in used and getattr(self, k) is not None]


_USED = {
    "shannon": {"command", "L", "theta_deg"},
    "spectrum": {"command", "L", "theta_deg", "matrix"},
    "solve": {"command", "L", "theta_deg", "m"},
    "eval": {"command", "L", "theta_deg", "m", "n", "grid", "basis", "phi_deg", "sign", "solution"},
    "flm": {"command", "l", "m", "grid"},
    "error-analysis": {"command", "L", "theta_deg", "m", "reference"},
    "verify": {"command", "L", "theta_deg"},
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="capslep",
        description="Tangential vector Slepian functions on a polar cap.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--L", type=int, help="bandlimit")
    p.add_argument("--theta", type=float, help="cap half-angle in degrees")
    p.add_argument("--m", type=int, help="order")
    p.add_argument("--n", type=int, help="rank within an order (1 = best concentrated)")
    p.add_argument("--l", type=int, help="degree (flm)")
    p.add_argument("--matrix", choices=("K", "J"), default="K", help="spectrum to list")
    p.add_argument("--grid", help="start:stop:count (degrees of colatitude, or x for flm)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=0, help="worker threads over m (0 = auto)")
    p.add_argument("--solution", help="JSON solution file to evaluate (eval)")
    p.add_argument("--basis", choices=("scalar", "tau", "polar"), default="scalar",
                   help="eval output: scalar G or field components")
    p.add_argument("--phi", type=float, default=0.0, help="azimuth in degrees (eval)")
    p.add_argument("--sign", choices=("+", "-"), default="+", help="field family (eval)")
    p.add_argument("--reference", choices=("mp", "dd"), default="mp",
                   help="extended-precision reference for error-analysis")
    return p


def parse_config(argv) -> RunConfig:
    parser = _parser()
    argv = list(argv)
    # let values such as "--grid -1:1:5" through without the "=" form
    for i in range(len(argv) - 1):
        if argv[i] in ("--grid", "--theta", "--phi", "--m") and argv[i + 1].startswith("-"):
            argv[i:i + 2] = [f"{argv[i]}={argv[i + 1]}", ""]
    argv = [a for a in argv if a != ""]
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise ConfigError("invalid arguments") from None
    grid = Grid.parse(ns.grid) if ns.grid else None
    cfg = RunConfig(
        command=ns.command, L=ns.L, theta_deg=ns.theta, m=ns.m, n=ns.n, l=ns.l,
        matrix=ns.matrix, grid=grid, out=ns.out, fmt=ns.fmt, threads=ns.threads,
        solution=ns.solution, basis=ns.basis, phi_deg=ns.phi, sign=ns.sign,
        reference=ns.reference,
    )
    return validate(cfg)


def validate(cfg: RunConfig) -> RunConfig:
    """Check a configuration against the library preconditions."""
    c = cfg.command
    if cfg.threads < 0:
        raise ConfigError("--threads must be >= 0")
    if c == "flm":
        if cfg.l is None or cfg.m is None:
            raise ConfigError("flm needs --l and --m")
        if cfg.l < min_degree(cfg.m):
            raise ConfigError(f"invalid F index (l={cfg.l}, m={cfg.m})")
        if cfg.grid and (cfg.grid.start < -1 or cfg.grid.stop > 1 or cfg.grid.start > 1 or cfg.grid.stop < -1):
            raise ConfigError("flm grid must lie in [-1, 1]")
        return cfg
    if c == "eval" and cfg.solution:
        return cfg
    defaults = {"verify": (12, 60.0)}
    L, th = cfg.L, cfg.theta_deg
    if c in defaults:
        L = defaults[c][0] if L is None else L
        th = defaults[c][1] if th is None else th
    if L is None or th is None:
        raise ConfigError(f"{c} needs --L and --theta")
    try:
        CapProblem.from_degrees(L, th)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not 0.0 < th <= 180.0:
        raise ConfigError("--theta must lie in (0, 180]")
    m = cfg.m
    if c == "error-analysis" and m is None:
        m = 1
    if c in ("solve", "eval") and m is None:
        raise ConfigError(f"{c} needs --m")
    if m is not None and abs(m) > L:
        raise ConfigError(f"order {m} exceeds bandlimit {L}")
    if c == "eval":
        if cfg.grid and not (0 <= min(cfg.grid.start, cfg.grid.stop) and max(cfg.grid.start, cfg.grid.stop) <= 180):
            raise ConfigError("eval grid is colatitude in degrees within [0, 180]")
        size = L - min_degree(m) + 1
        if cfg.n is not None and not 1 <= cfg.n <= size:
            raise ConfigError(f"--n must lie in 1..{size}")
    return RunConfig(**{**cfg.__dict__, "L": L, "theta_deg": th, "m": m})


# ----------------------------------------------------------------------------
# solution files


def dump_solution(sol: FixedOrderSolution, theta_deg: float) -> str:
    doc = {
        "schema": SCHEMA,
        "L": sol.problem.L,
        "theta_degrees": float(theta_deg),
        "m": sol.m,
        "chi": [float(v) for v in sol.chi],
        "eta": [float(v) for v in sol.eta],
        "g": [[float(v) for v in row] for row in sol.g],
        "ordering": ORDERING,
        "sign_convention": SIGN_CONVENTION,
    }
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(doc, indent=1) + "\n"


_FIELDS = {"schema", "L", "theta_degrees", "m", "chi", "eta", "g", "ordering", "sign_convention"}


def load_solution(text: str) -> FixedOrderSolution:
    """Parse a solution document; unknown or missing fields are errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"solution file is not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("solution file must hold a JSON object")
    extra = set(doc) - _FIELDS
    missing = _FIELDS - set(doc)
    if extra:
        raise ConfigError(f"unknown solution fields: {sorted(extra)}")
    if missing:
        raise ConfigError(f"missing solution fields: {sorted(missing)}")
    if doc["schema"] != SCHEMA:
        raise ConfigError(f"unsupported schema {doc['schema']!r}")
    try:
        problem = CapProblem.from_degrees(doc["L"], doc["theta_degrees"]).order(doc["m"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    size = problem.size
    g = np.array(doc["g"], dtype=float)
    if g.shape != (size, size) or len(doc["chi"]) != size or len(doc["eta"]) != size:
        raise ConfigError("solution arrays do not match the problem size")
    return FixedOrderSolution(problem, doc["chi"], doc["eta"], g)


# ----------------------------------------------------------------------------
# commands


def _threads(cfg: RunConfig) -> int:
    return cfg.threads or min(8, os.cpu_count() or 1)


def _solve_all(cfg: RunConfig):
    cap = cfg.cap
    with ThreadPoolExecutor(max_workers=_threads(cfg)) as pool:
        # map keeps the order of m, so the merge is deterministic
        return list(pool.map(lambda m: solve_order(cap.order(m)), cap.orders))


def cmd_shannon(cfg: RunConfig, out) -> int:
    cap = cfg.cap
    N = shannon(cap)
    parts = [partial_shannon(cap.order(m)) for m in cap.orders]
    out.write(f"# N = {_fmt(N)}\n")
    out.write(f"# sum_N_m_minus_N = {_fmt(math.fsum(parts) - N)}\n")
    out.write("m,N_m\n")
    for m, v in zip(cap.orders, parts):
        out.write(f"{m},{_fmt(v)}\n")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, out) -> int:
    rows = []
    for sol in _solve_all(cfg):
        vals = sol.eta if cfg.matrix == "K" else sol.chi
        rows.extend((sol.m, n, float(v)) for n, v in enumerate(vals, start=1))
    rows.sort(key=lambda r: (r[0], r[1]))
    if cfg.matrix == "K":
        rows.sort(key=lambda r: -r[2])
    else:
        rows.sort(key=lambda r: r[2])
    out.write("rank,m,n,value\n")
    for rank, (m, n, v) in enumerate(rows, start=1):
        out.write(f"{rank},{m},{n},{_fmt(v)}\n")
    return EXIT_OK


def cmd_solve(cfg: RunConfig, out) -> int:
    sol = solve_order(cfg.cap.order(cfg.m))
    if cfg.fmt == "json":
        out.write(dump_solution(sol, cfg.theta_deg))
        return EXIT_OK
    out.write(f"# ordering = {ORDERING}\n# sign_convention = {SIGN_CONVENTION}\n")
    degs = sol.problem.degrees
    out.write("n,chi,eta," + ",".join(f"g_{l}" for l in degs) + "\n")
    for n in range(sol.size):
        vals = [sol.chi[n], sol.eta[n], *sol.g[n]]
        out.write(f"{n + 1}," + ",".join(_fmt(v) for v in vals) + "\n")
    return EXIT_OK


def _cap_fraction(sol: FixedOrderSolution, n: int) -> float:
    full = gauss_legendre(sol.problem.L + 1)
    rule = sol.problem.cap_rule
    inside = rule.integrate(eval_G(sol, n, rule.nodes) ** 2)
    total = full.integrate(eval_G(sol, n, full.nodes) ** 2)
    return float(inside / total)


def _to_polar(val: TangentValue, theta: float, phi: float) -> TangentValue:
    if val.basis != "cartesian":
        return val.to_polar()
    # pole limit along the meridian phi
    th, ph = _polar_frame(theta, phi)
    v = np.array(val.components)
    return TangentValue("polar", (complex(v @ th), complex(v @ ph)))


def cmd_eval(cfg: RunConfig, out) -> int:
    if cfg.solution:
        with open(cfg.solution, encoding="utf-8") as fh:
            sol = load_solution(fh.read())
    else:
        sol = solve_order(cfg.cap.order(cfg.m))
    n = cfg.n or 1
    if not 1 <= n <= sol.size:
        raise ConfigError(f"--n must lie in 1..{sol.size}")
    grid = cfg.grid or Grid(0.0, 180.0, 181)
    theta_deg = grid.values()
    theta = np.radians(theta_deg)
    theta = np.where(theta_deg == 180.0, math.pi, theta)
    x = np.cos(theta)
    x = np.where(theta_deg == 0.0, 1.0, np.where(theta_deg == 180.0, -1.0, x))
    if cfg.solution:
        out.write(f"# L = {sol.problem.L}\n# m = {sol.m}\n")
    out.write(f"# rank = {n}\n# eta = {_fmt(sol.eta[n - 1])}\n")
    out.write(f"# chi = {_fmt(sol.chi[n - 1])}\n")
    out.write(f"# cap_energy_fraction = {_fmt(_cap_fraction(sol, n))}\n")
    if cfg.basis == "scalar":
        G = eval_G(sol, n, x)
        out.write("theta_deg,x,G\n")
        for t, xv, g in zip(theta_deg, x, np.atleast_1d(G)):
            out.write(f"{_fmt(t)},{_fmt(xv)},{_fmt(g)}\n")
        return EXIT_OK
    field = VectorEigenfield(sol, n, cfg.sign)
    phi = math.radians(cfg.phi_deg)
    names = ("tau_plus", "tau_minus") if cfg.basis == "tau" else ("theta", "phi")
    out.write(f"# order = {field.order}\n")
    out.write("theta_deg,phi_deg," + ",".join(f"re_{c},im_{c}" for c in names) + "\n")
    for t_deg, t in zip(theta_deg, theta):
        val = _to_polar(eval_eigenfield(field, (float(t), phi)), float(t), phi)
        if cfg.basis == "tau":
            val = val.to_tau()
        comps = []
        for c in val.components:
            comps += [c.real, c.imag]
        out.write(f"{_fmt(t_deg)},{_fmt(cfg.phi_deg)}," + ",".join(_fmt(c) for c in comps) + "\n")
    return EXIT_OK


def cmd_flm(cfg: RunConfig, out) -> int:
    grid = cfg.grid or Grid(-1.0, 1.0, 201)
    x = np.clip(grid.values(), -1.0, 1.0)
    F = np.atleast_1d(eval_F(cfg.l, cfg.m, x))
    out.write("x,F\n")
    for xv, f in zip(x, F):
        out.write(f"{_fmt(xv)},{_fmt(f)}\n")
    return EXIT_OK


def cmd_error_analysis(cfg: RunConfig, out) -> int:
    ea = error_analysis(cfg.cap, cfg.m, reference=cfg.reference)
    out.write(f"# reference_precision = {ea.reference}\n# pairing = {ea.pairing}\n")
    out.write(f"# max_err_J_over_eps = {_fmt(ea.err_J.max() / EPS_M)}\n")
    out.write(f"# max_err_K_over_eps = {_fmt(ea.err_K.max() / EPS_M)}\n")
    out.write("n,gap_eta,gap_chi,err_K,err_J\n")
    for n, ge, gc, ek, ej in ea.rows():
        out.write(f"{n},{_fmt(ge)},{_fmt(gc)},{_fmt(ek)},{_fmt(ej)}\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out) -> int:
    results = run_suite(cfg.cap)
    for r in results:
        out.write(r.line() + "\n")
    failed = sum(not r.ok for r in results)
    out.write(f"# {len(results) - failed}/{len(results)} invariant groups passed\n")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


_DISPATCH = {
    "shannon": cmd_shannon,
    "spectrum": cmd_spectrum,
    "solve": cmd_solve,
    "eval": cmd_eval,
    "flm": cmd_flm,
    "error-analysis": cmd_error_analysis,
    "verify": cmd_verify,
}


def run(cfg: RunConfig, out) -> int:
    """Execute a validated configuration, writing to the text stream ``out``."""
    if not (cfg.command == "solve" and cfg.fmt == "json"):
        out.write(f"# capslep {cfg.command}\n")
        for line in cfg.echo():
            out.write(line + "\n")
    return _DISPATCH[cfg.command](cfg, out)


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"capslep: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    buf = io.StringIO()
    try:
        code = run(cfg, buf)
    except (ConfigError, OSError) as exc:
        print(f"capslep: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, ValueError) as exc:
        print(f"capslep: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = buf.getvalue()
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"capslep: cannot write output: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
