"""Batch front-end: INI problem configs in, CSV grids and JSON diagnostics out.

Subcommands
-----------
solve        solve the configured problem, write the solution grid
convert      convert the data block between the two boundary formulations
check        evaluate agreement / compatibility residuals against a threshold
verify       manufactured-solution error report on a single grid
convergence  manufactured-solution study over doubling grids

Exit codes: 0 success, 1 check threshold exceeded, 2 config or expression
parse error, 3 numerical failure (non-convergence, rank collapse),
4 I/O error.

The config grammar (INI sections, expression values quoted, file values
named by a path ending in .csv) and the CSV/JSON layouts written here are
the stable public surface; see the README for the full as-documented
grammar.  All numeric CSV fields use 17-significant-digit scientific
notation, which round-trips 64-bit floats exactly.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

import numpy as np

from . import expr as ex
from .dirichlet import DirichletProblem, solve_classical, solve_dirichlet
from .goursat import NonConvergenceError
from .grid import Grid2D, GridFn1D, GridFn2D, lp_norm, make_grid
from .problem import (
    COEFFICIENT_NAMES,
    BoundaryFn,
    ClassicalData,
    Coefficients,
    NonClassicalData,
    check_agreement,
    check_compatibility,
    classical_to_nonclassical,
    nonclassical_to_classical,
)
from .verify import convergence_study, manufactured_problem

__all__ = ["ConfigError", "Config", "load_config", "run", "main"]

_FMT = "{:.16e}"


class ConfigError(Exception):
    """Invalid or missing configuration; the message names the key."""


class Config:
    """Parsed problem definition (see load_config)."""

    def __init__(self, grid, coeffs, coeff_exprs, rhs, data_kind,
                 classical, nonclassical, tol, max_iter, ridge):
        self.grid = grid
        self.coeffs = coeffs
        self.coeff_exprs = coeff_exprs
        self.rhs = rhs
        self.data_kind = data_kind
        self.classical = classical
        self.nonclassical = nonclassical
        self.tol = tol
        self.max_iter = max_iter
        self.ridge = ridge


# ---------------------------------------------------------------------------
# config reading

def _unquote(raw: str) -> str:
    s = raw.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "\"'":
        return s[1:-1]
    return s


def _get(cp: configparser.ConfigParser, section: str, key: str, default=None) -> str:
    if cp.has_section(section) and cp.has_option(section, key):
        return _unquote(cp.get(section, key))
    if default is None:
        raise ConfigError(f"missing required key [{section}] {key}")
    return default


def _get_float(cp, section, key, default=None) -> float:
    raw = _get(cp, section, key, default)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _get_int(cp, section, key, default=None) -> int:
    raw = _get(cp, section, key, default)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _parse_expr(text: str, where: str) -> ex.Expr:
    try:
        return ex.parse(text)
    except ex.ParseError as err:
        raise ConfigError(f"{where}: {err}") from err


def _read_rows(path: Path, expected_header: str, where: str) -> list[list[float]]:
    try:
        lines = path.read_text().splitlines()
    except OSError as err:
        raise ConfigError(f"{where}: cannot read {path}: {err}") from err
    lines = [ln for ln in lines if ln.strip()]
    if not lines or lines[0].strip() != expected_header:
        raise ConfigError(f"{where}: {path} must start with header {expected_header!r}")
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ConfigError(f"{where}: {path} line {k}: bad numeric row {ln!r}") from None
    return rows


def _edge_fn(raw: str, grid, base_dir: Path, where: str) -> GridFn1D:
    """Edge-function entry: an expression (univariate) or a 1D CSV path."""
    if raw.endswith(".csv"):
        path = base_dir / raw if not Path(raw).is_absolute() else Path(raw)
        rows = _read_rows(path, "x,value", where)
        if len(rows) != grid.n + 1 or any(len(r) != 2 for r in rows):
            raise ConfigError(f"{where}: {path} must have {grid.n + 1} x,value rows")
        return GridFn1D(grid, [r[1] for r in rows])
    e = _parse_expr(raw, where)
    x = grid.nodes
    try:
        values = np.broadcast_to(np.asarray(ex.evaluate(e, x, x), dtype=float), x.shape)
    except ex.EvalDomainError as err:
        raise ConfigError(f"{where}: {err}") from err
    return GridFn1D(grid, values)


def _fn2d(raw: str, grid: Grid2D, base_dir: Path, where: str) -> GridFn2D:
    if raw.endswith(".csv"):
        path = base_dir / raw if not Path(raw).is_absolute() else Path(raw)
        rows = _read_rows(path, "x1,x2,value", where)
        n1, n2 = grid.g1.n, grid.g2.n
        if len(rows) != (n1 + 1) * (n2 + 1) or any(len(r) != 3 for r in rows):
            raise ConfigError(f"{where}: {path} must have {(n1 + 1) * (n2 + 1)} x1,x2,value rows")
        values = np.array([r[2] for r in rows]).reshape(n1 + 1, n2 + 1)
        return GridFn2D(grid, values)
    e = _parse_expr(raw, where)
    X1 = grid.g1.nodes[:, None]
    X2 = grid.g2.nodes[None, :]
    try:
        return GridFn2D(grid, ex.sample(e, X1, X2, grid.shape))
    except ex.EvalDomainError as err:
        raise ConfigError(f"{where}: {err}") from err


def load_config(path) -> Config:
    """Read a problem definition; raises ConfigError naming the bad key."""
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except configparser.Error as err:
        raise ConfigError(f"malformed config {path}: {err}") from err
    base_dir = path.parent

    h1 = _get_float(cp, "domain", "h1")
    h2 = _get_float(cp, "domain", "h2")
    n1 = _get_int(cp, "domain", "n1")
    n2 = _get_int(cp, "domain", "n2")
    try:
        grid = Grid2D(make_grid(h1, n1), make_grid(h2, n2))
    except ValueError as err:
        raise ConfigError(f"[domain]: {err}") from err

    coeff_exprs = {}
    for name in COEFFICIENT_NAMES:
        coeff_exprs[name] = _parse_expr(
            _get(cp, "coefficients", name, "0"), f"[coefficients] {name}"
        )
    try:
        coeffs = Coefficients.from_exprs(grid, coeff_exprs)
    except ex.EvalDomainError as err:
        raise ConfigError(f"[coefficients]: {err}") from err

    if cp.has_section("rhs") and cp.has_option("rhs", "csv"):
        if cp.has_option("rhs", "expr"):
            raise ConfigError("[rhs]: give either expr or csv, not both")
        rhs = _fn2d(_get(cp, "rhs", "csv"), grid, base_dir, "[rhs] csv")
    else:
        rhs = _fn2d(_get(cp, "rhs", "expr", "0"), grid, base_dir, "[rhs] expr")

    has_nc = cp.has_section("data.nonclassical")
    has_c = cp.has_section("data.classical")
    if has_nc and has_c:
        raise ConfigError("exactly one of [data.nonclassical] / [data.classical] may be present")
    nonclassical = classical = None
    data_kind = None
    if has_nc:
        data_kind = "nonclassical"
        sec = "data.nonclassical"
        scalars = {k: _get_float(cp, sec, k, "0") for k in NonClassicalData.SCALARS}
        nonclassical = NonClassicalData(
            **scalars,
            z20=_edge_fn(_get(cp, sec, "z20", "0"), grid.g1, base_dir, f"[{sec}] z20"),
            z02=_edge_fn(_get(cp, sec, "z02", "0"), grid.g2, base_dir, f"[{sec}] z02"),
            z20_h2=_edge_fn(_get(cp, sec, "z20_h2", "0"), grid.g1, base_dir, f"[{sec}] z20_h2"),
            z02_h1=_edge_fn(_get(cp, sec, "z02_h1", "0"), grid.g2, base_dir, f"[{sec}] z02_h1"),
        )
    elif has_c:
        data_kind = "classical"
        sec = "data.classical"
        fns = {}
        for name, g in (("phi1", grid.g2), ("phi2", grid.g2), ("psi1", grid.g1), ("psi2", grid.g1)):
            fns[name] = BoundaryFn(
                _get_float(cp, sec, f"{name}.v0", "0"),
                _get_float(cp, sec, f"{name}.v1", "0"),
                _edge_fn(_get(cp, sec, f"{name}.v2", "0"), g, base_dir, f"[{sec}] {name}.v2"),
            )
        classical = ClassicalData(**fns)

    tol = _get_float(cp, "solver", "tol", "1e-12")
    max_iter = _get_int(cp, "solver", "max_iter", "200")
    ridge = _get_float(cp, "solver", "ridge", "0")
    if tol <= 0:
        raise ConfigError("[solver] tol must be positive")
    if max_iter < 1:
        raise ConfigError("[solver] max_iter must be >= 1")
    if ridge < 0:
        raise ConfigError("[solver] ridge must be nonnegative")

    return Config(grid, coeffs, coeff_exprs, rhs, data_kind, classical, nonclassical,
                  tol, max_iter, ridge)


# ---------------------------------------------------------------------------
# output writers

def _write_text(path, text: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _csv_1d(fn: GridFn1D) -> str:
    lines = ["x,value"]
    for x, v in zip(fn.grid.nodes, fn.values):
        lines.append(f"{_FMT.format(x)},{_FMT.format(v)}")
    return "\n".join(lines) + "\n"


def _csv_2d(fn: GridFn2D) -> str:
    x1 = fn.grid.g1.nodes
    x2 = fn.grid.g2.nodes
    lines = ["x1,x2,value"]
    for i in range(x1.size):
        for j in range(x2.size):
            lines.append(f"{_FMT.format(x1[i])},{_FMT.format(x2[j])},{_FMT.format(fn.values[i, j])}")
    return "\n".join(lines) + "\n"


def _diagnostics_dict(cfg: Config, sol) -> dict:
    d = sol.diagnostics
    out = {
        "h1": cfg.grid.g1.length,
        "h2": cfg.grid.g2.length,
        "n1": cfg.grid.g1.n,
        "n2": cfg.grid.g2.n,
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
        "ridge": cfg.ridge,
        "goursat_iterations": d.goursat_iterations,
        "closure_residual": d.closure_residual,
        "equation_residual": d.equation_residual,
        "compat_rho1": d.compat.rho1,
        "compat_rho2": d.compat.rho2,
        "compat_rho3": d.compat.rho3,
        "theta_c": float(sol.theta[0]),
    }
    for name, value in d.condition_residuals.items():
        out[f"condition_residual_{name}"] = value
    for name, value in d.coefficient_norms.items():
        out[f"coefficient_norm_{name}"] = value
    if d.agreement is not None:
        out["agreement_r1"] = d.agreement.r1
        out["agreement_r2"] = d.agreement.r2
        out["agreement_r3"] = d.agreement.r3
        out["agreement_r4"] = d.agreement.r4
    return out


# ---------------------------------------------------------------------------
# subcommands

def _cmd_solve(args) -> int:
    cfg = load_config(args.config)
    if cfg.data_kind is None:
        raise ConfigError("solve needs a [data.nonclassical] or [data.classical] block")
    if cfg.data_kind == "classical":
        sol = solve_classical(cfg.coeffs, cfg.rhs, cfg.classical, cfg.grid,
                              tol=cfg.tol, max_iter=cfg.max_iter, ridge=cfg.ridge)
    else:
        problem = DirichletProblem(cfg.grid, cfg.coeffs, cfg.rhs, cfg.nonclassical,
                                   tol=cfg.tol, max_iter=cfg.max_iter, ridge=cfg.ridge)
        sol = solve_dirichlet(problem)

    out = Path(args.out)
    _write_text(out, _csv_2d(sol.field.u))
    if args.field:
        for i in range(3):
            for j in range(3):
                side = out.with_name(f"{out.stem}_d{i}{j}{out.suffix}")
                _write_text(side, _csv_2d(sol.field.d[i][j]))
    if args.diag:
        _write_text(args.diag, json.dumps(_diagnostics_dict(cfg, sol), indent=2, sort_keys=True) + "\n")
    return 0


def _domain_block(grid: Grid2D) -> list[str]:
    return [
        "[domain]",
        f"h1 = {grid.g1.length!r}",
        f"h2 = {grid.g2.length!r}",
        f"n1 = {grid.g1.n}",
        f"n2 = {grid.g2.n}",
        "",
    ]


def _cmd_convert(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.out)
    lines = _domain_block(cfg.grid)

    def side_csv(name: str, fn: GridFn1D) -> str:
        side = out.with_name(f"{out.stem}_{name}.csv")
        _write_text(side, _csv_1d(fn))
        return side.name

    if args.direction == "c2n":
        if cfg.data_kind != "classical":
            raise ConfigError("direction c2n needs a [data.classical] block")
        z = classical_to_nonclassical(cfg.classical)
        lines.append("[data.nonclassical]")
        for key in NonClassicalData.SCALARS:
            lines.append(f"{key} = {getattr(z, key)!r}")
        for key in NonClassicalData.X1_FUNCTIONS + NonClassicalData.X2_FUNCTIONS:
            lines.append(f'{key} = "{side_csv(key, getattr(z, key))}"')
    else:
        if cfg.data_kind != "nonclassical":
            raise ConfigError("direction n2c needs a [data.nonclassical] block")
        d = nonclassical_to_classical(cfg.nonclassical)
        lines.append("[data.classical]")
        for name in ("phi1", "phi2", "psi1", "psi2"):
            fn = getattr(d, name)
            lines.append(f"{name}.v0 = {fn.v0!r}")
            lines.append(f"{name}.v1 = {fn.v1!r}")
            lines.append(f'{name}.v2 = "{side_csv(f"{name}_v2", fn.v2)}"')
    _write_text(out, "\n".join(lines) + "\n")
    return 0


def _cmd_check(args) -> int:
    cfg = load_config(args.config)
    if cfg.data_kind is None:
        raise ConfigError("check needs a [data.nonclassical] or [data.classical] block")
    if cfg.data_kind == "classical":
        rep = check_agreement(cfg.classical)
        residuals = {"r1": rep.r1, "r2": rep.r2, "r3": rep.r3, "r4": rep.r4}
    else:
        rep = check_compatibility(cfg.nonclassical)
        residuals = {"rho1": rep.rho1, "rho2": rep.rho2, "rho3": rep.rho3}
    worst = 0.0
    for name, value in residuals.items():
        print(f"{name} = {_FMT.format(value)}")
        worst = max(worst, abs(value))
    ok = worst <= args.tol
    print(f"max |residual| = {_FMT.format(worst)} ({'<=' if ok else '>'} tol {args.tol:g})")
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    cfg = load_config(args.config)
    case = manufactured_problem(_parse_expr(args.u, "--u"), cfg.coeffs, cfg.grid,
                                tol=cfg.tol, max_iter=cfg.max_iter)
    sol = solve_dirichlet(case.problem)
    lines = ["quantity,max_error,l2_error"]
    for i in range(3):
        for j in range(3):
            diff = sol.field.d[i][j].values - case.reference.d[i][j].values
            e_max = float(np.max(np.abs(diff)))
            e_l2 = lp_norm(GridFn2D(cfg.grid, diff), 2)
            lines.append(f"d{i}{j},{_FMT.format(e_max)},{_FMT.format(e_l2)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    diff = sol.field.u.values - case.reference.u.values
    print(f"max |u - reference| = {np.max(np.abs(diff)):.3e} "
          f"on {cfg.grid.g1.n}x{cfg.grid.g2.n} grid")
    return 0


def _cmd_convergence(args) -> int:
    cfg = load_config(args.config)
    try:
        ns = [int(s) for s in args.grids.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"--grids must be a comma list of integers, got {args.grids!r}") from None
    table = convergence_study(
        _parse_expr(args.u, "--u"), cfg.coeff_exprs,
        (cfg.grid.g1.length, cfg.grid.g2.length), ns, tol=cfg.tol,
    )
    _write_text(args.out, table.as_csv())
    for row in table.rows:
        order = "-" if np.isnan(row.observed_order) else f"{row.observed_order:.2f}"
        print(f"n={row.n:<5d} max={row.max_error:.3e}  l2={row.l2_error:.3e}  order={order}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppde",
        description="Solvers and data tools for the fourth-order operator "
                    "D1^2 D2^2 u + lower-order terms on a rectangle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the configured Dirichlet problem")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV path for the solution grid")
    p.add_argument("--diag", help="JSON path for diagnostics")
    p.add_argument("--field", action="store_true", help="also write all nine derivative grids")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("convert", help="convert the data block between formulations")
    p.add_argument("--config", required=True)
    p.add_argument("--direction", required=True, choices=["c2n", "n2c"])
    p.add_argument("--out", required=True, help="output config path (sibling CSVs are created)")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("check", help="agreement / compatibility residuals")
    p.add_argument("--config", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("verify", help="manufactured-solution single-grid errors")
    p.add_argument("--u", required=True, help="manufactured solution expression")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV path for the error table")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("convergence", help="manufactured-solution refinement study")
    p.add_argument("--u", required=True, help="manufactured solution expression")
    p.add_argument("--config", required=True)
    p.add_argument("--grids", required=True, help="comma list of doubling interval counts")
    p.add_argument("--out", required=True, help="CSV path for the convergence table")
    p.set_defaults(func=_cmd_convergence)
    return parser


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except ex.ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except NonConvergenceError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 4


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
