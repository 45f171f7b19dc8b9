"""Coefficients, boundary data in both formulations, and their converters.

The operator under study is

    (Vu)(x) = D1^2 D2^2 u + a21 D1^2 D2 u + a12 D1 D2^2 u
            + a20 D1^2 u + a02 D2^2 u
            + a11 D1 D2 u + a10 D1 u + a01 D2 u + a00 u.

Classical Dirichlet data prescribes u on the four edges through functions
phi1, psi1, phi2, psi2 (edges x1 = 0, x2 = 0, x1 = h1, x2 = h2); these must
satisfy four corner agreement equalities.  The non-classical data instead
prescribes corner values, corner first derivatives and second-derivative
edge traces, which are free of agreement constraints.  Each boundary
function is stored as the triple (value at 0, first derivative at 0,
second derivative grid), so conversion between the two formulations is an
exact repackaging; evaluating a boundary function uses the Taylor identity

    f(x) = f(0) + x f'(0) + int_0^x (x - t) f''(t) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .grid import Grid1D, Grid2D, GridFn1D, GridFn2D, taylor_remainder_integral
from .representation import DerivativeField

__all__ = [
    "COEFFICIENT_NAMES",
    "Coefficients",
    "BoundaryFn",
    "ClassicalData",
    "NonClassicalData",
    "AgreementReport",
    "CompatibilityReport",
    "eval_boundary",
    "boundary_values",
    "check_agreement",
    "classical_to_nonclassical",
    "nonclassical_to_classical",
    "check_compatibility",
    "apply_operator",
]

COEFFICIENT_NAMES = ("a21", "a12", "a20", "a02", "a11", "a10", "a01", "a00")


class Coefficients:
    """The eight variable coefficients of the operator, sampled on one grid."""

    def __init__(self, a21, a12, a20, a02, a11, a10, a01, a00):
        fns = (a21, a12, a20, a02, a11, a10, a01, a00)
        grid = fns[0].grid
        for name, fn in zip(COEFFICIENT_NAMES, fns):
            if not isinstance(fn, GridFn2D) or fn.grid != grid:
                raise ValueError(f"coefficient {name} must be a GridFn2D on the shared grid")
        (self.a21, self.a12, self.a20, self.a02,
         self.a11, self.a10, self.a01, self.a00) = fns
        self.grid = grid

    @classmethod
    def zeros(cls, grid: Grid2D) -> "Coefficients":
        return cls(*[GridFn2D.zeros(grid) for _ in COEFFICIENT_NAMES])

    @classmethod
    def from_exprs(cls, grid: Grid2D, exprs: dict) -> "Coefficients":
        """Sample coefficients from expressions; missing names default to 0."""
        unknown = set(exprs) - set(COEFFICIENT_NAMES)
        if unknown:
            raise ValueError(f"unknown coefficient names: {sorted(unknown)}")
        X1 = grid.g1.nodes[:, None]
        X2 = grid.g2.nodes[None, :]
        fns = []
        for name in COEFFICIENT_NAMES:
            e = exprs.get(name)
            if e is None:
                fns.append(GridFn2D.zeros(grid))
            else:
                if isinstance(e, str):
                    e = ex.parse(e)
                fns.append(GridFn2D(grid, ex.sample(e, X1, X2, grid.shape)))
        return cls(*fns)


class BoundaryFn:
    """One boundary function in Taylor form: value and slope at 0 plus f''."""

    def __init__(self, v0: float, v1: float, v2: GridFn1D):
        if not (math.isfinite(float(v0)) and math.isfinite(float(v1))):
            raise ValueError("boundary values v0, v1 must be finite")
        self.v0 = float(v0)
        self.v1 = float(v1)
        self.v2 = v2

    @classmethod
    def from_expr(cls, e, grid: Grid1D, var: str) -> "BoundaryFn":
        """Build the triple from a univariate expression in ``var`` exactly."""
        if isinstance(e, str):
            e = ex.parse(e)
        d1 = ex.differentiate(e, var)
        d2 = ex.differentiate(d1, var)

        def at(expr_node, x):
            if var == "x1":
                return ex.evaluate(expr_node, x, 0.0)
            return ex.evaluate(expr_node, 0.0, x)

        v2 = np.broadcast_to(np.asarray(at(d2, grid.nodes), dtype=float), grid.nodes.shape)
        return cls(float(at(e, 0.0)), float(at(d1, 0.0)), GridFn1D(grid, v2))

    @classmethod
    def from_samples(cls, grid: Grid1D, values) -> "BoundaryFn":
        """Build the triple from node samples by second-order differences."""
        f = np.asarray(values, dtype=float)
        if f.shape != (grid.n + 1,):
            raise ValueError("samples must cover every grid node")
        if grid.n < 3:
            raise ValueError("second differences need at least 3 intervals")
        h = grid.h
        v1 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        d2 = np.empty_like(f)
        d2[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / h**2
        d2[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h**2
        d2[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h**2
        return cls(f[0], v1, GridFn1D(grid, d2))


class ClassicalData:
    """Dirichlet boundary functions: phi's along x2, psi's along x1."""

    def __init__(self, phi1: BoundaryFn, phi2: BoundaryFn,
                 psi1: BoundaryFn, psi2: BoundaryFn):
        if phi1.v2.grid != phi2.v2.grid:
            raise ValueError("phi1 and phi2 must share the x2 grid")
        if psi1.v2.grid != psi2.v2.grid:
            raise ValueError("psi1 and psi2 must share the x1 grid")
        self.phi1 = phi1
        self.phi2 = phi2
        self.psi1 = psi1
        self.psi2 = psi2


class NonClassicalData:
    """Right-hand sides of the non-classical boundary conditions.

    Scalars: z00 = u(0,0), z10 = D1u(0,0), z01 = D2u(0,0),
    z00_h1 = u(h1,0), z01_h1 = D2u(h1,0), z00_h2 = u(0,h2),
    z10_h2 = D1u(0,h2).  Edge functions: z20 = D1^2u(.,0) and
    z20_h2 = D1^2u(.,h2) on the x1 grid; z02 = D2^2u(0,.) and
    z02_h1 = D2^2u(h1,.) on the x2 grid.
    """

    SCALARS = ("z00", "z10", "z01", "z00_h1", "z01_h1", "z00_h2", "z10_h2")
    X1_FUNCTIONS = ("z20", "z20_h2")
    X2_FUNCTIONS = ("z02", "z02_h1")

    def __init__(self, z00, z10, z01, z00_h1, z01_h1, z00_h2, z10_h2,
                 z20: GridFn1D, z02: GridFn1D, z20_h2: GridFn1D, z02_h1: GridFn1D):
        for name, v in zip(self.SCALARS, (z00, z10, z01, z00_h1, z01_h1, z00_h2, z10_h2)):
            if not math.isfinite(float(v)):
                raise ValueError(f"scalar {name} must be finite")
        if z20.grid != z20_h2.grid:
            raise ValueError("z20 and z20_h2 must share the x1 grid")
        if z02.grid != z02_h1.grid:
            raise ValueError("z02 and z02_h1 must share the x2 grid")
        self.z00 = float(z00)
        self.z10 = float(z10)
        self.z01 = float(z01)
        self.z00_h1 = float(z00_h1)
        self.z01_h1 = float(z01_h1)
        self.z00_h2 = float(z00_h2)
        self.z10_h2 = float(z10_h2)
        self.z20 = z20
        self.z02 = z02
        self.z20_h2 = z20_h2
        self.z02_h1 = z02_h1

    @classmethod
    def zeros(cls, grid: Grid2D) -> "NonClassicalData":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                   GridFn1D.zeros(grid.g1), GridFn1D.zeros(grid.g2),
                   GridFn1D.zeros(grid.g1), GridFn1D.zeros(grid.g2))


@dataclass(frozen=True)
class AgreementReport:
    """Signed residuals of the four corner agreement equalities."""

    r1: float  # phi1(0)  - psi1(0)
    r2: float  # phi2(h2) - psi2(h1)
    r3: float  # phi1(h2) - psi2(0)
    r4: float  # phi2(0)  - psi1(h1)

    def max_abs(self) -> float:
        return max(abs(self.r1), abs(self.r2), abs(self.r3), abs(self.r4))


@dataclass(frozen=True)
class CompatibilityReport:
    """Corner Taylor-identity residuals of non-classical data.

    rho1 checks u(h1,0) against the x2 = 0 edge data, rho2 checks u(0,h2)
    against the x1 = 0 edge data, and rho3 compares the two available
    expressions for u(h1,h2).  All three vanish whenever the data are the
    traces of a single admissible u.
    """

    rho1: float
    rho2: float
    rho3: float

    def max_abs(self) -> float:
        return max(abs(self.rho1), abs(self.rho2), abs(self.rho3))


def boundary_values(f: BoundaryFn) -> GridFn1D:
    """Evaluate the Taylor form v0 + x v1 + int_0^x (x - t) v2(t) dt."""
    x = f.v2.grid.nodes
    rem = taylor_remainder_integral(f.v2).values
    return GridFn1D(f.v2.grid, f.v0 + x * f.v1 + rem)


def eval_boundary(f: BoundaryFn, at: int) -> float:
    """Value of the boundary function at grid node index ``at``."""
    n = f.v2.grid.n
    if not 0 <= at <= n:
        raise IndexError(f"node index {at} outside 0..{n}")
    return float(boundary_values(f).values[at])


def check_agreement(d: ClassicalData) -> AgreementReport:
    """Evaluate the four corner agreement residuals of classical data."""
    n1 = d.psi1.v2.grid.n
    n2 = d.phi1.v2.grid.n
    return AgreementReport(
        r1=eval_boundary(d.phi1, 0) - eval_boundary(d.psi1, 0),
        r2=eval_boundary(d.phi2, n2) - eval_boundary(d.psi2, n1),
        r3=eval_boundary(d.phi1, n2) - eval_boundary(d.psi2, 0),
        r4=eval_boundary(d.phi2, 0) - eval_boundary(d.psi1, n1),
    )


def classical_to_nonclassical(d: ClassicalData) -> NonClassicalData:
    """Read the non-classical right-hand sides off the boundary triples.

    Exact (no quadrature).  The shared corner value is read from phi1;
    any phi1(0) != psi1(0) mismatch is reported by check_agreement, never
    silently averaged.
    """
    return NonClassicalData(
        z00=d.phi1.v0,
        z10=d.psi1.v1,
        z01=d.phi1.v1,
        z00_h1=d.phi2.v0,
        z01_h1=d.phi2.v1,
        z00_h2=d.psi2.v0,
        z10_h2=d.psi2.v1,
        z20=d.psi1.v2,
        z02=d.phi1.v2,
        z20_h2=d.psi2.v2,
        z02_h1=d.phi2.v2,
    )


def nonclassical_to_classical(z: NonClassicalData) -> ClassicalData:
    """Repackage non-classical data as boundary triples (exact inverse)."""
    return ClassicalData(
        phi1=BoundaryFn(z.z00, z.z01, z.z02),
        phi2=BoundaryFn(z.z00_h1, z.z01_h1, z.z02_h1),
        psi1=BoundaryFn(z.z00, z.z10, z.z20),
        psi2=BoundaryFn(z.z00_h2, z.z10_h2, z.z20_h2),
    )


def check_compatibility(z: NonClassicalData) -> CompatibilityReport:
    """Corner Taylor residuals of non-classical data.

    rho1 = z00_h1 - [z00 + h1 z10 + int_0^{h1} (h1 - t) z20(t) dt],
    rho2 = z00_h2 - [z00 + h2 z01 + int_0^{h2} (h2 - t) z02(t) dt],
    rho3 = [z00_h1 + h2 z01_h1 + int (h2 - t) z02_h1]
         - [z00_h2 + h1 z10_h2 + int (h1 - t) z20_h2].
    """
    d = nonclassical_to_classical(z)
    n1 = z.z20.grid.n
    n2 = z.z02.grid.n
    return CompatibilityReport(
        rho1=z.z00_h1 - eval_boundary(d.psi1, n1),
        rho2=z.z00_h2 - eval_boundary(d.phi1, n2),
        rho3=eval_boundary(d.phi2, n2) - eval_boundary(d.psi2, n1),
    )


def apply_operator(field: DerivativeField, a: Coefficients) -> GridFn2D:
    """Pointwise value of (Vu) at every node, from the derivative grids."""
    if a.grid != field.grid:
        raise ValueError("coefficients and field live on different grids")
    d = field.d
    values = (
        d[2][2].values
        + a.a21.values * d[2][1].values
        + a.a12.values * d[1][2].values
        + a.a20.values * d[2][0].values
        + a.a02.values * d[0][2].values
        + a.a11.values * d[1][1].values
        + a.a10.values * d[1][0].values
        + a.a01.values * d[0][1].values
        + a.a00.values * d[0][0].values
    )
    return GridFn2D(field.grid, values)
