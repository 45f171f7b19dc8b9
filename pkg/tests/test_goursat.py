import math

import numpy as np
import pytest

from ppde.expr import parse
from ppde.goursat import GoursatProblem, NonConvergenceError, solve_goursat
from ppde.grid import Grid2D, GridFn2D, make_grid
from ppde.problem import Coefficients, apply_operator
from ppde.representation import TraceSet, extract_traces


def unit_square(n):
    return Grid2D(make_grid(1.0, n), make_grid(1.0, n))


def constant_rhs(grid, v):
    return GridFn2D(grid, v * np.ones(grid.shape))


class TestSolveGoursat:
    def test_no_coefficients_one_sweep(self):
        g = unit_square(8)
        rng = np.random.default_rng(0)
        rhs = GridFn2D(g, rng.normal(size=g.shape))
        sol = solve_goursat(GoursatProblem(TraceSet.zeros(g), Coefficients.zeros(g), rhs))
        np.testing.assert_array_equal(sol.w.values, rhs.values)
        np.testing.assert_array_equal(sol.field.d[2][2].values, sol.w.values)
        assert sol.iterations == 1
        assert sol.final_change == 0.0

    def test_quartic_fixed_point(self):
        # D1^2 D2^2 u + u = 4 + x1^2 x2^2 with zero traces: u = x1^2 x2^2
        g = unit_square(16)
        X1 = g.g1.nodes[:, None]
        X2 = g.g2.nodes[None, :]
        coeffs = Coefficients.from_exprs(g, {"a00": "1"})
        rhs = GridFn2D(g, 4 + X1**2 * X2**2)
        sol = solve_goursat(GoursatProblem(TraceSet.zeros(g), coeffs, rhs))
        np.testing.assert_allclose(sol.w.values, 4.0, atol=1e-11)
        np.testing.assert_allclose(sol.field.u.values, X1**2 * X2**2, atol=1e-11)

    def test_series_oracle(self):
        # independent truncated-series solution of D1^2D2^2 u + u = 1
        g = unit_square(64)
        coeffs = Coefficients.from_exprs(g, {"a00": "1"})
        sol = solve_goursat(GoursatProblem(TraceSet.zeros(g), coeffs, constant_rhs(g, 1.0)))
        series = sum((-1) ** (k + 1) / math.factorial(2 * k) ** 2 for k in range(1, 9))
        assert sol.field.u.values[-1, -1] == pytest.approx(series, abs=5e-4)
        assert sol.w.values[-1, -1] == pytest.approx(1 - series, abs=5e-4)

    def test_residual_contract(self):
        g = unit_square(12)
        coeffs = Coefficients.from_exprs(
            g, {"a00": "1", "a21": "x2", "a12": "x1", "a11": "x1*x2", "a20": "0.5"}
        )
        rng = np.random.default_rng(4)
        rhs = GridFn2D(g, rng.normal(size=g.shape))
        tol = 1e-12
        sol = solve_goursat(GoursatProblem(TraceSet.zeros(g), coeffs, rhs), tol=tol)
        assert sol.residual <= 100 * tol
        # residual is recomputable from the returned field
        recomputed = np.max(np.abs(apply_operator(sol.field, coeffs).values - rhs.values))
        assert recomputed == sol.residual

    def test_linearity_of_solution_map(self):
        g = unit_square(10)
        coeffs = Coefficients.from_exprs(g, {"a00": "1", "a01": "x1"})
        rng = np.random.default_rng(8)
        tol = 1e-12

        def traces(seed_rng):
            from ppde.grid import GridFn1D
            return TraceSet(*seed_rng.normal(size=4),
                            GridFn1D(g.g1, seed_rng.normal(size=11)),
                            GridFn1D(g.g1, seed_rng.normal(size=11)),
                            GridFn1D(g.g2, seed_rng.normal(size=11)),
                            GridFn1D(g.g2, seed_rng.normal(size=11)))

        ta, tb = traces(rng), traces(rng)
        ra = GridFn2D(g, rng.normal(size=g.shape))
        rb = GridFn2D(g, rng.normal(size=g.shape))
        wa = solve_goursat(GoursatProblem(ta, coeffs, ra), tol=tol).w.values
        wb = solve_goursat(GoursatProblem(tb, coeffs, rb), tol=tol).w.values

        from ppde.grid import GridFn1D
        t_sum = TraceSet(ta.u00 + tb.u00, ta.u10 + tb.u10, ta.u01 + tb.u01, ta.c + tb.c,
                         GridFn1D(g.g1, ta.p.values + tb.p.values),
                         GridFn1D(g.g1, ta.g1.values + tb.g1.values),
                         GridFn1D(g.g2, ta.q.values + tb.q.values),
                         GridFn1D(g.g2, ta.g2.values + tb.g2.values))
        r_sum = GridFn2D(g, ra.values + rb.values)
        w_sum = solve_goursat(GoursatProblem(t_sum, coeffs, r_sum), tol=tol).w.values
        assert np.max(np.abs(w_sum - (wa + wb))) <= 10 * tol

    def test_volterra_causality(self):
        g = unit_square(12)
        coeffs = Coefficients.from_exprs(g, {"a00": "1", "a21": "0.5"})
        rng = np.random.default_rng(21)
        base = rng.normal(size=g.shape)
        rhs_a = GridFn2D(g, base)
        i0, j0 = 7, 5
        perturbed = base.copy()
        perturbed[i0:, j0:] += rng.normal(size=perturbed[i0:, j0:].shape)
        rhs_b = GridFn2D(g, perturbed)
        wa = solve_goursat(GoursatProblem(TraceSet.zeros(g), coeffs, rhs_a)).w.values
        wb = solve_goursat(GoursatProblem(TraceSet.zeros(g), coeffs, rhs_b)).w.values
        unchanged = np.zeros(g.shape, dtype=bool)
        unchanged[:i0, :] = True
        unchanged[:, :j0] = True
        np.testing.assert_array_equal(wa[unchanged], wb[unchanged])
        assert np.max(np.abs(wa[i0:, j0:] - wb[i0:, j0:])) > 1e-3  # something did change

    def test_grid_convergence(self):
        errors = []
        for n in (16, 32, 64):
            g = unit_square(n)
            coeffs = Coefficients.from_exprs(g, {"a00": "1", "a21": "x2"})
            traces, _, reference = extract_traces(parse("sin(x1)*sin(x2)"), g)
            rhs = apply_operator(reference, coeffs)
            sol = solve_goursat(GoursatProblem(traces, coeffs, rhs))
            errors.append(np.max(np.abs(sol.field.u.values - reference.u.values)))
        orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all(orders >= 1.8)

    def test_non_convergence_reported(self):
        g = unit_square(8)
        coeffs = Coefficients.from_exprs(g, {"a00": "1e9"})
        with pytest.raises(NonConvergenceError) as exc:
            solve_goursat(GoursatProblem(TraceSet.zeros(g), coeffs, constant_rhs(g, 1.0)),
                          max_iter=50)
        assert exc.value.iterations <= 50

    @pytest.mark.parametrize("tol,max_iter", [(0.0, 10), (-1e-3, 10), (1e-12, 0)])
    def test_invalid_arguments(self, tol, max_iter):
        g = unit_square(4)
        gp = GoursatProblem(TraceSet.zeros(g), Coefficients.zeros(g), constant_rhs(g, 0.0))
        with pytest.raises(ValueError):
            solve_goursat(gp, tol=tol, max_iter=max_iter)

    def test_grid_mismatch(self):
        g, other = unit_square(4), unit_square(5)
        with pytest.raises(ValueError):
            GoursatProblem(TraceSet.zeros(g), Coefficients.zeros(other), constant_rhs(g, 0.0))
