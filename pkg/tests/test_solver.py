import math
from dataclasses import replace

import numpy as np
import pytest

from fobw.basis import WaveletBasisSpec
from fobw.fracops import OrderFunction
from fobw.reference import residual_sample, rk4_integrate, absolute_error
from fobw.solver import (
    OscillatorProblem,
    SolverError,
    assemble,
    newton_solve,
    residual_vector,
    solve_problem,
)

ALPHA2 = OrderFunction.constant(2.0)
TABLE_POINTS = (0.1, 0.3, 0.5, 0.7, 0.9)

SINGLE_WELL = dict(mu=0.1, a=0.5, b=0.5, f=0.5, omega=0.79, forcing="forced", init_value=1.0)
DOUBLE_WELL = dict(mu=0.1, a=-0.5, b=0.5, f=0.5, omega=0.79, forcing="forced", init_value=1.0)
DOUBLE_HUMP = dict(mu=0.1, a=0.5, b=-0.5, f=0.5, omega=0.79, forcing="forced", init_value=1.0)


def manufactured_cos_problem():
    # y'' + y = 0, y(0) = 1, y'(0) = 0  ->  cos t
    return OscillatorProblem(mu=0.0, a=1.0, b=0.0, alpha=ALPHA2, init_value=1.0)


class TestAssemble:
    def test_shapes(self):
        system = assemble(manufactured_cos_problem(), WaveletBasisSpec(1, 3, 1.0))
        assert system.grid.shape == (4,)
        for mat in (system.psi, system.i1, system.i2, system.caputo_images):
            assert mat.shape == (4, 4)

    def test_integer_order_uses_basis_rows(self):
        system = assemble(manufactured_cos_problem(), WaveletBasisSpec(1, 3, 1.0))
        assert np.array_equal(system.caputo_images, system.psi)

    def test_variable_order_rows_increase(self):
        alpha = OrderFunction.from_callable(lambda t: 1.0 + math.sin(t), "1 + sin(t)")
        problem = OscillatorProblem(alpha=alpha, **SINGLE_WELL)
        system = assemble(problem, WaveletBasisSpec(1, 3, 1.0))
        assert np.all(np.diff(system.alphas) > 0)

    def test_single_point_basis_warns(self):
        with pytest.warns(UserWarning):
            assemble(manufactured_cos_problem(), WaveletBasisSpec(1, 0, 1.0))


class TestResidualVector:
    def test_trivial_constant_solution(self):
        problem = OscillatorProblem(mu=0.0, a=0.0, b=0.0, alpha=ALPHA2, init_value=1.0)
        system = assemble(problem, WaveletBasisSpec(1, 3, 1.0))
        assert np.all(residual_vector(system, np.zeros(4)) == 0.0)

    def test_cubic_stiffness_rows(self):
        problem = OscillatorProblem(mu=0.0, a=0.5, b=0.5, alpha=ALPHA2, init_value=1.0)
        system = assemble(problem, WaveletBasisSpec(1, 3, 1.0))
        assert np.allclose(residual_vector(system, np.zeros(4)), 1.0, rtol=0, atol=1e-15)

    def test_manufactured_rows_after_solve(self):
        system = assemble(manufactured_cos_problem(), WaveletBasisSpec(1, 5, 1.0))
        report = newton_solve(system)
        assert report.converged
        assert np.abs(residual_vector(system, report.U)).max() <= 1e-10

    def test_wrong_length_rejected(self):
        system = assemble(manufactured_cos_problem(), WaveletBasisSpec(1, 3, 1.0))
        with pytest.raises(ValueError):
            residual_vector(system, np.zeros(5))


class TestNewton:
    def test_trivial_converges_immediately(self):
        problem = OscillatorProblem(mu=0.0, a=0.0, b=0.0, alpha=ALPHA2, init_value=1.0)
        system = assemble(problem, WaveletBasisSpec(1, 3, 1.0))
        report = newton_solve(system)
        assert report.converged
        assert report.iterations <= 1
        assert np.all(report.U == 0.0)

    def test_report_on_iteration_budget(self):
        problem = OscillatorProblem(alpha=ALPHA2, **SINGLE_WELL)
        system = assemble(problem, WaveletBasisSpec(1, 5, 1.0))
        report = newton_solve(system, max_iter=0)
        assert not report.converged
        assert report.final_residual_norm > 1e-12
        with pytest.raises(SolverError):
            solve_problem(problem, WaveletBasisSpec(1, 5, 1.0), max_iter=0)

    def test_single_well_alpha2(self):
        problem = OscillatorProblem(alpha=ALPHA2, **SINGLE_WELL)
        approx = solve_problem(problem, WaveletBasisSpec(1, 5, 1.0))
        assert approx.report.converged
        reference = rk4_integrate(problem, 1e-4)
        assert absolute_error(approx, reference, 0.1) <= 1e-6

    def test_fractional_order_residual_magnitude(self):
        problem = OscillatorProblem(alpha=OrderFunction.constant(1.5), **SINGLE_WELL)
        approx = solve_problem(problem, WaveletBasisSpec(1, 5, 0.2))
        assert residual_sample(approx, problem, 0.5) <= 7.9e-4

    def test_permutation_invariance(self):
        problem = OscillatorProblem(alpha=ALPHA2, **SINGLE_WELL)
        system = assemble(problem, WaveletBasisSpec(1, 5, 1.0))
        base = newton_solve(system).U
        rng = np.random.default_rng(1)
        perm = rng.permutation(6)
        shuffled = replace(
            system,
            grid=system.grid[perm],
            alphas=system.alphas[perm],
            psi=system.psi[perm],
            i1=system.i1[perm],
            i2=system.i2[perm],
            caputo_images=system.caputo_images[perm],
            phi=system.phi[perm],
        )
        assert np.abs(newton_solve(shuffled).U - base).max() <= 1e-12


class TestSolveProblem:
    def test_constant_solution(self):
        problem = OscillatorProblem(mu=0.0, a=0.0, b=0.0, alpha=ALPHA2, init_value=1.0)
        approx = solve_problem(problem, WaveletBasisSpec(1, 3, 1.0))
        for t in np.linspace(0.0, 1.0, 11):
            assert approx.value(t) == pytest.approx(1.0, abs=1e-14)

    def test_manufactured_cosine(self):
        approx = solve_problem(manufactured_cos_problem(), WaveletBasisSpec(1, 5, 1.0))
        grid = np.linspace(0.0, 1.0, 101)
        assert np.abs(approx.value(grid) - np.cos(grid)).max() <= 1e-8

    def test_initial_conditions_exact(self):
        problem = OscillatorProblem(alpha=ALPHA2, **DOUBLE_WELL)
        approx = solve_problem(problem, WaveletBasisSpec(1, 5, 1.0))
        assert abs(approx.value(0.0) - 1.0) <= 1e-14
        assert abs(approx.derivative(0.0)) <= 1e-14

    def test_example2_magnitude(self):
        problem = OscillatorProblem(
            mu=0.1, a=1.0, b=0.01, alpha=ALPHA2, init_value=2.0
        )
        approx = solve_problem(problem, WaveletBasisSpec(1, 5, 1.0))
        reference = rk4_integrate(problem, 1e-4)
        assert absolute_error(approx, reference, 0.5) <= 5e-4

    def test_two_cell_basis_integer_order(self):
        # k = 2 goes through the piecewise quadrature route for every image
        approx = solve_problem(manufactured_cos_problem(), WaveletBasisSpec(2, 2, 1.0))
        grid = np.linspace(0.0, 1.0, 101)
        assert np.abs(approx.value(grid) - np.cos(grid)).max() <= 1e-4

    def test_two_cell_basis_fractional_order(self):
        problem = OscillatorProblem(alpha=OrderFunction.constant(1.5), **SINGLE_WELL)
        approx = solve_problem(problem, WaveletBasisSpec(2, 2, 1.0))
        assert approx.report.converged
        # converged at the nodes; sampled points between nodes stay bounded
        assert residual_sample(approx, problem, 0.9) <= 1.0


class TestRefinementMonotonicity:
    # mirrors the three physically distinct stiffness regimes, gamma = 0.2
    @pytest.mark.parametrize("well", [SINGLE_WELL, DOUBLE_WELL, DOUBLE_HUMP])
    @pytest.mark.parametrize("alpha", [1.2, 1.4, 1.6, 1.8])
    def test_coarse_to_fine(self, well, alpha):
        problem = OscillatorProblem(alpha=OrderFunction.constant(alpha), **well)
        maxima = {}
        for M in (3, 5):
            approx = solve_problem(problem, WaveletBasisSpec(1, M, 0.2))
            maxima[M] = max(residual_sample(approx, problem, t) for t in TABLE_POINTS)
        assert maxima[5] <= maxima[3]


class TestConcurrency:
    def test_distinct_problems_solve_in_parallel(self):
        # no shared mutable state: concurrent solves must equal serial ones
        from concurrent.futures import ThreadPoolExecutor

        problems = [
            OscillatorProblem(alpha=OrderFunction.constant(a), **well)
            for a in (1.3, 1.7, 2.0)
            for well in (SINGLE_WELL, DOUBLE_WELL)
        ]
        spec = WaveletBasisSpec(1, 4, 0.5)
        serial = [solve_problem(p, spec).coefficients for p in problems]
        with ThreadPoolExecutor(max_workers=4) as pool:
            parallel = list(pool.map(lambda p: solve_problem(p, spec).coefficients, problems))
        for a, b in zip(serial, parallel):
            assert np.array_equal(a, b)


class TestProblemValidation:
    def test_forced_needs_finite_parameters(self):
        with pytest.raises(ValueError):
            OscillatorProblem(
                mu=0.1, a=0.5, b=0.5, f=math.inf, omega=0.79,
                forcing="forced", alpha=ALPHA2, init_value=1.0,
            )

    def test_unknown_forcing_string(self):
        with pytest.raises(ValueError):
            OscillatorProblem(mu=0.1, a=0.5, b=0.5, forcing="driven", alpha=ALPHA2)

    def test_forcing_evaluation(self):
        problem = OscillatorProblem(alpha=ALPHA2, **SINGLE_WELL)
        assert problem.forcing_at(0.0) == pytest.approx(0.5)
        free = OscillatorProblem(mu=0.1, a=1.0, b=0.01, alpha=ALPHA2, init_value=2.0)
        assert free.forcing_at(0.7) == 0.0
