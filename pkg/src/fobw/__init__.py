"""Fractional-order Bernstein wavelet collocation for variable-order
Duffing-Van der Pol oscillators.

The pieces compose bottom-up: scalar special functions and the Chebyshev
grid (`special`), the wavelet basis and its monomial-series form (`basis`),
variable-order fractional operators acting on that form (`fracops`), the
collocation solve (`solver`), RK4 references and error metrics
(`reference`), and config-driven experiment reproduction (`experiments`,
`cli`).

>>> from fobw import OscillatorProblem, OrderFunction, WaveletBasisSpec, solve_problem
>>> problem = OscillatorProblem(mu=0.1, a=0.5, b=0.5, f=0.5, omega=0.79,
...                             forcing="forced", alpha=OrderFunction.constant(2.0),
...                             init_value=1.0)
>>> approx = solve_problem(problem, WaveletBasisSpec(k=1, M=5, gamma=1.0))
>>> round(approx.value(0.5), 4)
0.9392
"""

from .basis import (
    BasisIndex,
    FracMonomialSeries,
    WaveletBasisSpec,
    bernstein_frac,
    fobw_eval,
    fobw_vector,
    to_monomial_series,
    weight_eval,
)
from .expr import Expression, ExpressionError, parse_expression
from .experiments import (
    ExperimentConfig,
    emit_plot_data,
    emit_table,
    preset_config,
    run_experiment,
)
from .fracops import (
    AccuracyError,
    OrderFunction,
    caputo_on_approximant,
    basis_images,
    reconstruct,
    rl_integral_quadrature,
    rl_integral_series,
    weighted_inner_product,
)
from .reference import (
    BlowupError,
    ErrorTable,
    ReferenceTrajectory,
    absolute_error,
    max_absolute_error,
    residual_sample,
    rk4_integrate,
)
from .solver import (
    CollocationSystem,
    OscillatorProblem,
    SolutionApproximant,
    SolveReport,
    SolverError,
    assemble,
    newton_solve,
    residual_vector,
    solve_problem,
)
from .special import chebyshev_grid, gamma, gen_binomial

__version__ = "0.1.0"
