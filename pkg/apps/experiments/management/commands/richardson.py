"""
Management command to run Richardson iteration on the n-step projected equation.

Usage:
    python manage.py richardson mdp_d --n 3 --alpha auto
    python manage.py richardson mdp_d --n 3 --alpha 5.0 --iters 20000
"""
import logging

from apps.analysis.services.matrices import td_matrix_s
from apps.analysis.services.stability import safe_alpha
from apps.dp.services.iterations import richardson, spectral_verdict_richardson
from apps.experiments.management.base import ExperimentCommand, parse_alpha, parse_float_list
from apps.experiments.services.fixtures import load_fixture
from core.utils import build_run_id

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Run Richardson iteration θ ← θ + α(b − Nθ) and write its trace'

    def add_arguments(self, parser):
        self.add_fixture_argument(parser)
        self.add_horizon_argument(parser)
        parser.add_argument(
            '--alpha',
            default='auto',
            help="Step size, or 'auto' for the safety-scaled Lyapunov bound",
        )
        self.add_iteration_arguments(parser)
        self.add_output_arguments(parser, formats=('json', 'csv'))

    def run(self, **options):
        fixture = load_fixture(options['fixture'])
        theta0 = parse_float_list(options['theta0'], '--theta0')
        n = options['n']

        alpha = parse_alpha(options['alpha'])
        if alpha is None:
            alpha = safe_alpha(td_matrix_s(fixture.model, n).matrix)
            logger.info(f"Automatic step size α={alpha:.6g} at n={n}")

        verdict = spectral_verdict_richardson(fixture.model, n, alpha)
        logger.info(f"Richardson on {fixture.path.name}, n={n}, α={alpha:.6g}, ρ(I−αN)={verdict.spectral_radius:.6g}")

        trace = richardson(fixture.model, n, alpha, theta0=theta0, max_iters=options['iters'], tol=options['tol'])
        if trace.diverged:
            logger.warning(f"Richardson diverged on {fixture.path.name} at n={n} with α={alpha:.6g}")

        config = {
            'n': n,
            'alpha': alpha,
            'spectral_radius': verdict.spectral_radius,
            'max_iters': options['iters'],
            'tol': trace.tolerance,
            'theta0': theta0,
        }
        run_id = build_run_id('richardson', fixture.path, n=n)
        self.write_single_trace(options, fixture, trace, run_id, config)
        self.check_expectation(options, trace.converged, f"Richardson at n={n}")
