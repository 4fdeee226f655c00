"""
Management command to run n-step projected value iteration.

Usage:
    python manage.py pvi mdp_d --n 4
    python manage.py pvi mdp_d --n 1 --iters 500
    python manage.py pvi mdp_d --n 3 --expect-converge --out runs/pvi-n3
"""
import logging

from apps.dp.services.iterations import n_pvi
from apps.experiments.management.base import ExperimentCommand, parse_float_list
from apps.experiments.services.fixtures import load_fixture
from core.utils import build_run_id

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Run n-step projected value iteration and write its trace'

    def add_arguments(self, parser):
        self.add_fixture_argument(parser)
        self.add_horizon_argument(parser)
        self.add_iteration_arguments(parser)
        self.add_output_arguments(parser, formats=('json', 'csv'))

    def run(self, **options):
        fixture = load_fixture(options['fixture'])
        theta0 = parse_float_list(options['theta0'], '--theta0')
        n = options['n']

        logger.info(f"n-PVI on {fixture.path.name}, n={n}")
        trace = n_pvi(fixture.model, n, theta0=theta0, max_iters=options['iters'], tol=options['tol'])
        if trace.diverged:
            logger.warning(f"n-PVI diverged on {fixture.path.name} at n={n} after {trace.iterations} iterations")

        config = {'n': n, 'max_iters': options['iters'], 'tol': trace.tolerance, 'theta0': theta0}
        run_id = build_run_id('pvi', fixture.path, n=n)
        self.write_single_trace(options, fixture, trace, run_id, config)
        self.check_expectation(options, trace.converged, f"n-PVI at n={n}")
