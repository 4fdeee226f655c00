"""
Management command to run the acceptance suites.

Usage:
    python manage.py repro appendix_d
    python manage.py repro all --out runs/repro
    python manage.py repro appendix_d --stochastic --seeds 0-19 --iters 1000000

Exit code 0 when every check passes, 1 when any check fails.

The default suites take under a minute. In eager mode (the default) the
--stochastic seeds run one after another, about 20 to 25 minutes for the
full run; see docs/REPRODUCTION.md for running them on Celery workers.
"""
import logging

import pandas as pd
from celery import group
from django.conf import settings

from apps.dp.exporters import write_frame
from apps.experiments.management.base import ExperimentCommand
from apps.experiments.serializers import AcceptanceCheckSerializer
from apps.experiments.services.acceptance import (
    DEFAULT_SUITES,
    SUITE_FIXTURES,
    appendix_d_stochastic_checks,
)
from apps.experiments.services.fixtures import load_fixture
from apps.experiments.services.manifest import AcceptanceCheck
from apps.experiments.tasks import run_acceptance_suite
from apps.td.types import TdAlgorithm
from core.exceptions import ExpectationFailed, PreconditionError
from core.renderers import render_json
from core.utils import parse_seed_list

logger = logging.getLogger(__name__)

CHOICES = (*DEFAULT_SUITES, 'all')


def checks_frame(checks):
    return pd.DataFrame(
        [
            {
                'suite': check.suite,
                'name': check.name,
                'expected': str(check.expected),
                'observed': str(check.observed),
                'passed': check.passed,
            }
            for check in checks
        ],
        columns=['suite', 'name', 'expected', 'observed', 'passed'],
    )


class Command(ExperimentCommand):
    help = 'Reproduce the published numbers and report expected versus observed'

    def add_arguments(self, parser):
        parser.add_argument('which', choices=CHOICES, help='Suite to run')
        parser.add_argument(
            '--stochastic',
            action='store_true',
            help='Add the clipped-TD directional check (appendix_d and all only)',
        )
        parser.add_argument('--seeds', default=None, help="Seeds for the stochastic check, e.g. '0-19'")
        parser.add_argument('--iters', type=int, default=None, help='TD updates per seed for the stochastic check')
        parser.add_argument('--alg', choices=TdAlgorithm.values, default=TdAlgorithm.IID, help='Sampling scheme')
        self.add_output_arguments(parser, formats=('table', 'json', 'csv'))

    def run(self, **options):
        which = options['which']
        if options['stochastic'] and which not in ('appendix_d', 'all'):
            raise PreconditionError(f"--stochastic applies to appendix_d only, not {which}")

        suites = DEFAULT_SUITES if which == 'all' else (which,)
        manifest = self.new_manifest(options, tolerances_version=settings.REPRO_TOLERANCES['VERSION'])

        results = group(run_acceptance_suite.s(name) for name in suites)().get()
        checks = []
        for result in results:
            for fixture in result['fixtures']:
                manifest.add_fixture(fixture['path'], fixture['sha256'])
            checks.extend(AcceptanceCheck(**check) for check in result['checks'])

        if options['stochastic']:
            seeds = parse_seed_list(options['seeds']) if options['seeds'] is not None else None
            checks.extend(appendix_d_stochastic_checks(seeds=seeds, iters=options['iters'], algorithm=options['alg']))
            fixture = load_fixture(SUITE_FIXTURES['appendix_d_stochastic'])
            manifest.add_fixture(fixture.path, fixture.sha256)
            manifest.seeds = seeds or list(range(settings.REPRO_TOLERANCES['appendix_d_stochastic']['seeds']))
            manifest.config = {'iters': options['iters'], 'alg': options['alg']}

        manifest.checks = checks
        frame = checks_frame(checks)

        if options['out']:
            directory = self.output_dir(options, f"repro-{which}")
            csv_path = write_frame(frame, directory / f"repro-{which}.csv")
            manifest.add_outputs([csv_path])
            self.finish_manifest(manifest, directory)

        if options['format'] == 'json':
            self.emit(render_json(AcceptanceCheckSerializer(checks, many=True).data))
        elif options['format'] == 'csv':
            self.emit(frame.to_csv(index=False, lineterminator='\n'))
        else:
            self.emit(frame.to_string(index=False) + '\n')

        failed = [f"{check.suite}.{check.name}" for check in checks if not check.passed]
        logger.info(f"repro {which}: {len(checks) - len(failed)} of {len(checks)} checks passed")
        if failed:
            raise ExpectationFailed(
                f"{len(failed)} of {len(checks)} checks failed: {', '.join(failed)}",
                details={'failed': failed},
            )
