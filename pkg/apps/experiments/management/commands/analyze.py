"""
Management command to report horizon bounds and per-n stability.

Usage:
    python manage.py analyze mdp_d --n-max 60
    python manage.py analyze example1 --n-max 1
    python manage.py analyze path/to/problem.json --n-max 10 --format csv --out runs/analyze
"""
import logging

import pandas as pd

from apps.analysis.services.bounds import bound_set
from apps.analysis.services.stability import stability_reports
from apps.dp.exporters import FLOAT_FORMAT, write_frame
from apps.experiments.management.base import ExperimentCommand, validate_document
from apps.experiments.schemas import ANALYZE_REPORT_VALIDATOR
from apps.experiments.serializers import AnalyzeReportSerializer
from apps.experiments.services.fixtures import load_fixture
from core.exceptions import PreconditionError
from core.renderers import render_json
from core.utils import build_run_id

logger = logging.getLogger(__name__)


def report_frame(reports):
    """
    One row of scalar verdicts per horizon.
    """
    return pd.DataFrame(
        [
            {
                'n': report.n,
                'rho_a': report.a_spectrum.spectral_radius,
                'a_is_schur': report.a_is_schur,
                'n_is_nonsingular': report.n_is_nonsingular,
                'max_real_s': report.s_spectrum.max_real_part,
                's_is_hurwitz': report.s_is_hurwitz,
                's_symmetric_part_negdef': report.s_symmetric_part_negdef,
                'inf_norm_contraction': report.inf_norm_contraction,
                'weighted_contraction': report.weighted_contraction,
                'gamma_n_pi_norm': report.gamma_n_pi_norm,
                'alpha_star_lower': report.alpha_star_lower,
            }
            for report in reports
        ]
    )


class Command(ExperimentCommand):
    help = 'Report horizon bounds and stability diagnostics for n = 1..n_max'

    def add_arguments(self, parser):
        self.add_fixture_argument(parser)
        parser.add_argument('--n-max', type=int, default=None, help='Largest horizon (default: search cap)')
        self.add_output_arguments(parser)

    def run(self, **options):
        if options['n_max'] is not None and options['n_max'] < 1:
            raise PreconditionError(f"--n-max must be at least 1, got {options['n_max']}")

        fixture = load_fixture(options['fixture'])
        bounds = bound_set(fixture.model, n_max=options['n_max'])
        n_max = bounds.n_max

        reports = stability_reports(fixture.model, n_max)
        report = {
            'fixture': str(fixture.path),
            'fixture_sha256': fixture.sha256,
            'n_max': n_max,
            'bounds': bounds,
            'reports': reports,
        }
        body = validate_document(ANALYZE_REPORT_VALIDATOR, render_json(AnalyzeReportSerializer(report).data))
        frame = report_frame(reports)
        logger.info(f"Analyzed {fixture.path.name} for n ≤ {n_max}")

        if options['out']:
            run_id = build_run_id('analyze', fixture.path, nmax=n_max)
            directory = self.output_dir(options, run_id)
            json_path = directory / f"{run_id}.json"
            json_path.write_bytes(body)
            csv_path = write_frame(frame, directory / f"{run_id}.csv")

            manifest = self.new_manifest(options, config={'n_max': n_max})
            manifest.add_fixture(fixture.path, fixture.sha256)
            manifest.add_outputs([json_path, csv_path])
            self.finish_manifest(manifest, directory)

        if options['format'] == 'csv':
            self.emit(frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n'))
        else:
            self.emit(body)
