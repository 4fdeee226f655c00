"""
Management command to run stochastic n-step TD.

Usage:
    python manage.py td mdp_d --alg iid --n 3 --clip 9 --seed 7 --iters 1000000
    python manage.py td mdp_d --alg markov --n 2 --clip 9 --seeds 1-20 --out runs/td-n2

With --seeds, one Celery task runs per seed; the manifest and the combined
(seed, k, err_inf) CSV are written once every seed has finished.
"""
import logging
from pathlib import Path

from celery import group

from apps.dp.exporters import combined_error_frame, write_frame
from apps.experiments.management.base import ExperimentCommand, parse_float_list, validate_document
from apps.experiments.schemas import TRACE_SUMMARY_VALIDATOR
from apps.experiments.services.fixtures import load_fixture
from apps.td.services.sweeps import SweepResult
from apps.td.tasks import run_td_seed
from apps.td.types import TdAlgorithm, TdRunConfig
from core.renderers import render_json
from core.utils import build_run_id, parse_seed, parse_seed_list

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Run n-step TD with importance sampling and write per-seed traces'

    def add_arguments(self, parser):
        self.add_fixture_argument(parser)
        parser.add_argument('--alg', choices=TdAlgorithm.values, default=TdAlgorithm.IID, help='Sampling scheme')
        self.add_horizon_argument(parser)
        parser.add_argument('--seed', default=None, help='Seed (unsigned 64-bit)')
        parser.add_argument('--seeds', default=None, help="Several seeds, e.g. '1,2,3' or '1-20'")
        parser.add_argument('--step-a', type=float, default=None, help='Schedule numerator a in a/(k+b+1)')
        parser.add_argument('--step-b', type=float, default=None, help='Schedule offset b in a/(k+b+1)')
        parser.add_argument('--clip', type=float, default=None, help='Cap on the importance ratio')
        parser.add_argument('--record-every', type=int, default=None, help='Trace thinning interval')
        self.add_iteration_arguments(parser)
        self.add_output_arguments(parser, formats=('json', 'csv'))

    def seeds(self, options):
        if options['seeds'] is not None:
            return parse_seed_list(options['seeds'])
        if options['seed'] is not None:
            return [parse_seed(options['seed'])]
        return [None]

    def run(self, **options):
        fixture = load_fixture(options['fixture'])
        config = TdRunConfig.from_settings(
            options['alg'],
            options['n'],
            step_a=options['step_a'],
            step_b=options['step_b'],
            clip=options['clip'],
            max_iters=options['iters'],
            record_every=options['record_every'],
            tolerance=options['tol'],
            theta0=parse_float_list(options['theta0'], '--theta0'),
        )
        seeds = [config.seed if seed is None else seed for seed in self.seeds(options)]
        base_id = build_run_id('td', fixture.path, alg=config.algorithm, n=config.n)
        directory = self.output_dir(options, base_id)

        logger.info(
            f"TD {config.algorithm} on {fixture.path.name}: n={config.n} "
            f"{config.schedule.schedule_id} clip={config.clip} seeds={seeds}"
        )
        summaries = group(
            run_td_seed.s(
                str(fixture.path),
                config.to_dict(),
                seed,
                out_dir=str(directory),
                run_id=f"{base_id}-seed{seed}",
            )
            for seed in seeds
        )().get()

        csv_paths = {}
        manifest = self.new_manifest(options, seeds=seeds, config=config.to_dict())
        manifest.add_fixture(fixture.path, fixture.sha256)
        for seed, summary in zip(seeds, summaries):
            csv_path, json_path = summary['outputs']
            validate_document(TRACE_SUMMARY_VALIDATOR, Path(json_path).read_bytes())
            csv_paths[seed] = csv_path
            manifest.add_outputs(summary['outputs'])
            if summary['diverged']:
                logger.warning(f"Seed {seed} hit the overflow guard after {summary['iterations']} updates")

        combined_path = csv_paths[seeds[0]]
        if len(seeds) > 1:
            combined_path = write_frame(combined_error_frame(csv_paths), directory / f"{base_id}-errors.csv")
            manifest.add_outputs([combined_path])
        self.finish_manifest(manifest, directory)

        result = SweepResult.from_summaries(summaries)
        logger.info(
            f"TD finished: median ‖θ_K − θ*ⁿ‖∞ {result.median_final_error:.4g}, "
            f"median ‖θ_K‖∞ {result.median_final_norm:.4g}"
        )

        if options['format'] == 'csv':
            self.emit(Path(combined_path).read_bytes())
        elif len(seeds) == 1:
            self.emit(Path(summaries[0]['outputs'][1]).read_bytes())
        else:
            self.emit(render_json({'runs': summaries}))

        self.check_expectation(
            options,
            all(summary['converged'] for summary in summaries),
            f"TD {config.algorithm} at n={config.n}",
        )
