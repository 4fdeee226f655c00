"""
Experiment Command Base
-----------------------
Shared flags, error mapping and output handling for the experiment commands.

Every command implements run(**options). Domain errors are mapped by
core.exceptions.command_exception_handler and re-raised as CommandError
with the matching return code, so `manage.py` exits 0, 1 or 2.
"""
import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.dp.exporters import write_trace
from apps.experiments.schemas import MANIFEST_VALIDATOR, TRACE_SUMMARY_VALIDATOR
from apps.experiments.services.manifest import RunManifest, RunTimer, write_manifest
from core.exceptions import ExpectationFailed, InvariantViolation, PreconditionError, command_exception_handler
from core.renderers import render_json
from core.utils import ensure_dir

logger = logging.getLogger(__name__)

# Options every Django command carries; they never change a result.
_DJANGO_OPTIONS = {
    'verbosity',
    'settings',
    'pythonpath',
    'traceback',
    'no_color',
    'force_color',
    'skip_checks',
}


def parse_float_list(value, name):
    """
    '0.5,-1' -> [0.5, -1.0]
    """
    if value is None:
        return None
    try:
        return [float(part) for part in str(value).split(',') if part.strip()]
    except ValueError:
        raise PreconditionError(f"{name} must be a comma-separated list of numbers, got {value!r}")


def parse_alpha(value):
    """
    A positive float, or None for 'auto'.
    """
    if value is None or str(value).lower() == 'auto':
        return None
    try:
        alpha = float(value)
    except ValueError:
        raise PreconditionError(f"--alpha must be a positive number or 'auto', got {value!r}")
    if not alpha > 0.0:
        raise PreconditionError(f"--alpha must be positive, got {alpha!r}")
    return alpha


def validate_document(validator, body):
    """
    Check rendered JSON bytes against an output schema.

    Raises:
        InvariantViolation: the emitted document does not match its schema
    """
    errors = sorted(validator.iter_errors(json.loads(body)), key=lambda e: list(e.absolute_path))
    if errors:
        location = '/'.join(str(part) for part in errors[0].absolute_path) or '<root>'
        raise InvariantViolation(f"output violates {validator.schema['$id']} at {location}: {errors[0].message}")
    return body


class ExperimentCommand(BaseCommand):
    """
    Base class for analyze, pvi, richardson, td and repro.
    """
    requires_system_checks = []
    requires_migrations_checks = False

    def add_fixture_argument(self, parser):
        parser.add_argument('fixture', help='Problem file path or bundled fixture name (e.g. mdp_d)')

    def add_output_arguments(self, parser, formats=('json', 'csv')):
        parser.add_argument('--out', default=None, help='Directory for output files and the run manifest')
        parser.add_argument('--format', choices=formats, default=formats[0], help='Standard output format')

    def add_horizon_argument(self, parser):
        parser.add_argument('--n', type=int, default=1, help='Bootstrap horizon n ≥ 1')

    def add_iteration_arguments(self, parser):
        parser.add_argument('--iters', type=int, default=None, help='Iteration cap')
        parser.add_argument('--tol', type=float, default=None, help='Stopping tolerance')
        parser.add_argument('--theta0', default=None, help='Initial parameters, comma separated')
        parser.add_argument(
            '--expect-converge',
            action='store_true',
            help='Exit with code 1 unless the run converges',
        )

    def handle(self, *args, **options):
        try:
            with RunTimer() as timer:
                self.timer = timer
                self.run(**options)
        except CommandError:
            raise
        except Exception as exc:
            payload, exit_code = command_exception_handler(exc)
            self.stderr.write(render_json(payload).decode('utf-8'), ending='')
            raise CommandError(payload['message'], returncode=exit_code)

    def run(self, **options):
        raise NotImplementedError('subclasses must implement run()')

    def command_line(self, options):
        """
        The invocation rebuilt from its options, so it depends on inputs only.
        """
        parts = [self.command_name()]
        if options.get('fixture') is not None:
            parts.append(str(options['fixture']))
        for key in sorted(options):
            value = options[key]
            if key in _DJANGO_OPTIONS or key in ('fixture', 'args') or value is None or value is False:
                continue
            flag = '--' + key.replace('_', '-')
            parts.append(flag if value is True else f"{flag}={value}")
        return parts

    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def output_dir(self, options, run_id):
        if options.get('out'):
            return ensure_dir(options['out'])
        return ensure_dir(Path(settings.EXPERIMENT_OUTPUT_DIR) / run_id)

    def new_manifest(self, options, **fields):
        return RunManifest(command=self.command_name(), command_line=self.command_line(options), **fields)

    def finish_manifest(self, manifest, directory):
        manifest.duration_seconds = self.timer.elapsed
        path = write_manifest(manifest, directory)
        validate_document(MANIFEST_VALIDATOR, path.read_bytes())
        return path

    def emit(self, body):
        """
        Write bytes or text to standard output without an extra newline.
        """
        if isinstance(body, bytes):
            body = body.decode('utf-8')
        self.stdout.write(body, ending='')

    def write_single_trace(self, options, fixture, trace, run_id, config, seeds=()):
        """
        Trace CSV, summary JSON and manifest for one run; echoes the summary or the CSV.
        """
        directory = self.output_dir(options, run_id)
        csv_path, json_path, summary = write_trace(
            trace, directory, run_id, fixture_sha256=fixture.sha256, config=config
        )
        validate_document(TRACE_SUMMARY_VALIDATOR, json_path.read_bytes())

        manifest = self.new_manifest(options, seeds=list(seeds), config=config)
        manifest.add_fixture(fixture.path, fixture.sha256)
        manifest.add_outputs([csv_path, json_path])
        self.finish_manifest(manifest, directory)

        self.emit(csv_path.read_bytes() if options['format'] == 'csv' else json_path.read_bytes())
        return summary

    def check_expectation(self, options, converged, label):
        """
        Raises:
            ExpectationFailed: --expect-converge was given and the run did not converge
        """
        if options.get('expect_converge') and not converged:
            raise ExpectationFailed(f"{label} did not converge")
