"""
Experiment Tasks
----------------
Celery tasks for the repro command; `repro all` fans out one task per suite.
"""
from celery import shared_task

from apps.experiments.serializers import AcceptanceCheckSerializer
from apps.experiments.services.acceptance import run_suite, suite_fixtures
from apps.experiments.services.fixtures import resolve_fixture
from core.utils import sha256_hex


@shared_task
def run_acceptance_suite(name):
    """
    Run one acceptance suite.

    Returns:
        dict: suite name, fixture references and serialized checks
    """
    checks = run_suite(name)
    paths = [resolve_fixture(fixture) for fixture in suite_fixtures(name)]
    return {
        'suite': name,
        'fixtures': [{'path': str(path), 'sha256': sha256_hex(path.read_bytes())} for path in paths],
        'checks': AcceptanceCheckSerializer(checks, many=True).data,
    }
