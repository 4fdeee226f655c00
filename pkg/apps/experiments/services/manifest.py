"""
Run Manifests
-------------
What a command ran, on which inputs, and what it wrote.

A manifest is assembled after every worker has finished, then checked
and written as manifest.json next to the outputs it lists.
"""
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from apps.experiments.serializers import RunManifestSerializer
from core.exceptions import InvariantViolation
from core.renderers import render_json
from core.utils import ensure_dir, sha256_hex

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'


@dataclass(frozen=True)
class AcceptanceCheck:
    """
    One expected-versus-observed comparison of a repro suite.
    """
    suite: str
    name: str
    expected: object
    observed: object
    passed: bool
    detail: str = ''


@dataclass
class RunManifest:
    command: str
    command_line: list
    fixtures: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    duration_seconds: float = 0.0
    tolerances_version: Optional[int] = None

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def add_fixture(self, path, sha256):
        entry = {'path': str(path), 'sha256': sha256}
        if entry not in self.fixtures:
            self.fixtures.append(entry)

    def add_outputs(self, paths):
        for path in paths:
            if str(path) not in self.outputs:
                self.outputs.append(str(path))

    def check_invariants(self):
        """
        Raises:
            InvariantViolation: a listed output is missing or a fixture changed on disk
        """
        for output in self.outputs:
            if not Path(output).is_file():
                raise InvariantViolation(f"manifest lists missing output {output}")
        for fixture in self.fixtures:
            actual = sha256_hex(Path(fixture['path']).read_bytes())
            if actual != fixture['sha256']:
                raise InvariantViolation(
                    f"fixture {fixture['path']} hash {actual} does not match loaded hash {fixture['sha256']}"
                )


class RunTimer:
    """Wall-clock duration of a command body"""

    def __enter__(self):
        self.started = time.perf_counter()
        self.seconds = 0.0
        return self

    def __exit__(self, *exc_info):
        self.seconds = self.elapsed
        return False

    @property
    def elapsed(self):
        return time.perf_counter() - self.started


def write_manifest(manifest, directory):
    manifest.check_invariants()
    path = ensure_dir(directory) / MANIFEST_NAME
    path.write_bytes(render_json(RunManifestSerializer(manifest).data))
    logger.info(f"Wrote manifest for {manifest.command} with {len(manifest.outputs)} outputs to {path}")
    return path
