"""
Fixture Resolution
------------------
Map a command-line fixture argument to a problem file and its derived model.
"""
import logging
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from apps.mdp.services.loader import load_mdp_spec
from apps.mdp.services.model import cached_derived_model
from apps.mdp.types import DerivedModel, MdpSpec
from core.exceptions import SpecParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadedFixture:
    path: Path
    spec: MdpSpec
    model: DerivedModel

    @property
    def sha256(self):
        return self.spec.content_hash


def resolve_fixture(name):
    """
    An existing path is used as given; anything else is looked up in MDP_FIXTURE_DIR.

    'mdp_d', 'mdp_d.json' and 'some/dir/mdp_d.json' all resolve to the bundled
    fixture when no such file exists relative to the working directory.
    """
    path = Path(name)
    if path.is_file():
        return path

    stem = path.name if path.suffix == '.json' else f"{path.name}.json"
    candidate = Path(settings.MDP_FIXTURE_DIR) / stem
    if candidate.is_file():
        return candidate

    raise SpecParseError(f"problem file not found: {name}", details={'searched': [str(path), str(candidate)]})


def load_fixture(name):
    path = resolve_fixture(name)
    spec = load_mdp_spec(path)
    logger.debug(f"Resolved fixture {name} to {path}")
    return LoadedFixture(path=path, spec=spec, model=cached_derived_model(spec))
