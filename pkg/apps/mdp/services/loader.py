"""
Problem File Loader
-------------------
Parse, schema-check and validate MDP problem files.

Responsibilities:
- Accept a path, JSON text or an already-decoded dict
- Check the documented shape with jsonschema
- Run every invariant validator
- Record the content hash used for caching and run manifests
"""
import json
import logging
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from apps.mdp import validators
from apps.mdp.schemas import MDP_FILE_SCHEMA
from apps.mdp.types import MdpSpec
from core.exceptions import SpecParseError
from core.utils import sha256_hex

logger = logging.getLogger(__name__)

_schema_validator = Draft202012Validator(MDP_FILE_SCHEMA)


def read_source(source):
    """
    Resolve a source into (document dict, raw bytes, display name).
    """
    if isinstance(source, dict):
        raw = json.dumps(source, sort_keys=True).encode('utf-8')
        return source, raw, source.get('name', '<dict>')

    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith('{')):
        path = Path(source)
        try:
            raw = path.read_bytes()
        except OSError as e:
            raise SpecParseError(f"cannot read problem file {path}: {e}")
        name = path.stem
    else:
        raw = source.encode('utf-8')
        name = '<text>'

    try:
        document = json.loads(raw.decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SpecParseError(f"{name}: not valid UTF-8 JSON: {e}")

    return document, raw, name


def check_schema(document, name='<document>'):
    error = best_match(_schema_validator.iter_errors(document))
    if error is not None:
        location = '/'.join(str(part) for part in error.absolute_path) or '<root>'
        raise SpecParseError(
            f"{name}: schema violation at {location}: {error.message}",
            details={'path': location},
        )


def build_spec(document, name='', content_hash=''):
    """
    Validate a schema-conformant document and build the MdpSpec.
    """
    num_states = document['num_states']
    num_actions = document['num_actions']
    num_features = len(document['features'][0])

    transition = validators.validate_shape('transition', document['transition'], (num_actions, num_states, num_states))
    reward = validators.validate_shape('reward', document['reward'], (num_actions, num_states, num_states))
    features = validators.validate_shape('features', document['features'], (num_states, num_features))
    target = validators.validate_shape('target_policy', document['target_policy'], (num_states, num_actions))
    behavior = validators.validate_shape('behavior_policy', document['behavior_policy'], (num_states, num_actions))

    validators.validate_stochastic_rows('transition', transition)
    validators.validate_stochastic_rows('target_policy', target)
    validators.validate_stochastic_rows('behavior_policy', behavior)
    validators.validate_support(target, behavior)
    gamma = validators.validate_discount(document['gamma'])
    validators.validate_full_column_rank(features)

    state_weights = None
    if document.get('state_weights') is not None:
        state_weights = validators.validate_shape('state_weights', document['state_weights'], (num_states,))
        validators.validate_state_weights(state_weights)

    return MdpSpec(
        num_states=num_states,
        num_actions=num_actions,
        transition=transition,
        reward=reward,
        discount=gamma,
        features=features,
        target_policy=target,
        behavior_policy=behavior,
        state_weights=state_weights,
        name=document.get('name', name),
        content_hash=content_hash,
    )


def load_mdp_spec(source):
    """
    Load and validate an MDP problem.

    Args:
        source: file path, JSON text or decoded dict

    Returns:
        MdpSpec

    Raises:
        SpecParseError: unreadable, not JSON, or schema violation
        SpecValidationError: invariant violation
        RankDeficientError: features not full column rank
    """
    document, raw, name = read_source(source)
    check_schema(document, name)
    spec = build_spec(document, name=name, content_hash=sha256_hex(raw))

    logger.info(
        f"Loaded MDP {spec.name or name}: |S|={spec.num_states} |A|={spec.num_actions} "
        f"m={spec.num_features} gamma={spec.discount}"
    )
    return spec


def dump_mdp_spec(spec):
    """
    Inverse of load_mdp_spec: the JSON document for a spec.
    """
    document = {
        'name': spec.name,
        'num_states': spec.num_states,
        'num_actions': spec.num_actions,
        'gamma': spec.discount,
        'transition': spec.transition.tolist(),
        'reward': spec.reward.tolist(),
        'features': spec.features.tolist(),
        'target_policy': spec.target_policy.tolist(),
        'behavior_policy': spec.behavior_policy.tolist(),
    }
    if spec.state_weights is not None:
        document['state_weights'] = np.asarray(spec.state_weights).tolist()
    return document
