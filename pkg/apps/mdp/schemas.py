"""
MDP File Schema
---------------
JSON Schema (Draft 2020-12) for problem files. Checks shape and types only;
numeric invariants are enforced by apps.mdp.validators.
"""

_NUMBER_VECTOR = {'type': 'array', 'minItems': 1, 'items': {'type': 'number'}}
_NUMBER_MATRIX = {'type': 'array', 'minItems': 1, 'items': _NUMBER_VECTOR}
_NUMBER_TENSOR = {'type': 'array', 'minItems': 1, 'items': _NUMBER_MATRIX}

MDP_FILE_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    '$id': 'https://tdlab.invalid/schemas/mdp-file.json',
    'title': 'Finite MDP with linear features and two policies',
    'type': 'object',
    'required': [
        'num_states',
        'num_actions',
        'gamma',
        'transition',
        'reward',
        'features',
        'target_policy',
        'behavior_policy',
    ],
    'additionalProperties': False,
    'properties': {
        'name': {'type': 'string'},
        'description': {'type': 'string'},
        'num_states': {'type': 'integer', 'minimum': 1},
        'num_actions': {'type': 'integer', 'minimum': 1},
        'gamma': {'type': 'number'},
        'transition': _NUMBER_TENSOR,
        'reward': _NUMBER_TENSOR,
        'features': _NUMBER_MATRIX,
        'target_policy': _NUMBER_MATRIX,
        'behavior_policy': _NUMBER_MATRIX,
        'state_weights': _NUMBER_VECTOR,
    },
}
