"""
Output Schemas
--------------
JSON Schema (Draft 2020-12) for every document the commands emit.

Undefined quantities render as null, so most numeric fields accept null.
"""
from jsonschema import Draft202012Validator

_NUMBER_OR_NULL = {'type': ['number', 'null']}
_INT_OR_NULL = {'type': ['integer', 'null']}
_VECTOR = {'type': 'array', 'items': {'type': 'number'}}
_MATRIX = {'type': 'array', 'items': _VECTOR}
_STABILITY = {'enum': ['stable', 'marginal', 'unstable']}

_SPECTRUM = {
    'type': 'object',
    'required': ['eigenvalues', 'spectral_radius', 'max_real_part'],
    'properties': {
        'eigenvalues': {
            'type': 'array',
            'items': {'type': 'array', 'items': {'type': 'number'}, 'minItems': 2, 'maxItems': 2},
        },
        'spectral_radius': _NUMBER_OR_NULL,
        'max_real_part': _NUMBER_OR_NULL,
    },
}

STABILITY_REPORT_SCHEMA = {
    'type': 'object',
    'required': [
        'n',
        'matrix_a',
        'matrix_n',
        'matrix_s',
        'a_spectrum',
        's_spectrum',
        'a_is_schur',
        'n_is_nonsingular',
        's_is_hurwitz',
        's_symmetric_part_negdef',
        'inf_norm_contraction',
        'gamma_n_pi_norm',
        'alpha_star_lower',
    ],
    'properties': {
        'n': {'type': 'integer', 'minimum': 1},
        'matrix_a': _MATRIX,
        'matrix_n': _MATRIX,
        'matrix_s': _MATRIX,
        'a_spectrum': _SPECTRUM,
        's_spectrum': _SPECTRUM,
        'a_is_schur': {'type': 'boolean'},
        'n_is_nonsingular': {'type': 'boolean'},
        's_is_hurwitz': {'type': 'boolean'},
        's_symmetric_part_negdef': {'type': 'boolean'},
        'inf_norm_contraction': {'type': 'boolean'},
        'gamma_n_pi_norm': {'type': 'number'},
        'alpha_star_lower': _NUMBER_OR_NULL,
        'a_stability': _STABILITY,
        's_stability': _STABILITY,
        'inf_contraction_factor': _NUMBER_OR_NULL,
        'weighted_contraction': {'type': 'boolean'},
        'weighted_contraction_factor': _NUMBER_OR_NULL,
        'det_n': _NUMBER_OR_NULL,
    },
}

BOUND_SET_SCHEMA = {
    'type': 'object',
    'required': [
        'n1_upper',
        'n2_upper',
        'nth_upper',
        'min_n_schur',
        'min_n_contraction_inf',
        'min_n_contraction_weighted',
        'min_n_hurwitz',
        'n_max',
    ],
    'properties': {
        'n1_upper': {'type': 'integer', 'minimum': 1},
        'n2_upper': {'type': 'integer', 'minimum': 1},
        'nth_upper': {'type': 'integer', 'minimum': 1},
        'min_n_schur': _INT_OR_NULL,
        'min_n_contraction_inf': _INT_OR_NULL,
        'min_n_contraction_weighted': _INT_OR_NULL,
        'min_n_hurwitz': _INT_OR_NULL,
        'min_n_negdef': _INT_OR_NULL,
        'n_max': {'type': 'integer', 'minimum': 1},
        'nth': {'type': ['object', 'null']},
        'bitmaps': {
            'type': 'object',
            'additionalProperties': {'type': 'array', 'items': {'type': 'boolean'}},
        },
    },
}

ANALYZE_REPORT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    '$id': 'https://tdlab.invalid/schemas/analyze-report.json',
    'title': 'Bounds and per-horizon stability reports',
    'type': 'object',
    'required': ['fixture', 'fixture_sha256', 'n_max', 'bounds', 'reports'],
    'properties': {
        'fixture': {'type': 'string'},
        'fixture_sha256': {'type': 'string', 'pattern': '^[0-9a-f]{64}$'},
        'n_max': {'type': 'integer', 'minimum': 1},
        'bounds': BOUND_SET_SCHEMA,
        'reports': {'type': 'array', 'minItems': 1, 'items': STABILITY_REPORT_SCHEMA},
    },
}

TRACE_SUMMARY_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    '$id': 'https://tdlab.invalid/schemas/trace-summary.json',
    'title': 'Summary of one iteration or TD run',
    'type': 'object',
    'required': [
        'algorithm',
        'n',
        'iterations',
        'recorded_rows',
        'converged',
        'diverged',
        'final_error',
        'tolerance',
        'final_params',
        'fixed_point',
        'run_id',
    ],
    'properties': {
        'algorithm': {'enum': ['n_pvi', 'richardson', 'td_iid', 'td_markov']},
        'n': {'type': 'integer', 'minimum': 1},
        'iterations': {'type': 'integer', 'minimum': 0},
        'recorded_rows': {'type': 'integer', 'minimum': 1},
        'converged': {'type': 'boolean'},
        'diverged': {'type': 'boolean'},
        'final_error': _NUMBER_OR_NULL,
        'tolerance': {'type': 'number'},
        'final_error_to_fixed_point': _NUMBER_OR_NULL,
        'step_size': {'type': ['number', 'string', 'null']},
        'final_params': _VECTOR,
        'fixed_point': {'oneOf': [_VECTOR, {'type': 'null'}]},
        'final_norm': _NUMBER_OR_NULL,
        'state_visits': {'oneOf': [_VECTOR, {'type': 'null'}]},
        'run_id': {'type': 'string'},
        'fixture_sha256': {'type': 'string'},
        'seed': {'type': 'integer', 'minimum': 0},
    },
}

_CHECK = {
    'type': 'object',
    'required': ['suite', 'name', 'expected', 'observed', 'passed', 'detail'],
    'properties': {
        'suite': {'type': 'string'},
        'name': {'type': 'string'},
        'passed': {'type': 'boolean'},
        'detail': {'type': 'string'},
    },
}

MANIFEST_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    '$id': 'https://tdlab.invalid/schemas/run-manifest.json',
    'title': 'Inputs, outputs and verdicts of one command invocation',
    'type': 'object',
    'required': [
        'command',
        'command_line',
        'fixtures',
        'seeds',
        'config',
        'outputs',
        'checks',
        'passed',
        'duration_seconds',
        'tolerances_version',
    ],
    'properties': {
        'command': {'enum': ['analyze', 'pvi', 'richardson', 'td', 'repro']},
        'command_line': {'type': 'array', 'items': {'type': 'string'}},
        'fixtures': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['path', 'sha256'],
                'properties': {
                    'path': {'type': 'string'},
                    'sha256': {'type': 'string', 'pattern': '^[0-9a-f]{64}$'},
                },
            },
        },
        'seeds': {'type': 'array', 'items': {'type': 'integer', 'minimum': 0}},
        'config': {'type': 'object'},
        'outputs': {'type': 'array', 'items': {'type': 'string'}},
        'checks': {'type': 'array', 'items': _CHECK},
        'passed': {'type': 'boolean'},
        'duration_seconds': {'type': 'number', 'minimum': 0},
        'tolerances_version': _INT_OR_NULL,
    },
}

ANALYZE_REPORT_VALIDATOR = Draft202012Validator(ANALYZE_REPORT_SCHEMA)
TRACE_SUMMARY_VALIDATOR = Draft202012Validator(TRACE_SUMMARY_SCHEMA)
MANIFEST_VALIDATOR = Draft202012Validator(MANIFEST_SCHEMA)
