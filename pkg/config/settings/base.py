"""
Base Settings
-------------
Common settings shared across all environments.

This file contains settings that remain constant regardless of environment.
Environment-specific settings are in development.py and testing.py.

The numeric dictionaries at the bottom are the single source for every
tolerance, default and reproduction interval used by the apps.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths
BASE_DIR = Path(__file__).resolve().parent.parent.parent

load_dotenv(BASE_DIR / '.env')

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps
    'rest_framework',

    # Core app
    'core.apps.CoreConfig',

    # Local apps (in apps/ directory)
    'apps.linalg',
    'apps.mdp',
    'apps.analysis',
    'apps.dp',
    'apps.td',
    'apps.experiments',
]

MIDDLEWARE = []

# No URL surface; everything runs through management commands.
ROOT_URLCONF = None

# Not used by any app; the test runner still expects an alias.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework (serializers + JSONRenderer only)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COERCE_DECIMAL_TO_STRING': False,
    'UNAUTHENTICATED_USER': None,
}

# Local-memory cache for derived models
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'tdlab-derived-models',
        'KEY_PREFIX': 'tdlab',
        'VERSION': 1,
        'TIMEOUT': 60 * 60,
    }
}

# Cache timeout settings (in seconds)
CACHE_TTL = {
    'SHORT': 60 * 5,
    'MEDIUM': 60 * 15,
    'LONG': 60 * 60,
}

# Celery Configuration
CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'memory://')
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', 'cache+memory://')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_ALWAYS_EAGER = os.environ.get('CELERY_TASK_ALWAYS_EAGER', 'true').lower() == 'true'
CELERY_TASK_EAGER_PROPAGATES = True

# Fixtures and outputs
MDP_FIXTURE_DIR = Path(os.environ.get('MDP_FIXTURE_DIR', BASE_DIR / 'apps' / 'mdp' / 'fixtures'))
EXPERIMENT_OUTPUT_DIR = Path(os.environ.get('EXPERIMENT_OUTPUT_DIR', BASE_DIR / 'runs'))

# Numerical tolerances
NUMERICS = {
    'STOCHASTIC_TOL': 1e-12,      # row sums of P, π, β and induced chains
    'RANK_TOL': 1e-10,            # σ_min/σ_max below this => rank deficient
    'PIVOT_TOL': 1e-13,           # relative pivot threshold for solves
    'SOLVE_RESIDUAL_TOL': 1e-9,   # ‖Ax−b‖∞ ≤ tol·(1+‖b‖∞)
    'SCHUR_MARGIN': 1e-9,
    'HURWITZ_MARGIN': 1e-9,
    'MARGINAL_RHO': 1e-6,
    'SYMMETRY_TOL': 1e-10,
    'PROJECTION_TOL': 1e-10,
    'LYAPUNOV_RESIDUAL_TOL': 1e-8,
    'FIXED_POINT_TOL': 1e-8,
    'DIVERGENCE_GUARD': 1e12,
}

ITERATION_DEFAULTS = {
    'TOL': 1e-10,
    'MAX_ITERS': 100_000,
    'ALPHA_SAFETY': 0.5,          # --alpha auto = ALPHA_SAFETY × alpha_star_bound
}

TD_DEFAULTS = {
    'STEP_A': 0.1,
    'STEP_B': 10.0,
    'MAX_ITERS': 1_000_000,
    'RECORD_EVERY': 100,
    'TOLERANCE': 1e-2,
    'SEED': 0,
    'BATCH_SIZE': 8192,           # rollouts drawn per vectorized sampling call
    'PATH_LIMIT': 1_000_000,      # largest path enumeration for exact clipped moments
}

SEARCH_DEFAULTS = {
    'FLOOR': 200,
    'NTH_MULTIPLIER': 4,
}

# Mirrored in docs/REPRODUCTION.md; bump VERSION on any change.
REPRO_TOLERANCES = {
    'VERSION': 5,
    'appendix_d': {
        'n1_upper': {'expected': 11, 'exact': True},
        'n2_upper': {'expected': 11, 'exact': True},
        'nth_upper': {'expected': 54, 'exact': True},
        'min_n_schur': {'expected': 3, 'exact': True},
        'min_n_contraction_weighted': {'expected': 5, 'exact': True},
        'min_n_hurwitz': {'expected': 3, 'exact': True},
        'n_max': 60,
    },
    'appendix_d_stochastic': {
        'seeds': 20,
        'iters': 1_000_000,
        'clip': 9.0,
        'step_a': 100.0,
        'step_b': 100_000.0,
        'horizons': [1, 2, 3, 4],
        'diverging': [1, 2],
        'divergence_factor': 2.0,
        'convergence_factor': 0.1,
        'homogeneous': True,
    },
    'appendix_e': {
        's_n1': {'expected': -0.17, 'low': -0.19, 'high': -0.15},
        's_n2': {'expected': 0.02, 'low': 0.005, 'high': 0.035},
        'hurwitz_bitmap': {'expected': [True, False], 'exact': True},
    },
    'appendix_f': {
        'q1_ratio': {'expected': 48, 'low': 46, 'high': 50},
        'q2_ratio': {'expected': 37, 'low': 35, 'high': 40},
        'winner': {'expected': 'q2', 'exact': True},
    },
    'example1': {
        'det_n_abs_min': 1e-10,
        'gamma_pi_p_radius_min': 1.0,
    },
    'error_bounds': {
        'slack': 1e-9,
        'decay_offset': 5,
        'min_approximation_error': 1e-12,
    },
    'richardson': {
        'n_max': 12,
        'tolerance': 1e-7,         # relative to max(1, ‖θ*ⁿ‖∞)
    },
    'moments': {
        'n': 3,
        'samples': 1_000_000,
        'sigmas': 3.0,
        'seeds': [0, 1],           # second seed only when the first misses
        'clip': 9.0,
        'system_atol': 1e-10,
    },
}
