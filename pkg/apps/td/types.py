"""
TD Types
--------
Run configuration, step-size schedules and sampled rollouts for the
stochastic algorithms.
"""
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

import numpy as np
from django.conf import settings
from django.db import models

from core.exceptions import InvariantViolation, PreconditionError
from core.utils import parse_seed


class TdAlgorithm(models.TextChoices):
    IID = 'iid', 'i.i.d. restarts from d^β'
    MARKOV = 'markov', 'single Markovian trajectory'


class ScheduleKind(models.TextChoices):
    HARMONIC = 'harmonic', 'α_k = a/(k+b+1)'


@dataclass(frozen=True)
class StepSchedule:
    kind: str = ScheduleKind.HARMONIC.value
    a: float = 0.1
    b: float = 10.0

    def __post_init__(self):
        if self.kind not in ScheduleKind.values:
            raise PreconditionError(f"unknown schedule kind {self.kind!r}")
        if not self.a > 0.0:
            raise PreconditionError(f"schedule a must be positive, got {self.a!r}")
        if not self.b >= 0.0:
            raise PreconditionError(f"schedule b must be nonnegative, got {self.b!r}")

    @property
    def schedule_id(self):
        return f"{self.kind}(a={self.a:g},b={self.b:g})"

    @classmethod
    def from_settings(cls, a=None, b=None):
        defaults = settings.TD_DEFAULTS
        return cls(
            a=float(defaults['STEP_A'] if a is None else a),
            b=float(defaults['STEP_B'] if b is None else b),
        )


@dataclass(frozen=True)
class TdRunConfig:
    """
    Everything that determines a TD run. Identical configs give identical traces.
    """
    algorithm: str
    n: int
    schedule: StepSchedule = field(default_factory=StepSchedule)
    clip: Optional[float] = None
    seed: int = 0
    max_iters: int = 1_000_000
    record_every: int = 100
    tolerance: float = 1e-2
    theta0: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.algorithm not in TdAlgorithm.values:
            raise PreconditionError(f"unknown TD algorithm {self.algorithm!r}")
        if int(self.n) != self.n or self.n < 1:
            raise PreconditionError(f"horizon n must be a positive integer, got {self.n!r}")
        if self.clip is not None and not self.clip > 0.0:
            raise PreconditionError(f"clip must be positive, got {self.clip!r}")
        if self.max_iters < 1:
            raise PreconditionError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.record_every < 1:
            raise PreconditionError(f"record_every must be at least 1, got {self.record_every}")
        object.__setattr__(self, 'seed', parse_seed(self.seed))
        if self.theta0 is not None:
            object.__setattr__(self, 'theta0', tuple(float(x) for x in self.theta0))

    @classmethod
    def from_settings(cls, algorithm, n, **overrides):
        """
        Fill unspecified fields from TD_DEFAULTS.
        """
        defaults = settings.TD_DEFAULTS
        schedule = overrides.pop('schedule', None) or StepSchedule.from_settings(
            overrides.pop('step_a', None), overrides.pop('step_b', None)
        )
        values = {
            'seed': defaults['SEED'],
            'max_iters': defaults['MAX_ITERS'],
            'record_every': defaults['RECORD_EVERY'],
            'tolerance': defaults['TOLERANCE'],
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(algorithm=algorithm, n=n, schedule=schedule, **values)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data['schedule'] = StepSchedule(**data['schedule'])
        return cls(**data)

    def with_seed(self, seed):
        data = self.to_dict()
        data['seed'] = seed
        return TdRunConfig.from_dict(data)


@dataclass(frozen=True)
class Rollout:
    """
    One n-step sample: s₀…s_n, a₀…a_{n−1}, r₁…r_n and the (possibly clipped) ratio.

    The ratio is zero when the target policy never takes a sampled action.
    """
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    is_ratio: float
    n_step_return_base: float

    def __post_init__(self):
        n = len(self.actions)
        if len(self.states) != n + 1 or len(self.rewards) != n:
            raise InvariantViolation(
                f"rollout lengths inconsistent: states={len(self.states)} "
                f"actions={n} rewards={len(self.rewards)}"
            )
        if not self.is_ratio >= 0.0:
            raise InvariantViolation(f"importance ratio must be nonnegative, got {self.is_ratio!r}")

    @property
    def n(self):
        return len(self.actions)


@dataclass(frozen=True)
class RolloutBatch:
    """
    Column arrays of many rollouts; only what the update needs.
    """
    start_states: np.ndarray
    bootstrap_states: np.ndarray
    return_bases: np.ndarray
    ratios: np.ndarray

    def __len__(self):
        return len(self.start_states)
