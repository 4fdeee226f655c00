"""
Step-Size Schedules
-------------------
α_k = a/(k+b+1): positive, not summable, square summable, and
1/α_{k+1} − 1/α_k = 1/a for every k.
"""
import numpy as np

from apps.td.types import ScheduleKind
from core.exceptions import PreconditionError


def step_size(schedule, k):
    if k < 0:
        raise PreconditionError(f"step index must be nonnegative, got {k}")
    if schedule.kind == ScheduleKind.HARMONIC:
        return schedule.a / (k + schedule.b + 1.0)
    raise PreconditionError(f"unknown schedule kind {schedule.kind!r}")


def step_sizes(schedule, start, stop):
    """
    α_k for k in [start, stop).
    """
    if start < 0:
        raise PreconditionError(f"step index must be nonnegative, got {start}")
    return schedule.a / (np.arange(start, stop, dtype=float) + schedule.b + 1.0)


def total_time(schedule, num_steps):
    """
    Σ_{k<K} α_k, the ODE time covered by K steps.
    """
    return float(np.sum(step_sizes(schedule, 0, num_steps)))
