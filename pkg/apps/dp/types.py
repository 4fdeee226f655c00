"""
Iteration Traces
----------------
One record type for every iterative algorithm, deterministic or stochastic.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from django.db import models

from core.exceptions import InvariantViolation


class Algorithm(models.TextChoices):
    N_PVI = 'n_pvi', 'n-step projected value iteration'
    RICHARDSON = 'richardson', 'Richardson iteration'
    TD_IID = 'td_iid', 'n-step TD, i.i.d. rollouts'
    TD_MARKOV = 'td_markov', 'n-step TD, single trajectory'


@dataclass(frozen=True)
class IterationTrace:
    """
    Recorded iterates θ_k at steps k with their distance to θ*ⁿ.

    Deterministic traces record every step; TD traces are thinned and
    always end with the final iterate. final_error is the last successive
    difference for deterministic runs and ‖θ_K − θ*ⁿ‖∞ for TD runs.
    """
    algorithm: str
    n: int
    steps: np.ndarray
    params: np.ndarray
    errors_to_fixed_point: np.ndarray
    converged: bool
    final_error: float
    tolerance: float
    iterations: int
    diverged: bool = False
    step_size: Optional[object] = None
    fixed_point: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)
    state_visits: Optional[np.ndarray] = None

    def __post_init__(self):
        self.check_invariants()

    def check_invariants(self):
        rows = len(self.steps)
        if len(self.params) != rows or len(self.errors_to_fixed_point) != rows:
            raise InvariantViolation(
                f"trace lengths differ: steps={rows} params={len(self.params)} "
                f"errors={len(self.errors_to_fixed_point)}"
            )
        for name, column in self.extra.items():
            if len(column) != rows:
                raise InvariantViolation(f"trace column {name} has {len(column)} rows, expected {rows}")

        within = not math.isnan(self.final_error) and self.final_error <= self.tolerance
        if self.converged != within:
            raise InvariantViolation(
                f"converged={self.converged} but final_error={self.final_error!r}, tolerance={self.tolerance!r}"
            )
        if self.diverged and self.converged:
            raise InvariantViolation("trace is both diverged and converged")

    @property
    def num_features(self):
        return self.params.shape[1]

    @property
    def final_params(self):
        return self.params[-1]

    @property
    def final_norm(self):
        return float(np.max(np.abs(self.params[-1])))

    def to_frame(self):
        """
        Columns k, theta_0..theta_{m-1}, err_inf, then any extra columns.
        """
        frame = pd.DataFrame({'k': np.asarray(self.steps, dtype=np.int64)})
        for j in range(self.num_features):
            frame[f'theta_{j}'] = self.params[:, j]
        frame['err_inf'] = self.errors_to_fixed_point
        for name, column in self.extra.items():
            frame[name] = column
        return frame
