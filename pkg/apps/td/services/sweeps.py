"""
Multi-Seed Sweeps
-----------------
One TD run per seed and the per-seed final statistics.
"""
import dataclasses
import logging
from dataclasses import dataclass, field

import numpy as np

from apps.mdp.services.model import derived_model
from apps.td.services.algorithms import td_run

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepResult:
    seeds: tuple
    final_errors: np.ndarray
    final_norms: np.ndarray
    diverged: np.ndarray
    traces: dict = field(default_factory=dict)

    @property
    def median_final_error(self):
        return float(np.median(self.final_errors))

    @property
    def median_final_norm(self):
        return float(np.median(self.final_norms))

    @property
    def mean_final_error(self):
        return float(np.mean(self.final_errors))

    @classmethod
    def from_traces(cls, traces):
        seeds = tuple(traces)
        return cls(
            seeds=seeds,
            final_errors=np.array([traces[seed].final_error for seed in seeds], dtype=float),
            final_norms=np.array([traces[seed].final_norm for seed in seeds], dtype=float),
            diverged=np.array([traces[seed].diverged for seed in seeds], dtype=bool),
            traces=dict(traces),
        )

    @classmethod
    def from_summaries(cls, summaries):
        """
        Build from trace summaries returned by the per-seed task; null errors become NaN.
        """
        seeds = tuple(summary['seed'] for summary in summaries)
        errors = [np.nan if s['final_error'] is None else s['final_error'] for s in summaries]
        return cls(
            seeds=seeds,
            final_errors=np.array(errors, dtype=float),
            final_norms=np.array([s['final_norm'] for s in summaries], dtype=float),
            diverged=np.array([s['diverged'] for s in summaries], dtype=bool),
        )


def sweep(model, config, seeds):
    traces = {seed: td_run(model, config.with_seed(seed)) for seed in seeds}
    result = SweepResult.from_traces(traces)
    logger.info(
        f"Sweep {config.algorithm} n={config.n} over {len(result.seeds)} seeds: "
        f"median final error {result.median_final_error:.3e}, median ‖θ_K‖∞ {result.median_final_norm:.3e}"
    )
    return result


def homogeneous_model(model):
    """
    The same model with every reward zero, so every fixed point is the origin.
    """
    spec = model.spec
    spec = dataclasses.replace(
        spec,
        reward=np.zeros_like(spec.reward),
        name=f"{spec.name}-homogeneous",
        content_hash='',
    )
    return derived_model(spec)
