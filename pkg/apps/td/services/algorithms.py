"""
Stochastic n-step TD
--------------------
Off-policy n-step TD with linear features and importance sampling.

Both variants apply

    θ_{i+1} = θ_i + α_i ρ_i (G_i − φ(s_i)ᵀθ_i) φ(s_i)
    G_i = Σ_{k<n} γᵏ r_{i+k+1} + γⁿ φ(s_{i+n})ᵀθ_i

and differ only in where the n-step samples come from: fresh rollouts
from d^β, or sliding windows over one β-trajectory.
"""
import logging
import math

import numpy as np
from django.conf import settings

from apps.dp.services.iterations import distance, fixed_point_or_none, initial_params
from apps.dp.types import Algorithm, IterationTrace
from apps.linalg import kernels
from apps.td.services.sampling import iid_batches, markov_windows, rng_new
from apps.td.services.schedules import step_sizes
from apps.td.types import TdAlgorithm
from core.exceptions import PreconditionError

logger = logging.getLogger(__name__)


class TraceRecorder:
    """
    Thinned rows k = 0, record_every, 2·record_every, … plus the last iterate.
    """

    def __init__(self, fixed_point, record_every):
        self.fixed_point = fixed_point
        self.record_every = record_every
        self.steps, self.params, self.errors = [], [], []
        self.alphas, self.ratios = [], []

    def record(self, k, theta, alpha=math.nan, ratio=math.nan):
        self.steps.append(k)
        self.params.append(theta)
        self.errors.append(distance(theta, self.fixed_point))
        self.alphas.append(alpha)
        self.ratios.append(ratio)

    def due(self, k):
        return k % self.record_every == 0

    @property
    def last_step(self):
        return self.steps[-1]


def run_td(model, config, batches, algorithm):
    """
    Drive the TD recursion over a stream of RolloutBatch chunks.
    """
    n = config.n
    theta = initial_params(model, config.theta0)
    fixed_point = fixed_point_or_none(model, n)
    features = model.features
    gamma_n = model.gamma ** n
    guard = settings.NUMERICS['DIVERGENCE_GUARD']

    recorder = TraceRecorder(fixed_point, config.record_every)
    recorder.record(0, theta)
    visits = np.zeros(model.num_states, dtype=np.int64)
    alpha = ratio = math.nan
    k = 0
    diverged = False

    logger.info(f"{algorithm} n={n} seed={config.seed}: starting {config.max_iters} updates")

    for batch in batches:
        alphas = step_sizes(config.schedule, k, k + len(batch))
        start_features = features[batch.start_states]
        bootstrap_features = features[batch.bootstrap_states]
        consumed = 0

        for i in range(len(batch)):
            phi = start_features[i]
            delta = batch.return_bases[i] + gamma_n * (bootstrap_features[i] @ theta) - phi @ theta
            alpha, ratio = alphas[i], batch.ratios[i]
            new_theta = theta + (alpha * ratio * delta) * phi
            if not math.isfinite(delta) or kernels.norm_inf(new_theta) > guard:
                diverged = True
                break
            theta = new_theta
            consumed += 1
            k += 1
            if recorder.due(k):
                recorder.record(k, theta, float(alpha), float(ratio))

        visits += np.bincount(batch.start_states[:consumed], minlength=model.num_states)
        if diverged:
            break

    if recorder.last_step != k:
        recorder.record(k, theta, float(alpha), float(ratio))

    final_error = distance(theta, fixed_point)
    converged = not diverged and not math.isnan(final_error) and final_error <= config.tolerance
    if diverged:
        logger.warning(f"{algorithm} n={n} seed={config.seed}: diverged after {k} updates")
    else:
        logger.info(f"{algorithm} n={n} seed={config.seed}: finished {k} updates, ‖θ_K − θ*ⁿ‖∞={final_error:.3e}")

    return IterationTrace(
        algorithm=algorithm,
        n=n,
        steps=np.asarray(recorder.steps, dtype=np.int64),
        params=np.vstack(recorder.params),
        errors_to_fixed_point=np.asarray(recorder.errors, dtype=float),
        converged=converged,
        final_error=float(final_error),
        tolerance=config.tolerance,
        iterations=k,
        diverged=diverged,
        step_size=config.schedule.schedule_id,
        fixed_point=fixed_point,
        extra={
            'alpha_k': np.asarray(recorder.alphas, dtype=float),
            'rho_clipped': np.asarray(recorder.ratios, dtype=float),
        },
        state_visits=visits,
    )


def td_iid_run(model, config):
    """
    n-step TD on i.i.d. rollouts with s₀ ∼ d^β.
    """
    generator = rng_new(config.seed)
    batches = iid_batches(model, config.n, config.max_iters, generator, config.clip)
    return run_td(model, config, batches, Algorithm.TD_IID.value)


def td_markov_run(model, config):
    """
    n-step TD along one β-trajectory.

    The update at step i reads rewards r_{i+1}…r_{i+n} and bootstraps at
    s_{i+n}; the first update waits until n transitions have been sampled.

    Raises:
        ReducibleChainError: P^β is reducible
    """
    generator = rng_new(config.seed)
    batches = markov_windows(model, config.n, config.max_iters, generator, config.clip)
    return run_td(model, config, batches, Algorithm.TD_MARKOV.value)


def td_run(model, config):
    if config.algorithm == TdAlgorithm.IID:
        return td_iid_run(model, config)
    if config.algorithm == TdAlgorithm.MARKOV:
        return td_markov_run(model, config)
    raise PreconditionError(f"unknown TD algorithm {config.algorithm!r}")
