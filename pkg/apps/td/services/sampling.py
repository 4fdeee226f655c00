"""
Sampling Oracles
----------------
Seeded samplers for the stochastic algorithms.

Responsibilities:
- One PCG64 stream per seed
- Inverse-CDF categorical draws, scalar and vectorized
- i.i.d. n-step rollouts with s₀ ∼ d^β
- Sliding n-transition windows over one continuing β-trajectory

Every draw is inverse-CDF over a normalized cumulative table: an outcome
with zero weight is never returned.
"""
import bisect
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from numpy.lib.stride_tricks import sliding_window_view

from apps.mdp.services.model import assert_irreducible
from apps.td.types import Rollout, RolloutBatch
from core.exceptions import SamplingError

logger = logging.getLogger(__name__)


def rng_new(seed):
    return np.random.Generator(np.random.PCG64(seed))


def cumulative(weights):
    """
    Normalized cumulative sums along the last axis, with the last column pinned to 1.

    Raises:
        SamplingError: negative, non-finite or all-zero weights
    """
    weights = np.asarray(weights, dtype=float)
    if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
        raise SamplingError(f"weights must be finite and nonnegative, got {weights.tolist()}")
    totals = weights.sum(axis=-1, keepdims=True)
    if np.any(totals <= 0.0):
        raise SamplingError("cannot sample from all-zero weights")
    table = np.cumsum(weights / totals, axis=-1)
    table[..., -1] = 1.0
    return table


def draw(table, uniforms):
    """
    Vectorized inverse-CDF: index = #{j : table[j] ≤ u} per row.

    Args:
        table: (size, K) cumulative rows, one per uniform
        uniforms: (size,) values in [0, 1)
    """
    index = np.sum(table <= uniforms[:, None], axis=1)
    return np.minimum(index, table.shape[1] - 1)


def rng_categorical(generator, weights):
    table = cumulative(weights)
    index = int(np.searchsorted(table, generator.random(), side='right'))
    return min(index, len(table) - 1)


@dataclass(frozen=True)
class SamplingTables:
    """
    Cumulative tables and per-(s, a) ratios for one model.
    """
    num_states: int
    gamma: float
    start: np.ndarray        # cumulative d^β
    behavior: np.ndarray     # [s] cumulative β(·|s)
    transition: np.ndarray   # [a][s] cumulative P(·|s,a)
    joint: tuple             # [s] cumulative β(a|s)P(s′|s,a) over a·|S| + s′, as lists
    ratio: np.ndarray        # [s][a] π/β, zero where β = 0
    reward: np.ndarray       # [a][s][s′]


def sampling_tables(model):
    spec = model.spec
    behavior, target = spec.behavior_policy, spec.target_policy
    ratio = np.divide(target, behavior, out=np.zeros_like(target), where=behavior > 0.0)
    joint = behavior.T[:, :, None] * spec.transition            # [a][s][s′]
    joint = np.transpose(joint, (1, 0, 2)).reshape(spec.num_states, -1)

    return SamplingTables(
        num_states=spec.num_states,
        gamma=spec.discount,
        start=cumulative(model.d_beta),
        behavior=cumulative(behavior),
        transition=cumulative(spec.transition),
        joint=tuple(row.tolist() for row in cumulative(joint)),
        ratio=ratio,
        reward=spec.reward,
    )


def _apply_clip(ratios, clip):
    if clip is None:
        return ratios
    return np.minimum(ratios, clip)


def sample_iid_rollout(model, n, generator, clip=None, tables=None):
    """
    One rollout: s₀ ∼ d^β, a_k ∼ β(·|s_k), s_{k+1} ∼ P(·|s_k, a_k).
    """
    tables = tables or sampling_tables(model)
    spec = model.spec
    states = [rng_categorical(generator, model.d_beta)]
    actions, rewards = [], []
    ratio = 1.0
    for _ in range(n):
        state = states[-1]
        action = rng_categorical(generator, spec.behavior_policy[state])
        following = rng_categorical(generator, spec.transition[action, state])
        ratio *= tables.ratio[state, action]
        actions.append(action)
        rewards.append(spec.reward[action, state, following])
        states.append(following)

    rewards = np.asarray(rewards)
    return Rollout(
        states=np.asarray(states),
        actions=np.asarray(actions),
        rewards=rewards,
        is_ratio=float(_apply_clip(ratio, clip)),
        n_step_return_base=float(rewards @ tables.gamma ** np.arange(n)),
    )


def sample_iid_batch(tables, n, size, generator, clip=None):
    """
    size independent rollouts drawn column-wise.
    """
    state = draw(np.broadcast_to(tables.start, (size, tables.num_states)), generator.random(size))
    start = state
    ratios = np.ones(size)
    bases = np.zeros(size)
    discount = 1.0
    for _ in range(n):
        action = draw(tables.behavior[state], generator.random(size))
        following = draw(tables.transition[action, state], generator.random(size))
        ratios *= tables.ratio[state, action]
        bases += discount * tables.reward[action, state, following]
        discount *= tables.gamma
        state = following

    return RolloutBatch(
        start_states=start,
        bootstrap_states=state,
        return_bases=bases,
        ratios=_apply_clip(ratios, clip),
    )


def iid_batches(model, n, num_samples, generator, clip=None, batch_size=None):
    """
    Yield RolloutBatch chunks totalling num_samples rollouts.
    """
    tables = sampling_tables(model)
    batch_size = batch_size or settings.TD_DEFAULTS['BATCH_SIZE']
    produced = 0
    while produced < num_samples:
        size = min(batch_size, num_samples - produced)
        yield sample_iid_batch(tables, n, size, generator, clip)
        produced += size


def walk(tables, state, length, generator):
    """
    Continue a β-trajectory from state for length transitions.

    Returns:
        tuple: (states s_1…s_length, actions, rewards) as arrays
    """
    size = tables.num_states
    states = np.empty(length, dtype=np.int64)
    actions = np.empty(length, dtype=np.int64)
    last = len(tables.joint[0]) - 1
    previous = np.empty(length, dtype=np.int64)

    for i, u in enumerate(generator.random(length).tolist()):
        index = min(bisect.bisect_right(tables.joint[state], u), last)
        previous[i] = state
        actions[i], state = divmod(index, size)
        states[i] = state

    rewards = tables.reward[actions, previous, states]
    return states, actions, rewards


def markov_windows(model, n, num_updates, generator, clip=None, batch_size=None):
    """
    Yield RolloutBatch chunks of sliding windows (s_i, …, s_{i+n}) over one trajectory.

    The trajectory starts at s₀ ∼ d^β; the first window is emitted once n
    transitions are available.

    Raises:
        ReducibleChainError: P^β is reducible
    """
    assert_irreducible(model.p_beta)
    tables = sampling_tables(model)
    batch_size = batch_size or settings.TD_DEFAULTS['BATCH_SIZE']
    discounts = tables.gamma ** np.arange(n)

    states = np.array([rng_categorical(generator, model.d_beta)], dtype=np.int64)
    actions = np.empty(0, dtype=np.int64)
    rewards = np.empty(0)
    produced = 0

    while produced < num_updates:
        count = min(batch_size, num_updates - produced)
        new_states, new_actions, new_rewards = walk(tables, int(states[-1]), count + n - len(actions), generator)
        states = np.concatenate([states, new_states])
        actions = np.concatenate([actions, new_actions])
        rewards = np.concatenate([rewards, new_rewards])

        step_ratios = tables.ratio[states[:-1], actions]
        ratios = np.prod(sliding_window_view(step_ratios, n)[:count], axis=1)
        bases = sliding_window_view(rewards, n)[:count] @ discounts

        yield RolloutBatch(
            start_states=states[:count],
            bootstrap_states=states[n:n + count],
            return_bases=bases,
            ratios=_apply_clip(ratios, clip),
        )
        produced += count
        states, actions, rewards = states[count:], actions[count:], rewards[count:]
