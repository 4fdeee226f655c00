"""
Monte-Carlo Validators
----------------------
Sampled moments of the i.i.d. oracle against their closed forms, and the
exact linear system solved by clipped TD.

Responsibilities:
- E[φ(s₀)φ(s₀)ᵀ] = ΦᵀD^βΦ and E[ρφ(s₀)φ(s_n)ᵀ] = ΦᵀD^β(P^π)ⁿΦ
- Mean one-step TD increment against the drift b − Nθ
- Importance-weighted action averages against target-policy expectations
- Clipped expected matrices by exhaustive path enumeration
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.conf import settings

from apps.analysis.services.matrices import pbe_matrix_n, pbe_vector_b, weighted_features_t
from apps.analysis.services.operators import check_horizon
from apps.linalg import kernels
from apps.linalg.types import Spectrum
from apps.td.services.sampling import cumulative, draw, iid_batches, sampling_tables
from core.exceptions import PreconditionError, SingularMatrixError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """
    Sample mean with per-entry standard errors next to the closed form.
    """
    mean: np.ndarray
    standard_error: np.ndarray
    analytic: np.ndarray
    num_samples: int

    @property
    def deviation(self):
        return kernels.norm_inf(np.atleast_1d(self.mean - self.analytic))

    def within(self, sigmas=3.0):
        """
        Entrywise |mean − analytic| ≤ sigmas·SE, up to rounding.
        """
        slack = 1e-12 * max(1.0, float(np.max(np.abs(self.analytic))))
        return bool(np.all(np.abs(self.mean - self.analytic) <= sigmas * self.standard_error + slack))


@dataclass(frozen=True)
class MomentReport:
    n: int
    first: MonteCarloEstimate
    second: MonteCarloEstimate

    def within(self, sigmas=3.0):
        return self.first.within(sigmas) and self.second.within(sigmas)


class RunningMoments:
    """
    Streaming sum and sum of squares of per-sample arrays.
    """

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.squares = np.zeros(shape)
        self.count = 0

    def add(self, samples):
        self.total += samples.sum(axis=0)
        self.squares += np.sum(samples * samples, axis=0)
        self.count += len(samples)

    def estimate(self, analytic):
        mean = self.total / self.count
        if self.count > 1:
            variance = np.maximum(self.squares - self.count * mean * mean, 0.0) / (self.count - 1)
        else:
            variance = np.zeros_like(mean)
        return MonteCarloEstimate(
            mean=mean,
            standard_error=np.sqrt(variance / self.count),
            analytic=np.asarray(analytic, dtype=float),
            num_samples=self.count,
        )


def _check_samples(num_samples):
    if num_samples < 1:
        raise PreconditionError(f"num_samples must be at least 1, got {num_samples}")


def moment_check(model, n, num_samples, generator):
    """
    Sampled first and second moments against ΦᵀD^βΦ and ΦᵀD^β(P^π)ⁿΦ, unclipped.
    """
    n = check_horizon(n)
    _check_samples(num_samples)
    m = model.num_features
    features = model.features
    first = RunningMoments((m, m))
    second = RunningMoments((m, m))

    for batch in iid_batches(model, n, num_samples, generator):
        start = features[batch.start_states]
        bootstrap = features[batch.bootstrap_states]
        first.add(start[:, :, None] * start[:, None, :])
        second.add(batch.ratios[:, None, None] * start[:, :, None] * bootstrap[:, None, :])

    cross = weighted_features_t(model) @ np.linalg.matrix_power(model.p_pi, n) @ features
    report = MomentReport(n=n, first=first.estimate(model.gram), second=second.estimate(cross))
    logger.info(
        f"Moment check n={n}, {num_samples} samples: deviations "
        f"{report.first.deviation:.3e} / {report.second.deviation:.3e}"
    )
    return report


def expected_increment(model, n, theta, num_samples, generator, clip=None):
    """
    Mean of ρ(G − φ(s₀)ᵀθ)φ(s₀) over i.i.d. rollouts, against the drift b − Nθ.

    The analytic drift ignores clipping.
    """
    n = check_horizon(n)
    _check_samples(num_samples)
    theta = np.asarray(theta, dtype=float)
    features = model.features
    gamma_n = model.gamma ** n
    increments = RunningMoments((model.num_features,))

    for batch in iid_batches(model, n, num_samples, generator, clip):
        start = features[batch.start_states]
        delta = batch.return_bases + gamma_n * (features[batch.bootstrap_states] @ theta) - start @ theta
        increments.add((batch.ratios * delta)[:, None] * start)

    drift = pbe_vector_b(model, n) - pbe_matrix_n(model, n) @ theta
    return increments.estimate(drift)


def importance_weight_check(model, state, values, num_samples, generator):
    """
    β-sampled mean of (π/β)(a)·X(a) at one state against Σ_a π(a|s)X(a).
    """
    _check_samples(num_samples)
    spec = model.spec
    values = np.asarray(values, dtype=float)
    if values.shape != (spec.num_actions,):
        raise PreconditionError(f"values must have {spec.num_actions} entries, got shape {values.shape}")

    tables = sampling_tables(model)
    table = np.broadcast_to(cumulative(spec.behavior_policy[state]), (num_samples, spec.num_actions))
    actions = draw(table, generator.random(num_samples))
    weighted = RunningMoments(())
    weighted.add(tables.ratio[state, actions] * values[actions])
    return weighted.estimate(spec.target_policy[state] @ values)


@dataclass(frozen=True)
class ClippedSystem:
    """
    Expected update of TD with ratio cap: θ̇ = b̄ + S̄θ.
    """
    n: int
    clip: Optional[float]
    matrix_s: np.ndarray
    vector_b: np.ndarray
    spectrum: Spectrum
    is_hurwitz: bool
    fixed_point: Optional[np.ndarray]
    num_paths: int


def enumerate_paths(model, n, path_limit=None):
    """
    Every n-step path with positive β-probability from s₀ ∼ d^β.

    Returns:
        tuple: (probability, ratio, discounted reward sum, start state, end state) arrays

    Raises:
        PreconditionError: more paths than path_limit
    """
    n = check_horizon(n)
    spec = model.spec
    path_limit = path_limit or settings.TD_DEFAULTS['PATH_LIMIT']
    tables = sampling_tables(model)
    num_states, num_actions = spec.num_states, spec.num_actions

    start = np.flatnonzero(model.d_beta > 0.0)
    probability = model.d_beta[start]
    ratio = np.ones(len(start))
    base = np.zeros(len(start))
    current = start.copy()
    discount = 1.0

    for _ in range(n):
        if len(current) * num_actions * num_states > path_limit:
            raise PreconditionError(
                f"clipped moments need more than {path_limit} paths at n={n}; lower n or raise PATH_LIMIT"
            )
        # step[a][s′] for every path
        step = spec.behavior_policy[current][:, :, None] * spec.transition[:, current, :].transpose(1, 0, 2)
        action, following = np.meshgrid(np.arange(num_actions), np.arange(num_states), indexing='ij')
        action, following = action.ravel(), following.ravel()
        step = step.reshape(len(current), -1)

        keep = step > 0.0
        rows, cols = np.nonzero(keep)
        probability = probability[rows] * step[rows, cols]
        ratio = ratio[rows] * tables.ratio[current[rows], action[cols]]
        base = base[rows] + discount * spec.reward[action[cols], current[rows], following[cols]]
        start = start[rows]
        current = following[cols]
        discount *= spec.discount

    return probability, ratio, base, start, current


def clipped_system(model, n, clip=None, path_limit=None):
    """
    Exact S̄ = E[ρ̄φ(s₀)(γⁿφ(s_n) − φ(s₀))ᵀ] and b̄ = E[ρ̄Gφ(s₀)] with ρ̄ = min{ρ, clip}.

    Without a cap these are S(n) and b(n).
    """
    probability, ratio, base, start, end = enumerate_paths(model, n, path_limit)
    if clip is not None:
        if not clip > 0.0:
            raise PreconditionError(f"clip must be positive, got {clip!r}")
        ratio = np.minimum(ratio, clip)

    features = model.features
    weight = probability * ratio
    phi_start, phi_end = features[start], features[end]
    matrix_s = (phi_start * weight[:, None]).T @ (model.gamma ** n * phi_end - phi_start)
    vector_b = (phi_start * (weight * base)[:, None]).sum(axis=0)

    spectrum = kernels.eig_general(matrix_s)
    try:
        fixed_point = kernels.solve(-matrix_s, vector_b)
    except SingularMatrixError:
        fixed_point = None

    logger.debug(f"Clipped system n={n} clip={clip}: {len(probability)} paths, S̄ spectrum {spectrum.eigenvalues}")

    return ClippedSystem(
        n=n,
        clip=clip,
        matrix_s=matrix_s,
        vector_b=vector_b,
        spectrum=spectrum,
        is_hurwitz=kernels.is_hurwitz(spectrum),
        fixed_point=fixed_point,
        num_paths=len(probability),
    )
