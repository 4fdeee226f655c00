"""
Deterministic Iterations
------------------------
Model-based n-step algorithms with full trace recording.

Responsibilities:
- n-step projected value iteration: θ_{k+1} = (ΦᵀD^βΦ)⁻¹ΦᵀD^βTⁿ(Φθ_k)
- Richardson iteration: θ_{k+1} = θ_k + αΦᵀD^β(Tⁿ(Φθ_k) − Φθ_k)
- Spectral convergence verdict for Richardson, ρ(I − αN) < 1

Both iterations stop on ‖θ_{k+1} − θ_k‖∞ ≤ tol, on the iteration budget,
or when ‖θ_k‖∞ exceeds the divergence guard.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from apps.analysis.services.matrices import pbe_matrix_n, weighted_features_t
from apps.analysis.services.operators import check_horizon, n_step_terms
from apps.analysis.services.solutions import fixed_point_theta_n
from apps.dp.types import Algorithm, IterationTrace
from apps.linalg import kernels
from core.exceptions import PreconditionError, SingularMatrixError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RichardsonVerdict:
    converges: bool
    spectral_radius: float
    stability: str


def initial_params(model, theta0=None):
    if theta0 is None:
        return np.zeros(model.num_features)
    theta0 = np.asarray(theta0, dtype=float)
    if theta0.shape != (model.num_features,):
        raise PreconditionError(f"θ₀ must have {model.num_features} entries, got shape {theta0.shape}")
    return theta0


def fixed_point_or_none(model, n):
    try:
        return fixed_point_theta_n(model, n)
    except SingularMatrixError:
        logger.warning(f"θ*ⁿ undefined at n={n}; errors recorded as NaN")
        return None


def distance(theta, fixed_point):
    if fixed_point is None:
        return math.nan
    return kernels.norm_inf(theta - fixed_point)


def run_iteration(step, theta0, fixed_point, max_iters, tol, algorithm, n, step_size=None):
    """
    Drive θ_{k+1} = step(θ_k) and record every iterate.
    """
    if max_iters < 1:
        raise PreconditionError(f"max_iters must be at least 1, got {max_iters}")

    guard = settings.NUMERICS['DIVERGENCE_GUARD']
    theta = theta0
    params = [theta0]
    errors = [distance(theta0, fixed_point)]
    diff = math.inf
    diverged = False

    for k in range(max_iters):
        new_theta = step(theta)
        if not np.all(np.isfinite(new_theta)) or kernels.norm_inf(new_theta) > guard:
            diverged = True
            break
        diff = kernels.norm_inf(new_theta - theta)
        if k == 0 and diff <= tol:
            # θ₀ is already a fixed point to within tol
            break
        theta = new_theta
        params.append(theta)
        errors.append(distance(theta, fixed_point))
        if diff <= tol:
            break

    iterations = len(params) - 1
    converged = not diverged and diff <= tol
    if diverged:
        logger.warning(f"{algorithm} n={n}: diverged after {iterations} iterations")
    else:
        logger.info(f"{algorithm} n={n}: {'converged' if converged else 'stopped'} after {iterations} iterations")

    return IterationTrace(
        algorithm=algorithm,
        n=n,
        steps=np.arange(len(params)),
        params=np.vstack(params),
        errors_to_fixed_point=np.asarray(errors, dtype=float),
        converged=converged,
        final_error=float(diff),
        tolerance=tol,
        iterations=iterations,
        diverged=diverged,
        step_size=step_size,
        fixed_point=fixed_point,
    )


def _defaults(max_iters, tol):
    defaults = settings.ITERATION_DEFAULTS
    return (
        defaults['MAX_ITERS'] if max_iters is None else int(max_iters),
        defaults['TOL'] if tol is None else float(tol),
    )


def n_pvi(model, n, theta0=None, max_iters=None, tol=None):
    """
    n-step projected value iteration.

    Each step is one matrix-vector pass through Tⁿ followed by the
    precomputed weighted least-squares solve (ΦᵀD^βΦ)⁻¹ΦᵀD^β.

    Raises:
        SingularMatrixError: Gram matrix singular
    """
    n = check_horizon(n)
    max_iters, tol = _defaults(max_iters, tol)
    reward_part, discounted_power = n_step_terms(model, n)
    fit = kernels.solve(model.gram, weighted_features_t(model))
    features = model.features

    def step(theta):
        return fit @ (reward_part + discounted_power @ (features @ theta))

    return run_iteration(
        step,
        initial_params(model, theta0),
        fixed_point_or_none(model, n),
        max_iters,
        tol,
        Algorithm.N_PVI.value,
        n,
    )


def richardson(model, n, alpha, theta0=None, max_iters=None, tol=None):
    """
    Richardson iteration θ_{k+1} = θ_k + α(b − Nθ_k), written through Tⁿ.
    """
    n = check_horizon(n)
    if not alpha > 0.0:
        raise PreconditionError(f"step size α must be positive, got {alpha!r}")
    max_iters, tol = _defaults(max_iters, tol)
    reward_part, discounted_power = n_step_terms(model, n)
    weighted_t = weighted_features_t(model)
    features = model.features

    def step(theta):
        values = features @ theta
        return theta + alpha * (weighted_t @ (reward_part + discounted_power @ values - values))

    return run_iteration(
        step,
        initial_params(model, theta0),
        fixed_point_or_none(model, n),
        max_iters,
        tol,
        Algorithm.RICHARDSON.value,
        n,
        step_size=float(alpha),
    )


def spectral_verdict_richardson(model, n, alpha):
    """
    ρ(I − αN) and whether it is below one.
    """
    matrix_n = pbe_matrix_n(model, n)
    spectrum = kernels.eig_general(np.eye(matrix_n.shape[0]) - alpha * matrix_n)
    return RichardsonVerdict(
        converges=kernels.is_schur(spectrum),
        spectral_radius=spectrum.spectral_radius,
        stability=kernels.schur_stability(spectrum),
    )
