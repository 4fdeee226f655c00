"""
Closed-Form Solutions
---------------------
Fixed points of the projected Bellman equations and the errors between them.

Responsibilities:
- θ*ⁿ, the fixed point of ΠTⁿ (N θ = b)
- θ*, the one-step projected Bellman solution
- θ*∞, the weighted least-squares fit of V^π
- MSPBE of an arbitrary θ
- Error bounds for θ*ⁿ under γⁿ‖Π‖∞ < 1
"""
import logging

import numpy as np
from django.conf import settings

from apps.analysis.services.matrices import pbe_matrix_n, pbe_vector_b, weighted_features_t
from apps.analysis.services.operators import gamma_n_pi_norm, projected_bellman_n
from apps.analysis.types import ErrorBounds
from apps.linalg import kernels
from core.exceptions import ContractionPreconditionError, InvariantViolation, SingularMatrixError

logger = logging.getLogger(__name__)


def fixed_point_theta_n(model, n):
    """
    θ*ⁿ = N⁻¹b.

    Raises:
        SingularMatrixError: N singular, so A(n) cannot be Schur and the
            n-step projected Bellman equation has no unique solution
    """
    matrix_n = pbe_matrix_n(model, n)
    try:
        theta = kernels.solve(matrix_n, pbe_vector_b(model, n))
    except SingularMatrixError as e:
        raise SingularMatrixError(
            f"N is singular at n={n}: the n-step projected Bellman equation has no unique "
            f"solution and A({n}) is not Schur ({e})",
            details={'n': n, **e.details},
        )

    values = model.features @ theta
    residual = kernels.norm_inf(values - projected_bellman_n(model, n, values))
    scale = max(1.0, kernels.norm_inf(values))
    if residual > settings.NUMERICS['FIXED_POINT_TOL'] * scale:
        logger.warning(f"θ*ⁿ at n={n}: fixed-point residual {residual:.3e} above tolerance")

    return theta


def theta_star_pbe(model):
    """
    θ* = −(ΦᵀD^β(γP^π − I)Φ)⁻¹ΦᵀD^βR^π.

    Raises:
        SingularMatrixError: ΦᵀD^β(γP^π − I)Φ singular
    """
    weighted_t = weighted_features_t(model)
    identity = np.eye(model.num_states)
    matrix = weighted_t @ (model.gamma * model.p_pi - identity) @ model.features
    try:
        return -kernels.solve(matrix, weighted_t @ model.r_pi)
    except SingularMatrixError as e:
        raise SingularMatrixError(
            f"ΦᵀD^β(γP^π − I)Φ is singular; the projected Bellman equation has no unique solution ({e})",
            details=e.details,
        )


def theta_infinity(model):
    """
    θ*∞ = (ΦᵀD^βΦ)⁻¹ΦᵀD^βV^π, so Φθ*∞ = ΠV^π.
    """
    return kernels.solve(model.gram, weighted_features_t(model) @ model.v_pi)


def mspbe(model, theta, n=1):
    """
    ½‖ΠTⁿ(Φθ) − Φθ‖²_{D^β}.
    """
    values = model.features @ np.asarray(theta, dtype=float)
    residual = projected_bellman_n(model, n, values) - values
    return 0.5 * kernels.weighted_norm(residual, model.d_beta) ** 2


def error_bounds(model, n):
    """
    Bounds on ‖Φθ*ⁿ − V^π‖∞ and ‖Φθ*ⁿ − Φθ*∞‖∞ next to the actual errors.

    Raises:
        ContractionPreconditionError: γⁿ‖Π‖∞ ≥ 1
        InvariantViolation: an actual error exceeds its bound
    """
    contraction = gamma_n_pi_norm(model, n)
    if not contraction < 1.0:
        raise ContractionPreconditionError(
            f"error bounds need γⁿ‖Π‖∞ < 1, got {contraction:.6g} at n={n}",
            details={'n': n, 'gamma_n_pi_norm': contraction},
        )

    projected_v = model.pi_proj @ model.v_pi
    approximation_error = kernels.norm_inf(projected_v - model.v_pi)
    value_error_bound = approximation_error / (1.0 - contraction)
    projection_error_bound = contraction * value_error_bound

    values = model.features @ fixed_point_theta_n(model, n)
    bounds = ErrorBounds(
        n=n,
        gamma_n_pi_norm=contraction,
        approximation_error=approximation_error,
        value_error_bound=value_error_bound,
        projection_error_bound=projection_error_bound,
        value_error=kernels.norm_inf(values - model.v_pi),
        projection_error=kernels.norm_inf(values - model.features @ theta_infinity(model)),
    )

    slack = 1e-9 * max(1.0, kernels.norm_inf(model.v_pi))
    if bounds.value_error > bounds.value_error_bound + slack:
        raise InvariantViolation(f"n={n}: ‖Φθ*ⁿ − V^π‖∞ = {bounds.value_error} exceeds {value_error_bound}")
    if bounds.projection_error > bounds.projection_error_bound + slack:
        raise InvariantViolation(f"n={n}: ‖Φθ*ⁿ − Φθ*∞‖∞ = {bounds.projection_error} exceeds {projection_error_bound}")

    return bounds
