"""
Bellman Operators
-----------------
The n-step Bellman operator Tⁿ and its projection ΠTⁿ on |S|-vectors.

Tⁿ(x) = Σ_{k<n} γᵏ(P^π)ᵏR^π + γⁿ(P^π)ⁿx
"""
import numpy as np

from apps.linalg import kernels
from core.exceptions import PreconditionError


def check_horizon(n):
    if int(n) != n or n < 1:
        raise PreconditionError(f"horizon n must be a positive integer, got {n!r}")
    return int(n)


def n_step_terms(model, n):
    """
    Affine parts of Tⁿ.

    Returns:
        tuple: (Σ_{k<n} γᵏ(P^π)ᵏR^π, γⁿ(P^π)ⁿ)
    """
    n = check_horizon(n)
    gamma, p_pi = model.gamma, model.p_pi

    reward_part = np.zeros(model.num_states)
    term = model.r_pi.copy()
    discounted_power = np.eye(model.num_states)
    for _ in range(n):
        reward_part += term
        term = gamma * (p_pi @ term)
        discounted_power = gamma * (discounted_power @ p_pi)

    return reward_part, discounted_power


def bellman_n(model, n, x):
    reward_part, discounted_power = n_step_terms(model, n)
    return reward_part + discounted_power @ np.asarray(x, dtype=float)


def projected_bellman_n(model, n, x):
    return model.pi_proj @ bellman_n(model, n, x)


def bellman_lipschitz_weighted(model, n, projected=False):
    """
    Lipschitz constant of Tⁿ (or ΠTⁿ) in ‖·‖_{D^β}.

    Equals the D^β-induced norm of γⁿ(P^π)ⁿ, or of γⁿΠ(P^π)ⁿ when projected.
    """
    _, discounted_power = n_step_terms(model, n)
    if projected:
        discounted_power = model.pi_proj @ discounted_power
    return kernels.weighted_operator_norm(discounted_power, model.d_beta)


def bellman_lipschitz_inf(model, n, projected=True):
    """
    Lipschitz constant of ΠTⁿ (or Tⁿ) in ‖·‖∞; never above γⁿ‖Π‖∞.
    """
    _, discounted_power = n_step_terms(model, n)
    if projected:
        discounted_power = model.pi_proj @ discounted_power
    return kernels.norm_inf(discounted_power)


def gamma_n_pi_norm(model, n):
    return float(model.gamma ** check_horizon(n) * kernels.norm_inf(model.pi_proj))
