"""
Diagnostic Matrices
-------------------
The m×m matrices that govern n-step projected value iteration and n-step TD.

Responsibilities:
- Iteration matrix A = (ΦᵀD^βΦ)⁻¹ΦᵀD^βγⁿ(P^π)ⁿΦ of n-PVI
- Projected Bellman system N θ = b
- ODE matrix S = −N with Hurwitz and negative-definiteness verdicts

A is the linear part of θ_{k+1} − θ*ⁿ = A(θ_k − θ*ⁿ), with a trailing Φ and
a positive sign; Schur-ness does not depend on the sign.
"""
import logging

import numpy as np
from django.conf import settings

from apps.analysis.services.operators import n_step_terms
from apps.analysis.types import TdMatrixVerdict
from apps.linalg import kernels

logger = logging.getLogger(__name__)


def weighted_features_t(model):
    """
    ΦᵀD^β as an m×|S| array.
    """
    return model.features.T * model.d_beta


def iteration_matrix_a(model, n):
    """
    Raises:
        SingularMatrixError: Gram matrix singular
    """
    _, discounted_power = n_step_terms(model, n)
    rhs = weighted_features_t(model) @ discounted_power @ model.features
    return kernels.solve(model.gram, rhs)


def pbe_matrix_n(model, n):
    """
    N = ΦᵀD^β(I − γⁿ(P^π)ⁿ)Φ.
    """
    _, discounted_power = n_step_terms(model, n)
    identity = np.eye(model.num_states)
    return weighted_features_t(model) @ (identity - discounted_power) @ model.features


def pbe_vector_b(model, n):
    """
    b = ΦᵀD^β Σ_{k<n} γᵏ(P^π)ᵏR^π.
    """
    reward_part, _ = n_step_terms(model, n)
    return weighted_features_t(model) @ reward_part


def td_matrix_s(model, n, margin=None):
    """
    S = ΦᵀD^β(γⁿ(P^π)ⁿ − I)Φ with verdicts.

    Hurwitz from the general spectrum; negative definiteness from the
    ascending eigenvalues of (S + Sᵀ)/2.
    """
    margin = settings.NUMERICS['HURWITZ_MARGIN'] if margin is None else margin
    matrix = -pbe_matrix_n(model, n)
    spectrum = kernels.eig_general(matrix)
    symmetric_eigenvalues = kernels.eig_symmetric(kernels.symmetric_part(matrix))

    verdict = TdMatrixVerdict(
        n=n,
        matrix=matrix,
        spectrum=spectrum,
        symmetric_eigenvalues=symmetric_eigenvalues,
        stability=kernels.hurwitz_stability(spectrum, margin=margin),
        is_hurwitz=kernels.is_hurwitz(spectrum, margin=margin),
        is_negdef=bool(symmetric_eigenvalues[-1] < -margin),
    )
    logger.debug(f"S(n={n}): max Re λ = {spectrum.max_real_part:.6g}, hurwitz={verdict.is_hurwitz}")
    return verdict
