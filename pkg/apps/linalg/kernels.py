"""
Dense Kernels
-------------
Small dense linear algebra on numpy arrays (|S| up to ~100, m up to ~20).

Responsibilities:
- Guarded linear solves and inverses (LAPACK gesv, LU with partial pivoting)
- General spectra (LAPACK geev: Hessenberg reduction + shifted QR)
- Symmetric spectra (LAPACK syevd on the symmetrized input)
- Continuous Lyapunov equation via its Kronecker-structured linear system
- ∞-norms and D-weighted norms
- Schur / Hurwitz classification with a marginal band
"""
import logging

import numpy as np
from django.conf import settings

from core.exceptions import (
    EigenConvergenceError,
    LinalgError,
    NotHurwitzError,
    SingularMatrixError,
)

from .types import Spectrum, Stability

logger = logging.getLogger(__name__)


def _numerics(key, override=None):
    return settings.NUMERICS[key] if override is None else override


def as_matrix(a, square=False, name='matrix'):
    """
    Coerce to a finite 2-D float array.

    Raises:
        LinalgError: wrong shape or non-finite entries
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise LinalgError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise LinalgError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LinalgError(f"{name} has non-finite entries")
    return a


def norm_inf(a):
    """
    Max absolute row sum of a matrix, or max absolute entry of a vector.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return float(np.max(np.abs(a))) if a.size else 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


def weighted_norm(x, d):
    """
    ‖x‖_D = sqrt(Σ d[s]·x[s]²).
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    if x.shape != d.shape:
        raise LinalgError(f"weighted_norm: shapes {x.shape} and {d.shape} differ")
    return float(np.sqrt(np.sum(d * x * x)))


def weighted_operator_norm(m, d):
    """
    Operator norm of M induced by ‖·‖_D: ‖D^{1/2} M D^{-1/2}‖₂.
    """
    m = as_matrix(m, square=True)
    root = np.sqrt(np.asarray(d, dtype=float))
    scaled = (root[:, None] * m) / root[None, :]
    return float(np.linalg.norm(scaled, 2))


def condition_ratio(a):
    """
    σ_min/σ_max, 0.0 for an exactly singular matrix.
    """
    singular_values = np.linalg.svd(a, compute_uv=False)
    if singular_values[0] == 0.0:
        return 0.0
    return float(singular_values[-1] / singular_values[0])


def is_singular(a, pivot_tol=None):
    a = as_matrix(a, square=True)
    return condition_ratio(a) < _numerics('PIVOT_TOL', pivot_tol)


def solve(a, b, pivot_tol=None, residual_tol=None):
    """
    Solve A x = b.

    Args:
        a: square matrix
        b: vector or matrix of right-hand sides
        pivot_tol: relative singularity threshold (σ_min/σ_max)
        residual_tol: accepted ‖Ax−b‖∞ / (1+‖b‖∞)

    Returns:
        np.ndarray: x

    Raises:
        SingularMatrixError: A singular to tolerance, or residual too large
    """
    a = as_matrix(a, square=True)
    b = np.asarray(b, dtype=float)

    ratio = condition_ratio(a)
    if ratio < _numerics('PIVOT_TOL', pivot_tol):
        raise SingularMatrixError(
            f"matrix is singular to tolerance (σ_min/σ_max = {ratio:.3e})",
            details={'condition_ratio': ratio},
        )

    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"linear solve failed: {e}")

    residual = norm_inf(a @ x - b)
    scale = 1.0 + norm_inf(b)
    if residual > _numerics('SOLVE_RESIDUAL_TOL', residual_tol) * scale:
        raise SingularMatrixError(
            f"linear solve residual {residual:.3e} exceeds tolerance",
            details={'residual': residual},
        )

    return x


def invert(a, pivot_tol=None):
    a = as_matrix(a, square=True)
    return solve(a, np.eye(a.shape[0]), pivot_tol=pivot_tol)


def eig_general(a):
    """
    Eigenvalues of a general real square matrix.

    Raises:
        EigenConvergenceError: LAPACK QR iteration did not converge
    """
    a = as_matrix(a, square=True)
    try:
        values = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as e:
        raise EigenConvergenceError(f"eigenvalue iteration did not converge: {e}")
    return Spectrum.from_eigenvalues(values)


def eig_symmetric(a, symmetry_tol=None):
    """
    Ascending real eigenvalues of a symmetric matrix.

    The input is symmetrized as (A+Aᵀ)/2 before decomposition.

    Raises:
        LinalgError: input is not symmetric to tolerance
    """
    a = as_matrix(a, square=True)
    scale = max(norm_inf(a), 1.0)
    asymmetry = norm_inf(a - a.T)
    if asymmetry > _numerics('SYMMETRY_TOL', symmetry_tol) * scale:
        raise LinalgError(f"matrix is not symmetric (‖A−Aᵀ‖∞ = {asymmetry:.3e})")

    try:
        return np.linalg.eigvalsh(0.5 * (a + a.T))
    except np.linalg.LinAlgError as e:
        raise EigenConvergenceError(f"symmetric eigenvalue iteration did not converge: {e}")


def symmetric_part(a):
    a = as_matrix(a, square=True)
    return 0.5 * (a + a.T)


def lyapunov_solve(b, hurwitz_margin=None):
    """
    Solve BᵀP + PB = −I for symmetric positive definite P.

    Uses the column-major vectorization
        (I⊗Bᵀ + Bᵀ⊗I) vec(P) = −vec(I).

    Raises:
        NotHurwitzError: B has an eigenvalue with real part ≥ −margin
        SingularMatrixError: Kronecker system singular
    """
    b = as_matrix(b, square=True, name='B')
    spectrum = eig_general(b)
    if not spectrum.max_real_part < -_numerics('HURWITZ_MARGIN', hurwitz_margin):
        raise NotHurwitzError(
            f"Lyapunov equation needs a Hurwitz matrix (max real part {spectrum.max_real_part:.3e})",
            details={'max_real_part': spectrum.max_real_part},
        )

    m = b.shape[0]
    identity = np.eye(m)
    kron = np.kron(identity, b.T) + np.kron(b.T, identity)
    vec_p = solve(kron, -identity.flatten(order='F'))
    p = vec_p.reshape((m, m), order='F')
    p = 0.5 * (p + p.T)

    residual = norm_inf(b.T @ p + p @ b + identity)
    if residual > settings.NUMERICS['LYAPUNOV_RESIDUAL_TOL']:
        logger.warning(f"Lyapunov residual {residual:.3e} above tolerance for m={m}")

    return p


def schur_stability(spectrum, margin=None, marginal_band=None):
    """
    Classify a spectrum for discrete-time stability.

    Marginal when |ρ−1| < marginal_band; stable when ρ < 1 − margin.
    """
    rho = spectrum.spectral_radius
    if abs(rho - 1.0) < _numerics('MARGINAL_RHO', marginal_band):
        return Stability.MARGINAL
    if rho < 1.0 - _numerics('SCHUR_MARGIN', margin):
        return Stability.STABLE
    return Stability.UNSTABLE


def hurwitz_stability(spectrum, margin=None):
    """
    Classify a spectrum for continuous-time stability.
    """
    margin = _numerics('HURWITZ_MARGIN', margin)
    if abs(spectrum.max_real_part) < margin:
        return Stability.MARGINAL
    if spectrum.max_real_part < -margin:
        return Stability.STABLE
    return Stability.UNSTABLE


def is_schur(spectrum, margin=None):
    return spectrum.spectral_radius < 1.0 - _numerics('SCHUR_MARGIN', margin)


def is_hurwitz(spectrum, margin=None):
    return spectrum.max_real_part < -_numerics('HURWITZ_MARGIN', margin)
