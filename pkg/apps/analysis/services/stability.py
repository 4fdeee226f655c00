"""
Stability Service
-----------------
Per-horizon StabilityReport and the Lyapunov step-size bound.
"""
import logging

import numpy as np
from django.conf import settings

from apps.analysis.services.matrices import iteration_matrix_a, pbe_matrix_n, td_matrix_s
from apps.analysis.services.operators import (
    bellman_lipschitz_inf,
    bellman_lipschitz_weighted,
    check_horizon,
    gamma_n_pi_norm,
)
from apps.analysis.types import StabilityReport
from apps.linalg import kernels
from apps.linalg.types import Stability

logger = logging.getLogger(__name__)


def alpha_star_bound(s):
    """
    1/(λ_max(P)·λ_max(SᵀS)) where SᵀP + PS = −I.

    Every α strictly below this makes I + αS Schur; at equality only
    ρ(I + αS) ≤ 1 is guaranteed.

    Raises:
        NotHurwitzError: S is not Hurwitz
    """
    s = kernels.as_matrix(s, square=True, name='S')
    lyapunov = kernels.lyapunov_solve(s)
    lambda_p = float(kernels.eig_symmetric(lyapunov)[-1])
    lambda_ss = float(kernels.eig_symmetric(s.T @ s)[-1])
    return 1.0 / (lambda_p * lambda_ss)


def safe_alpha(s, safety=None):
    """
    Step size used for automatic Richardson runs: ALPHA_SAFETY·alpha_star_bound.
    """
    safety = settings.ITERATION_DEFAULTS['ALPHA_SAFETY'] if safety is None else safety
    return safety * alpha_star_bound(s)


def stability_report(model, n):
    """
    Build the StabilityReport for horizon n.

    Raises:
        InvariantViolation: a report invariant failed
    """
    n = check_horizon(n)
    numerics = settings.NUMERICS

    matrix_a = iteration_matrix_a(model, n)
    matrix_n = pbe_matrix_n(model, n)
    s_verdict = td_matrix_s(model, n)
    a_spectrum = kernels.eig_general(matrix_a)

    inf_factor = bellman_lipschitz_inf(model, n, projected=True)
    weighted_factor = bellman_lipschitz_weighted(model, n, projected=False)

    report = StabilityReport(
        n=n,
        matrix_a=matrix_a,
        matrix_n=matrix_n,
        matrix_s=s_verdict.matrix,
        a_spectrum=a_spectrum,
        s_spectrum=s_verdict.spectrum,
        a_is_schur=kernels.is_schur(a_spectrum),
        n_is_nonsingular=not kernels.is_singular(matrix_n),
        s_is_hurwitz=s_verdict.is_hurwitz,
        s_symmetric_part_negdef=s_verdict.is_negdef,
        inf_norm_contraction=inf_factor < 1.0 - numerics['SCHUR_MARGIN'],
        gamma_n_pi_norm=gamma_n_pi_norm(model, n),
        alpha_star_lower=alpha_star_bound(s_verdict.matrix) if s_verdict.is_hurwitz else None,
        a_stability=kernels.schur_stability(a_spectrum),
        s_stability=s_verdict.stability,
        inf_contraction_factor=inf_factor,
        weighted_contraction=weighted_factor < 1.0 - numerics['SCHUR_MARGIN'],
        weighted_contraction_factor=weighted_factor,
        det_n=float(np.linalg.det(matrix_n)),
    )

    logger.debug(
        f"n={n}: ρ(A)={a_spectrum.spectral_radius:.6g} schur={report.a_is_schur} "
        f"hurwitz={report.s_is_hurwitz} negdef={report.s_symmetric_part_negdef}"
    )
    if Stability.MARGINAL in (report.a_stability, report.s_stability):
        logger.warning(f"n={n}: marginal spectrum (A {report.a_stability}, S {report.s_stability})")

    return report


def stability_reports(model, n_max):
    return [stability_report(model, n) for n in range(1, n_max + 1)]
