"""
Horizon Bounds
--------------
Sufficient horizons that certify stability, and searches for the true ones.

Responsibilities:
- bound_n1: horizon with ‖A‖∞ < 1 from ‖(ΦᵀD^βΦ)⁻¹ΦᵀD^β‖∞·‖Φ‖∞
- bound_n2: horizon with γⁿ‖Π‖∞ < 1
- bound_nth: horizon where S + Sᵀ is negative definite (two branches)
- min_n_search: smallest horizon meeting a criterion, plus its bitmap
- bound_set: everything above, with the dominance invariants checked
"""
import logging
import math

import numpy as np
from django.conf import settings

from apps.analysis.services.matrices import iteration_matrix_a, weighted_features_t
from apps.analysis.types import Branch, BoundSet, Criterion, NthBound, SearchResult
from apps.linalg import kernels
from apps.linalg.types import Stability
from core.exceptions import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)


def least_horizon(factor, gamma):
    """
    Least n ≥ 1 with γⁿ·factor < 1.

    This is ⌈ln(1/factor)/ln γ⌉, one higher when the quotient is an exact
    integer, and 1 whenever factor ≤ 1.
    """
    if gamma * factor < 1.0:
        return 1

    n = math.floor(math.log(factor) / -math.log(gamma)) + 1
    # Float guard around the exact-integer case
    while gamma ** n * factor >= 1.0:
        n += 1
    while n > 1 and gamma ** (n - 1) * factor < 1.0:
        n -= 1
    return n


def horizon_ratio(q, gamma):
    """
    ln(q)/ln γ, the real-valued horizon before rounding.
    """
    return math.log(q) / math.log(gamma)


def bound_n1(model):
    """
    Horizon after which ‖A‖∞ < 1.

    Raises:
        InvariantViolation: the returned horizon fails the direct norm check
    """
    weighted_solve = kernels.solve(model.gram, weighted_features_t(model))
    factor = kernels.norm_inf(weighted_solve) * kernels.norm_inf(model.features)
    n = least_horizon(factor, model.gamma)

    a_norm = kernels.norm_inf(iteration_matrix_a(model, n))
    if not a_norm < 1.0:
        raise InvariantViolation(f"bound_n1 = {n} but ‖A({n})‖∞ = {a_norm!r}")

    return n


def bound_n2(model):
    """
    Horizon after which γⁿ‖Π‖∞ < 1.
    """
    return least_horizon(kernels.norm_inf(model.pi_proj), model.gamma)


def nth_bound(model):
    """
    Both branches of the horizon that makes S + Sᵀ negative definite.

    φ_max² is the largest squared feature-row norm, max_s ‖φ(s)‖₂².
    """
    features = model.features
    gram_unweighted = kernels.eig_symmetric(features.T @ features)
    lambda_min, lambda_max = float(gram_unweighted[0]), float(gram_unweighted[-1])
    d_min, d_max = float(np.min(model.d_beta)), float(np.max(model.d_beta))
    phi_max_sq = float(np.max(np.sum(features * features, axis=1)))

    q1 = d_min * lambda_min / phi_max_sq
    q2 = (d_min * lambda_min) / (d_max * lambda_max) / math.sqrt(model.num_states)
    winner = Branch.Q1 if q1 >= q2 else Branch.Q2

    result = NthBound(
        q1=q1,
        q2=q2,
        q1_ratio=horizon_ratio(q1, model.gamma),
        q2_ratio=horizon_ratio(q2, model.gamma),
        winner=winner.value,
        nth_upper=least_horizon(1.0 / max(q1, q2), model.gamma),
        d_min=d_min,
        d_max=d_max,
        lambda_min=lambda_min,
        lambda_max=lambda_max,
        phi_max_sq=phi_max_sq,
    )
    logger.debug(f"n_th branches: q1 ratio {result.q1_ratio:.4f}, q2 ratio {result.q2_ratio:.4f}, winner {winner.value}")
    return result


def bound_nth(model):
    return nth_bound(model).nth_upper


def default_search_cap(model, nth_upper=None):
    """
    max(NTH_MULTIPLIER·n_th, FLOOR).
    """
    nth_upper = bound_nth(model) if nth_upper is None else nth_upper
    defaults = settings.SEARCH_DEFAULTS
    return max(defaults['NTH_MULTIPLIER'] * nth_upper, defaults['FLOOR'])


def _criterion_verdict(model, criterion, discounted_power, weighted_t):
    """
    (holds, marginal) for one criterion at one horizon.

    Marginal verdicts sit inside the same bands kernels.schur_stability and
    kernels.hurwitz_stability use.
    """
    numerics = settings.NUMERICS

    if criterion == Criterion.SCHUR:
        a = kernels.solve(model.gram, weighted_t @ discounted_power @ model.features)
        spectrum = kernels.eig_general(a)
        return kernels.is_schur(spectrum), kernels.schur_stability(spectrum) == Stability.MARGINAL

    if criterion in (Criterion.CONTRACTION_INF, Criterion.CONTRACTION_WEIGHTED):
        if criterion == Criterion.CONTRACTION_INF:
            factor = kernels.norm_inf(model.pi_proj @ discounted_power)
        else:
            factor = kernels.weighted_operator_norm(discounted_power, model.d_beta)
        return factor < 1.0 - numerics['SCHUR_MARGIN'], abs(factor - 1.0) < numerics['MARGINAL_RHO']

    s = weighted_t @ (discounted_power - np.eye(model.num_states)) @ model.features
    if criterion == Criterion.HURWITZ:
        spectrum = kernels.eig_general(s)
        return kernels.is_hurwitz(spectrum), kernels.hurwitz_stability(spectrum) == Stability.MARGINAL
    if criterion == Criterion.NEGDEF:
        top = kernels.eig_symmetric(kernels.symmetric_part(s))[-1]
        return bool(top < -numerics['HURWITZ_MARGIN']), bool(abs(top) < numerics['HURWITZ_MARGIN'])

    raise PreconditionError(f"unknown criterion {criterion!r}")


def search_criteria(model, criteria, n_max):
    """
    Evaluate several criteria for n = 1..n_max in one pass over (P^π)ⁿ.

    Returns:
        dict: criterion value -> SearchResult
    """
    if n_max < 1:
        raise PreconditionError(f"n_max must be at least 1, got {n_max}")

    criteria = [Criterion(c) for c in criteria]
    weighted_t = weighted_features_t(model)
    bitmaps = {criterion: [] for criterion in criteria}
    marginal = {criterion: [] for criterion in criteria}

    discounted_power = np.eye(model.num_states)
    for _ in range(n_max):
        discounted_power = model.gamma * (discounted_power @ model.p_pi)
        for criterion in criteria:
            holds, on_boundary = _criterion_verdict(model, criterion, discounted_power, weighted_t)
            bitmaps[criterion].append(bool(holds))
            marginal[criterion].append(bool(on_boundary))

    results = {}
    for criterion, bitmap in bitmaps.items():
        first = next((i + 1 for i, ok in enumerate(bitmap) if ok), None)
        if first is None:
            logger.warning(f"{model.spec.name or 'model'}: criterion {criterion.value} not met for any n ≤ {n_max}")
        results[criterion.value] = SearchResult(
            criterion=criterion.value,
            n_max=n_max,
            first=first,
            bitmap=tuple(bitmap),
            marginal=tuple(marginal[criterion]),
        )
    return results


def min_n_search(model, criterion, n_max=None):
    """
    Smallest n ≤ n_max meeting the criterion (not-found is first=None).
    """
    n_max = default_search_cap(model) if n_max is None else n_max
    return search_criteria(model, [criterion], n_max)[Criterion(criterion).value]


def bound_set(model, n_max=None):
    """
    Raises:
        InvariantViolation: a threshold exceeds its sufficient bound
    """
    nth = nth_bound(model)
    n_max = default_search_cap(model, nth.nth_upper) if n_max is None else n_max
    searches = search_criteria(model, Criterion.values, n_max)

    bounds = BoundSet(
        n1_upper=bound_n1(model),
        n2_upper=bound_n2(model),
        nth_upper=nth.nth_upper,
        min_n_schur=searches[Criterion.SCHUR.value].first,
        min_n_contraction_inf=searches[Criterion.CONTRACTION_INF.value].first,
        min_n_contraction_weighted=searches[Criterion.CONTRACTION_WEIGHTED.value].first,
        min_n_hurwitz=searches[Criterion.HURWITZ.value].first,
        min_n_negdef=searches[Criterion.NEGDEF.value].first,
        n_max=n_max,
        nth=nth,
        bitmaps={key: result.bitmap for key, result in searches.items()},
        marginal={key: result.marginal for key, result in searches.items()},
    )
    logger.info(
        f"Bounds for {model.spec.name or 'model'}: n1={bounds.n1_upper} n2={bounds.n2_upper} "
        f"nth={bounds.nth_upper} schur={bounds.min_n_schur} hurwitz={bounds.min_n_hurwitz}"
    )
    return bounds
