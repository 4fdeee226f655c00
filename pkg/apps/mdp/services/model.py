"""
Model Service
-------------
Quantities induced by an MdpSpec.

Responsibilities:
- Policy-induced transition matrices and expected rewards
- Irreducibility check and stationary distribution
- True value function V^π
- Weighted projection Π onto range(Φ)
- Assembly (and caching) of the DerivedModel
"""
import logging

import numpy as np
from django.conf import settings

from apps.linalg import kernels
from apps.mdp.types import DerivedModel
from core.cache_utils import CacheKeyBuilder, CacheManager, CacheNamespaces
from core.exceptions import LinalgError, ReducibleChainError

logger = logging.getLogger(__name__)


def induced_transition(spec, policy):
    """
    M[s][s′] = Σ_a policy[s][a]·P[a][s][s′].
    """
    policy = np.asarray(policy, dtype=float)
    return np.einsum('sa,ast->st', policy, spec.transition)


def expected_reward(spec, policy):
    """
    R[s] = Σ_a policy[s][a] Σ_s′ P[a][s][s′]·r(s,a,s′).
    """
    policy = np.asarray(policy, dtype=float)
    per_action = np.sum(spec.transition * spec.reward, axis=2)  # [a][s]
    return np.einsum('sa,as->s', policy, per_action)


def reachability(chain):
    """
    Boolean closure: reach[i][j] iff j is reachable from i (reflexive).
    """
    size = chain.shape[0]
    reach = (np.asarray(chain) > 0.0) | np.eye(size, dtype=bool)
    while True:
        expanded = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
        if np.array_equal(expanded, reach):
            return reach
        reach = expanded


def assert_irreducible(chain):
    """
    Raises:
        ReducibleChainError: naming the first unreachable (source, target) pair
    """
    reach = reachability(chain)
    missing = np.argwhere(~reach)
    if missing.size:
        source, target = (int(i) for i in missing[0])
        raise ReducibleChainError(source, target)


def stationary_distribution(chain):
    """
    Stationary distribution of an irreducible chain.

    Solves [chainᵀ − I; 1ᵀ] d = [0; 1] in the least-squares sense, which also
    handles periodic chains.

    Raises:
        ReducibleChainError: chain is reducible
    """
    chain = kernels.as_matrix(chain, square=True, name='chain')
    assert_irreducible(chain)

    size = chain.shape[0]
    system = np.vstack([chain.T - np.eye(size), np.ones((1, size))])
    rhs = np.zeros(size + 1)
    rhs[-1] = 1.0
    d, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    d = d / d.sum()

    if np.any(d <= 0.0):
        raise LinalgError(f"stationary solve produced a nonpositive weight: {d}")

    residual = kernels.norm_inf(d @ chain - d)
    if residual > settings.NUMERICS['STOCHASTIC_TOL']:
        logger.warning(f"Stationary residual {residual:.3e} above tolerance for |S|={size}")

    return d


def true_value(model_or_spec, p_pi=None, r_pi=None):
    """
    Solve (I − γP^π)V = R^π.

    Accepts a DerivedModel, or a spec with explicit p_pi and r_pi (used while
    the DerivedModel is being assembled).
    """
    if p_pi is None:
        p_pi, r_pi = model_or_spec.p_pi, model_or_spec.r_pi
        gamma = model_or_spec.gamma
    else:
        gamma = model_or_spec.discount

    size = p_pi.shape[0]
    return kernels.solve(np.eye(size) - gamma * p_pi, r_pi)


def projection_matrix(features, weights):
    """
    Π = Φ(ΦᵀDΦ)⁻¹ΦᵀD.

    Raises:
        SingularMatrixError: Gram matrix singular to tolerance
    """
    features = kernels.as_matrix(features, name='features')
    weights = np.asarray(weights, dtype=float)
    weighted_t = features.T * weights  # ΦᵀD
    gram = weighted_t @ features
    return features @ kernels.solve(gram, weighted_t)


def derived_model(spec):
    """
    Assemble the DerivedModel for a validated spec.

    Uses spec.state_weights when present, otherwise the stationary
    distribution of P^β.
    """
    p_pi = induced_transition(spec, spec.target_policy)
    p_beta = induced_transition(spec, spec.behavior_policy)
    r_pi = expected_reward(spec, spec.target_policy)

    if spec.state_weights is not None:
        d_beta = np.asarray(spec.state_weights, dtype=float)
        stationary_computed = False
    else:
        d_beta = stationary_distribution(p_beta)
        stationary_computed = True

    features = spec.features
    weighted_t = features.T * d_beta
    gram = weighted_t @ features
    gram_inv = kernels.invert(gram)
    pi_proj = features @ (gram_inv @ weighted_t)
    v_pi = true_value(spec, p_pi=p_pi, r_pi=r_pi)

    logger.debug(f"Derived model {spec.name}: d_beta={np.round(d_beta, 6).tolist()}")

    return DerivedModel(
        spec=spec,
        p_pi=p_pi,
        p_beta=p_beta,
        r_pi=r_pi,
        d_beta=d_beta,
        v_pi=v_pi,
        pi_proj=pi_proj,
        gram=gram,
        gram_inv=gram_inv,
        stationary_computed=stationary_computed,
    )


def cached_derived_model(spec):
    """
    derived_model keyed by the problem file's content hash.
    """
    if not spec.content_hash:
        return derived_model(spec)

    key = CacheKeyBuilder.build(CacheNamespaces.DERIVED_MODEL, spec.content_hash)
    return CacheManager.get_or_set(key, lambda: derived_model(spec))
