"""
MDP Types
---------
Immutable value objects for a finite MDP and everything derived from it.

Arrays are made read-only on construction so instances can be shared
between concurrent runs.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


def _frozen(array):
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class MdpSpec:
    """
    Raw finite MDP as read from a problem file.

    transition and reward are indexed [a][s][s′]; policies are [s][a].
    """
    num_states: int
    num_actions: int
    transition: np.ndarray
    reward: np.ndarray
    discount: float
    features: np.ndarray
    target_policy: np.ndarray
    behavior_policy: np.ndarray
    state_weights: Optional[np.ndarray] = None
    name: str = ''
    content_hash: str = ''

    def __post_init__(self):
        for attr in ('transition', 'reward', 'features', 'target_policy', 'behavior_policy'):
            object.__setattr__(self, attr, _frozen(getattr(self, attr)))
        if self.state_weights is not None:
            object.__setattr__(self, 'state_weights', _frozen(self.state_weights))

    @property
    def num_features(self):
        return self.features.shape[1]

    @property
    def is_on_policy(self):
        return bool(np.array_equal(self.target_policy, self.behavior_policy))


@dataclass(frozen=True)
class DerivedModel:
    """
    Everything computable from an MdpSpec.

    D_beta is exposed as a property; gram and gram_inv are ΦᵀD^βΦ and its inverse.
    """
    spec: MdpSpec
    p_pi: np.ndarray
    p_beta: np.ndarray
    r_pi: np.ndarray
    d_beta: np.ndarray
    v_pi: np.ndarray
    pi_proj: np.ndarray
    gram: np.ndarray
    gram_inv: np.ndarray
    stationary_computed: bool = field(default=True)

    def __post_init__(self):
        for attr in ('p_pi', 'p_beta', 'r_pi', 'd_beta', 'v_pi', 'pi_proj', 'gram', 'gram_inv'):
            object.__setattr__(self, attr, _frozen(getattr(self, attr)))

    @property
    def D_beta(self):
        return np.diag(self.d_beta)

    @property
    def features(self):
        return self.spec.features

    @property
    def gamma(self):
        return self.spec.discount

    @property
    def num_states(self):
        return self.spec.num_states

    @property
    def num_features(self):
        return self.spec.num_features
