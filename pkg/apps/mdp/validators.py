"""
MDP Validators
--------------
Invariant checks for problem files.

Responsibilities:
- Validate tensor and matrix dimensions
- Validate stochastic rows (transition, policies)
- Validate the importance-sampling support condition
- Validate the discount and state weights
- Validate full column rank of the features

Each validator returns the checked numpy array and raises
SpecValidationError naming the offending field and entry.
"""
import numpy as np
from django.conf import settings

from core.exceptions import RankDeficientError, SpecValidationError


def _tol(override=None):
    return settings.NUMERICS['STOCHASTIC_TOL'] if override is None else override


def validate_shape(name, value, shape):
    """
    Coerce to a float array of exactly the given shape.
    """
    try:
        array = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SpecValidationError(f"{name}: ragged or non-numeric array", field=name)

    if array.shape != tuple(shape):
        raise SpecValidationError(
            f"{name}: expected shape {tuple(shape)}, got {array.shape}",
            field=name,
        )

    if not np.all(np.isfinite(array)):
        index = tuple(int(i) for i in np.argwhere(~np.isfinite(array))[0])
        raise SpecValidationError(f"{name}{list(index)}: entry is not finite", field=name, index=index)

    return array


def validate_stochastic_rows(name, matrix, tol=None):
    """
    Every row sums to 1 within tolerance and has no negative entry.

    Works on matrices and on stacks of matrices (last axis is the row).
    """
    negative = np.argwhere(matrix < 0.0)
    if negative.size:
        index = tuple(int(i) for i in negative[0])
        raise SpecValidationError(
            f"{name}{list(index)} = {matrix[index]}: negative probability",
            field=name,
            index=index,
        )

    above_one = np.argwhere(matrix > 1.0 + _tol(tol))
    if above_one.size:
        index = tuple(int(i) for i in above_one[0])
        raise SpecValidationError(
            f"{name}{list(index)} = {matrix[index]}: probability above 1",
            field=name,
            index=index,
        )

    sums = matrix.sum(axis=-1)
    bad = np.argwhere(np.abs(sums - 1.0) > _tol(tol))
    if bad.size:
        index = tuple(int(i) for i in bad[0])
        raise SpecValidationError(
            f"{name}{list(index)}: row not stochastic (sums to {sums[index]!r})",
            field=name,
            index=index,
        )

    return matrix


def validate_support(target_policy, behavior_policy):
    """
    β[s][a] > 0 wherever π[s][a] > 0.
    """
    uncovered = np.argwhere((target_policy > 0.0) & (behavior_policy <= 0.0))
    if uncovered.size:
        index = tuple(int(i) for i in uncovered[0])
        raise SpecValidationError(
            f"behavior_policy{list(index)} is zero where target_policy is positive",
            field='behavior_policy',
            index=index,
        )
    return behavior_policy


def validate_discount(gamma):
    if not 0.0 < gamma < 1.0:
        raise SpecValidationError(f"gamma must lie in (0, 1), got {gamma}", field='gamma')
    return float(gamma)


def validate_state_weights(weights, tol=None):
    """
    Strictly positive and summing to 1.
    """
    nonpositive = np.argwhere(weights <= 0.0)
    if nonpositive.size:
        index = (int(nonpositive[0][0]),)
        raise SpecValidationError(
            f"state_weights{list(index)} must be positive",
            field='state_weights',
            index=index,
        )
    if abs(float(weights.sum()) - 1.0) > _tol(tol):
        raise SpecValidationError(
            f"state_weights sum to {weights.sum()!r}, expected 1",
            field='state_weights',
        )
    return weights


def validate_full_column_rank(features, rank_tol=None):
    """
    Smallest singular value of Φ relative to the largest, via eigenvalues of ΦᵀΦ.
    """
    rank_tol = settings.NUMERICS['RANK_TOL'] if rank_tol is None else rank_tol
    num_states, num_features = features.shape

    if num_features > num_states:
        raise RankDeficientError(
            f"features have {num_features} columns but only {num_states} rows",
            details={'rank_ratio': 0.0},
        )

    eigenvalues = np.linalg.eigvalsh(features.T @ features)
    largest = float(eigenvalues[-1])
    smallest = max(float(eigenvalues[0]), 0.0)
    ratio = 0.0 if largest <= 0.0 else float(np.sqrt(smallest / largest))

    if ratio < rank_tol:
        raise RankDeficientError(
            f"features are rank-deficient (σ_min/σ_max = {ratio:.3e})",
            details={'rank_ratio': ratio},
        )

    return features
