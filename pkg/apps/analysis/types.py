"""
Analysis Types
--------------
Value objects produced by the analysis services.

Every aggregate checks its own invariants on construction; a failure is
an InvariantViolation and always indicates a bug in the computation.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from django.db import models

from apps.linalg.types import Spectrum, Stability
from core.exceptions import InvariantViolation


class Criterion(models.TextChoices):
    SCHUR = 'schur', 'A is Schur'
    CONTRACTION_INF = 'contraction_inf', 'ΠTⁿ is an ∞-norm contraction'
    CONTRACTION_WEIGHTED = 'contraction_weighted', 'Tⁿ is a D^β-norm contraction'
    HURWITZ = 'hurwitz', 'S is Hurwitz'
    NEGDEF = 'negdef', 'S + Sᵀ is negative definite'


class Branch(models.TextChoices):
    Q1 = 'q1', 'Feature-norm branch'
    Q2 = 'q2', 'Spectral branch'


@dataclass(frozen=True)
class TdMatrixVerdict:
    """
    S = ΦᵀD^β(γⁿ(P^π)ⁿ − I)Φ with its two stability verdicts.
    """
    n: int
    matrix: np.ndarray
    spectrum: Spectrum
    symmetric_eigenvalues: np.ndarray
    stability: str
    is_hurwitz: bool
    is_negdef: bool


@dataclass(frozen=True)
class StabilityReport:
    """
    Every diagnostic of the n-step projected problem at one horizon.
    """
    n: int
    matrix_a: np.ndarray
    matrix_n: np.ndarray
    matrix_s: np.ndarray
    a_spectrum: Spectrum
    s_spectrum: Spectrum
    a_is_schur: bool
    n_is_nonsingular: bool
    s_is_hurwitz: bool
    s_symmetric_part_negdef: bool
    inf_norm_contraction: bool
    gamma_n_pi_norm: float
    alpha_star_lower: Optional[float] = None
    a_stability: str = Stability.STABLE
    s_stability: str = Stability.STABLE
    inf_contraction_factor: float = math.nan
    weighted_contraction: bool = False
    weighted_contraction_factor: float = math.nan
    det_n: float = math.nan

    def __post_init__(self):
        self.check_invariants()

    def check_invariants(self):
        # Implications are checked against the three-way verdicts so values
        # inside the marginal bands never trip them
        if not np.array_equal(self.matrix_s, -self.matrix_n):
            raise InvariantViolation(f"n={self.n}: S is not −N entrywise")
        if self.a_stability == Stability.STABLE and not self.n_is_nonsingular:
            raise InvariantViolation(f"n={self.n}: A is Schur but N is singular")
        if self.s_symmetric_part_negdef and self.s_stability == Stability.UNSTABLE:
            raise InvariantViolation(f"n={self.n}: S + Sᵀ negative definite but S not Hurwitz")
        if self.inf_norm_contraction and self.a_stability == Stability.UNSTABLE:
            raise InvariantViolation(f"n={self.n}: ∞-norm contraction without a Schur iteration matrix")
        if self.weighted_contraction and self.a_stability == Stability.UNSTABLE:
            raise InvariantViolation(f"n={self.n}: D^β-norm contraction without a Schur iteration matrix")


@dataclass(frozen=True)
class NthBound:
    """
    Both branches of the Hurwitz horizon bound.

    q1 = d_min·λ_min(ΦᵀΦ)/φ_max², q2 = d_min·λ_min(ΦᵀΦ)/(d_max·λ_max(ΦᵀΦ)·√|S|);
    the bound uses the larger one.
    """
    q1: float
    q2: float
    q1_ratio: float
    q2_ratio: float
    winner: str
    nth_upper: int
    d_min: float
    d_max: float
    lambda_min: float
    lambda_max: float
    phi_max_sq: float


@dataclass(frozen=True)
class SearchResult:
    """
    First horizon satisfying a criterion, with the full satisfaction bitmap.

    bitmap[i] is the verdict at n = i + 1. Satisfaction is not monotone in n.
    """
    criterion: str
    n_max: int
    first: Optional[int]
    bitmap: tuple
    marginal: tuple = ()

    @property
    def found(self):
        return self.first is not None

    def satisfied_at(self, n):
        return bool(self.bitmap[n - 1])


@dataclass(frozen=True)
class BoundSet:
    """
    Sufficient horizon bounds next to the searched true thresholds.
    """
    n1_upper: int
    n2_upper: int
    nth_upper: int
    min_n_schur: Optional[int]
    min_n_contraction_inf: Optional[int]
    min_n_contraction_weighted: Optional[int]
    min_n_hurwitz: Optional[int]
    min_n_negdef: Optional[int]
    n_max: int
    nth: Optional[NthBound] = None
    bitmaps: dict = field(default_factory=dict)
    marginal: dict = field(default_factory=dict)

    def __post_init__(self):
        self.check_invariants()

    def marginal_at(self, criterion, n):
        flags = self.marginal.get(criterion, ())
        return 0 < n <= len(flags) and bool(flags[n - 1])

    def _dominated(self, found, upper, criterion):
        if found is not None and found <= upper:
            return
        # An unfound threshold only contradicts a bound that lies inside the search range
        if found is None and upper > self.n_max:
            return
        if self.marginal_at(criterion, upper):
            return
        if found is None:
            raise InvariantViolation(f"{criterion}: none found up to {self.n_max} but bound is {upper}")
        raise InvariantViolation(f"{criterion}: threshold {found} exceeds its bound {upper}")

    def _ordered(self, earlier, later, criterion, label):
        # `criterion` must already hold wherever `later` first holds
        if later is None or (earlier is not None and earlier <= later):
            return
        if self.marginal_at(criterion, later):
            return
        raise InvariantViolation(label.format(n=later))

    def check_invariants(self):
        self._dominated(self.min_n_schur, self.n1_upper, Criterion.SCHUR)
        self._dominated(self.min_n_contraction_inf, self.n2_upper, Criterion.CONTRACTION_INF)
        self._dominated(self.min_n_hurwitz, self.nth_upper, Criterion.HURWITZ)
        self._dominated(self.min_n_negdef, self.nth_upper, Criterion.NEGDEF)

        self._ordered(
            self.min_n_schur, self.min_n_contraction_inf, Criterion.SCHUR,
            "contraction_inf holds at n={n} before A is Schur",
        )
        self._ordered(
            self.min_n_schur, self.min_n_contraction_weighted, Criterion.SCHUR,
            "contraction_weighted holds at n={n} before A is Schur",
        )
        self._ordered(
            self.min_n_hurwitz, self.min_n_negdef, Criterion.HURWITZ,
            "S + Sᵀ negative definite at n={n} before S is Hurwitz",
        )


@dataclass(frozen=True)
class ErrorBounds:
    """
    Error bounds for the n-step fixed point and the errors actually attained.

    value_error_bound bounds ‖Φθ*ⁿ − V^π‖∞; projection_error_bound bounds
    ‖Φθ*ⁿ − Φθ*∞‖∞ and vanishes as n grows.
    """
    n: int
    gamma_n_pi_norm: float
    approximation_error: float
    value_error_bound: float
    projection_error_bound: float
    value_error: float
    projection_error: float
