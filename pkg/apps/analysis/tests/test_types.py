"""
Analysis Type Tests
-------------------
StabilityReport and BoundSet invariants around the marginal bands.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.analysis.types import BoundSet, Criterion, StabilityReport
from apps.linalg.types import Spectrum, Stability
from core.exceptions import InvariantViolation


class StabilityReportTests(SimpleTestCase):
    """Test StabilityReport invariants"""

    def _report(self, **overrides):
        spectrum = Spectrum.from_eigenvalues([1.0])
        fields = {
            'n': 2,
            'matrix_a': np.array([[1.0]]),
            'matrix_n': np.array([[1e-12]]),
            'matrix_s': np.array([[-1e-12]]),
            'a_spectrum': spectrum,
            's_spectrum': Spectrum.from_eigenvalues([-1e-12]),
            'a_is_schur': False,
            'n_is_nonsingular': False,
            's_is_hurwitz': False,
            's_symmetric_part_negdef': False,
            'inf_norm_contraction': False,
            'gamma_n_pi_norm': 1.0,
            'a_stability': Stability.MARGINAL,
            's_stability': Stability.MARGINAL,
        }
        fields.update(overrides)
        return StabilityReport(**fields)

    def test_marginal_contraction_accepted(self):
        """Test a contraction next to a marginal A is not a violation"""
        report = self._report(inf_norm_contraction=True, weighted_contraction=True)
        self.assertFalse(report.a_is_schur)

    def test_unstable_contraction_rejected(self):
        """Test a contraction next to an unstable A is a violation"""
        with self.assertRaises(InvariantViolation):
            self._report(inf_norm_contraction=True, a_stability=Stability.UNSTABLE)
        with self.assertRaises(InvariantViolation):
            self._report(weighted_contraction=True, a_stability=Stability.UNSTABLE)

    def test_marginal_negdef_accepted(self):
        """Test S + Sᵀ negative definite next to a marginal S"""
        report = self._report(s_symmetric_part_negdef=True, s_stability=Stability.MARGINAL)
        self.assertFalse(report.s_is_hurwitz)
        with self.assertRaises(InvariantViolation):
            self._report(s_symmetric_part_negdef=True, s_stability=Stability.UNSTABLE)

    def test_stable_a_needs_nonsingular_n(self):
        """Test a stable A with a singular N is a violation"""
        self._report()
        with self.assertRaises(InvariantViolation):
            self._report(a_is_schur=True, a_stability=Stability.STABLE)

    def test_s_must_be_minus_n(self):
        """Test S = −N entrywise"""
        with self.assertRaises(InvariantViolation):
            self._report(matrix_s=np.array([[1.0]]))


class BoundSetTests(SimpleTestCase):
    """Test BoundSet invariants"""

    def _bounds(self, **overrides):
        fields = {
            'n1_upper': 4,
            'n2_upper': 6,
            'nth_upper': 10,
            'min_n_schur': 3,
            'min_n_contraction_inf': 5,
            'min_n_contraction_weighted': 4,
            'min_n_hurwitz': 2,
            'min_n_negdef': 3,
            'n_max': 12,
        }
        fields.update(overrides)
        return BoundSet(**fields)

    def _flags(self, *horizons, n_max=12):
        return tuple(n in horizons for n in range(1, n_max + 1))

    def test_consistent(self):
        """Test a consistent bound set"""
        self.assertEqual(self._bounds().min_n_schur, 3)

    def test_threshold_above_bound_rejected(self):
        """Test a Schur threshold beyond n₁ is a violation"""
        with self.assertRaises(InvariantViolation):
            self._bounds(min_n_schur=5)

    def test_threshold_above_marginal_bound_accepted(self):
        """Test a Schur threshold beyond n₁ when A is marginal at n₁"""
        bounds = self._bounds(
            min_n_schur=5,
            min_n_contraction_inf=6,
            min_n_contraction_weighted=6,
            marginal={Criterion.SCHUR.value: self._flags(4)},
        )
        self.assertTrue(bounds.marginal_at(Criterion.SCHUR, 4))
        self.assertFalse(bounds.marginal_at(Criterion.SCHUR, 5))

    def test_not_found_inside_range(self):
        """Test an unfound Hurwitz threshold with n_th in range"""
        with self.assertRaises(InvariantViolation):
            self._bounds(min_n_hurwitz=None, min_n_negdef=None)
        self._bounds(
            min_n_hurwitz=None,
            min_n_negdef=None,
            marginal={
                Criterion.HURWITZ.value: self._flags(10),
                Criterion.NEGDEF.value: self._flags(10),
            },
        )

    def test_not_found_beyond_range(self):
        """Test an unfound threshold with its bound past n_max"""
        self._bounds(min_n_hurwitz=None, min_n_negdef=None, nth_upper=40)

    def test_ordering(self):
        """Test contraction before Schur is tolerated only inside the band"""
        with self.assertRaises(InvariantViolation):
            self._bounds(min_n_contraction_weighted=2)
        self._bounds(
            min_n_contraction_weighted=2,
            marginal={Criterion.SCHUR.value: self._flags(2)},
        )

    def test_marginal_flags_out_of_range(self):
        """Test marginal_at outside the searched horizons"""
        bounds = self._bounds(marginal={Criterion.SCHUR.value: self._flags(1, n_max=3)})
        self.assertTrue(bounds.marginal_at(Criterion.SCHUR, 1))
        self.assertFalse(bounds.marginal_at(Criterion.SCHUR, 0))
        self.assertFalse(bounds.marginal_at(Criterion.SCHUR, 7))
