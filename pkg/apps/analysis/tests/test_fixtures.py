"""
Fixture Diagnostics Tests
-------------------------
Bounds, thresholds and matrices on the shipped example problems.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.analysis.services.bounds import bound_n1, bound_n2, bound_nth, bound_set, min_n_search, nth_bound
from apps.analysis.services.matrices import iteration_matrix_a, pbe_matrix_n, td_matrix_s
from apps.analysis.services.stability import stability_report
from apps.analysis.types import Branch, Criterion
from apps.linalg import kernels
from apps.mdp.tests.factories import load_fixture_model


class TwoStateOffPolicyTests(SimpleTestCase):
    """Test the two-state, two-action problem (mdp_d)"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model = load_fixture_model('mdp_d')

    def test_sufficient_bounds(self):
        """Test n1 = 11, n2 = 11, n_th = 54"""
        self.assertEqual(bound_n1(self.model), 11)
        self.assertEqual(bound_n2(self.model), 11)
        self.assertEqual(bound_nth(self.model), 54)

    def test_projection_norm(self):
        """Test ‖Π‖∞ and the winning branch"""
        self.assertAlmostEqual(kernels.norm_inf(self.model.pi_proj), 1.1134904, places=6)
        nth = nth_bound(self.model)
        self.assertEqual(nth.winner, Branch.Q1)
        self.assertAlmostEqual(nth.q1, 0.586229, places=5)

    def test_iteration_matrix_threshold(self):
        """Test ρ(A) ≥ 1 at n=2 and < 1 at n=3"""
        rho_2 = kernels.eig_general(iteration_matrix_a(self.model, 2)).spectral_radius
        rho_3 = kernels.eig_general(iteration_matrix_a(self.model, 3)).spectral_radius
        self.assertGreaterEqual(rho_2, 1.0)
        self.assertLess(rho_3, 1.0)
        self.assertAlmostEqual(rho_3, 0.99377, places=4)

    def test_hurwitz_threshold(self):
        """Test S is Hurwitz at n=3 but not at n=2"""
        self.assertFalse(td_matrix_s(self.model, 2).is_hurwitz)
        self.assertTrue(td_matrix_s(self.model, 3).is_hurwitz)

    def test_bound_set(self):
        """Test the searched minima up to n=60"""
        bounds = bound_set(self.model, n_max=60)
        self.assertEqual((bounds.n1_upper, bounds.n2_upper, bounds.nth_upper), (11, 11, 54))
        self.assertEqual(bounds.min_n_schur, 3)
        self.assertEqual(bounds.min_n_contraction_weighted, 5)
        self.assertEqual(bounds.min_n_hurwitz, 3)
        self.assertEqual(bounds.min_n_negdef, 3)

    def test_inf_norm_contraction_is_gamma_pi_norm(self):
        """Test the ∞-norm threshold equals the γⁿ‖Π‖∞ horizon on nonnegative Π(P^π)ⁿ"""
        self.assertEqual(min_n_search(self.model, Criterion.CONTRACTION_INF, n_max=60).first, 11)
        for n in (1, 5, 11):
            report = stability_report(self.model, n)
            self.assertAlmostEqual(report.inf_contraction_factor, report.gamma_n_pi_norm, places=12)

    def test_weighted_contraction_factors(self):
        """Test γⁿ‖(P^π)ⁿ‖_D straddles 1 between n=4 and n=5"""
        self.assertAlmostEqual(stability_report(self.model, 4).weighted_contraction_factor, 1.00885, places=4)
        self.assertAlmostEqual(stability_report(self.model, 5).weighted_contraction_factor, 0.99906, places=4)

    def test_default_search_cap(self):
        """Test the default cap is 4·n_th"""
        result = min_n_search(self.model, Criterion.SCHUR)
        self.assertEqual(result.n_max, 216)
        self.assertEqual(result.first, 3)
        self.assertFalse(result.satisfied_at(2))


class NonMonotoneHurwitzTests(SimpleTestCase):
    """Test the three-state problem where Hurwitz-ness is lost at n=2 (mdp_e)"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model = load_fixture_model('mdp_e')

    def test_s_values(self):
        """Test S ≈ −0.17 at n=1 and ≈ 0.02 at n=2"""
        s1 = float(td_matrix_s(self.model, 1).matrix[0, 0])
        s2 = float(td_matrix_s(self.model, 2).matrix[0, 0])
        self.assertTrue(-0.19 <= s1 <= -0.15, s1)
        self.assertTrue(0.005 <= s2 <= 0.035, s2)
        self.assertAlmostEqual(s1, -0.170104, places=4)
        self.assertAlmostEqual(s2, 0.026067, places=4)

    def test_hurwitz_bitmap(self):
        """Test the Hurwitz bitmap starts (true, false)"""
        result = min_n_search(self.model, Criterion.HURWITZ, n_max=2)
        self.assertEqual(result.bitmap, (True, False))
        self.assertEqual(result.first, 1)

    def test_branch_flips(self):
        """Test the feature-norm branch wins here"""
        nth = nth_bound(self.model)
        self.assertEqual(nth.winner, Branch.Q1)
        self.assertLess(nth.q1_ratio, nth.q2_ratio)


class BranchComparisonTests(SimpleTestCase):
    """Test the two-state problem where the spectral branch wins (mdp_f)"""

    def test_branch_ratios(self):
        """Test ln(q)/ln γ for both branches"""
        nth = nth_bound(load_fixture_model('mdp_f'))
        self.assertTrue(46 <= nth.q1_ratio <= 50, nth.q1_ratio)
        self.assertTrue(35 <= nth.q2_ratio <= 40, nth.q2_ratio)
        self.assertEqual(nth.winner, Branch.Q2)
        self.assertEqual(nth.nth_upper, int(np.ceil(nth.q2_ratio)))


class NonsingularNotContractionTests(SimpleTestCase):
    """Test the single-action example with nonsingular N and unstable A"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model = load_fixture_model('example1')

    def test_report_at_n1(self):
        """Test N nonsingular while A is not Schur"""
        report = stability_report(self.model, 1)
        self.assertTrue(report.n_is_nonsingular)
        self.assertFalse(report.a_is_schur)
        self.assertGreater(abs(report.det_n), 1e-10)
        self.assertAlmostEqual(report.det_n, -0.94, places=12)
        self.assertAlmostEqual(report.a_spectrum.spectral_radius, 1.188, places=12)

    def test_projected_transition_radius(self):
        """Test ρ(γΠP^π) > 1"""
        model = self.model
        radius = kernels.eig_general(model.gamma * model.pi_proj @ model.p_pi).spectral_radius
        self.assertGreater(radius, 1.0)

    def test_system_matrix(self):
        """Test N = −0.94"""
        np.testing.assert_allclose(pbe_matrix_n(self.model, 1), [[-0.94]], atol=1e-12)

    def test_bounds(self):
        """Test n1 = n2 = 19 with matching minima"""
        bounds = bound_set(self.model)
        self.assertEqual(bounds.n1_upper, 19)
        self.assertEqual(bounds.n2_upper, 19)
        self.assertEqual(bounds.min_n_schur, 19)
        self.assertEqual(bounds.min_n_hurwitz, 19)
