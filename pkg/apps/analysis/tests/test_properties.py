"""
Randomized Property Tests
-------------------------
Spectral characterisations checked against direct iteration and norms.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.analysis.services.bounds import bound_n1, bound_set
from apps.analysis.services.matrices import iteration_matrix_a
from apps.analysis.services.operators import (
    bellman_lipschitz_weighted,
    bellman_n,
    projected_bellman_n,
)
from apps.analysis.services.solutions import fixed_point_theta_n
from apps.analysis.services.stability import stability_report
from apps.dp.services.iterations import n_pvi
from apps.linalg import kernels
from apps.mdp.tests.factories import load_fixture_model, random_model

# Spectral radii this close to 1 are reported as marginal and left out of the sweep
MARGINAL_RHO = 1e-6
DRAWS = 50


class SchurCharacterisationTests(SimpleTestCase):
    """Test A Schur ⟺ n-PVI converges, over random models and horizons"""

    def test_schur_iff_convergence(self):
        """Test 100 random and 30 diverging models for n = 1..6 with zero counterexamples"""
        rng = np.random.default_rng(2024)
        models = [random_model(seed, max_states=5, max_features=3) for seed in range(100)]
        models += [random_model(seed, max_states=5, unstable=True) for seed in range(1000, 1030)]
        checked = schur_cases = 0
        for model in models:
            for n in range(1, 7):
                report = stability_report(model, n)
                rho = report.a_spectrum.spectral_radius
                if abs(rho - 1.0) < MARGINAL_RHO:
                    continue

                theta_star = fixed_point_theta_n(model, n) if report.n_is_nonsingular else None
                for _ in range(DRAWS):
                    theta0 = 10.0 * rng.normal(size=model.num_features)
                    trace = n_pvi(model, n, theta0=theta0, max_iters=10_000)
                    converged = trace.converged
                    if converged and theta_star is not None:
                        scale = max(1.0, kernels.norm_inf(theta_star))
                        converged = kernels.norm_inf(trace.final_params - theta_star) < 1e-6 * scale
                    with self.subTest(model=model.spec.name, n=n, rho=rho):
                        self.assertEqual(converged, report.a_is_schur)
                checked += 1
                schur_cases += report.a_is_schur

        self.assertGreater(checked, 400)
        self.assertGreater(schur_cases, 50)
        self.assertGreater(checked - schur_cases, 20)

    def test_unstable_family(self):
        """Test the diverging factory keeps ρ(A) above 1.8 for every n up to 6"""
        for seed in range(1000, 1030):
            model = random_model(seed, max_states=5, unstable=True)
            for n in range(1, 7):
                with self.subTest(seed=seed, n=n):
                    self.assertGreater(kernels.eig_general(iteration_matrix_a(model, n)).spectral_radius, 1.8)

    def test_schur_implies_nonsingular(self):
        """Test |det N| stays away from zero whenever A is Schur"""
        for seed in range(100):
            model = random_model(seed, max_states=5, max_features=3)
            for n in range(1, 7):
                report = stability_report(model, n)
                if report.a_is_schur:
                    threshold = 1e-12 * kernels.norm_inf(report.matrix_n) ** model.num_features
                    self.assertGreater(abs(report.det_n), threshold)

    def test_negdef_implies_hurwitz(self):
        """Test S + Sᵀ negative definite ⇒ S Hurwitz on every report"""
        negdef_seen = 0
        for seed in range(50):
            model = random_model(seed)
            for n in range(1, 9):
                report = stability_report(model, n)
                if report.s_symmetric_part_negdef:
                    self.assertTrue(report.s_is_hurwitz)
                    negdef_seen += 1
        self.assertGreater(negdef_seen, 0)


class OnPolicyTests(SimpleTestCase):
    """Test the on-policy contraction properties"""

    def test_bellman_contraction(self):
        """Test ‖Tⁿx − Tⁿy‖_D ≤ γⁿ‖x − y‖_D for both Tⁿ and ΠTⁿ"""
        rng = np.random.default_rng(3)
        for seed in range(10):
            model = random_model(100 + seed, on_policy=True)
            for n in (1, 3):
                factor = model.gamma ** n
                for _ in range(50):
                    x, y = rng.normal(size=(2, model.num_states)) * 10.0
                    gap = kernels.weighted_norm(x - y, model.d_beta)
                    plain = kernels.weighted_norm(bellman_n(model, n, x) - bellman_n(model, n, y), model.d_beta)
                    projected = kernels.weighted_norm(
                        projected_bellman_n(model, n, x) - projected_bellman_n(model, n, y), model.d_beta
                    )
                    self.assertLessEqual(plain, factor * gap + 1e-12 * max(1.0, gap))
                    self.assertLessEqual(projected, factor * gap + 1e-12 * max(1.0, gap))

    def test_weighted_lipschitz_constants(self):
        """Test the D-norm Lipschitz constants never exceed γⁿ"""
        for seed in range(10):
            model = random_model(200 + seed, on_policy=True)
            for n in (1, 2, 5):
                factor = model.gamma ** n
                self.assertLessEqual(bellman_lipschitz_weighted(model, n), factor + 1e-12)
                self.assertLessEqual(bellman_lipschitz_weighted(model, n, projected=True), factor + 1e-12)

    def test_always_stable(self):
        """Test A Schur and S + Sᵀ negative definite at every horizon"""
        for seed in range(10):
            model = random_model(300 + seed, on_policy=True)
            for n in (1, 2, 4):
                report = stability_report(model, n)
                self.assertTrue(report.a_is_schur)
                self.assertTrue(report.s_symmetric_part_negdef)
                self.assertTrue(report.weighted_contraction)
            self.assertEqual(bound_set(model).min_n_schur, 1)


class BoundTests(SimpleTestCase):
    """Test sufficient bounds against direct evaluation"""

    def test_n1_norm_check(self):
        """Test ‖A(n1)‖∞ < 1 on random models"""
        for seed in range(30):
            model = random_model(seed)
            n = bound_n1(model)
            self.assertLess(kernels.norm_inf(iteration_matrix_a(model, n)), 1.0)

    def test_n2_direct_inequality(self):
        """Test γ^n2·‖Π‖∞ < 1 ≤ γ^(n2−1)·‖Π‖∞ unless n2 = 1"""
        for seed in range(30):
            model = random_model(seed)
            bounds = bound_set(model)
            pi_norm = kernels.norm_inf(model.pi_proj)
            self.assertLess(model.gamma ** bounds.n2_upper * pi_norm, 1.0)
            if bounds.n2_upper > 1:
                self.assertGreaterEqual(model.gamma ** (bounds.n2_upper - 1) * pi_norm, 1.0)

    def test_dominance(self):
        """Test every threshold sits under its bound on fixtures and random models"""
        models = [load_fixture_model(name) for name in ('mdp_d', 'mdp_e', 'mdp_f', 'example1')]
        models += [random_model(seed) for seed in range(20)]
        for model in models:
            bounds = bound_set(model)
            with self.subTest(model=model.spec.name):
                self.assertLessEqual(bounds.min_n_schur, bounds.n1_upper)
                self.assertLessEqual(bounds.min_n_contraction_inf, bounds.n2_upper)
                self.assertLessEqual(bounds.min_n_hurwitz, bounds.nth_upper)
                self.assertLessEqual(bounds.min_n_schur, bounds.min_n_contraction_inf)

    def test_rate_envelope(self):
        """Test ‖θ_k − θ*ⁿ‖∞ ≤ ‖A‖∞ᵏ‖θ₀ − θ*ⁿ‖∞ when ‖A‖∞ < 1"""
        rng = np.random.default_rng(9)
        for seed in range(20):
            model = random_model(seed)
            n = bound_n1(model)
            a_norm = kernels.norm_inf(iteration_matrix_a(model, n))
            trace = n_pvi(model, n, theta0=rng.normal(size=model.num_features), max_iters=500)
            errors = trace.errors_to_fixed_point
            envelope = a_norm ** np.arange(len(errors)) * errors[0]
            slack = 1e-9 * max(1.0, kernels.norm_inf(trace.fixed_point))
            self.assertTrue(np.all(errors <= envelope + slack), seed)
