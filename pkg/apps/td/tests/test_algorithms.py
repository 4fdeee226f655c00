"""
Stochastic TD Tests
-------------------
Algorithms 1 and 2: determinism, traces, guards and convergence.
"""
import math

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, tag

from apps.analysis.services.matrices import td_matrix_s
from apps.analysis.services.solutions import fixed_point_theta_n
from apps.dp.types import Algorithm
from apps.mdp.services.model import derived_model
from apps.mdp.tests.factories import load_fixture_model, random_model, random_spec, spec_with
from apps.td.services.algorithms import td_iid_run, td_markov_run, td_run
from apps.td.services.sweeps import homogeneous_model, sweep
from apps.td.types import StepSchedule, TdAlgorithm, TdRunConfig
from core.exceptions import PreconditionError, ReducibleChainError


def _config(algorithm=TdAlgorithm.IID, n=2, **overrides):
    fields = {'schedule': StepSchedule(a=0.1, b=10.0), 'seed': 1, 'max_iters': 2000, 'record_every': 100}
    fields.update(overrides)
    return TdRunConfig(algorithm=algorithm, n=n, **fields)


class TdRunConfigTests(SimpleTestCase):
    """Test run configuration"""

    def test_defaults_from_settings(self):
        """Test unspecified fields come from TD_DEFAULTS"""
        config = TdRunConfig.from_settings(TdAlgorithm.IID, 3)
        defaults = settings.TD_DEFAULTS
        self.assertEqual(config.max_iters, defaults['MAX_ITERS'])
        self.assertEqual(config.record_every, defaults['RECORD_EVERY'])
        self.assertEqual(config.schedule.a, defaults['STEP_A'])
        self.assertIsNone(config.clip)

    def test_dict_round_trip(self):
        """Test the task payload rebuilds the same config"""
        config = _config(clip=9.0, theta0=[0.5])
        self.assertEqual(TdRunConfig.from_dict(config.to_dict()), config)
        self.assertEqual(config.with_seed(8).seed, 8)

    def test_invalid(self):
        """Test bad fields are refused"""
        for overrides in ({'clip': 0.0}, {'max_iters': 0}, {'record_every': 0}, {'seed': -1}):
            with self.subTest(overrides=overrides), self.assertRaises(PreconditionError):
                _config(**overrides)
        with self.assertRaises(PreconditionError):
            TdRunConfig(algorithm='gtd', n=1)
        with self.assertRaises(PreconditionError):
            TdRunConfig(algorithm=TdAlgorithm.IID, n=0)


class TdTraceTests(SimpleTestCase):
    """Test trace recording"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model = load_fixture_model('mdp_d')

    def test_thinning(self):
        """Test rows at multiples of record_every plus the final step"""
        trace = td_iid_run(self.model, _config(max_iters=1050))
        np.testing.assert_array_equal(trace.steps, list(range(0, 1001, 100)) + [1050])
        self.assertEqual(trace.iterations, 1050)
        self.assertEqual(trace.algorithm, Algorithm.TD_IID)
        self.assertEqual(trace.step_size, 'harmonic(a=0.1,b=10)')

    def test_extra_columns(self):
        """Test α and ρ of the update that produced each row"""
        trace = td_iid_run(self.model, _config(max_iters=300, clip=9.0))
        self.assertEqual(
            list(trace.to_frame().columns), ['k', 'theta_0', 'err_inf', 'alpha_k', 'rho_clipped']
        )
        alphas = trace.extra['alpha_k']
        self.assertTrue(math.isnan(alphas[0]))
        self.assertAlmostEqual(alphas[1], 0.1 / (99 + 10.0 + 1.0), places=15)
        self.assertTrue(np.all(trace.extra['rho_clipped'][1:] <= 9.0))

    def test_errors_against_fixed_point(self):
        """Test recorded errors are ‖θ_k − θ*ⁿ‖∞"""
        trace = td_iid_run(self.model, _config(n=3))
        theta_star = fixed_point_theta_n(self.model, 3)
        np.testing.assert_allclose(trace.errors_to_fixed_point, np.abs(trace.params - theta_star).max(axis=1))
        self.assertEqual(trace.final_error, trace.errors_to_fixed_point[-1])

    def test_zero_reward_stays_at_origin(self):
        """Test zero rewards and θ₀ = 0 keep every iterate at 0"""
        model = homogeneous_model(self.model)
        for algorithm in TdAlgorithm.values:
            trace = td_run(model, _config(algorithm=algorithm, n=3, clip=9.0))
            np.testing.assert_array_equal(trace.params, 0.0)

    def test_seed_determinism(self):
        """Test identical configs give identical traces"""
        for algorithm in TdAlgorithm.values:
            first = td_run(self.model, _config(algorithm=algorithm, theta0=[1.0]))
            second = td_run(self.model, _config(algorithm=algorithm, theta0=[1.0]))
            np.testing.assert_array_equal(first.params, second.params)
            np.testing.assert_array_equal(first.extra['rho_clipped'], second.extra['rho_clipped'])
            other = td_run(self.model, _config(algorithm=algorithm, theta0=[1.0], seed=2))
            self.assertFalse(np.array_equal(first.params, other.params))

    def test_infinite_clip_is_unclipped(self):
        """Test clip = ∞ reproduces the unclipped run exactly"""
        for algorithm in TdAlgorithm.values:
            plain = td_run(self.model, _config(algorithm=algorithm, n=4))
            capped = td_run(self.model, _config(algorithm=algorithm, n=4, clip=math.inf))
            np.testing.assert_array_equal(plain.params, capped.params)

    def test_state_visits(self):
        """Test the visit record counts one start state per update"""
        trace = td_markov_run(self.model, _config(max_iters=5000))
        self.assertEqual(int(trace.state_visits.sum()), trace.iterations)
        self.assertEqual(len(trace.state_visits), self.model.num_states)

    def test_overflow_guard(self):
        """Test a huge step on an unstable model stops at the guard"""
        model = load_fixture_model('example1')
        trace = td_iid_run(model, _config(n=1, schedule=StepSchedule(a=1000.0, b=0.0), theta0=[1.0]))
        self.assertTrue(trace.diverged)
        self.assertFalse(trace.converged)
        self.assertLess(trace.iterations, 2000)
        self.assertTrue(np.all(np.abs(trace.params) <= 1e12))

    def test_reducible_chain(self):
        """Test the single-trajectory variant refuses a reducible P^β"""
        with self.assertRaises(ReducibleChainError):
            td_markov_run(load_fixture_model('example1'), _config(n=1))

    def test_bad_theta0(self):
        """Test θ₀ of the wrong length"""
        with self.assertRaises(PreconditionError):
            td_iid_run(self.model, _config(theta0=[0.0, 0.0]))


class TdConvergenceTests(SimpleTestCase):
    """Test convergence to θ*ⁿ when S is Hurwitz"""

    def _model(self):
        spec = random_spec(21, num_states=3, on_policy=True, gamma=0.5)
        return derived_model(spec_with(spec, features=np.array([[1.0], [2.0], [-1.5]])))

    def _check(self, algorithm):
        model = self._model()
        self.assertTrue(td_matrix_s(model, 1).is_hurwitz)
        theta_star = fixed_point_theta_n(model, 1)
        theta0 = theta_star + 10.0
        config = _config(
            algorithm=algorithm,
            n=1,
            schedule=StepSchedule(a=10.0, b=100.0),
            max_iters=100_000,
            theta0=theta0,
            tolerance=0.5,
        )
        result = sweep(model, config, seeds=range(5))
        self.assertLess(result.median_final_error, 0.05 * 10.0)
        self.assertFalse(result.diverged.any())

    def test_iid_on_policy(self):
        """Test i.i.d. TD converges on an on-policy model"""
        self._check(TdAlgorithm.IID)

    def test_markov_on_policy(self):
        """Test single-trajectory TD converges on an on-policy model"""
        self._check(TdAlgorithm.MARKOV)

    @tag('slow')
    def test_off_policy_random_models(self):
        """Test median error over 20 seeds falls below 5% of the initial error"""
        checked = 0
        for seed in range(40):
            model = derived_model(random_spec(seed, num_states=3, num_features=1, gamma=0.5))
            if td_matrix_s(model, 1).spectrum.max_real_part > -0.1:
                continue
            theta_star = fixed_point_theta_n(model, 1)
            config = _config(
                n=1,
                schedule=StepSchedule(a=10.0, b=1000.0),
                max_iters=1_000_000,
                record_every=10_000,
                theta0=theta_star + 10.0,
            )
            result = sweep(model, config, seeds=range(20))
            with self.subTest(seed=seed):
                self.assertLess(result.median_final_error, 0.05 * 10.0)
            checked += 1
            if checked == 2:
                break
        self.assertEqual(checked, 2)

    @tag('slow')
    def test_clipped_horizon_comparison(self):
        """Test n=3 ends ≥10× closer to the origin than n=2 on the homogeneous two-state model"""
        model = homogeneous_model(load_fixture_model('mdp_d'))
        common = {
            'schedule': StepSchedule(a=100.0, b=100_000.0),
            'clip': 9.0,
            'max_iters': 200_000,
            'record_every': 10_000,
            'theta0': [1.0],
        }
        seeds = range(20)
        unstable = sweep(model, _config(n=2, **common), seeds)
        stable = sweep(model, _config(n=3, **common), seeds)
        self.assertLess(10.0 * stable.mean_final_error, unstable.mean_final_error)


class ClipIdentityTests(SimpleTestCase):
    """Test the ratio cap against an on-policy model"""

    def test_on_policy_clip_inactive(self):
        """Test any cap ≥ 1 leaves an on-policy run unchanged"""
        model = random_model(30, on_policy=True)
        plain = td_iid_run(model, _config())
        capped = td_iid_run(model, _config(clip=1.0 + 1e-9))
        np.testing.assert_array_equal(plain.params, capped.params)

    def test_spec_with_keeps_run(self):
        """Test renaming a spec does not change the run"""
        spec = random_spec(31)
        renamed = derived_model(spec_with(spec, name='renamed'))
        np.testing.assert_array_equal(
            td_iid_run(derived_model(spec), _config()).params,
            td_iid_run(renamed, _config()).params,
        )
