"""
Problem Loader Tests
--------------------
Fixture loading, schema errors and invariant violations.
"""
import copy
import json

import numpy as np
from django.test import SimpleTestCase

from apps.mdp.services.loader import dump_mdp_spec, load_mdp_spec
from apps.mdp.tests.factories import fixture_path
from core.exceptions import RankDeficientError, SpecParseError, SpecValidationError


def _fixture_document(name):
    return json.loads(fixture_path(name).read_text())


class FixtureLoadTests(SimpleTestCase):
    """Test loading of the shipped fixtures"""

    def test_mdp_d(self):
        """Test the two-state, two-action fixture"""
        spec = load_mdp_spec(fixture_path('mdp_d'))
        self.assertEqual((spec.num_states, spec.num_actions), (2, 2))
        self.assertEqual(spec.discount, 0.99)
        np.testing.assert_array_equal(spec.features, [[1.78], [1.2]])
        self.assertIsNone(spec.state_weights)
        self.assertEqual(len(spec.content_hash), 64)

    def test_example1(self):
        """Test the single-action fixture with explicit weights"""
        spec = load_mdp_spec(str(fixture_path('example1')))
        self.assertEqual((spec.num_states, spec.num_actions), (2, 1))
        np.testing.assert_array_equal(spec.features, [[1.0], [3.0]])
        np.testing.assert_array_equal(spec.state_weights, [0.5, 0.5])

    def test_all_fixtures_load(self):
        """Test that every shipped fixture validates"""
        for name in ('mdp_d', 'mdp_e', 'mdp_f', 'example1'):
            with self.subTest(name=name):
                self.assertEqual(load_mdp_spec(fixture_path(name)).name, name)

    def test_text_and_dict_sources(self):
        """Test JSON text and dict sources give the same arrays"""
        document = _fixture_document('mdp_e')
        from_text = load_mdp_spec(json.dumps(document))
        from_dict = load_mdp_spec(document)
        np.testing.assert_array_equal(from_text.transition, from_dict.transition)

    def test_dump_roundtrip(self):
        """Test that a dumped spec loads back identically"""
        spec = load_mdp_spec(fixture_path('example1'))
        again = load_mdp_spec(dump_mdp_spec(spec))
        np.testing.assert_array_equal(again.reward, spec.reward)
        np.testing.assert_array_equal(again.state_weights, spec.state_weights)

    def test_arrays_read_only(self):
        """Test that spec arrays cannot be mutated"""
        spec = load_mdp_spec(fixture_path('mdp_d'))
        with self.assertRaises(ValueError):
            spec.transition[0, 0, 0] = 1.0


class InvalidSpecTests(SimpleTestCase):
    """Test rejection of invalid problem files"""

    def setUp(self):
        self.document = _fixture_document('mdp_d')

    def test_row_not_stochastic(self):
        """Test that a row summing to 0.9 is reported with its index"""
        document = copy.deepcopy(self.document)
        document['transition'][1][0] = [0.5, 0.4]
        with self.assertRaisesMessage(SpecValidationError, 'row not stochastic') as ctx:
            load_mdp_spec(document)
        self.assertEqual(ctx.exception.field, 'transition')
        self.assertEqual(ctx.exception.index, (1, 0))

    def test_negative_probability(self):
        """Test that negative entries are rejected"""
        document = copy.deepcopy(self.document)
        document['target_policy'][0] = [1.2, -0.2]
        with self.assertRaises(SpecValidationError):
            load_mdp_spec(document)

    def test_support_condition(self):
        """Test β > 0 wherever π > 0"""
        document = copy.deepcopy(self.document)
        document['behavior_policy'][1] = [1.0, 0.0]
        with self.assertRaisesMessage(SpecValidationError, 'behavior_policy'):
            load_mdp_spec(document)

    def test_discount_range(self):
        """Test that γ = 1 is rejected"""
        document = copy.deepcopy(self.document)
        document['gamma'] = 1.0
        with self.assertRaises(SpecValidationError):
            load_mdp_spec(document)

    def test_rank_deficient(self):
        """Test that collinear feature columns are rejected"""
        document = copy.deepcopy(self.document)
        document['features'] = [[1.0, 2.0], [2.0, 4.0]]
        with self.assertRaises(RankDeficientError):
            load_mdp_spec(document)

    def test_shape_mismatch(self):
        """Test that a transition tensor of the wrong shape is rejected"""
        document = copy.deepcopy(self.document)
        document['transition'] = document['transition'][:1]
        with self.assertRaises(SpecValidationError):
            load_mdp_spec(document)

    def test_bad_weights(self):
        """Test that weights not summing to one are rejected"""
        document = copy.deepcopy(self.document)
        document['state_weights'] = [0.5, 0.6]
        with self.assertRaises(SpecValidationError):
            load_mdp_spec(document)

    def test_missing_key(self):
        """Test schema error for a missing key"""
        document = copy.deepcopy(self.document)
        del document['features']
        with self.assertRaisesMessage(SpecParseError, 'features'):
            load_mdp_spec(document)

    def test_wrong_type(self):
        """Test schema error for a string where a number is required"""
        document = copy.deepcopy(self.document)
        document['gamma'] = 'high'
        with self.assertRaises(SpecParseError):
            load_mdp_spec(document)

    def test_not_json(self):
        """Test parse error for malformed text"""
        with self.assertRaises(SpecParseError):
            load_mdp_spec('{"num_states": 2,')

    def test_missing_file(self):
        """Test parse error for a missing path"""
        with self.assertRaises(SpecParseError):
            load_mdp_spec('/nonexistent/problem.json')
