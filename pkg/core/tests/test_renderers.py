import json
import math

import numpy as np
from django.test import SimpleTestCase

from core.renderers import render_json


class RenderJsonTests(SimpleTestCase):
    """Test render_json"""

    def test_non_finite_becomes_null(self):
        """Test NaN and ±inf render as null at any depth"""
        body = render_json({'a': math.nan, 'b': [1.0, math.inf], 'c': {'d': -math.inf}})
        self.assertEqual(json.loads(body), {'a': None, 'b': [1.0, None], 'c': {'d': None}})

    def test_layout(self):
        """Test two-space indent, key order kept and a trailing newline"""
        body = render_json({'z': 1, 'a': 2})
        self.assertTrue(body.endswith(b'}\n'))
        self.assertEqual(body.decode('utf-8'), '{\n  "z": 1,\n  "a": 2\n}\n')

    def test_numpy_scalars(self):
        """Test numpy floats and arrays render as plain numbers"""
        body = render_json({'x': np.float64(0.5), 'v': np.array([1.0, 2.0])})
        self.assertEqual(json.loads(body), {'x': 0.5, 'v': [1.0, 2.0]})

    def test_deterministic(self):
        """Test the same data renders to the same bytes"""
        data = {'theta': [0.1 + 0.2, 1e-17], 'n': 3}
        self.assertEqual(render_json(data), render_json(dict(data)))
