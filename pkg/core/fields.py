"""
Core Serializer Fields
----------------------
Read-only DRF fields for numpy values.
"""
import math

import numpy as np
from rest_framework import serializers


class MatrixField(serializers.Field):
    """Nested lists of floats for any numpy array (read-only)"""

    def __init__(self, **kwargs):
        kwargs['read_only'] = True
        super().__init__(**kwargs)

    def to_representation(self, value):
        if value is None:
            return None
        return np.asarray(value, dtype=float).tolist()


class FiniteFloatField(serializers.FloatField):
    """Float that renders as null when undefined or non-finite"""

    def __init__(self, **kwargs):
        kwargs.setdefault('read_only', True)
        kwargs.setdefault('allow_null', True)
        super().__init__(**kwargs)

    def to_representation(self, value):
        if value is None:
            return None
        value = float(value)
        return value if math.isfinite(value) else None
