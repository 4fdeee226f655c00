"""
Linear-Algebra Types
--------------------
Value objects returned by the kernels.
"""
from dataclasses import dataclass

import numpy as np
from django.db import models


class Stability(models.TextChoices):
    STABLE = 'stable', 'Stable'
    MARGINAL = 'marginal', 'Marginal'
    UNSTABLE = 'unstable', 'Unstable'


@dataclass(frozen=True)
class Spectrum:
    """
    Eigenvalues of a square matrix with the two summaries the analysis needs.
    """
    eigenvalues: tuple
    spectral_radius: float
    max_real_part: float

    @classmethod
    def from_eigenvalues(cls, values):
        values = np.asarray(values, dtype=complex).ravel()
        # Sort for reproducible output: descending modulus, then real part
        order = np.lexsort((-values.imag, -values.real, -np.abs(values)))
        values = values[order]
        return cls(
            eigenvalues=tuple(complex(v) for v in values),
            spectral_radius=float(np.max(np.abs(values))),
            max_real_part=float(np.max(values.real)),
        )

    @property
    def dimension(self):
        return len(self.eigenvalues)

    def pairs(self):
        """Eigenvalues as [real, imag] pairs."""
        return [[value.real, value.imag] for value in self.eigenvalues]
