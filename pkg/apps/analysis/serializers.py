from rest_framework import serializers

from core.fields import FiniteFloatField, MatrixField


class SpectrumSerializer(serializers.Serializer):
    """Eigenvalues as [re, im] pairs plus their summaries"""
    eigenvalues = serializers.SerializerMethodField()
    spectral_radius = FiniteFloatField()
    max_real_part = FiniteFloatField()

    def get_eigenvalues(self, obj):
        return obj.pairs()


class StabilityReportSerializer(serializers.Serializer):
    """Serializer for one horizon's StabilityReport"""
    n = serializers.IntegerField()
    matrix_a = MatrixField()
    matrix_n = MatrixField()
    matrix_s = MatrixField()
    a_spectrum = SpectrumSerializer()
    s_spectrum = SpectrumSerializer()
    a_is_schur = serializers.BooleanField()
    n_is_nonsingular = serializers.BooleanField()
    s_is_hurwitz = serializers.BooleanField()
    s_symmetric_part_negdef = serializers.BooleanField()
    inf_norm_contraction = serializers.BooleanField()
    gamma_n_pi_norm = FiniteFloatField()
    alpha_star_lower = FiniteFloatField()
    a_stability = serializers.CharField()
    s_stability = serializers.CharField()
    inf_contraction_factor = FiniteFloatField()
    weighted_contraction = serializers.BooleanField()
    weighted_contraction_factor = FiniteFloatField()
    det_n = FiniteFloatField()


class NthBoundSerializer(serializers.Serializer):
    """Serializer for both branches of the Hurwitz horizon bound"""
    q1 = FiniteFloatField()
    q2 = FiniteFloatField()
    q1_ratio = FiniteFloatField()
    q2_ratio = FiniteFloatField()
    winner = serializers.CharField()
    nth_upper = serializers.IntegerField()
    d_min = FiniteFloatField()
    d_max = FiniteFloatField()
    lambda_min = FiniteFloatField()
    lambda_max = FiniteFloatField()
    phi_max_sq = FiniteFloatField()


class BoundSetSerializer(serializers.Serializer):
    """Serializer for sufficient bounds and searched thresholds"""
    n1_upper = serializers.IntegerField()
    n2_upper = serializers.IntegerField()
    nth_upper = serializers.IntegerField()
    min_n_schur = serializers.IntegerField(allow_null=True)
    min_n_contraction_inf = serializers.IntegerField(allow_null=True)
    min_n_contraction_weighted = serializers.IntegerField(allow_null=True)
    min_n_hurwitz = serializers.IntegerField(allow_null=True)
    min_n_negdef = serializers.IntegerField(allow_null=True)
    n_max = serializers.IntegerField()
    nth = NthBoundSerializer(allow_null=True)
    bitmaps = serializers.DictField(child=serializers.ListField(child=serializers.BooleanField()))


class ErrorBoundsSerializer(serializers.Serializer):
    """Serializer for the n-step fixed-point error bounds"""
    n = serializers.IntegerField()
    gamma_n_pi_norm = FiniteFloatField()
    approximation_error = FiniteFloatField()
    value_error_bound = FiniteFloatField()
    projection_error_bound = FiniteFloatField()
    value_error = FiniteFloatField()
    projection_error = FiniteFloatField()
