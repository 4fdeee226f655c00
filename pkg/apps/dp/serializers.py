from rest_framework import serializers

from core.fields import FiniteFloatField, MatrixField


class TraceSummarySerializer(serializers.Serializer):
    """Serializer for an IterationTrace without its per-step rows"""
    algorithm = serializers.CharField()
    n = serializers.IntegerField()
    iterations = serializers.IntegerField()
    recorded_rows = serializers.SerializerMethodField()
    converged = serializers.BooleanField()
    diverged = serializers.BooleanField()
    final_error = FiniteFloatField()
    tolerance = FiniteFloatField()
    final_error_to_fixed_point = serializers.SerializerMethodField()
    step_size = serializers.SerializerMethodField()
    final_params = MatrixField()
    fixed_point = MatrixField(allow_null=True)
    final_norm = FiniteFloatField()
    state_visits = MatrixField(allow_null=True)

    def get_recorded_rows(self, obj):
        return len(obj.steps)

    def get_final_error_to_fixed_point(self, obj):
        return FiniteFloatField().to_representation(obj.errors_to_fixed_point[-1])

    def get_step_size(self, obj):
        # float for Richardson, schedule id for TD
        if obj.step_size is None or isinstance(obj.step_size, str):
            return obj.step_size
        return float(obj.step_size)
