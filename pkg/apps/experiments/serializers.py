from rest_framework import serializers

from apps.analysis.serializers import BoundSetSerializer, StabilityReportSerializer


class AcceptanceCheckSerializer(serializers.Serializer):
    """Serializer for one expected-versus-observed repro check"""
    suite = serializers.CharField()
    name = serializers.CharField()
    expected = serializers.JSONField()
    observed = serializers.JSONField()
    passed = serializers.BooleanField()
    detail = serializers.CharField(allow_blank=True)


class FixtureRefSerializer(serializers.Serializer):
    path = serializers.CharField()
    sha256 = serializers.CharField()


class RunManifestSerializer(serializers.Serializer):
    """Serializer for the manifest written after a command finishes"""
    command = serializers.CharField()
    command_line = serializers.ListField(child=serializers.CharField())
    fixtures = FixtureRefSerializer(many=True)
    seeds = serializers.ListField(child=serializers.IntegerField())
    config = serializers.JSONField()
    outputs = serializers.ListField(child=serializers.CharField())
    checks = AcceptanceCheckSerializer(many=True)
    passed = serializers.BooleanField()
    duration_seconds = serializers.FloatField()
    tolerances_version = serializers.IntegerField(allow_null=True)


class AnalyzeReportSerializer(serializers.Serializer):
    """
    Serializer for the analyze command: bounds plus one StabilityReport per horizon.

    Accepts a plain dict with fixture, fixture_sha256, n_max, bounds and reports.
    """
    fixture = serializers.CharField()
    fixture_sha256 = serializers.CharField()
    n_max = serializers.IntegerField()
    bounds = BoundSetSerializer()
    reports = StabilityReportSerializer(many=True)
