"""
Harness serializers: run configuration, evaluation tables and verification reports
"""

import math
from typing import Dict, List

from django.conf import settings
from rest_framework import serializers

from .config import OUTPUT_FORMATS, RunConfig, default_quad_nodes


class RunConfigSerializer(serializers.Serializer):
    """Validates command flags; absent values fall back to the QBALL_* settings"""

    q = serializers.FloatField(required=False, allow_null=True)
    n = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    max_weight = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    quad_nodes = serializers.IntegerField(min_value=2, required=False, allow_null=True)
    tol = serializers.FloatField(required=False, allow_null=True)
    format = serializers.ChoiceField(choices=OUTPUT_FORMATS, required=False, allow_null=True)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True)

    def validate_q(self, value):
        """Validate the deformation parameter"""
        if value is not None and not 0.0 < value < 1.0:
            raise serializers.ValidationError("q must lie strictly between 0 and 1.")
        return value

    def validate_quad_nodes(self, value):
        if value is not None and value % 2:
            raise serializers.ValidationError("quad-nodes counts Simpson subintervals and must be even.")
        return value

    def validate_tol(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError("Tolerances must be strictly positive.")
        return value

    def validate(self, attrs):
        n = attrs.get('n') or getattr(settings, 'QBALL_N', 2)
        defaults = {
            'q': getattr(settings, 'QBALL_Q', 0.5),
            'n': n,
            'max_weight': getattr(settings, 'QBALL_MAX_WEIGHT', 8),
            'quad_nodes': default_quad_nodes(n),
            'format': getattr(settings, 'QBALL_OUTPUT_FORMAT', 'json'),
            'seed': 0,
        }
        for name, value in defaults.items():
            if attrs.get(name) is None:
                attrs[name] = value
        return attrs

    def build(self) -> RunConfig:
        """RunConfig from validated data"""
        data = self.validated_data
        return RunConfig(
            q=data['q'],
            n=data['n'],
            max_weight=data['max_weight'],
            quad_nodes=data['quad_nodes'],
            tol=data.get('tol'),
            output_format=data['format'],
            seed=data['seed'],
        )


class EvalRowSerializer(serializers.Serializer):
    """One evaluated value with the formula that produced it"""

    arguments = serializers.DictField()
    re = serializers.FloatField()
    im = serializers.FloatField()
    method = serializers.CharField()


class EvalTableSerializer(serializers.Serializer):
    what = serializers.CharField()
    q = serializers.FloatField()
    rows = EvalRowSerializer(many=True)


class CheckResultSerializer(serializers.Serializer):
    """One verified identity: its defect against the tolerance"""

    check = serializers.CharField()
    n = serializers.IntegerField()
    q = serializers.FloatField()
    params = serializers.DictField()
    defect = serializers.FloatField(allow_null=True)
    tolerance = serializers.FloatField()

    def get_fields(self):
        fields = super().get_fields()
        # 'pass' is a keyword, so it cannot be declared in the class body
        fields['pass'] = serializers.BooleanField()
        return fields


class VerificationReportSerializer(serializers.Serializer):
    suite = serializers.CharField()
    q = serializers.FloatField()
    n = serializers.IntegerField()
    passed = serializers.BooleanField()
    checks = CheckResultSerializer(many=True)

    @staticmethod
    def payload(suite: str, config: RunConfig, results: List) -> Dict:
        """Instance dict consumed by VerificationReportSerializer(...).data"""
        return {
            'suite': suite,
            'q': config.q,
            'n': config.n,
            'passed': all(result.passed for result in results),
            'checks': [
                {
                    'check': result.check,
                    'n': result.n,
                    'q': result.q,
                    'params': result.params,
                    'defect': result.defect if math.isfinite(result.defect) else None,
                    'tolerance': result.tolerance,
                    'pass': result.passed,
                }
                for result in results
            ],
        }
