"""
Spectral function serializers

Wire format:
    {"n": int, "q": real, "M": int, "nodes": [reals], "values": [[re, im], ...]}
with values flattened in C order over the tensor grid.
"""

from typing import Dict

import numpy as np
from rest_framework import serializers

from apps.qcore.context import QContext
from .quadrature import composite_simpson
from .spectral import SpectralFunction


class SpectralFunctionSerializer(serializers.Serializer):
    """Serializer for samples of a spectral function on a Simpson grid"""

    n = serializers.IntegerField(min_value=1)
    q = serializers.FloatField()
    M = serializers.IntegerField(min_value=2)
    nodes = serializers.ListField(child=serializers.FloatField())
    values = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    )

    def validate_q(self, value):
        if not 0.0 < value < 1.0:
            raise serializers.ValidationError("q must lie strictly between 0 and 1.")
        return value

    def validate_M(self, value):
        if value % 2:
            raise serializers.ValidationError("M counts Simpson subintervals and must be even.")
        return value

    def validate(self, attrs):
        n, M = attrs['n'], attrs['M']
        if len(attrs['nodes']) != M + 1:
            raise serializers.ValidationError(f"Expected {M + 1} nodes, got {len(attrs['nodes'])}.")
        if len(attrs['values']) != (M + 1) ** n:
            raise serializers.ValidationError(f"Expected {(M + 1) ** n} values, got {len(attrs['values'])}.")

        rule = composite_simpson(M, QContext(q=attrs['q']))
        if not np.allclose(attrs['nodes'], rule.nodes, rtol=0, atol=1e-9 * rule.upper):
            raise serializers.ValidationError("Nodes are not the Simpson nodes on [0, pi/h].")
        attrs['rule'] = rule
        return attrs

    def build(self) -> SpectralFunction:
        data = self.validated_data
        rule = data['rule']
        values = np.array([complex(re, im) for re, im in data['values']])
        return SpectralFunction(data['n'], rule, values.reshape((rule.size,) * data['n']))

    @staticmethod
    def payload(fhat: SpectralFunction, ctx: QContext) -> Dict:
        return {
            'n': fhat.n,
            'q': ctx.q,
            'M': fhat.M,
            'nodes': fhat.rule.nodes.tolist(),
            'values': [[v.real, v.imag] for v in fhat.values.reshape(-1).tolist()],
        }
