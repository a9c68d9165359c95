"""
Radial function serializers

Wire format:
    {"n": int, "q": real, "support": [{"lambda": [ints], "re": real, "im": real}]}
"""

import csv
from typing import Dict, TextIO

from rest_framework import serializers

from apps.partitions.coordinates import grid_point
from apps.partitions.serializers import PartitionField
from apps.qcore.context import QContext
from .measure import MeasureWeights
from .radial_function import RadialFunction


class SupportEntrySerializer(serializers.Serializer):
    """One grid point of a radial function"""

    re = serializers.FloatField()
    im = serializers.FloatField(default=0.0)

    def get_fields(self):
        fields = super().get_fields()
        # 'lambda' is a keyword, so it cannot be declared in the class body
        fields['lambda'] = PartitionField()
        return {name: fields[name] for name in ('lambda', 're', 'im')}


class RadialFunctionSerializer(serializers.Serializer):
    """Serializer for finitely supported radial functions"""

    n = serializers.IntegerField(min_value=1)
    q = serializers.FloatField()
    support = SupportEntrySerializer(many=True)

    def validate_q(self, value):
        """Validate the deformation parameter"""
        if not 0.0 < value < 1.0:
            raise serializers.ValidationError("q must lie strictly between 0 and 1.")
        return value

    def validate(self, attrs):
        n = attrs['n']
        seen = set()
        for entry in attrs['support']:
            lam = entry['lambda']
            if lam.n != n:
                raise serializers.ValidationError(f"Partition {list(lam)} does not have {n} parts.")
            if lam in seen:
                raise serializers.ValidationError(f"Partition {list(lam)} appears twice.")
            seen.add(lam)
        return attrs

    def build(self) -> RadialFunction:
        """RadialFunction from validated data"""
        data = self.validated_data
        return RadialFunction(data['n'], {
            entry['lambda']: complex(entry['re'], entry['im']) for entry in data['support']
        })

    @staticmethod
    def payload(f: RadialFunction, ctx: QContext) -> Dict:
        """Instance dict consumed by RadialFunctionSerializer(...).data"""
        return {
            'n': f.n,
            'q': ctx.q,
            'support': [
                {'lambda': lam, 're': value.real, 'im': value.imag} for lam, value in f.items()
            ],
        }


def write_radial_csv(f: RadialFunction, ctx: QContext, stream: TextIO):
    """One row per partition with grid point, weight and value"""
    weights = MeasureWeights(f.n, ctx)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['lambda', 'grid_point', 'weight', 're', 'im'])
    for lam, value in f.items():
        writer.writerow([
            ' '.join(str(p) for p in lam),
            ' '.join(repr(float(u)) for u in grid_point(lam, ctx)),
            repr(weights(lam)),
            repr(value.real),
            repr(value.imag),
        ])
