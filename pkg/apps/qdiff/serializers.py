"""
Operator matrix export as coordinate triplets (row, column, value)
"""

import csv
from typing import Dict, TextIO

from rest_framework import serializers

from apps.partitions.serializers import PartitionField
from apps.qcore.context import QContext
from .operators import GridOperator


class TripletSerializer(serializers.Serializer):
    row = PartitionField()
    col = PartitionField()
    re = serializers.FloatField()
    im = serializers.FloatField(default=0.0)


class GridOperatorSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1)
    k = serializers.IntegerField(min_value=1)
    q = serializers.FloatField()
    max_weight = serializers.IntegerField(min_value=0)
    truncated = serializers.BooleanField()
    entries = TripletSerializer(many=True)

    @staticmethod
    def payload(op: GridOperator, ctx: QContext) -> Dict:
        return {
            'n': op.n,
            'k': op.k,
            'q': ctx.q,
            'max_weight': op.max_weight,
            'truncated': op.truncated,
            'entries': [
                {'row': mu, 'col': lam, 're': complex(value).real, 'im': complex(value).imag}
                for mu, lam, value in op.triplets()
            ],
        }


def write_triplets_csv(op: GridOperator, stream: TextIO):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['row', 'col', 're', 'im'])
    for mu, lam, value in op.triplets():
        value = complex(value)
        writer.writerow([' '.join(map(str, mu)), ' '.join(map(str, lam)), repr(value.real), repr(value.imag)])
