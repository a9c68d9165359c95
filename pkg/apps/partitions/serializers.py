"""
Partition serializers (partitions travel as JSON integer arrays)
"""

from rest_framework import serializers

from .partition import Partition


class PartitionField(serializers.ListField):
    """A weakly decreasing list of nonnegative integers"""

    child = serializers.IntegerField(min_value=0)

    def __init__(self, **kwargs):
        kwargs.setdefault('allow_empty', False)
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        parts = super().to_internal_value(data)
        try:
            return Partition(parts)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return list(value)
