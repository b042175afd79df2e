import math

from rest_framework import serializers

from .models import SmallWorldSpec, TrafficKind, TrafficSpec

TRAFFIC_HEADER = ("src", "dst", "weight")


class TrafficRowSerializer(serializers.Serializer):
    """One ``src,dst,weight`` row of a traffic file."""

    src = serializers.IntegerField(min_value=0)
    dst = serializers.IntegerField(min_value=0)
    weight = serializers.FloatField()

    def validate_weight(self, value):
        if not math.isfinite(value):
            raise serializers.ValidationError("Weight must be finite.", code="invalid")
        if value < 0:
            raise serializers.ValidationError(
                "Weight must be non-negative.", code="negative_weight"
            )
        return value

    def validate(self, attrs):
        if attrs["src"] == attrs["dst"]:
            raise serializers.ValidationError(
                "A core cannot send traffic to itself.", code="self_traffic"
            )
        return attrs


class SmallWorldSpecSerializer(serializers.Serializer):
    link_budget = serializers.IntegerField(
        min_value=1, required=False, allow_null=True, default=None
    )
    decay_exponent = serializers.FloatField(required=False, default=2.0)
    seed = serializers.IntegerField(min_value=0, required=False, default=0)
    max_attempts = serializers.IntegerField(
        min_value=1, required=False, allow_null=True, default=None
    )

    def validate_decay_exponent(self, value):
        if value <= 0:
            raise serializers.ValidationError("decay_exponent must be positive.")
        return value

    def create(self, validated_data):
        return SmallWorldSpec(**validated_data)


class TrafficSpecSerializer(serializers.Serializer):
    """Synthetic traffic generator, or ``csv`` pointing at a ``src,dst,weight`` file."""

    kind = serializers.ChoiceField(
        choices=TrafficKind.choices, required=False, default=TrafficKind.DISTANCE_DECAY
    )
    hotspot_fraction = serializers.FloatField(min_value=0, max_value=1, required=False, default=0.5)
    hot_cores = serializers.IntegerField(min_value=1, required=False, default=1)
    decay_exponent = serializers.FloatField(min_value=0, required=False, default=4.0)
    seed = serializers.IntegerField(min_value=0, required=False, default=0)
    csv = serializers.CharField(required=False, allow_null=True, default=None)

    def create(self, validated_data):
        data = dict(validated_data)
        data.pop("csv", None)
        return TrafficSpec(**data)
