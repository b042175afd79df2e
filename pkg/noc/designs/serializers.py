from rest_framework import serializers

from .models import GridSpec, ProcessParams, RouterConfig, WireFractions


class GridSpecSerializer(serializers.Serializer):
    dims = serializers.ListField(
        child=serializers.IntegerField(min_value=1),
        min_length=3,
        max_length=3,
        required=False,
        default=lambda: [4, 4, 4],
    )
    hop_pitch_mm = serializers.FloatField(required=False, default=1.0)

    def validate_hop_pitch_mm(self, value):
        if value <= 0:
            raise serializers.ValidationError("hop_pitch_mm must be positive.")
        return value

    def validate_dims(self, value):
        if value[0] * value[1] * value[2] < 2:
            raise serializers.ValidationError("The grid needs at least two routers.")
        return value

    def create(self, validated_data):
        return GridSpec(tuple(validated_data["dims"]), validated_data["hop_pitch_mm"])


class RouterConfigSerializer(serializers.Serializer):
    vcs = serializers.IntegerField(min_value=1, required=False, default=4)
    flit_bits = serializers.IntegerField(min_value=1, required=False, default=32)
    flits_per_packet = serializers.IntegerField(min_value=1, required=False, default=6)

    def create(self, validated_data):
        return RouterConfig(**validated_data)


class WireFractionsSerializer(serializers.Serializer):
    VCA = serializers.FloatField(min_value=0, max_value=1, required=False, default=0.3)
    SWA = serializers.FloatField(min_value=0, max_value=1, required=False, default=0.3)
    XBAR = serializers.FloatField(min_value=0, max_value=1, required=False, default=0.7)


class CalibrationTableField(serializers.ListField):
    """``[[alpha, ratio], ...]`` starting at ``[0, 1]`` with increasing alpha."""

    child = serializers.ListField(
        child=serializers.FloatField(min_value=0), min_length=2, max_length=2
    )

    def to_internal_value(self, data):
        points = super().to_internal_value(data)
        if len(points) < 2:
            raise serializers.ValidationError("A calibration table needs two or more points.")
        alphas = [a for a, _ in points]
        if points[0] != [0.0, 1.0]:
            raise serializers.ValidationError("The table must start at [0, 1].")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise serializers.ValidationError("Table alphas must be strictly increasing.")
        if any(ratio < 1 for _, ratio in points):
            raise serializers.ValidationError("Table ratios must be at least 1.")
        return tuple((a, r) for a, r in points)


class ProcessParamsSerializer(serializers.Serializer):
    alpha = serializers.FloatField(min_value=0, max_value=0.5, required=False, default=0.0)
    beta = serializers.FloatField(min_value=0, max_value=1, required=False, default=0.0)
    gamma = serializers.FloatField(min_value=0, required=False, default=0.0)
    tiers = serializers.IntegerField(min_value=1, required=False, default=2)
    fo4_slope = serializers.FloatField(min_value=0, required=False, default=1.8)
    cap_slope = serializers.FloatField(min_value=0, required=False, default=1.0)
    wire_frac = WireFractionsSerializer(required=False)
    t_cu_ps_per_mm = serializers.FloatField(required=False, default=200.0)
    e_cu_pj_per_mm = serializers.FloatField(required=False, default=10.0)
    fo4_ps = serializers.FloatField(required=False, default=15.0)
    beta_energy = serializers.FloatField(
        min_value=0, max_value=1, required=False, allow_null=True, default=None
    )
    stage_energy_pj = serializers.FloatField(required=False, default=1.0)
    fo4_table = CalibrationTableField(required=False, allow_null=True, default=None)
    cap_table = CalibrationTableField(required=False, allow_null=True, default=None)

    def validate_gamma(self, value):
        if value >= 1:
            raise serializers.ValidationError("gamma must be below 1.")
        return value

    def validate(self, attrs):
        for name in ("t_cu_ps_per_mm", "e_cu_pj_per_mm", "fo4_ps", "stage_energy_pj"):
            if attrs[name] <= 0:
                raise serializers.ValidationError({name: "Must be positive."})
        return attrs

    def create(self, validated_data):
        data = dict(validated_data)
        wire = data.pop("wire_frac", None) or {}
        data["wire_frac"] = WireFractions(
            vca=wire.get("VCA", 0.3), swa=wire.get("SWA", 0.3), xbar=wire.get("XBAR", 0.7)
        )
        return ProcessParams(**data)
