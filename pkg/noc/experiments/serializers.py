from dataclasses import replace

from django.conf import settings
from rest_framework import serializers

from noc.designs.models import DesignKind
from noc.designs.serializers import (
    GridSpecSerializer,
    ProcessParamsSerializer,
    RouterConfigSerializer,
)
from noc.search.serializers import SearchConfigSerializer
from noc.topology.serializers import SmallWorldSpecSerializer, TrafficSpecSerializer

from .models import VARIATION_LEVELS, ExperimentConfig, SweepSpec


class SweepSerializer(serializers.Serializer):
    alpha = serializers.ListField(
        child=serializers.FloatField(min_value=0, max_value=0.5),
        min_length=1,
        required=False,
        default=lambda: [0.05, 0.10, 0.15, 0.20],
    )
    beta = serializers.ListField(
        child=serializers.FloatField(min_value=0, max_value=1),
        min_length=1,
        required=False,
        default=lambda: [0.10, 0.20, 0.30],
    )
    gamma = serializers.ListField(
        child=serializers.FloatField(min_value=0),
        min_length=1,
        required=False,
        default=lambda: [0.10, 0.20],
    )
    cells = serializers.ListField(
        child=serializers.ChoiceField(choices=list(VARIATION_LEVELS)),
        required=False,
        default=list,
    )

    def validate_gamma(self, value):
        if any(g >= 1 for g in value):
            raise serializers.ValidationError("gamma values must be below 1.")
        return value

    def create(self, validated_data):
        return SweepSpec(**{key: tuple(value) for key, value in validated_data.items()})


def _default_jobs():
    return settings.NOC["JOBS"]


class ExperimentConfigSerializer(serializers.Serializer):
    """Top-level JSON configuration shared by every management command."""

    grid = GridSpecSerializer(required=False)
    router = RouterConfigSerializer(required=False)
    topology = serializers.ChoiceField(
        choices=DesignKind.choices, required=False, default=DesignKind.SMALL_WORLD
    )
    max_ports = serializers.IntegerField(min_value=2, required=False, default=7)
    smallworld = SmallWorldSpecSerializer(required=False)
    traffic = TrafficSpecSerializer(required=False)
    process = ProcessParamsSerializer(required=False)
    sweep = SweepSerializer(required=False)
    search = SearchConfigSerializer(required=False)
    output_dir = serializers.CharField(required=False, default="out")
    jobs = serializers.IntegerField(min_value=1, required=False, default=_default_jobs)

    def validate(self, attrs):
        if attrs["topology"] == DesignKind.SMALL_WORLD and attrs["max_ports"] < 3:
            raise serializers.ValidationError(
                {"max_ports": "Small-world routers need max_ports >= 3."}
            )
        return attrs

    @staticmethod
    def _nested(serializer_class, data):
        if data is None:
            empty = serializer_class(data={})
            empty.is_valid(raise_exception=True)
            data = empty.validated_data
        return serializer_class().create(data)

    def create(self, validated_data):
        traffic_data = validated_data.get("traffic") or {}
        smallworld = self._nested(SmallWorldSpecSerializer, validated_data.get("smallworld"))
        search = self._nested(SearchConfigSerializer, validated_data.get("search"))
        return ExperimentConfig(
            grid=self._nested(GridSpecSerializer, validated_data.get("grid")),
            router=self._nested(RouterConfigSerializer, validated_data.get("router")),
            kind=DesignKind(validated_data["topology"]),
            max_ports=validated_data["max_ports"],
            smallworld=replace(smallworld, max_ports=validated_data["max_ports"]),
            traffic=self._nested(TrafficSpecSerializer, validated_data.get("traffic")),
            traffic_csv=traffic_data.get("csv"),
            process=self._nested(ProcessParamsSerializer, validated_data.get("process")),
            sweep=self._nested(SweepSerializer, validated_data.get("sweep")),
            search=replace(search, jobs=validated_data["jobs"]),
            output_dir=validated_data["output_dir"],
            jobs=validated_data["jobs"],
        )
