from rest_framework import serializers

from .models import SearchConfig, SearchMode


class SearchConfigSerializer(serializers.Serializer):
    iter_max = serializers.IntegerField(min_value=1, required=False, default=5)
    patience = serializers.IntegerField(min_value=1, required=False, default=200)
    n_trees = serializers.IntegerField(min_value=1, required=False, default=50)
    max_depth = serializers.IntegerField(min_value=1, required=False, default=8)
    min_leaf = serializers.IntegerField(min_value=1, required=False, default=5)
    seed = serializers.IntegerField(min_value=0, required=False, default=0)
    mode = serializers.ChoiceField(
        choices=SearchMode.choices, required=False, default=SearchMode.PROCESS_AWARE
    )
    max_retries = serializers.IntegerField(min_value=1, required=False, default=100)
    restart_walk = serializers.IntegerField(min_value=0, required=False, default=10)
    polish = serializers.BooleanField(required=False, default=True)

    def create(self, validated_data):
        return SearchConfig(**validated_data)
