import factory

from noc.search.models import SearchConfig, SearchMode


class SearchConfigFactory(factory.Factory):
    """Small budgets so searches finish in test time."""

    class Meta:
        model = SearchConfig

    iter_max = 3
    patience = 60
    n_trees = 10
    max_depth = 6
    min_leaf = 2
    seed = 0
    mode = SearchMode.PROCESS_AWARE
    restart_walk = 3
