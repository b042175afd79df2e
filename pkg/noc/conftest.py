import json

import pytest
from pytest_factoryboy import register

# Designs
from noc.designs.tests.factories import (
    GridSpecFactory,
    MeshDesignFactory,
    ProcessParamsFactory,
    RouterConfigFactory,
    single_flow,
)

# Search
from noc.search.tests.factories import SearchConfigFactory

# Topology
from noc.topology.tests.factories import SmallWorldSpecFactory, TrafficSpecFactory

register(GridSpecFactory)
register(RouterConfigFactory)
register(ProcessParamsFactory)
register(SearchConfigFactory)
register(SmallWorldSpecFactory)
register(TrafficSpecFactory)


@pytest.fixture
def mesh_2x2():
    return MeshDesignFactory()


@pytest.fixture
def one_flow():
    """Core 0 to core 1 at unit rate on a four-core system."""
    return single_flow(4)


@pytest.fixture
def config_file(tmp_path):
    """Write a JSON experiment configuration and return its path."""

    def _write(**overrides):
        data = {
            "grid": {"dims": [2, 2, 1]},
            "topology": "Mesh",
            "traffic": {"kind": "Uniform"},
            "process": {"alpha": 0.1, "beta": 0.2, "gamma": 0.1},
            "search": {"iter_max": 2, "patience": 20, "n_trees": 5, "min_leaf": 2},
            "sweep": {"alpha": [0.1], "beta": [0.2], "gamma": [0.1]},
            "output_dir": str(tmp_path / "out"),
        }
        data.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(data))
        return path

    return _write
