import pytest
from rest_framework import serializers

from noc.common.exceptions import ParameterError
from noc.designs.models import DesignKind, LinkTier, RouterConfig, StageTier
from noc.designs.serializers import GridSpecSerializer, ProcessParamsSerializer
from noc.designs.utils import load_design, save_design, save_topology, validate_design
from noc.timing.models import StageKind


def test_saved_design_loads_back(tmp_path, mesh_2x2):
    tiers = mesh_2x2.tiers.with_stage(1, StageKind.XBAR, StageTier.BT).with_link(
        0, LinkTier.TOP
    )
    design = mesh_2x2.with_tiers(tiers)
    save_design(tmp_path, design)
    loaded = load_design(
        tmp_path, design.topology.grid, DesignKind.MESH, RouterConfig(), max_ports=7
    )
    assert loaded.topology == design.topology
    assert loaded.tiers == design.tiers
    assert (tmp_path / "stage_tiers.csv").read_text().splitlines()[0] == "router_id,VCA,SWA,XBAR"


def test_topology_only_directory_uses_default_tiers(tmp_path, mesh_2x2):
    save_topology(tmp_path, mesh_2x2.topology)
    with pytest.raises(ParameterError):
        load_design(tmp_path, mesh_2x2.topology.grid, DesignKind.MESH, RouterConfig(), 7)
    loaded = load_design(
        tmp_path,
        mesh_2x2.topology.grid,
        DesignKind.MESH,
        RouterConfig(),
        7,
        default_tiers=lambda topology: mesh_2x2.tiers,
    )
    assert validate_design(loaded).ok


def test_invalid_tier_value_in_file(tmp_path, mesh_2x2):
    save_design(tmp_path, mesh_2x2)
    path = tmp_path / "link_tiers.csv"
    path.write_text(path.read_text().replace("Bottom", "Middle", 1))
    with pytest.raises(ParameterError):
        load_design(tmp_path, mesh_2x2.topology.grid, DesignKind.MESH, RouterConfig(), 7)


def test_grid_serializer_defaults():
    serializer = GridSpecSerializer(data={})
    assert serializer.is_valid(), serializer.errors
    assert serializer.save().dims == (4, 4, 4)


def test_grid_serializer_rejects_single_router():
    serializer = GridSpecSerializer(data={"dims": [1, 1, 1]})
    assert not serializer.is_valid()
    assert "dims" in serializer.errors


def test_process_serializer_builds_params():
    serializer = ProcessParamsSerializer(
        data={
            "alpha": 0.2,
            "beta": 0.3,
            "gamma": 0.1,
            "wire_frac": {"XBAR": 0.5},
            "fo4_table": [[0, 1], [0.2, 1.4]],
        }
    )
    assert serializer.is_valid(), serializer.errors
    pp = serializer.save()
    assert pp.wire_frac.xbar == 0.5
    assert pp.wire_frac.vca == 0.3
    assert pp.fo4_table == ((0.0, 1.0), (0.2, 1.4))


@pytest.mark.parametrize(
    "data",
    [
        {"gamma": 1.0},
        {"alpha": 0.7},
        {"fo4_ps": 0},
        {"fo4_table": [[0.1, 1.0], [0.2, 1.2]]},
        {"cap_table": [[0, 1], [0.2, 0.9]]},
    ],
)
def test_process_serializer_rejects(data):
    serializer = ProcessParamsSerializer(data=data)
    with pytest.raises(serializers.ValidationError):
        serializer.is_valid(raise_exception=True)
