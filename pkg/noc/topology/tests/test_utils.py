from collections import Counter

import numpy as np
import pytest

from noc.common.exceptions import (
    DuplicatePairError,
    IndexOutOfRangeError,
    InfeasibleSpecError,
    MalformedRowError,
    NegativeWeightError,
    ParameterError,
    SelfTrafficError,
    TrafficHeaderError,
)
from noc.designs.models import Design, DesignKind, GridSpec, TierAssignment
from noc.designs.utils import validate_design
from noc.topology.models import SmallWorldSpec, TrafficKind, TrafficSpec
from noc.topology.tests.factories import SmallWorldSpecFactory, TrafficSpecFactory
from noc.topology.utils import (
    distance_matrix,
    gen_mesh,
    gen_smallworld,
    gen_traffic,
    load_traffic_csv,
    mesh_link_count,
    save_traffic_csv,
    traffic_distance_histogram,
)


def _as_design(topology, kind=DesignKind.SMALL_WORLD):
    tiers = TierAssignment.uniform(topology.num_routers, topology.num_links)
    return Design(topology, tiers, kind=kind)


def _unit_fraction(topology):
    return sum(link.manhattan_len == 1 for link in topology.links) / topology.num_links


@pytest.mark.parametrize("dims, routers, links", [((4, 4, 4), 64, 144), ((2, 2, 1), 4, 4)])
def test_mesh_counts(dims, routers, links):
    topology = gen_mesh(GridSpec(dims))
    assert topology.num_routers == routers
    assert topology.num_links == links == mesh_link_count(GridSpec(dims))
    assert all(link.manhattan_len == 1 for link in topology.links)
    assert topology.core_placement == tuple(range(routers))
    assert validate_design(_as_design(topology, DesignKind.MESH)).ok


def test_smallworld_is_valid_and_matches_mesh_budget():
    grid = GridSpec((4, 4, 1))
    for seed in range(5):
        topology = gen_smallworld(grid, SmallWorldSpecFactory(seed=seed))
        assert topology.num_links == mesh_link_count(grid)
        assert max(topology.degrees) <= 6
        assert validate_design(_as_design(topology)).ok


def test_smallworld_is_deterministic():
    grid = GridSpec((4, 4, 2))
    spec = SmallWorldSpec(seed=42)
    assert gen_smallworld(grid, spec) == gen_smallworld(grid, spec)
    assert gen_smallworld(grid, spec) != gen_smallworld(grid, SmallWorldSpec(seed=43))


def test_tree_budget_gives_spanning_tree():
    grid = GridSpec((3, 3, 1))
    topology = gen_smallworld(grid, SmallWorldSpec(link_budget=8, seed=3))
    assert topology.num_links == 8
    assert validate_design(_as_design(topology)).ok


@pytest.mark.parametrize("budget", [5, 100])
def test_infeasible_budgets(budget):
    with pytest.raises(InfeasibleSpecError):
        gen_smallworld(GridSpec((3, 3, 1)), SmallWorldSpec(link_budget=budget, max_ports=4))


def test_small_world_spec_rejects_tiny_routers():
    with pytest.raises(ParameterError):
        SmallWorldSpec(max_ports=2)


@pytest.mark.slow
def test_steeper_decay_prefers_short_links():
    grid = GridSpec((4, 4, 2))
    fractions = {}
    for exponent in (0.5, 2.0, 4.0):
        fractions[exponent] = np.mean(
            [
                _unit_fraction(
                    gen_smallworld(grid, SmallWorldSpec(decay_exponent=exponent, seed=s))
                )
                for s in range(30)
            ]
        )
    assert fractions[0.5] < fractions[2.0] < fractions[4.0]


@pytest.mark.slow
def test_link_lengths_decrease_with_distance():
    grid = GridSpec((4, 4, 2))
    counts = Counter()
    for seed in range(30):
        topology = gen_smallworld(grid, SmallWorldSpec(decay_exponent=2.0, seed=seed))
        counts.update(link.manhattan_len for link in topology.links)
    lengths = sorted(counts)
    assert all(counts[a] >= counts[b] for a, b in zip(lengths, lengths[1:]))


def test_uniform_traffic():
    tm = gen_traffic(GridSpec((2, 2, 1)), TrafficSpecFactory(kind=TrafficKind.UNIFORM))
    expected = (1.0 - np.eye(4)) / 3
    np.testing.assert_allclose(tm.f, expected)


def test_flat_decay_equals_uniform():
    grid = GridSpec((3, 2, 1))
    decay = gen_traffic(grid, TrafficSpec(kind=TrafficKind.DISTANCE_DECAY, decay_exponent=0.0))
    uniform = gen_traffic(grid, TrafficSpec(kind=TrafficKind.UNIFORM))
    np.testing.assert_allclose(decay.f, uniform.f)


def test_default_decay_concentrates_on_neighbours():
    grid = GridSpec((8, 8, 1))
    topology = gen_mesh(grid)
    histogram = traffic_distance_histogram(gen_traffic(grid, TrafficSpec()), topology)
    assert histogram[1] >= 70.0
    assert sum(histogram.values()) == pytest.approx(100.0)


def test_decay_histogram_matches_analytic_shares():
    grid = GridSpec((4, 4, 1))
    theta = 2.0
    tm = gen_traffic(grid, TrafficSpec(decay_exponent=theta))
    dist = distance_matrix(grid.coordinates())
    expected = {}
    for src in range(grid.num_routers):
        weights = {d: 0.0 for d in np.unique(dist[src]) if d > 0}
        for dst in range(grid.num_routers):
            if dst != src:
                weights[dist[src, dst]] += float(dist[src, dst]) ** -theta
        total = sum(weights.values())
        for d, w in weights.items():
            expected[int(d)] = expected.get(int(d), 0.0) + 100.0 * w / total / grid.num_routers
    histogram = traffic_distance_histogram(tm, gen_mesh(grid))
    for d, share in expected.items():
        assert histogram[d] == pytest.approx(share, abs=5.0)


def test_hotspot_traffic():
    grid = GridSpec((2, 2, 2))
    spec = TrafficSpec(kind=TrafficKind.HOTSPOT, hotspot_fraction=0.6, hot_cores=2, seed=1)
    tm = gen_traffic(grid, spec)
    assert np.all(np.diag(tm.f) == 0)
    np.testing.assert_allclose(tm.f.sum(axis=1), 1.0)
    hot = np.argsort(tm.f.sum(axis=0))[-2:]
    cold_rows = [r for r in range(8) if r not in hot]
    np.testing.assert_allclose(tm.f[np.ix_(cold_rows, hot)].sum(axis=1), 0.6)
    assert gen_traffic(grid, spec).f.tolist() == tm.f.tolist()


def test_hotspot_needs_cold_cores():
    with pytest.raises(ParameterError):
        gen_traffic(GridSpec((2, 1, 1)), TrafficSpec(kind=TrafficKind.HOTSPOT, hot_cores=2))


def _write(tmp_path, text):
    path = tmp_path / "traffic.csv"
    path.write_text(text)
    return path


def test_load_traffic(tmp_path):
    tm = load_traffic_csv(_write(tmp_path, "src,dst,weight\n0,1,2.5\n"), num_cores=2)
    assert tm.f[0, 1] == 2.5
    assert tm.f[1, 0] == 0.0


@pytest.mark.parametrize(
    "body, error",
    [
        ("0,0,1.0\n", SelfTrafficError),
        ("0,1,1.0\n0,1,2.0\n", DuplicatePairError),
        ("0,1,-1.0\n", NegativeWeightError),
        ("0,7,1.0\n", IndexOutOfRangeError),
        ("-1,1,1.0\n", IndexOutOfRangeError),
        ("0,one,1.0\n", MalformedRowError),
        ("0,1\n", MalformedRowError),
        ("0,1,1.0,9\n", MalformedRowError),
    ],
)
def test_load_traffic_errors(tmp_path, body, error):
    with pytest.raises(error) as excinfo:
        load_traffic_csv(_write(tmp_path, "src,dst,weight\n" + body), num_cores=4)
    assert excinfo.value.row is not None


def test_load_traffic_header(tmp_path):
    with pytest.raises(TrafficHeaderError):
        load_traffic_csv(_write(tmp_path, "from,to,weight\n0,1,1\n"))


def test_saved_traffic_reloads(tmp_path):
    grid = GridSpec((2, 2, 1))
    tm = gen_traffic(grid, TrafficSpec())
    path = save_traffic_csv(tmp_path / "t.csv", tm)
    assert load_traffic_csv(path, num_cores=4).f.tolist() == tm.f.tolist()
