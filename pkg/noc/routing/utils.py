import logging
from functools import lru_cache

import networkx as nx
import numpy as np
from scipy import sparse

from noc.common.exceptions import DesignValidationError, ParameterError
from noc.designs.models import DesignKind, LinkTier, StageTier, Topology
from noc.designs.utils import clustering_coefficient, validate_design
from noc.timing.models import StageKind
from noc.timing.utils import link_cost, router_cost, stage_cost

from .models import EvalResult, FeatureVector, Path, PathTable

logger = logging.getLogger(__name__)

# Search keeps only the current and candidate topologies hot.
PATH_TABLE_CACHE_SIZE = 16


def _link_between(topology, a, b):
    try:
        return topology.link_index[frozenset((a, b))]
    except KeyError:
        raise ParameterError(f"No link between routers {a} and {b}.") from None


def _xyz_route(topology, a, b):
    by_coord = {coord: idx for idx, coord in enumerate(topology.routers)}
    current = list(topology.routers[a])
    target = topology.routers[b]
    routers, links = [a], []
    for axis in range(3):
        step = 1 if target[axis] > current[axis] else -1
        while current[axis] != target[axis]:
            current[axis] += step
            nxt = by_coord.get(tuple(current))
            if nxt is None:
                raise ParameterError(f"Mesh has no router at {tuple(current)}.")
            links.append(_link_between(topology, routers[-1], nxt))
            routers.append(nxt)
    return Path(tuple(routers), tuple(links))


def _shortest_route(topology, a, b, dist_to_b):
    """Minimum-hop path; among equals, the lexicographically smallest router sequence."""
    if a not in dist_to_b:
        raise ParameterError(f"Router {b} is unreachable from router {a}.")
    graph = topology.graph
    routers, links = [a], []
    current = a
    while current != b:
        nxt = min(n for n in graph[current] if dist_to_b.get(n) == dist_to_b[current] - 1)
        links.append(_link_between(topology, current, nxt))
        routers.append(nxt)
        current = nxt
    return Path(tuple(routers), tuple(links))


def _cores_to_routers(design, i, j):
    placement = design.topology.core_placement
    n = len(placement)
    if not (0 <= i < n and 0 <= j < n):
        raise ParameterError(f"Core index out of range: ({i}, {j}).")
    return placement[i], placement[j]


def route_mesh_xyz(design, i, j):
    if design.kind != DesignKind.MESH:
        raise ParameterError("Dimension-order routing applies to mesh designs only.")
    a, b = _cores_to_routers(design, i, j)
    return _xyz_route(design.topology, a, b)


def route_shortest(design, i, j):
    a, b = _cores_to_routers(design, i, j)
    dist_to_b = nx.single_source_shortest_path_length(design.topology.graph, b)
    return _shortest_route(design.topology, a, b, dist_to_b)


def _incidence(rows, columns, shape):
    data = np.ones(len(rows))
    return sparse.csr_array((data, (rows, columns)), shape=shape)


@lru_cache(maxsize=PATH_TABLE_CACHE_SIZE)
def _cached_table(kind, grid, routers, links, max_ports):
    topology = Topology(grid, routers, links, tuple(range(len(routers))), max_ports)
    n, num_links = len(routers), len(links)
    router_rows, router_cols, link_rows, link_cols = [], [], [], []
    hops = np.zeros((n, n), dtype=int)
    paths = []
    for b in range(n):
        if kind != DesignKind.MESH:
            dist_to_b = nx.single_source_shortest_path_length(topology.graph, b)
        for a in range(n):
            if kind == DesignKind.MESH:
                path = _xyz_route(topology, a, b)
            else:
                path = _shortest_route(topology, a, b, dist_to_b)
            paths.append(path)
            row = a * n + b
            router_rows += [row] * len(path.routers)
            router_cols += path.routers
            link_rows += [row] * len(path.links)
            link_cols += path.links
            hops[a, b] = path.hops
    hops.flags.writeable = False
    router_incidence = _incidence(router_rows, router_cols, (n * n, n))
    link_incidence = _incidence(link_rows, link_cols, (n * n, num_links))
    # paths were produced column-major; regroup as paths[a][b].
    by_source = tuple(tuple(paths[b * n + a] for b in range(n)) for a in range(n))
    logger.debug("Built %s path table for %d routers, %d links", kind, n, num_links)
    return PathTable(by_source, hops, router_incidence, link_incidence)


def path_table(design):
    """Path table for the design's topology; shared by designs differing only in placement/tiers."""
    topology = design.topology
    return _cached_table(
        design.kind, topology.grid, topology.routers, topology.links, topology.max_ports
    )


def router_traffic(design, tm):
    """Traffic matrix re-indexed by router through the core placement."""
    placement = np.asarray(design.topology.core_placement)
    if tm.num_cores != len(placement):
        raise ParameterError(
            f"Traffic matrix has {tm.num_cores} cores but the design has {len(placement)}."
        )
    matrix = np.zeros_like(tm.f)
    matrix[np.ix_(placement, placement)] = tm.f
    return matrix


def element_loads(design, tm):
    """Traffic-weighted traversal counts per router and per link."""
    table = path_table(design)
    flows = router_traffic(design, tm).ravel()
    return table.router_incidence.T @ flows, table.link_incidence.T @ flows


def router_costs(design, pp):
    """Per-router (delay_ps, energy_pj) vectors for one traversal of all three stages."""
    topology = design.topology
    delays = np.empty(topology.num_routers)
    energies = np.empty(topology.num_routers)
    for r, row in enumerate(design.tiers.stage_tier):
        delays[r], energies[r] = router_cost(row, topology.ports(r), design.router, pp)
    return delays, energies


def link_costs(design, pp):
    topology = design.topology
    delays = np.empty(topology.num_links)
    energies = np.empty(topology.num_links)
    for u, (link, tier) in enumerate(zip(topology.links, design.tiers.link_tier)):
        cost = link_cost(tier, pp)
        delays[u] = link.length_mm * cost.delay_ps_per_mm
        energies[u] = link.length_mm * cost.energy_pj_per_mm
    return delays, energies


def _require_valid(design):
    report = validate_design(design)
    if not report.ok:
        raise DesignValidationError(report)


def evaluate(design, tm, pp, validate=True):
    """Traffic-weighted latency (ps) and energy (pJ) of a design."""
    if validate:
        _require_valid(design)
    router_load, link_load = element_loads(design, tm)
    r_delay, r_energy = router_costs(design, pp)
    l_delay, l_energy = link_costs(design, pp)
    latency = float(router_load @ r_delay + link_load @ l_delay)
    energy = float(router_load @ r_energy + link_load @ l_energy)
    return EvalResult(latency=latency, energy=energy)


def _top_stage_excess(design, r, pp):
    row = design.tiers.stage_tier[r]
    p = design.topology.ports(r)
    v, w = design.router.vcs, design.router.flit_bits
    excess = 0.0
    for kind, tier in zip(StageKind.ordered(), row):
        if tier == StageTier.BT:
            continue
        base = stage_cost(kind, StageTier.BT, p, v, w, pp).delay_fo4
        actual = stage_cost(kind, tier, p, v, w, pp).delay_fo4
        excess += max(0.0, actual - base) * pp.fo4_ps
    return excess


def features(design, tm, pp, validate=True):
    if validate:
        _require_valid(design)
    topology = design.topology
    table = path_table(design)
    n = topology.num_routers
    flows = router_traffic(design, tm)
    total = flows.sum()

    off_diagonal = ~np.eye(n, dtype=bool)
    avg_hops = float(table.hops[off_diagonal].mean())
    weighted_hops = float((flows * table.hops).sum() / total) if total > 0 else 0.0
    clustering = clustering_coefficient(topology) if n >= 3 else 0.0

    router_load, link_load = element_loads(design, tm)
    bottom_link_penalty = sum(
        link_load[u] * link.length_mm * pp.beta * pp.t_cu_ps_per_mm
        for u, (link, tier) in enumerate(zip(topology.links, design.tiers.link_tier))
        if tier == LinkTier.BOTTOM
    )
    top_stage_penalty = sum(
        router_load[r] * _top_stage_excess(design, r, pp)
        for r in range(n)
        if router_load[r] > 0
    )
    return FeatureVector(
        avg_hops=avg_hops,
        weighted_hops=weighted_hops,
        clustering=clustering,
        bottom_link_penalty=float(bottom_link_penalty),
        top_stage_penalty=float(top_stage_penalty),
    )
