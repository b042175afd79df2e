import logging
from collections import defaultdict

import numpy as np

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
from noc.common.utils import read_csv_rows, write_csv
from noc.designs.models import DEFAULT_MAX_PORTS, Link, Topology, TrafficMatrix

from .models import TrafficKind
from .serializers import TRAFFIC_HEADER, TrafficRowSerializer

logger = logging.getLogger(__name__)


def mesh_link_count(grid):
    x, y, z = grid.dims
    return (x - 1) * y * z + x * (y - 1) * z + x * y * (z - 1)


def distance_matrix(coords):
    points = np.asarray(coords, dtype=int)
    return np.abs(points[:, None, :] - points[None, :, :]).sum(axis=-1)


def _build(grid, edges, max_ports):
    coords = grid.coordinates()
    links = []
    for a, b in sorted(edges):
        length = int(sum(abs(p - q) for p, q in zip(coords[a], coords[b])))
        links.append(Link(a, b, length, length * grid.hop_pitch_mm))
    return Topology(
        grid=grid,
        routers=coords,
        links=tuple(links),
        core_placement=tuple(range(grid.num_routers)),
        max_ports=max_ports,
    )


def gen_mesh(grid, max_ports=DEFAULT_MAX_PORTS):
    coords = grid.coordinates()
    edges = set()
    for a, (x, y, z) in enumerate(coords):
        for dx, dy, dz in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            neighbour = (x + dx, y + dy, z + dz)
            if all(c < d for c, d in zip(neighbour, grid.dims)):
                edges.add((a, grid.index_of(neighbour)))
    return _build(grid, edges, max_ports)


def _power_law_choice(rng, distances, exponent):
    """Draw an index with probability proportional to distance ** -exponent."""
    log_weights = -exponent * np.log(distances.astype(float))
    weights = np.exp(log_weights - log_weights.max())
    return int(rng.choice(len(weights), p=weights / weights.sum()))


def gen_smallworld(grid, spec):
    n = grid.num_routers
    cap = spec.max_ports - 1
    budget = spec.link_budget if spec.link_budget is not None else mesh_link_count(grid)
    if budget < n - 1:
        raise InfeasibleSpecError(f"link_budget {budget} cannot connect {n} routers.")
    if budget > n * (n - 1) // 2 or budget > n * cap // 2:
        raise InfeasibleSpecError(
            f"link_budget {budget} exceeds what {n} routers with max_ports "
            f"{spec.max_ports} can hold."
        )
    rng = np.random.default_rng(spec.seed)
    dist = distance_matrix(grid.coordinates())
    degree = np.zeros(n, dtype=int)
    edges = set()

    # Random spanning tree first; attachment is distance-biased like the extra links.
    order = rng.permutation(n)
    in_tree = [int(order[0])]
    for node in (int(v) for v in order[1:]):
        open_nodes = [t for t in in_tree if degree[t] < cap]
        pick = open_nodes[_power_law_choice(rng, dist[node, open_nodes], spec.decay_exponent)]
        edges.add((min(node, pick), max(node, pick)))
        degree[node] += 1
        degree[pick] += 1
        in_tree.append(node)

    pairs = np.array(
        [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges],
        dtype=int,
    ).reshape(-1, 2)
    available = np.ones(len(pairs), dtype=bool)
    max_attempts = spec.max_attempts or 20 * budget
    rejected = 0
    while len(edges) < budget:
        if not available.any() or rejected >= max_attempts:
            raise InfeasibleSpecError(
                f"Placed {len(edges)} of {budget} links before running out of attempts "
                f"under max_ports={spec.max_ports}."
            )
        candidates = np.flatnonzero(available)
        a_idx, b_idx = pairs[candidates, 0], pairs[candidates, 1]
        idx = candidates[_power_law_choice(rng, dist[a_idx, b_idx], spec.decay_exponent)]
        available[idx] = False
        a, b = (int(v) for v in pairs[idx])
        if degree[a] >= cap or degree[b] >= cap:
            rejected += 1
            continue
        edges.add((a, b))
        degree[a] += 1
        degree[b] += 1

    logger.info(
        "Small-world topology: %d routers, %d links, %d degree rejections (seed %s)",
        n,
        len(edges),
        rejected,
        spec.seed,
    )
    return _build(grid, edges, spec.max_ports)


def _normalize_rows(matrix):
    sums = matrix.sum(axis=1, keepdims=True)
    return np.divide(matrix, sums, out=np.zeros_like(matrix), where=sums > 0)


def gen_traffic(grid, spec):
    n = grid.num_routers
    off_diagonal = 1.0 - np.eye(n)
    if spec.kind == TrafficKind.UNIFORM:
        return TrafficMatrix(_normalize_rows(off_diagonal))

    if spec.kind == TrafficKind.DISTANCE_DECAY:
        dist = distance_matrix(grid.coordinates()).astype(float)
        np.fill_diagonal(dist, 1.0)
        return TrafficMatrix(_normalize_rows(off_diagonal * dist ** (-spec.decay_exponent)))

    if spec.hot_cores >= n:
        raise ParameterError(f"hot_cores must be below the core count {n}.")
    rng = np.random.default_rng(spec.seed)
    hot = np.zeros(n, dtype=bool)
    hot[rng.choice(n, size=spec.hot_cores, replace=False)] = True
    matrix = np.zeros((n, n))
    for src in range(n):
        hot_dst = hot.copy()
        hot_dst[src] = False
        cold_dst = ~hot
        cold_dst[src] = False
        if not hot_dst.any() or not cold_dst.any():
            matrix[src] = off_diagonal[src] / (n - 1)
            continue
        matrix[src, hot_dst] = spec.hotspot_fraction / hot_dst.sum()
        matrix[src, cold_dst] = (1 - spec.hotspot_fraction) / cold_dst.sum()
    return TrafficMatrix(matrix)


_ROW_ERRORS = {
    "negative_weight": NegativeWeightError,
    "self_traffic": SelfTrafficError,
    "min_value": IndexOutOfRangeError,
}


def _row_error(errors, line):
    for details in errors.values():
        for detail in details:
            error_class = _ROW_ERRORS.get(getattr(detail, "code", None))
            if error_class is not None:
                return error_class(str(detail), row=line)
    return MalformedRowError(f"malformed row {dict(errors)}", row=line)


def load_traffic_csv(path, num_cores=None):
    """Read a ``src,dst,weight`` file; entries not listed are zero."""
    try:
        rows = read_csv_rows(path, TRAFFIC_HEADER)
    except ValueError as exc:
        raise TrafficHeaderError(str(exc)) from exc

    entries = {}
    for line, row in rows:
        if None in row:
            raise MalformedRowError("too many fields", row=line)
        serializer = TrafficRowSerializer(data=row)
        if not serializer.is_valid():
            raise _row_error(serializer.errors, line)
        src, dst, weight = (serializer.validated_data[key] for key in TRAFFIC_HEADER)
        if num_cores is not None and (src >= num_cores or dst >= num_cores):
            raise IndexOutOfRangeError(
                f"core index outside 0..{num_cores - 1}: ({src}, {dst})", row=line
            )
        if (src, dst) in entries:
            raise DuplicatePairError(f"duplicate pair ({src}, {dst})", row=line)
        entries[(src, dst)] = weight

    n = num_cores if num_cores is not None else max(
        [2] + [max(pair) + 1 for pair in entries]
    )
    matrix = np.zeros((n, n))
    for (src, dst), weight in entries.items():
        matrix[src, dst] = weight
    tm = TrafficMatrix(matrix)
    if tm.is_empty:
        logger.warning("Traffic file %s has no positive entries", path)
    return tm


def save_traffic_csv(path, tm):
    sources, targets = np.nonzero(tm.f)
    rows = ((int(s), int(t), repr(float(tm.f[s, t]))) for s, t in zip(sources, targets))
    return write_csv(path, TRAFFIC_HEADER, rows)


def traffic_distance_histogram(tm, topology):
    """Percentage of traffic exchanged per Manhattan distance between the placed routers."""
    placement = np.asarray(topology.core_placement)
    dist = distance_matrix(topology.routers)[np.ix_(placement, placement)]
    total = tm.total
    shares = defaultdict(float)
    for d, weight in zip(dist.ravel(), tm.f.ravel()):
        if weight > 0:
            shares[int(d)] += weight
    if total <= 0:
        return {}
    return {d: 100.0 * shares[d] / total for d in sorted(shares)}
