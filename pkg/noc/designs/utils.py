import logging
import math
from pathlib import Path

import networkx as nx

from noc.common.exceptions import ParameterError
from noc.common.utils import read_csv_rows, write_csv
from noc.timing.models import LINKED_STAGES, StageKind

from .models import (
    COMPATIBLE_STAGE_TIERS,
    Design,
    Link,
    LinkTier,
    StageTier,
    TierAssignment,
    Topology,
    ValidationReport,
    Violation,
    manhattan,
)

logger = logging.getLogger(__name__)

ROUTERS_HEADER = ("router_id", "x", "y", "z")
LINKS_HEADER = ("link_id", "router_a", "router_b", "manhattan_len")
PLACEMENT_HEADER = ("core_id", "router_id")
STAGE_TIERS_HEADER = ("router_id",) + tuple(kind.value for kind in StageKind.ordered())
LINK_TIERS_HEADER = ("link_id", "tier")


def manhattan_distance(a, b):
    if len(a) != len(b):
        raise ParameterError("Coordinates must have the same dimension.")
    return manhattan(a, b)


def clustering_coefficient(topology):
    """Mean local clustering; routers with fewer than two neighbours count as 0."""
    if topology.num_routers < 3:
        raise ParameterError("Clustering coefficient needs at least three routers.")
    return float(nx.average_clustering(topology.graph))


def _check_links(topology):
    violations = []
    seen = {}
    for idx, link in enumerate(topology.links):
        subject = f"link {idx} ({link.a}-{link.b})"
        if link.a == link.b:
            violations.append(Violation("self-link", subject, "link joins a router to itself"))
            continue
        key = frozenset(link.endpoints)
        if key in seen:
            violations.append(
                Violation("duplicate-link", subject, f"duplicates link {seen[key]}")
            )
        else:
            seen[key] = idx
        expected = manhattan(topology.routers[link.a], topology.routers[link.b])
        if link.manhattan_len != expected:
            violations.append(
                Violation(
                    "manhattan-length",
                    subject,
                    f"manhattan_len {link.manhattan_len} != endpoint distance {expected}",
                )
            )
        elif not math.isclose(link.length_mm, expected * topology.grid.hop_pitch_mm):
            violations.append(
                Violation("manhattan-length", subject, "length_mm disagrees with hop pitch")
            )
    return violations


def _check_structure(topology):
    violations = []
    limit = topology.max_ports - 1
    for router, degree in enumerate(topology.degrees):
        if degree > limit:
            violations.append(
                Violation("degree", f"router {router}", f"degree {degree} exceeds {limit}")
            )
    graph = topology.graph
    if not nx.is_connected(graph):
        reachable = nx.node_connected_component(graph, 0)
        for router in sorted(set(graph.nodes) - reachable):
            violations.append(
                Violation("connectivity", f"router {router}", "unreachable from router 0")
            )
    placement = topology.core_placement
    if sorted(placement) != list(range(topology.num_routers)):
        violations.append(
            Violation("placement", "core_placement", "cores must map one-to-one onto routers")
        )
    return violations


def _check_tiers(topology, tiers):
    if len(tiers.stage_tier) != topology.num_routers or any(
        len(row) != len(StageKind.ordered()) for row in tiers.stage_tier
    ):
        return [Violation("tier-shape", "stage_tier", "one (VCA, SWA, XBAR) row per router")]
    if len(tiers.link_tier) != topology.num_links:
        return [Violation("tier-shape", "link_tier", "one tier per link")]
    violations = []
    for idx, link in enumerate(topology.links):
        link_tier = tiers.link_tier[idx]
        allowed = COMPATIBLE_STAGE_TIERS[link_tier]
        for router in dict.fromkeys(link.endpoints):
            for kind in LINKED_STAGES:
                stage_tier = tiers.stage(router, kind)
                if stage_tier not in allowed:
                    violations.append(
                        Violation(
                            "tier-compatibility",
                            f"link {idx} / router {router} {kind.value}",
                            f"{link_tier.value} link attached to a {stage_tier.value} stage",
                        )
                    )
    return violations


def validate_design(design):
    topology = design.topology
    violations = _check_links(topology) + _check_structure(topology)
    violations += _check_tiers(topology, design.tiers)
    report = ValidationReport(tuple(violations))
    if not report.ok:
        logger.debug("Design rejected: %s", "; ".join(str(v) for v in report.violations))
    return report


def save_topology(directory, topology):
    """Write routers, links and placement files into ``directory``."""
    directory = Path(directory)
    write_csv(
        directory / "routers.csv",
        ROUTERS_HEADER,
        ((idx,) + tuple(coord) for idx, coord in enumerate(topology.routers)),
    )
    write_csv(
        directory / "links.csv",
        LINKS_HEADER,
        (
            (idx, link.a, link.b, link.manhattan_len)
            for idx, link in enumerate(topology.links)
        ),
    )
    write_csv(directory / "placement.csv", PLACEMENT_HEADER, enumerate(topology.core_placement))
    return directory


def save_design(directory, design):
    """Write the full design file set (topology plus tiers) and return its path."""
    directory = save_topology(directory, design.topology)
    write_csv(
        directory / "stage_tiers.csv",
        STAGE_TIERS_HEADER,
        (
            (idx,) + tuple(tier.value for tier in row)
            for idx, row in enumerate(design.tiers.stage_tier)
        ),
    )
    write_csv(
        directory / "link_tiers.csv",
        LINK_TIERS_HEADER,
        ((idx, tier.value) for idx, tier in enumerate(design.tiers.link_tier)),
    )
    return directory


def _ordered_ids(rows, key, path):
    ids = [int(row[key]) for _, row in rows]
    if ids != list(range(len(ids))):
        raise ParameterError(f"{path}: {key} values must be 0..n-1 in order.")


def load_topology(directory, grid, max_ports):
    directory = Path(directory)
    try:
        router_rows = read_csv_rows(directory / "routers.csv", ROUTERS_HEADER)
        link_rows = read_csv_rows(directory / "links.csv", LINKS_HEADER)
        _ordered_ids(router_rows, "router_id", "routers.csv")
        _ordered_ids(link_rows, "link_id", "links.csv")
        routers = tuple((int(r["x"]), int(r["y"]), int(r["z"])) for _, r in router_rows)
        links = tuple(
            Link(
                int(r["router_a"]),
                int(r["router_b"]),
                int(r["manhattan_len"]),
                int(r["manhattan_len"]) * grid.hop_pitch_mm,
            )
            for _, r in link_rows
        )
        placement_path = directory / "placement.csv"
        if placement_path.exists():
            placement_rows = read_csv_rows(placement_path, PLACEMENT_HEADER)
            _ordered_ids(placement_rows, "core_id", "placement.csv")
            placement = tuple(int(r["router_id"]) for _, r in placement_rows)
        else:
            placement = tuple(range(len(routers)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(str(exc)) from exc
    return Topology(grid, routers, links, placement, max_ports=max_ports)


def load_tiers(directory, topology):
    """Read tier files; returns None when the directory carries no tier assignment."""
    directory = Path(directory)
    stage_path = directory / "stage_tiers.csv"
    link_path = directory / "link_tiers.csv"
    if not stage_path.exists() and not link_path.exists():
        return None
    try:
        stage_rows = read_csv_rows(stage_path, STAGE_TIERS_HEADER)
        link_rows = read_csv_rows(link_path, LINK_TIERS_HEADER)
        _ordered_ids(stage_rows, "router_id", "stage_tiers.csv")
        _ordered_ids(link_rows, "link_id", "link_tiers.csv")
        stage_tier = tuple(
            tuple(StageTier(row[kind.value]) for kind in StageKind.ordered())
            for _, row in stage_rows
        )
        link_tier = tuple(LinkTier(row["tier"]) for _, row in link_rows)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(str(exc)) from exc
    return TierAssignment(stage_tier, link_tier)


def load_design(directory, grid, kind, router, max_ports, default_tiers=None):
    """Load a design directory; ``default_tiers(topology)`` fills in missing tier files."""
    topology = load_topology(directory, grid, max_ports)
    tiers = load_tiers(directory, topology)
    if tiers is None:
        if default_tiers is None:
            raise ParameterError(f"{directory}: no stage_tiers.csv / link_tiers.csv found.")
        tiers = default_tiers(topology)
    return Design(topology=topology, tiers=tiers, kind=kind, router=router)
