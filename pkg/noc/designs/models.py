from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx
import numpy as np
from django.db import models

from noc.common.exceptions import ParameterError
from noc.timing.models import StageKind

DEFAULT_MAX_PORTS = 7


class StageTier(models.TextChoices):
    BT = "BT", "Bottom tier only"
    TT = "TT", "Top tier only"
    MT = "MT", "Multitier"


class LinkTier(models.TextChoices):
    TOP = "Top", "Top tier (copper)"
    BOTTOM = "Bottom", "Bottom tier (tungsten)"

    @property
    def flipped(self):
        return LinkTier.BOTTOM if self == LinkTier.TOP else LinkTier.TOP


# Stage tiers a port-attached stage may take for each link tier.
COMPATIBLE_STAGE_TIERS = {
    LinkTier.TOP: frozenset({StageTier.TT, StageTier.MT}),
    LinkTier.BOTTOM: frozenset({StageTier.BT, StageTier.MT}),
}


class DesignKind(models.TextChoices):
    MESH = "Mesh", "3D mesh"
    SMALL_WORLD = "SmallWorld", "Small-world"


@dataclass(frozen=True)
class GridSpec:
    dims: tuple = (4, 4, 4)
    hop_pitch_mm: float = 1.0

    def __post_init__(self):
        dims = tuple(int(value) for value in self.dims)
        if len(dims) != 3 or any(value < 1 for value in dims):
            raise ParameterError(f"Grid dims must be three positive integers, got {self.dims}.")
        if dims[0] * dims[1] * dims[2] < 2:
            raise ParameterError("A grid needs at least two routers.")
        if not self.hop_pitch_mm > 0:
            raise ParameterError("hop_pitch_mm must be positive.")
        object.__setattr__(self, "dims", dims)

    @property
    def num_routers(self):
        x, y, z = self.dims
        return x * y * z

    def coordinates(self):
        """Grid points in router-index order (x fastest, then y, then z)."""
        x_dim, y_dim, z_dim = self.dims
        return tuple(
            (x, y, z) for z in range(z_dim) for y in range(y_dim) for x in range(x_dim)
        )

    def index_of(self, coord):
        x, y, z = coord
        x_dim, y_dim, _ = self.dims
        return x + x_dim * (y + y_dim * z)


@dataclass(frozen=True)
class RouterConfig:
    vcs: int = 4
    flit_bits: int = 32
    flits_per_packet: int = 6

    def __post_init__(self):
        if self.vcs < 1 or self.flit_bits < 1 or self.flits_per_packet < 1:
            raise ParameterError("vcs, flit_bits and flits_per_packet must be positive.")


@dataclass(frozen=True)
class Link:
    a: int
    b: int
    manhattan_len: int
    length_mm: float

    @property
    def endpoints(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Topology:
    grid: GridSpec
    routers: tuple
    links: tuple
    core_placement: tuple
    max_ports: int = DEFAULT_MAX_PORTS

    def __post_init__(self):
        n = len(self.routers)
        if self.max_ports < 2:
            raise ParameterError("max_ports must allow a local and one network port.")
        for link in self.links:
            if not (0 <= link.a < n and 0 <= link.b < n):
                raise ParameterError(f"Link {link.endpoints} references a missing router.")

    @property
    def num_routers(self):
        return len(self.routers)

    @property
    def num_links(self):
        return len(self.links)

    @cached_property
    def graph(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_routers))
        graph.add_edges_from(link.endpoints for link in self.links if link.a != link.b)
        return graph

    @cached_property
    def link_index(self):
        return {frozenset(link.endpoints): idx for idx, link in enumerate(self.links)}

    @cached_property
    def degrees(self):
        counts = [0] * self.num_routers
        for link in self.links:
            counts[link.a] += 1
            counts[link.b] += 1
        return tuple(counts)

    def ports(self, router):
        """Network ports plus the local port."""
        return self.degrees[router] + 1

    def incident_links(self, router):
        return tuple(
            idx for idx, link in enumerate(self.links) if router in (link.a, link.b)
        )

    def make_link(self, a, b):
        a, b = min(a, b), max(a, b)
        length = manhattan(self.routers[a], self.routers[b])
        return Link(a, b, length, length * self.grid.hop_pitch_mm)

    def with_links(self, links):
        return replace(self, links=tuple(links))

    def with_placement(self, placement):
        return replace(self, core_placement=tuple(placement))


@dataclass(frozen=True)
class TierAssignment:
    # stage_tier[router] is a (VCA, SWA, XBAR) tuple, see StageKind.ordered().
    stage_tier: tuple
    link_tier: tuple

    @classmethod
    def uniform(cls, num_routers, num_links, stage=StageTier.MT, link=LinkTier.BOTTOM):
        return cls(
            stage_tier=tuple((stage, stage, stage) for _ in range(num_routers)),
            link_tier=tuple(link for _ in range(num_links)),
        )

    def stage(self, router, kind):
        return self.stage_tier[router][StageKind(kind).position]

    def with_stage(self, router, kind, tier):
        row = list(self.stage_tier[router])
        row[StageKind(kind).position] = StageTier(tier)
        stages = list(self.stage_tier)
        stages[router] = tuple(row)
        return replace(self, stage_tier=tuple(stages))

    def with_link(self, link, tier):
        tiers = list(self.link_tier)
        tiers[link] = LinkTier(tier)
        return replace(self, link_tier=tuple(tiers))

    def count_stages(self, kinds=None):
        kinds = kinds or StageKind.ordered()
        counts = {tier: 0 for tier in StageTier}
        for row in self.stage_tier:
            for kind in kinds:
                counts[row[StageKind(kind).position]] += 1
        return counts


@dataclass(frozen=True)
class Design:
    topology: Topology
    tiers: TierAssignment
    kind: str = DesignKind.SMALL_WORLD
    router: RouterConfig = field(default_factory=RouterConfig)

    def __post_init__(self):
        object.__setattr__(self, "kind", DesignKind(self.kind))

    def with_topology(self, topology):
        return replace(self, topology=topology)

    def with_tiers(self, tiers):
        return replace(self, tiers=tiers)

    def signature(self):
        """Hashable identity of the search state."""
        return (
            tuple(link.endpoints for link in self.topology.links),
            self.topology.core_placement,
            self.tiers.stage_tier,
            self.tiers.link_tier,
        )


@dataclass(frozen=True, eq=False)
class TrafficMatrix:
    f: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.f, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
            raise ParameterError("Traffic matrix must be square with at least two cores.")
        if not np.all(np.isfinite(matrix)):
            raise ParameterError("Traffic matrix entries must be finite.")
        if np.any(matrix < 0):
            raise ParameterError("Traffic matrix entries must be non-negative.")
        if np.any(np.diag(matrix) != 0):
            raise ParameterError("Traffic matrix must have a zero diagonal (no self-traffic).")
        matrix.flags.writeable = False
        object.__setattr__(self, "f", matrix)

    @property
    def num_cores(self):
        return self.f.shape[0]

    @property
    def total(self):
        return float(self.f.sum())

    @property
    def is_empty(self):
        return not np.any(self.f > 0)

    def scaled(self, factor):
        return TrafficMatrix(self.f * factor)


@dataclass(frozen=True)
class WireFractions:
    """Share of a stage's 2D capacitance that is interconnect."""

    vca: float = 0.3
    swa: float = 0.3
    xbar: float = 0.7

    def __post_init__(self):
        for value in (self.vca, self.swa, self.xbar):
            if not 0 <= value <= 1:
                raise ParameterError("Wire fractions must lie in [0, 1].")

    def for_stage(self, kind):
        return {
            StageKind.VCA: self.vca,
            StageKind.SWA: self.swa,
            StageKind.XBAR: self.xbar,
        }[StageKind(kind)]


def _check_table(name, table):
    if table is None:
        return None
    points = tuple((float(a), float(r)) for a, r in table)
    if len(points) < 2:
        raise ParameterError(f"{name} needs at least two points.")
    alphas = [a for a, _ in points]
    if alphas != sorted(alphas) or len(set(alphas)) != len(alphas):
        raise ParameterError(f"{name} alphas must be strictly increasing.")
    if points[0] != (0.0, 1.0):
        raise ParameterError(f"{name} must start at (0, 1).")
    if any(r < 1 for _, r in points):
        raise ParameterError(f"{name} ratios must be at least 1.")
    return points


@dataclass(frozen=True)
class ProcessParams:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    tiers: int = 2
    fo4_slope: float = 1.8
    cap_slope: float = 1.0
    wire_frac: WireFractions = field(default_factory=WireFractions)
    t_cu_ps_per_mm: float = 200.0
    e_cu_pj_per_mm: float = 10.0
    fo4_ps: float = 15.0
    beta_energy: float = None
    stage_energy_pj: float = 1.0
    fo4_table: tuple = None
    cap_table: tuple = None

    def __post_init__(self):
        if not 0 <= self.alpha <= 0.5:
            raise ParameterError("alpha must lie in [0, 0.5].")
        if not 0 <= self.beta <= 1:
            raise ParameterError("beta must lie in [0, 1].")
        if self.beta_energy is not None and not 0 <= self.beta_energy <= 1:
            raise ParameterError("beta_energy must lie in [0, 1].")
        if not 0 <= self.gamma < 1:
            raise ParameterError("gamma must lie in [0, 1).")
        if self.tiers < 1:
            raise ParameterError("tiers must be at least 1.")
        if self.fo4_slope < 0 or self.cap_slope < 0:
            raise ParameterError("Degradation slopes must be non-negative.")
        for name in ("t_cu_ps_per_mm", "e_cu_pj_per_mm", "fo4_ps", "stage_energy_pj"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive.")
        object.__setattr__(self, "fo4_table", _check_table("fo4_table", self.fo4_table))
        object.__setattr__(self, "cap_table", _check_table("cap_table", self.cap_table))

    @property
    def effective_beta_energy(self):
        return self.beta if self.beta_energy is None else self.beta_energy

    def at(self, alpha=None, beta=None, gamma=None):
        changes = {}
        if alpha is not None:
            changes["alpha"] = alpha
        if beta is not None:
            changes["beta"] = beta
        if gamma is not None:
            changes["gamma"] = gamma
        return replace(self, **changes)

    def ideal(self):
        """Same calibration with no inter-tier variation (alpha = beta = 0)."""
        return replace(
            self,
            alpha=0.0,
            beta=0.0,
            beta_energy=None if self.beta_energy is None else 0.0,
        )


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def __str__(self):
        return f"{self.code} [{self.subject}]: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def codes(self):
        return {violation.code for violation in self.violations}


def manhattan(a, b):
    return sum(abs(p - q) for p, q in zip(a, b))
