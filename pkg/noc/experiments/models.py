from dataclasses import dataclass, field

from noc.designs.models import DesignKind, GridSpec, ProcessParams, RouterConfig
from noc.search.models import SearchConfig
from noc.topology.models import SmallWorldSpec, TrafficSpec

# Named (alpha, beta) variation levels.
VARIATION_LEVELS = {
    "LOW": (0.10, 0.10),
    "MED": (0.15, 0.20),
    "HIGH": (0.20, 0.30),
}

STAGE_DIST_HEADER = ("alpha", "beta", "gamma", "stage_kind", "pct_BT", "pct_TT", "pct_MT")
LINK_DIST_HEADER = ("alpha", "beta", "gamma", "pct_top", "pct_bottom")
STAGE_BY_LEN_HEADER = ("alpha", "beta", "gamma", "manhattan_len", "pct_BT", "pct_TT", "pct_MT")
EDP_HEADER = (
    "alpha",
    "beta",
    "gamma",
    "edp_po",
    "edp_pa",
    "edp_po_normalized",
    "edp_normalized",
)
SWEEP_HISTORY_HEADER = ("alpha", "beta", "gamma", "iteration", "step", "best_edp", "dataset_rows")
TRAFFIC_DISTANCE_HEADER = ("manhattan_len", "pct_traffic")
BRUTE_HEADER = (
    "alpha",
    "beta",
    "gamma",
    "edp",
    "latency_ps",
    "energy_pj",
    "valid_assignments",
    "raw_assignments",
)


@dataclass(frozen=True)
class SweepSpec:
    alpha: tuple = (0.05, 0.10, 0.15, 0.20)
    beta: tuple = (0.10, 0.20, 0.30)
    gamma: tuple = (0.10, 0.20)
    cells: tuple = ()

    def points(self):
        """(alpha, beta, gamma) cells in output order."""
        if self.cells:
            pairs = [VARIATION_LEVELS[name] for name in self.cells]
        else:
            pairs = [(a, b) for a in self.alpha for b in self.beta]
        return [(a, b, g) for g in self.gamma for a, b in pairs]


@dataclass(frozen=True)
class ExperimentConfig:
    grid: GridSpec = field(default_factory=GridSpec)
    router: RouterConfig = field(default_factory=RouterConfig)
    kind: str = DesignKind.SMALL_WORLD
    max_ports: int = 7
    smallworld: SmallWorldSpec = field(default_factory=SmallWorldSpec)
    traffic: TrafficSpec = field(default_factory=TrafficSpec)
    traffic_csv: str = None
    process: ProcessParams = field(default_factory=ProcessParams)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    search: SearchConfig = field(default_factory=SearchConfig)
    output_dir: str = "out"
    jobs: int = 1


@dataclass(frozen=True)
class CellResult:
    alpha: float
    beta: float
    gamma: float
    edp_po: float
    edp_pa: float
    edp_po_ideal: float
    stage_rows: tuple
    link_row: tuple
    length_rows: tuple
    history_rows: tuple

    @property
    def key(self):
        return f"a{self.alpha!r}_b{self.beta!r}_g{self.gamma!r}"


@dataclass(frozen=True)
class BruteResult:
    design: object
    result: object
    valid_assignments: int
    raw_assignments: int


@dataclass(frozen=True, eq=False)
class SweepTask:
    """One (alpha, beta, gamma) cell: a process-aware search seeded from ``baseline``."""

    alpha: float
    beta: float
    gamma: float
    baseline: object
    traffic: object
    process: object
    search: object
