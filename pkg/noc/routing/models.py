from dataclasses import astuple, dataclass

import numpy as np

EVAL_HEADER = ("design_id", "alpha", "beta", "gamma", "latency_ps", "energy_pj", "edp")


@dataclass(frozen=True)
class Path:
    routers: tuple
    links: tuple

    @property
    def hops(self):
        return len(self.links)


@dataclass(frozen=True, eq=False)
class PathTable:
    """Router-to-router paths with sparse incidence matrices for load accumulation.

    Row ``a * N + b`` of ``router_incidence`` / ``link_incidence`` marks the
    routers / links on the path from router ``a`` to router ``b``.
    """

    paths: tuple
    hops: np.ndarray
    router_incidence: object
    link_incidence: object

    def path(self, a, b):
        return self.paths[a][b]


@dataclass(frozen=True)
class EvalResult:
    latency: float
    energy: float

    @property
    def edp(self):
        return self.latency * self.energy

    def as_row(self, design_id, pp):
        return (design_id, pp.alpha, pp.beta, pp.gamma, self.latency, self.energy, self.edp)


@dataclass(frozen=True)
class FeatureVector:
    avg_hops: float
    weighted_hops: float
    clustering: float
    bottom_link_penalty: float
    top_stage_penalty: float

    def as_array(self):
        return np.array(astuple(self), dtype=float)
