from dataclasses import dataclass

from django.db import models

from noc.common.exceptions import ParameterError
from noc.designs.models import DEFAULT_MAX_PORTS


class TrafficKind(models.TextChoices):
    UNIFORM = "Uniform", "Uniform"
    HOTSPOT = "Hotspot", "Hotspot"
    DISTANCE_DECAY = "DistanceDecay", "Distance decay"


@dataclass(frozen=True)
class SmallWorldSpec:
    # None means "same link count as the equivalent mesh".
    link_budget: int = None
    decay_exponent: float = 2.0
    seed: int = 0
    max_ports: int = DEFAULT_MAX_PORTS
    max_attempts: int = None

    def __post_init__(self):
        if not self.decay_exponent > 0:
            raise ParameterError("decay_exponent must be positive.")
        if self.max_ports < 3:
            raise ParameterError("Small-world routers need max_ports >= 3.")
        if self.link_budget is not None and self.link_budget < 1:
            raise ParameterError("link_budget must be positive.")


@dataclass(frozen=True)
class TrafficSpec:
    kind: str = TrafficKind.DISTANCE_DECAY
    hotspot_fraction: float = 0.5
    hot_cores: int = 1
    decay_exponent: float = 4.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", TrafficKind(self.kind))
        if not 0 <= self.hotspot_fraction <= 1:
            raise ParameterError("hotspot_fraction must lie in [0, 1].")
        if self.hot_cores < 1:
            raise ParameterError("hot_cores must be positive.")
        if self.decay_exponent < 0:
            raise ParameterError("decay_exponent must be non-negative.")
