from dataclasses import dataclass

from django.db import models


class StageKind(models.TextChoices):
    # Declaration order is pipeline order: index 0 is stage 1.
    VCA = "VCA", "Virtual channel allocator"
    SWA = "SWA", "Switch allocator"
    XBAR = "XBAR", "Crossbar traversal"

    @classmethod
    def ordered(cls):
        return (cls.VCA, cls.SWA, cls.XBAR)

    @property
    def position(self):
        return StageKind.ordered().index(self)


# Stages attached to router ports and therefore to inter-router links.
LINKED_STAGES = (StageKind.VCA, StageKind.SWA)


@dataclass(frozen=True)
class StageCost:
    delay_fo4: float
    energy_rel: float
    energy_abs_pj: float = 0.0


@dataclass(frozen=True)
class LinkCost:
    delay_ps_per_mm: float
    energy_pj_per_mm: float
