from dataclasses import dataclass, field

import numpy as np
from django.db import models

from noc.common.exceptions import ParameterError

HISTORY_HEADER = ("iteration", "step", "best_edp", "dataset_rows")


class Perturbation(models.TextChoices):
    SWAP_CORES = "SwapCores", "Swap two cores"
    MOVE_LINK = "MoveLink", "Move a link to an equal-length pair"
    CYCLE_STAGE_TIER = "CycleStageTier", "Change one router stage tier"
    FLIP_LINK_TIER = "FlipLinkTier", "Toggle one link tier"


class SearchMode(models.TextChoices):
    PROCESS_AWARE = "ProcessAware", "Process-aware"
    PROCESS_OBLIVIOUS = "ProcessOblivious", "Process-oblivious"


@dataclass(frozen=True)
class SearchConfig:
    iter_max: int = 5
    patience: int = 200
    n_trees: int = 50
    max_depth: int = 8
    min_leaf: int = 5
    seed: int = 0
    mode: str = SearchMode.PROCESS_AWARE
    max_retries: int = 100
    restart_walk: int = 10
    polish: bool = True
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", SearchMode(self.mode))
        positive = ("iter_max", "patience", "n_trees", "max_depth", "min_leaf", "max_retries", "jobs")
        for name in positive:
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be positive.")
        if self.restart_walk < 0:
            raise ParameterError("restart_walk must be non-negative.")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative.")


@dataclass(frozen=True)
class Problem:
    design: object
    traffic: object
    process: object


@dataclass
class TrainingDataset:
    """(features, final objective of the owning trajectory) rows."""

    features: list = field(default_factory=list)
    targets: list = field(default_factory=list)

    def __len__(self):
        return len(self.targets)

    def add_trajectory(self, feature_rows, final_objective):
        for row in feature_rows:
            self.features.append(np.asarray(row, dtype=float))
            self.targets.append(float(final_objective))

    def as_arrays(self):
        return np.vstack(self.features), np.asarray(self.targets)


@dataclass(frozen=True)
class ClimbResult:
    trajectory: tuple
    values: tuple

    @property
    def best(self):
        return self.trajectory[-1]

    @property
    def best_value(self):
        return self.values[-1]


@dataclass(frozen=True)
class HistoryEntry:
    iteration: int
    step: str
    best_edp: float
    dataset_rows: int

    def as_row(self):
        return (self.iteration, self.step, self.best_edp, self.dataset_rows)


@dataclass(frozen=True)
class StageRun:
    best: object
    best_value: float
    history: tuple
    dataset_rows: int


@dataclass(frozen=True)
class OptimizationResult:
    best: object
    best_eval: object
    history: tuple
    baseline: object
    baseline_eval: object
