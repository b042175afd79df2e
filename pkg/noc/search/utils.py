import logging
from functools import lru_cache

import networkx as nx
import numpy as np

from noc.common.exceptions import DesignValidationError, NoFeasibleNeighbor
from noc.designs.models import (
    COMPATIBLE_STAGE_TIERS,
    DesignKind,
    LinkTier,
    StageTier,
    TierAssignment,
    manhattan,
)
from noc.designs.utils import validate_design
from noc.routing.utils import evaluate, features
from noc.timing.models import LINKED_STAGES, StageKind

from .forest import fit_forest
from .models import (
    ClimbResult,
    HistoryEntry,
    OptimizationResult,
    Perturbation,
    SearchMode,
    StageRun,
    TrainingDataset,
)

logger = logging.getLogger(__name__)


def po_baseline(design):
    """All stages multitier; link tiers alternate Bottom/Top by ascending link id."""
    topology = design.topology
    stage_tier = tuple(
        (StageTier.MT, StageTier.MT, StageTier.MT) for _ in range(topology.num_routers)
    )
    link_tier = tuple(
        LinkTier.BOTTOM if idx % 2 == 0 else LinkTier.TOP for idx in range(topology.num_links)
    )
    return design.with_tiers(TierAssignment(stage_tier, link_tier))


def available_moves(design, mode):
    moves = [Perturbation.SWAP_CORES]
    if design.kind == DesignKind.SMALL_WORLD:
        moves.append(Perturbation.MOVE_LINK)
    if SearchMode(mode) == SearchMode.PROCESS_AWARE:
        moves += [Perturbation.CYCLE_STAGE_TIER, Perturbation.FLIP_LINK_TIER]
    return moves


@lru_cache(maxsize=64)
def _pairs_by_length(routers):
    pairs = {}
    for a in range(len(routers)):
        for b in range(a + 1, len(routers)):
            pairs.setdefault(manhattan(routers[a], routers[b]), []).append((a, b))
    return pairs


def _link_fits(tiers, endpoints, link_tier):
    allowed = COMPATIBLE_STAGE_TIERS[link_tier]
    return all(
        tiers.stage(router, kind) in allowed for router in endpoints for kind in LINKED_STAGES
    )


def _swap_cores(design, rng):
    placement = list(design.topology.core_placement)
    i, j = sorted(int(v) for v in rng.choice(len(placement), size=2, replace=False))
    placement[i], placement[j] = placement[j], placement[i]
    return design.with_topology(design.topology.with_placement(placement))


def _move_link(design, rng):
    topology = design.topology
    bridges = {frozenset(edge) for edge in nx.bridges(topology.graph)}
    movable = [
        idx for idx, link in enumerate(topology.links) if frozenset(link.endpoints) not in bridges
    ]
    if not movable:
        return None
    u = movable[int(rng.integers(len(movable)))]
    old = topology.links[u]
    degrees = list(topology.degrees)
    degrees[old.a] -= 1
    degrees[old.b] -= 1
    cap = topology.max_ports - 1
    candidates = [
        (a, b)
        for a, b in _pairs_by_length(topology.routers).get(old.manhattan_len, ())
        if frozenset((a, b)) not in topology.link_index and degrees[a] < cap and degrees[b] < cap
    ]
    if not candidates:
        return None
    a, b = candidates[int(rng.integers(len(candidates)))]
    links = list(topology.links)
    links[u] = topology.make_link(a, b)

    tiers = design.tiers
    tier = tiers.link_tier[u]
    if not _link_fits(tiers, (a, b), tier):
        tier = tier.flipped if _link_fits(tiers, (a, b), tier.flipped) else LinkTier.BOTTOM
    return design.with_topology(topology.with_links(links)).with_tiers(tiers.with_link(u, tier))


def _cycle_stage_tier(design, rng):
    router = int(rng.integers(design.topology.num_routers))
    kind = StageKind.ordered()[int(rng.integers(3))]
    current = design.tiers.stage(router, kind)
    options = [tier for tier in StageTier if tier != current]
    new_tier = options[int(rng.integers(len(options)))]
    return design.with_tiers(design.tiers.with_stage(router, kind, new_tier))


def _flip_link_tier(design, rng):
    u = int(rng.integers(design.topology.num_links))
    return design.with_tiers(design.tiers.with_link(u, design.tiers.link_tier[u].flipped))


_MOVES = {
    Perturbation.SWAP_CORES: _swap_cores,
    Perturbation.MOVE_LINK: _move_link,
    Perturbation.CYCLE_STAGE_TIER: _cycle_stage_tier,
    Perturbation.FLIP_LINK_TIER: _flip_link_tier,
}


def perturb(design, rng, mode, max_retries=100, moves=None):
    """Return a valid neighbour of ``design``; invalid draws are discarded and re-drawn."""
    moves = list(moves) if moves is not None else available_moves(design, mode)
    for _ in range(max_retries):
        move = moves[int(rng.integers(len(moves)))]
        candidate = _MOVES[move](design, rng)
        if candidate is not None and validate_design(candidate).ok:
            return candidate
    raise NoFeasibleNeighbor(f"No valid neighbour after {max_retries} draws ({moves}).")


def hill_climb(start, objective, cfg, rng=None, mode=None):
    """Strict-improvement hill climbing; stops after ``cfg.patience`` consecutive misses."""
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    mode = mode if mode is not None else cfg.mode
    current, value = start, objective(start)
    trajectory, values = [current], [value]
    misses = 0
    while misses < cfg.patience:
        try:
            candidate = perturb(current, rng, mode, cfg.max_retries)
        except NoFeasibleNeighbor as exc:
            logger.debug("Climb stopped: %s", exc)
            break
        candidate_value = objective(candidate)
        if candidate_value < value:
            current, value = candidate, candidate_value
            trajectory.append(current)
            values.append(value)
            misses = 0
        else:
            misses += 1
    return ClimbResult(tuple(trajectory), tuple(values))


def _random_walk(design, rng, mode, cfg):
    for _ in range(cfg.restart_walk):
        try:
            design = perturb(design, rng, mode, cfg.max_retries)
        except NoFeasibleNeighbor:
            break
    return design


def run_stage(start, objective, feature_fn, cfg, rng, mode, label="stage"):
    """Alternate objective climbs with climbs on a forest predicting the climb outcome."""
    dataset = TrainingDataset()
    history = []
    best, best_value = start, objective(start)
    current = start
    for iteration in range(cfg.iter_max):
        climb = hill_climb(current, objective, cfg, rng=rng, mode=mode)
        if climb.best_value < best_value:
            best, best_value = climb.best, climb.best_value
        dataset.add_trajectory(
            (feature_fn(design).as_array() for design in climb.trajectory), climb.best_value
        )
        history.append(HistoryEntry(iteration, "objective", best_value, len(dataset)))
        logger.info(
            "%s iteration %d: climb %d steps, best EDP %.6g, dataset %d rows",
            label,
            iteration,
            len(climb.trajectory) - 1,
            best_value,
            len(dataset),
        )
        if iteration == cfg.iter_max - 1:
            break

        forest = fit_forest(dataset, cfg, iteration=iteration)
        surrogate = hill_climb(
            climb.best,
            lambda design: forest.predict_one(feature_fn(design).as_array()),
            cfg,
            rng=rng,
            mode=mode,
        )
        current = surrogate.best
        if len(surrogate.trajectory) == 1:
            current = _random_walk(current, rng, mode, cfg)
        history.append(HistoryEntry(iteration, "surrogate", best_value, len(dataset)))
    return StageRun(best, best_value, tuple(history), len(dataset))


def _retier_link(tiers, topology, u, link_tier):
    """Set one link tier, promoting incompatible endpoint stages to MT."""
    tiers = tiers.with_link(u, link_tier)
    allowed = COMPATIBLE_STAGE_TIERS[link_tier]
    for router in topology.links[u].endpoints:
        for kind in LINKED_STAGES:
            if tiers.stage(router, kind) not in allowed:
                tiers = tiers.with_stage(router, kind, StageTier.MT)
    return tiers


_SINGLE_TIER_PORTS = ((StageTier.BT, LinkTier.BOTTOM), (StageTier.TT, LinkTier.TOP))


def _tier_neighbours(design):
    """Single stage/link tier changes, plus compound moves that keep tiers compatible.

    Compound moves: a link flip with its endpoint stages promoted to MT, and a
    router's port stages set to BT (TT) with all its links moved to Bottom (Top).
    """
    tiers = design.tiers
    topology = design.topology
    for router in range(topology.num_routers):
        for kind in StageKind.ordered():
            current = tiers.stage(router, kind)
            for tier in StageTier:
                if tier != current:
                    yield tiers.with_stage(router, kind, tier)
    for u in range(topology.num_links):
        flipped = tiers.link_tier[u].flipped
        single = tiers.with_link(u, flipped)
        yield single
        promoted = _retier_link(tiers, topology, u, flipped)
        if promoted != single:
            yield promoted
    for router in range(topology.num_routers):
        for stage_tier, link_tier in _SINGLE_TIER_PORTS:
            candidate = tiers
            for u in topology.incident_links(router):
                candidate = _retier_link(candidate, topology, u, link_tier)
            for kind in LINKED_STAGES:
                candidate = candidate.with_stage(router, kind, stage_tier)
            if candidate != tiers:
                yield candidate


def polish_tiers(design, objective, value=None):
    """First-improvement descent over the full tier neighbourhood until no move improves."""
    value = objective(design) if value is None else value
    improved = True
    while improved:
        improved = False
        for tiers in list(_tier_neighbours(design)):
            candidate = design.with_tiers(tiers)
            if not validate_design(candidate).ok:
                continue
            candidate_value = objective(candidate)
            if candidate_value < value:
                design, value, improved = candidate, candidate_value, True
                break
    return design, value


def edp_objective(tm, pp):
    return lambda design: evaluate(design, tm, pp, validate=False).edp


def feature_function(tm, pp):
    return lambda design: features(design, tm, pp, validate=False)


def optimize_oblivious(problem, cfg, rng=None):
    """Topology/placement search under ideal tiers with every stage multitier."""
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    ideal = problem.process.ideal()
    start = po_baseline(problem.design)
    report = validate_design(start)
    if not report.ok:
        raise DesignValidationError(report)
    return run_stage(
        start,
        edp_objective(problem.traffic, ideal),
        feature_function(problem.traffic, ideal),
        cfg,
        rng,
        SearchMode.PROCESS_OBLIVIOUS,
        label="PO",
    )


def stage_optimize(problem, cfg, baseline=None):
    """Process-oblivious search, then (in process-aware mode) a tier-aware search seeded from it.

    ``baseline`` may carry an already optimised process-oblivious design.
    """
    rng = np.random.default_rng(cfg.seed)
    tm, pp = problem.traffic, problem.process
    history = ()
    if baseline is None:
        po_run = optimize_oblivious(problem, cfg, rng)
        baseline, history = po_run.best, po_run.history
    baseline_eval = evaluate(baseline, tm, pp)

    if cfg.mode == SearchMode.PROCESS_OBLIVIOUS:
        return OptimizationResult(baseline, baseline_eval, history, baseline, baseline_eval)

    objective = edp_objective(tm, pp)
    pa_run = run_stage(
        baseline, objective, feature_function(tm, pp), cfg, rng, SearchMode.PROCESS_AWARE, "PA"
    )
    best, best_value = pa_run.best, pa_run.best_value
    history = pa_run.history
    if cfg.polish:
        best, best_value = polish_tiers(best, objective, best_value)
        history += (HistoryEntry(cfg.iter_max, "polish", best_value, pa_run.dataset_rows),)
    best_eval = evaluate(best, tm, pp)
    logger.info("PA EDP %.6g vs PO EDP %.6g", best_eval.edp, baseline_eval.edp)
    return OptimizationResult(best, best_eval, history, baseline, baseline_eval)
