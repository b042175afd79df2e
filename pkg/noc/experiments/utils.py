import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import django
from django.conf import settings

from noc.common.exceptions import InstanceTooLargeError
from noc.common.utils import derive_seed, write_csv, write_json
from noc.designs.models import (
    COMPATIBLE_STAGE_TIERS,
    Design,
    DesignKind,
    LinkTier,
    StageTier,
    TierAssignment,
)
from noc.routing.utils import element_loads, evaluate, link_costs
from noc.search.models import Problem
from noc.search.utils import optimize_oblivious, po_baseline, stage_optimize
from noc.timing.models import LINKED_STAGES, StageKind
from noc.timing.utils import router_cost
from noc.topology.utils import (
    gen_mesh,
    gen_smallworld,
    gen_traffic,
    load_traffic_csv,
    traffic_distance_histogram,
)

from .models import (
    EDP_HEADER,
    LINK_DIST_HEADER,
    STAGE_BY_LEN_HEADER,
    STAGE_DIST_HEADER,
    SWEEP_HISTORY_HEADER,
    TRAFFIC_DISTANCE_HEADER,
    BruteResult,
    CellResult,
    SweepTask,
)

logger = logging.getLogger(__name__)

STAGE_GROUPS = (
    (StageKind.VCA.value, (StageKind.VCA,)),
    (StageKind.SWA.value, (StageKind.SWA,)),
    (StageKind.XBAR.value, (StageKind.XBAR,)),
    ("IO", LINKED_STAGES),
    ("ALL", StageKind.ordered()),
)


def build_topology(config):
    if config.kind == DesignKind.MESH:
        return gen_mesh(config.grid, config.max_ports)
    return gen_smallworld(config.grid, config.smallworld)


def build_traffic(config):
    if config.traffic_csv:
        return load_traffic_csv(config.traffic_csv, config.grid.num_routers)
    return gen_traffic(config.grid, config.traffic)


def po_tiers(topology, kind=DesignKind.SMALL_WORLD):
    design = Design(
        topology, TierAssignment.uniform(topology.num_routers, topology.num_links), kind=kind
    )
    return po_baseline(design).tiers


def initial_design(config, topology=None):
    """Generated (or given) topology with the process-oblivious tier assignment."""
    topology = topology if topology is not None else build_topology(config)
    return Design(topology, po_tiers(topology), kind=config.kind, router=config.router)


def build_problem(config, design=None):
    design = design if design is not None else initial_design(config)
    return Problem(design, build_traffic(config), config.process)


def _pct(counts):
    total = sum(counts.values())
    return tuple(100.0 * counts[tier] / total if total else 0.0 for tier in StageTier)


def stage_distribution(design):
    """``(group, pct_BT, pct_TT, pct_MT)`` rows for each stage kind plus IO and ALL."""
    return [(label,) + _pct(design.tiers.count_stages(kinds)) for label, kinds in STAGE_GROUPS]


def link_distribution(design):
    tiers = design.tiers.link_tier
    if not tiers:
        return (0.0, 0.0)
    top = sum(1 for tier in tiers if tier == LinkTier.TOP)
    return (100.0 * top / len(tiers), 100.0 * (len(tiers) - top) / len(tiers))


def stage_tiers_by_length(design):
    """Tier shares of the VCA/SWA stages at both ends of links, per link Manhattan length."""
    groups = {}
    for link in design.topology.links:
        counts = groups.setdefault(link.manhattan_len, {tier: 0 for tier in StageTier})
        for router in link.endpoints:
            for kind in LINKED_STAGES:
                counts[design.tiers.stage(router, kind)] += 1
    return [(length,) + _pct(counts) for length, counts in sorted(groups.items())]


def _router_options(design, router, link_tier, load, pp):
    allowed = set(StageTier)
    for link in design.topology.incident_links(router):
        allowed &= COMPATIBLE_STAGE_TIERS[link_tier[link]]
    io_tiers = [tier for tier in StageTier if tier in allowed]
    ports = design.topology.ports(router)
    options = []
    for row in itertools.product(io_tiers, io_tiers, StageTier):
        delay, energy = router_cost(row, ports, design.router, pp)
        options.append((load * delay, load * energy, row))
    return options


def _pareto(candidates):
    candidates.sort(key=lambda item: (item[0], item[1]))
    front = []
    for candidate in candidates:
        if not front or candidate[1] < front[-1][1]:
            front.append(candidate)
    return front


def brute_force_tiers(design, tm, pp, limit=None):
    """Exact EDP-optimal tier assignment for a fixed topology and placement.

    Every link tier combination is expanded router by router; partial
    (latency, energy) sums dominated in both coordinates are dropped, which
    cannot lose the optimum of a product of non-negative sums.
    """
    limit = settings.NOC["BRUTE_LIMIT"] if limit is None else limit
    topology = design.topology
    n, num_links = topology.num_routers, topology.num_links
    raw = 3 ** (3 * n) * 2**num_links
    if raw > limit:
        raise InstanceTooLargeError(
            f"{raw} raw tier assignments exceed the brute-force limit {limit}."
        )
    router_load, link_load = element_loads(design, tm)
    best_value, best_tiers, valid = None, None, 0

    for link_tier in itertools.product((LinkTier.BOTTOM, LinkTier.TOP), repeat=num_links):
        with_links = design.with_tiers(replace(design.tiers, link_tier=link_tier))
        l_delay, l_energy = link_costs(with_links, pp)
        base_latency = float(link_load @ l_delay)
        base_energy = float(link_load @ l_energy)

        frontier = [(0.0, 0.0, ())]
        combinations = 1
        for router in range(n):
            options = _router_options(design, router, link_tier, float(router_load[router]), pp)
            combinations *= len(options)
            frontier = _pareto(
                [
                    (latency + d_latency, energy + d_energy, rows + (row,))
                    for latency, energy, rows in frontier
                    for d_latency, d_energy, row in options
                ]
            )
        valid += combinations

        for latency, energy, rows in frontier:
            value = (base_latency + latency) * (base_energy + energy)
            if best_value is None or value < best_value:
                best_value, best_tiers = value, TierAssignment(rows, link_tier)

    best = design.with_tiers(best_tiers)
    result = evaluate(best, tm, pp)
    logger.info(
        "Brute force: %d valid of %d raw assignments, best EDP %.6g", valid, raw, result.edp
    )
    return BruteResult(best, result, valid, raw)


def run_cell(task):
    """Process-aware search for one sweep cell plus its distribution reports."""
    pp = task.process.at(task.alpha, task.beta, task.gamma)
    search = replace(
        task.search,
        seed=derive_seed(task.search.seed, "pa", task.alpha, task.beta, task.gamma),
        jobs=1,
    )
    result = stage_optimize(Problem(task.baseline, task.traffic, pp), search, task.baseline)
    ideal = evaluate(task.baseline, task.traffic, pp.ideal())
    best = result.best
    return CellResult(
        alpha=task.alpha,
        beta=task.beta,
        gamma=task.gamma,
        edp_po=result.baseline_eval.edp,
        edp_pa=result.best_eval.edp,
        edp_po_ideal=ideal.edp,
        stage_rows=tuple(stage_distribution(best)),
        link_row=link_distribution(best),
        length_rows=tuple(stage_tiers_by_length(best)),
        history_rows=tuple(entry.as_row() for entry in result.history),
    )


def _po_design(args):
    problem, search, gamma = args
    seeded = replace(search, seed=derive_seed(search.seed, "po", gamma))
    return optimize_oblivious(problem, seeded).best


def _map(function, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        yield from map(function, items)
        return
    with ProcessPoolExecutor(max_workers=jobs, initializer=django.setup) as executor:
        yield from executor.map(function, items)


def _ratio(value, reference):
    return value / reference if reference > 0 else float("nan")


def write_sweep_reports(out_dir, results):
    """Merged CSVs in cell order; called with whatever cells have completed."""
    out_dir = Path(out_dir)
    write_csv(
        out_dir / "stage_dist.csv",
        STAGE_DIST_HEADER,
        ((r.alpha, r.beta, r.gamma) + tuple(row) for r in results for row in r.stage_rows),
    )
    write_csv(
        out_dir / "link_dist.csv",
        LINK_DIST_HEADER,
        ((r.alpha, r.beta, r.gamma) + tuple(r.link_row) for r in results),
    )
    write_csv(
        out_dir / "stage_by_len.csv",
        STAGE_BY_LEN_HEADER,
        ((r.alpha, r.beta, r.gamma) + tuple(row) for r in results for row in r.length_rows),
    )
    write_csv(
        out_dir / "edp.csv",
        EDP_HEADER,
        (
            (
                r.alpha,
                r.beta,
                r.gamma,
                r.edp_po,
                r.edp_pa,
                _ratio(r.edp_po, r.edp_po_ideal),
                _ratio(r.edp_pa, r.edp_po_ideal),
            )
            for r in results
        ),
    )
    write_csv(
        out_dir / "history.csv",
        SWEEP_HISTORY_HEADER,
        ((r.alpha, r.beta, r.gamma) + tuple(row) for r in results for row in r.history_rows),
    )


def write_traffic_report(path, tm, topology):
    histogram = traffic_distance_histogram(tm, topology)
    return write_csv(path, TRAFFIC_DISTANCE_HEADER, sorted(histogram.items()))


def run_sweep(config, out_dir, jobs=None):
    """Optimise PO once per gamma, then PA per (alpha, beta, gamma) cell.

    Each finished cell is written to ``cells/`` and listed in ``manifest.json``;
    merged CSVs are rewritten on success and on failure.
    """
    jobs = config.jobs if jobs is None else jobs
    out_dir = Path(out_dir)
    problem = build_problem(config)
    write_traffic_report(
        out_dir / "traffic_by_distance.csv", problem.traffic, problem.design.topology
    )

    points = config.sweep.points()
    gammas = list(dict.fromkeys(gamma for _, _, gamma in points))
    search = replace(config.search, jobs=1)
    po_jobs = [(replace(problem, process=config.process.at(gamma=g)), search, g) for g in gammas]
    baselines = dict(zip(gammas, _map(_po_design, po_jobs, jobs)))
    logger.info("Optimised %d process-oblivious baselines", len(baselines))

    tasks = [
        SweepTask(a, b, g, baselines[g], problem.traffic, config.process, config.search)
        for a, b, g in points
    ]
    results, manifest = [], {"cells": [], "points": [list(p) for p in points]}
    try:
        for result in _map(run_cell, tasks, jobs):
            cell_path = Path("cells") / f"{result.key}.json"
            write_json(out_dir / cell_path, asdict(result))
            results.append(result)
            manifest["cells"].append(str(cell_path))
            write_json(out_dir / "manifest.json", manifest)
            logger.info(
                "Cell alpha=%s beta=%s gamma=%s: PA EDP %.6g, PO EDP %.6g",
                result.alpha,
                result.beta,
                result.gamma,
                result.edp_pa,
                result.edp_po,
            )
    finally:
        manifest["complete"] = len(results) == len(points)
        write_json(out_dir / "manifest.json", manifest)
        write_sweep_reports(out_dir, results)
    return results
