"""Router stage delay/energy and link cost models.

Stage delays are in FO4 units; energies are either relative to the planar
(single-tier) stage or absolute picojoules from the baseline proxy.
"""

import math
from functools import lru_cache

import numpy as np

from noc.common.exceptions import ParameterError
from noc.designs.models import LinkTier, StageTier

from .models import LinkCost, StageCost, StageKind


def _log(value, base):
    return math.log(value) / math.log(base)


def _check_router(p, v, w):
    if p < 2:
        raise ParameterError(f"A router needs at least two ports, got p={p}.")
    if v < 1 or w < 1:
        raise ParameterError("vcs and flit_bits must be positive.")
    if p * v <= 1:
        raise ParameterError("p*v must exceed 1.")


def stage_delay_2d(kind, p, v, w):
    """Planar stage delay in FO4 for a router with ``p`` ports, ``v`` VCs, ``w``-bit flits."""
    _check_router(p, v, w)
    kind = StageKind(kind)
    if kind == StageKind.VCA:
        return 33 * _log(p * v, 4) + 125 / 6
    if kind == StageKind.SWA:
        return 28 * _log(p, 4) + 35 / 2
    # Odd port counts round the crossbar half-width up.
    return 9 * _log(w * math.ceil(p / 2), 8) + 6 * math.log2(p) + 6


def _interpolate(table, alpha):
    alphas, ratios = zip(*table)
    return float(np.interp(alpha, alphas, ratios))


def fo4_ratio(pp):
    """FO4 delay of a degraded top-tier transistor relative to the planar one."""
    if pp.fo4_table is not None:
        return _interpolate(pp.fo4_table, pp.alpha)
    return 1 + pp.fo4_slope * pp.alpha


def cap_ratio_logic(pp):
    if pp.cap_table is not None:
        return _interpolate(pp.cap_table, pp.alpha)
    return 1 + pp.cap_slope * pp.alpha


def mt_wire_factor(pp):
    """Remaining interconnect capacitance of a stage split across ``pp.tiers`` tiers."""
    return 1 / math.sqrt(pp.tiers)


def stage_energy_baseline(kind, p, v, w, pp):
    """Planar stage energy proxy in picojoules."""
    _check_router(p, v, w)
    e0 = pp.stage_energy_pj
    kind = StageKind(kind)
    if kind == StageKind.VCA:
        return e0 * p * v
    if kind == StageKind.SWA:
        return e0 * p**2
    return e0 * w * p**2 / 32


@lru_cache(maxsize=4096)
def stage_cost(kind, tier, p, v, w, pp):
    kind = StageKind(kind)
    try:
        tier = StageTier(tier)
    except ValueError as exc:
        raise ParameterError(f"Unknown stage tier {tier!r}.") from exc
    t2d = stage_delay_2d(kind, p, v, w)
    rho = pp.wire_frac.for_stage(kind)

    if tier == StageTier.BT:
        delay, energy_rel = t2d, 1.0
    else:
        if pp.tiers < 2:
            raise ParameterError(f"{tier.value} stages need at least two tiers.")
        slow = fo4_ratio(pp)
        cap = cap_ratio_logic(pp)
        if tier == StageTier.TT:
            delay = slow * t2d
            # Interconnect capacitance is unchanged in a single top-tier stage.
            energy_rel = (1 - rho) * cap + rho
        else:
            # Logic split evenly between tiers; only the top half degrades.
            delay = (1 - pp.gamma) * (0.5 * t2d + 0.5 * slow * t2d)
            energy_rel = (1 - rho) * (1 + cap) / 2 + rho * mt_wire_factor(pp)

    baseline = stage_energy_baseline(kind, p, v, w, pp)
    return StageCost(delay_fo4=delay, energy_rel=energy_rel, energy_abs_pj=energy_rel * baseline)


def link_cost(tier, pp):
    tier = LinkTier(tier)
    if tier == LinkTier.TOP:
        return LinkCost(pp.t_cu_ps_per_mm, pp.e_cu_pj_per_mm)
    return LinkCost(
        pp.t_cu_ps_per_mm * (1 + pp.beta),
        pp.e_cu_pj_per_mm * (1 + pp.effective_beta_energy),
    )


def router_cost(tiers_row, p, router, pp):
    """Total (delay_ps, energy_pj) of one traversal of a router's three stages."""
    delay = energy = 0.0
    for kind, tier in zip(StageKind.ordered(), tiers_row):
        cost = stage_cost(kind, tier, p, router.vcs, router.flit_bits, pp)
        delay += cost.delay_fo4 * pp.fo4_ps
        energy += cost.energy_abs_pj
    return delay, energy
