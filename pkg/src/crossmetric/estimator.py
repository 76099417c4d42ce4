"""Rough upper bound on the MST weight from sampled, budget-limited floods.

At sampling rate ``r / m`` (r = m, m/2, m/4, ...) several line samples are
drawn.  For each, the exact wavefront MST on the sample is attempted with a
budget on the number of faces the flood may reach; a run that trips the
budget says "the sampled MST is heavy".  The first rate with at least one
completed run yields

    M = (m / r) * (c_est * n * ln n + 2 * min W_opt(P, R_j)).
"""
from __future__ import annotations

import math

import numpy as np

from .approx import SamplingConfig, Trace, _ArrangementCache, log_n
from .errors import BudgetExceeded, DimensionUnsupported
from .forest import SpanningForest
from .geometry import Instance
from .mst_exact import propagate
from .seeding import derive_rng


def flood_budget(inst: Instance, cfg: SamplingConfig, n_lines: int) -> int:
    return math.ceil(cfg.c_est * cfg.alpha_fn * (n_lines + inst.n) * log_n(inst))


def budgeted_weight(inst: Instance, cfg: SamplingConfig, R: tuple[int, ...], cache: _ArrangementCache) -> int | None:
    """W_opt(P, R), or None if the flood needed more faces than the budget allows."""
    forest = SpanningForest(inst.n, R)
    try:
        propagate(inst, cache.get(R), forest, visit_budget=flood_budget(inst, cfg, len(R)))
    except BudgetExceeded:
        return None
    return forest.weight


def estimate_weight_rough(inst: Instance, cfg: SamplingConfig, trace: Trace | None = None) -> float:
    if inst.dim != 2:
        raise DimensionUnsupported("the rough estimator floods planar arrangements")
    n, m = inst.n, inst.m
    if n < 2 or m == 0:
        return 0.0
    ln = log_n(inst)
    repeats = cfg.repeats(n)
    cache = _ArrangementCache(inst)
    results: dict[tuple[int, ...], int | None] = {}
    rate = float(m)
    level = 0
    while True:
        weights = []
        for j in range(repeats):
            rng = derive_rng(cfg.seed, "rough", level, j)
            R = tuple(int(x) for x in np.flatnonzero(rng.random(m) < rate / m))
            if R not in results:
                results[R] = budgeted_weight(inst, cfg, R, cache)
            if results[R] is not None:
                weights.append(results[R])
        if trace:
            trace({"event": "rough", "rate": rate, "completed": len(weights), "repeats": repeats,
                   "min_weight": min(weights) if weights else None})
        if weights:
            return (m / rate) * (cfg.c_est * n * ln + 2 * min(weights))
        rate /= 2
        level += 1
