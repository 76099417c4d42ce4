"""Near-linear (1+eps)-approximate crossing MST by staged random sampling.

Stage ``i`` works at distance scale ``l_i = 2^i l_0``.  It keeps every line
independently with probability ``nu = min(1, c_samp ln n / (l eps^2))`` and
floods the arrangement of the sample to a fixed depth, so that sampled
distances of about ``rho = nu * l`` separate pairs at true distance ``l``
with relative error ``eps / 4``.  Edges are always recorded with their true
crossing weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .arrangement import Arrangement, build_arrangement
from .errors import DimensionUnsupported
from .forest import SpanningForest
from .geometry import Instance
from .mst_exact import propagate
from .seeding import derive_rng

Trace = Callable[[dict], None]


@dataclass(frozen=True)
class SamplingConfig:
    eps: float = 0.5
    c_samp: float = 2.0
    c_short: float = 1.0
    c_prop: float = 4.0
    c_est: float = 2.0
    alpha_fn: float = 3.0
    est_repeats: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        for name in ("c_samp", "c_short", "c_prop", "c_est", "alpha_fn"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.est_repeats is not None and self.est_repeats < 1:
            raise ValueError("est_repeats must be at least 1")

    def repeats(self, n: int) -> int:
        if self.est_repeats is not None:
            return self.est_repeats
        return max(1, math.ceil(2 * math.log2(max(n, 2))))


def log_n(inst: Instance) -> float:
    return math.log(max(inst.n, 2))


@dataclass(frozen=True)
class SamplePlan:
    l: float
    eps: float
    nu: float
    rho: float
    R: tuple[int, ...]


def sample_probability(inst: Instance, cfg: SamplingConfig, l: float) -> float:
    return min(1.0, cfg.c_samp * log_n(inst) / (l * cfg.eps**2))


def make_sample(inst: Instance, cfg: SamplingConfig, l: float, rng: np.random.Generator | None = None) -> SamplePlan:
    if l < 1:
        raise ValueError("distance scale l must be at least 1")
    nu = sample_probability(inst, cfg, l)
    if rng is None:
        rng = derive_rng(cfg.seed, "sample", repr(float(l)))
    keep = rng.random(inst.m) < nu
    return SamplePlan(float(l), cfg.eps, nu, nu * l, tuple(int(j) for j in np.flatnonzero(keep)))


def scaled_distance_estimate(inst: Instance, plan: SamplePlan, p: int, q: int) -> float:
    """Sampled crossing distance rescaled by ``1 / (nu (1 - eps/4))``."""
    return inst.distance(p, q, plan.R) / (plan.nu * (1 - plan.eps / 4))


def propagation_depth(inst: Instance, cfg: SamplingConfig, plan: SamplePlan) -> int:
    # With a genuine sample the depth is c_prop ln n / eps^2.  When nu is
    # clamped at 1 the expected sampled distance is l itself, and the same
    # ratio c_prop / c_samp of it is used instead.
    if plan.nu < 1:
        return math.ceil(cfg.c_prop * log_n(inst) / cfg.eps**2)
    return math.ceil(cfg.c_prop / cfg.c_samp * plan.l)


@dataclass
class StageReport:
    l: float
    nu: float
    n_lines: int
    depth: int
    edges_added: int
    exact: bool = False

    def to_dict(self) -> dict:
        return {"l": self.l, "nu": self.nu, "R": self.n_lines, "depth": self.depth,
                "edges_added": self.edges_added, "exact": self.exact}


class _ArrangementCache:
    def __init__(self, inst: Instance):
        self.inst = inst
        self._cache: dict[tuple[int, ...], Arrangement] = {}

    def get(self, R: tuple[int, ...]) -> Arrangement:
        arr = self._cache.get(R)
        if arr is None:
            arr = self._cache[R] = build_arrangement(self.inst, R)
        return arr


def propagate_approx_wavefront(
    inst: Instance,
    cfg: SamplingConfig,
    l: float,
    forest: SpanningForest,
    rng: np.random.Generator | None = None,
    cache: _ArrangementCache | None = None,
) -> StageReport:
    """One sampling stage: flood Arr(R) for R sampled at scale l and merge into ``forest``."""
    if inst.dim != 2:
        raise DimensionUnsupported("the sampling pipeline is planar")
    plan = make_sample(inst, cfg, l, rng)
    depth = propagation_depth(inst, cfg, plan)
    report = StageReport(plan.l, plan.nu, len(plan.R), depth, 0)
    if forest.is_spanning():
        return report
    arr = (cache or _ArrangementCache(inst)).get(plan.R)
    report.edges_added = propagate(inst, arr, forest, max_depth=depth).edges_added
    return report


@dataclass
class ApproxResult:
    forest: SpanningForest
    M: float
    l0: float
    stages: list[StageReport] = field(default_factory=list)

    @property
    def weight(self) -> int:
        return self.forest.weight


def initial_scale(inst: Instance, cfg: SamplingConfig, M: float) -> float:
    ln = log_n(inst)
    return max(cfg.eps * M / (cfg.c_short * max(inst.n, 1) * cfg.alpha_fn * ln * ln), 1.0)


def approx_mst(inst: Instance, cfg: SamplingConfig, trace: Trace | None = None) -> ApproxResult:
    """Spanning tree of weight at most (1 + eps) W_opt with high probability."""
    from .estimator import estimate_weight_rough

    if inst.dim != 2:
        raise DimensionUnsupported("the sampling pipeline is planar")
    forest = SpanningForest(inst.n)
    if inst.n <= 1:
        return ApproxResult(forest, 0.0, 1.0)
    M = estimate_weight_rough(inst, cfg, trace=trace)
    l = initial_scale(inst, cfg, M)
    result = ApproxResult(forest, M, l)
    cache = _ArrangementCache(inst)
    stage = 0
    while True:
        rep = propagate_approx_wavefront(inst, cfg, l, forest, derive_rng(cfg.seed, "stage", stage), cache)
        result.stages.append(rep)
        if trace:
            trace({"event": "stage", "index": stage, **rep.to_dict(), "components": forest.components})
        if forest.is_spanning():
            break
        stage += 1
        l *= 2
        if l > inst.m:
            # every crossing distance is at most m: one exact pass finishes the tree
            added = propagate(inst, cache.get(tuple(range(inst.m))), forest).edges_added
            rep = StageReport(l, 1.0, inst.m, -1, added, exact=True)
            result.stages.append(rep)
            if trace:
                trace({"event": "stage", "index": stage, **rep.to_dict(), "components": forest.components})
            break
    return result
