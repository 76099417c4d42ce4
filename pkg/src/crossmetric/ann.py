"""Bit-sampling LSH over binary codes and an MST built from approximate neighbours.

``mst_via_embedding`` embeds the instance at a ladder of thresholds
``r_t = ceil((1 + eps)^t)`` and runs Boruvka rounds.  In each round every
component asks the indices, smallest threshold first, for a nearby foreign
point; the first rung where some member finds a candidate whose label
distance is within the rung's near threshold decides the component's
proposal.  Proposals are merged through a Kruskal filter on their true
crossing weights.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .embedding import EmbeddingConfig, EmbeddedPoints, embed_points, plan_embedding
from .errors import DuplicateId, NotFound, UnknownId
from .forest import SpanningForest
from .geometry import Instance
from .seeding import derive_rng, derive_seed


class LshIndex:
    """Dynamic approximate nearest neighbour over fixed-length bit codes.

    Each of ``G`` bands hashes a code by ``K`` sampled bit positions.  A
    query scores every live point sharing a bucket with it in some band
    and falls back to a linear scan when no band collides.
    """

    def __init__(self, D: int, n_hint: int, K: int | None = None, G: int | None = None, seed: int = 0):
        if D < 1:
            raise ValueError("code length must be positive")
        n_hint = max(n_hint, 2)
        self.D = D
        self.K = min(D, K if K is not None else math.ceil(math.log2(n_hint)))
        self.G = G if G is not None else min(64, math.ceil(n_hint**0.4))
        rng = derive_rng(seed, "lsh")
        self.bands = [np.sort(rng.choice(D, size=self.K, replace=False)) for _ in range(self.G)]
        self.tables: list[dict[bytes, set[int]]] = [{} for _ in range(self.G)]
        self.codes: dict[int, np.ndarray] = {}

    @property
    def live(self) -> set[int]:
        return set(self.codes)

    def _keys(self, code: np.ndarray) -> list[bytes]:
        return [np.packbits(code[b]).tobytes() for b in self.bands]

    def _check(self, code) -> np.ndarray:
        code = np.asarray(code, dtype=bool)
        if code.shape != (self.D,):
            raise ValueError(f"expected a code of {self.D} bits")
        return code

    def insert(self, pid: int, code) -> None:
        if pid in self.codes:
            raise DuplicateId(pid)
        code = self._check(code)
        self.codes[pid] = code
        for table, key in zip(self.tables, self._keys(code)):
            table.setdefault(key, set()).add(pid)

    def delete(self, pid: int) -> None:
        code = self.codes.pop(pid, None)
        if code is None:
            raise UnknownId(pid)
        for table, key in zip(self.tables, self._keys(code)):
            bucket = table[key]
            bucket.discard(pid)
            if not bucket:
                del table[key]

    def query(self, code, exclude: Callable[[int], bool] | None = None) -> int:
        """Closest colliding live point (ties to the smaller id) not excluded."""
        code = self._check(code)
        keep = (lambda p: True) if exclude is None else (lambda p: not exclude(p))
        cands = {p for table, key in zip(self.tables, self._keys(code)) for p in table.get(key, ()) if keep(p)}
        if not cands:
            cands = {p for p in self.codes if keep(p)}
        if not cands:
            raise NotFound("no live point passes the exclusion")
        ids = sorted(cands)
        dists = np.count_nonzero(np.stack([self.codes[p] for p in ids]) != code, axis=1)
        return ids[int(np.argmin(dists))]


@dataclass(frozen=True)
class AnnConfig:
    C_embed: float = 1.0
    binary_reps: int | None = None
    K: int | None = None
    G: int | None = None
    seed: int = 0


def threshold_ladder(m: int, eps: float) -> list[int]:
    if m < 1:
        return []
    top = math.ceil(math.log(m) / math.log1p(eps) - 1e-9)
    return sorted({min(m, math.ceil((1 + eps) ** t - 1e-9)) for t in range(top + 1)})


@dataclass
class Rung:
    r: int
    embedded: EmbeddedPoints
    index: LshIndex

    def to_dict(self) -> dict:
        s = self.embedded.spec
        return {"r": self.r, "mu": s.mu, "k": s.k, "gap_ratio": s.gap_ratio,
                "resolvable_factor": s.resolvable_factor(), "degenerate": s.degenerate}


@dataclass
class AnnResult:
    forest: SpanningForest
    ladder: list[dict] = field(default_factory=list)
    rounds: list[dict] = field(default_factory=list)

    @property
    def weight(self) -> int:
        return self.forest.weight

    @property
    def eps_effective(self) -> float:
        """Distance factor the coarsest-resolving rung can separate, minus one."""
        return max((r["resolvable_factor"] for r in self.ladder), default=1.0) - 1


def build_ladder(inst: Instance, eps: float, cfg: AnnConfig) -> list[Rung]:
    rungs = []
    for t, r in enumerate(threshold_ladder(inst.m, eps)):
        ecfg = EmbeddingConfig(cfg.C_embed, cfg.binary_reps, derive_seed(cfg.seed, "ladder", t))
        e = embed_points(inst, plan_embedding(inst, r, eps, ecfg, strict=False))
        idx = LshIndex(e.binary.shape[1], inst.n, cfg.K, cfg.G, seed=derive_seed(cfg.seed, "index", t))
        for p in range(inst.n):
            idx.insert(p, e.binary[p])
        rungs.append(Rung(r, e, idx))
    return rungs


def _propose(inst: Instance, rungs: list[Rung], members: list[int], exclude) -> tuple[int, int] | None:
    """The (member, foreign point) pair a component proposes this round.

    If no rung ever reports a near candidate, the truly closest of all
    returned candidates is used.
    """
    closest = None
    for rung in rungs:
        labels = rung.embedded.labels
        near = rung.embedded.spec.near_threshold
        best = None
        for p in members:
            q = rung.index.query(rung.embedded.binary[p], exclude)
            d = inst.distance(p, q)
            closest = min(closest or (d, p, q), (d, p, q))
            x = int(np.count_nonzero(labels[p] != labels[q]))
            if x <= near:
                best = min(best or (x, d, p, q), (x, d, p, q))
        if best is not None:
            return best[2], best[3]
    return None if closest is None else closest[1:]


def _exact_lightest(inst: Instance, forest: SpanningForest) -> list[tuple[int, int, int]]:
    comp = np.array(forest.component_labels())
    D = inst.distance_matrix()
    D = np.where(comp[:, None] != comp[None, :], D, np.iinfo(np.int64).max)
    i, j = np.unravel_index(int(np.argmin(D)), D.shape)
    return [(int(D[i, j]), min(i, j), max(i, j))]


def mst_via_embedding(inst: Instance, eps: float, cfg: AnnConfig | None = None) -> AnnResult:
    """Spanning tree whose edges come from approximate-neighbour queries on the ladder."""
    cfg = cfg or AnnConfig()
    if eps <= 0:
        raise ValueError("eps must be positive")
    forest = SpanningForest(inst.n)
    result = AnnResult(forest)
    if inst.n < 2:
        return result
    # points sharing a cell are at distance zero; join them exactly
    first: dict[bytes, int] = {}
    for p in range(inst.n):
        q = first.setdefault(inst.signs[p].tobytes(), p)
        if q != p:
            forest.add_edge(q, p, 0)
    if forest.is_spanning():
        return result
    rungs = build_ladder(inst, eps, cfg)
    result.ladder = [r.to_dict() for r in rungs]
    while not forest.is_spanning():
        labels = forest.component_labels()
        groups: dict[int, list[int]] = {}
        for p, c in enumerate(labels):
            groups.setdefault(c, []).append(p)
        proposals = []
        for c, members in sorted(groups.items()):
            pair = _propose(inst, rungs, members, lambda q, c=c: labels[q] == c)
            if pair is not None:
                p, q = pair
                proposals.append((inst.distance(p, q), min(p, q), max(p, q)))
        before = forest.components
        for w, p, q in sorted(proposals):
            forest.add_edge(p, q, w)
        fallback = forest.components == before
        if fallback:
            for w, p, q in _exact_lightest(inst, forest):
                forest.add_edge(p, q, w)
        result.rounds.append({"round": len(result.rounds), "components": before,
                              "edges_added": before - forest.components, "fallback": fallback})
    return result
