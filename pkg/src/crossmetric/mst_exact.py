"""Exact crossing-metric MSTs: the all-pairs Kruskal oracle and wavefront flooding.

Wavefront flooding runs a multi-source BFS over the face-adjacency graph
starting from the faces that hold points.  Every face is claimed by a
nearest source, and each adjacency edge whose endpoints were claimed by
different sources proposes a candidate MST edge between those sources, of
weight ``dist(f) + dist(g) + 1``.  That weight is only an upper bound on the
true crossing distance of the two sources, but a Kruskal pass over the
candidates in weight order still produces a minimum spanning tree (the
boundary-edge argument of graph Voronoi diagrams), and every accepted edge
has weight equal to the true distance.

Candidates are finalised lazily: once level ``d`` of the flood is done, no
undiscovered candidate can weigh less than ``d + 2``, so everything up to
``d + 1`` can be committed.  The flood stops as soon as the forest spans.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .arrangement import Arrangement, build_arrangement, flood, grouped_by_face, locate_points
from .errors import BudgetExceeded, DimensionUnsupported
from .forest import SpanningForest
from .geometry import Instance


@dataclass
class FloodStats:
    depth: int = 0
    visited: int = 0
    candidates: int = 0
    edges_added: int = 0
    # (candidate weight, true distance under the flooded lines) for audited runs
    audit: list[tuple[int, int, bool]] = field(default_factory=list)


def mst_bruteforce(inst: Instance, lines: Iterable[int] | None = None) -> SpanningForest:
    """Kruskal over all pairs, ties broken by (min id, max id)."""
    lines = None if lines is None else sorted(set(lines))
    forest = SpanningForest(inst.n, lines)
    if inst.n < 2:
        return forest
    D = inst.distance_matrix(lines)
    i, j = np.triu_indices(inst.n, k=1)
    w = D[i, j]
    for k in np.lexsort((j, i, w)):
        if forest.add_edge(int(i[k]), int(j[k]), int(w[k])) and forest.is_spanning():
            break
    return forest


def propagate(
    inst: Instance,
    arr: Arrangement,
    forest: SpanningForest,
    max_depth: int | None = None,
    visit_budget: int | None = None,
    audit: bool = False,
) -> FloodStats:
    """Flood ``arr`` from the point faces and merge colliding fronts into ``forest``.

    Afterwards every pair of points within crossing distance ``2 * max_depth``
    under the arrangement's lines is connected.  Added edges are weighted by
    the true crossing distance under ``forest.lines``.  ``visit_budget``
    bounds the number of faces the flood may reach.
    """
    stats = FloodStats()
    if inst.n == 0:
        return stats
    lines = list(arr.lines)
    faces = locate_points(arr, inst)
    groups = grouped_by_face(faces)
    seeds = {f: pts[0] for f, pts in groups.items()}

    def weigh(a: int, b: int) -> int:
        return inst.distance(a, b, forest.lines)

    def add(a: int, b: int) -> bool:
        if forest.connected(a, b):
            return False
        forest.add_edge(a, b, weigh(a, b))
        stats.edges_added += 1
        return True

    for pts in groups.values():
        for p in pts[1:]:
            add(pts[0], p)

    heap: list[tuple[int, int, int]] = []

    def commit(limit: int | None) -> None:
        while heap and (limit is None or heap[0][0] <= limit):
            w, a, b = heapq.heappop(heap)
            accepted = add(a, b)
            if audit:
                stats.audit.append((w, inst.distance(a, b, lines), accepted))
            if forest.is_spanning():
                heap.clear()

    dist, label, levels = flood(arr.adjacency, seeds, max_depth)
    adjacency = arr.adjacency
    for depth, new in levels:
        if forest.is_spanning():
            break
        stats.depth = depth
        stats.visited += len(new)
        if visit_budget is not None and stats.visited > visit_budget:
            raise BudgetExceeded(f"flood reached more than {visit_budget} faces")
        for f in new:
            lf = int(label[f])
            for g, _ in adjacency[f]:
                dg = dist[g]
                if dg < 0 or (dg == depth and g > f):
                    continue
                lg = int(label[g])
                if lg != lf:
                    a, b = (lf, lg) if lf < lg else (lg, lf)
                    heapq.heappush(heap, (depth + int(dg) + 1, a, b))
                    stats.candidates += 1
        commit(depth + 1)
    commit(None)
    return stats


def mst_wavefront(inst: Instance, visit_budget: int | None = None) -> SpanningForest:
    """Exact MST by flooding the full arrangement (plane only)."""
    if inst.dim != 2:
        raise DimensionUnsupported("wavefront propagation needs a planar instance")
    forest = SpanningForest(inst.n)
    propagate(inst, build_arrangement(inst, range(inst.m)), forest, visit_budget=visit_budget)
    return forest


def bounded_spanning_forest(
    inst: Instance,
    R: Iterable[int],
    max_radius: int,
    forest: SpanningForest,
    budget: int | None = None,
    arrangement: Arrangement | None = None,
) -> SpanningForest:
    """Connect, inside ``forest``, every pair of points within distance ``2 * max_radius`` under R.

    ``budget`` caps the cells created while building Arr(R).  Passing a
    prebuilt ``arrangement`` of R skips the build.
    """
    if inst.dim != 2:
        raise DimensionUnsupported("wavefront propagation needs a planar instance")
    if max_radius < 0:
        raise ValueError("max_radius must be non-negative")
    if forest.is_spanning():
        return forest
    arr = arrangement if arrangement is not None else build_arrangement(inst, R, budget=budget)
    propagate(inst, arr, forest, max_depth=max_radius)
    return forest
