"""Planar line arrangements: faces, face adjacency, point location and flooding.

Faces are identified by their sign pattern over the line subset.  A pattern
is stored as an integer whose bit ``r - 1 - k`` is set when the face lies on
the positive side of the k-th line (lines sorted by id), so sorting the keys
numerically sorts the patterns lexicographically.

The construction walks along every line.  Between consecutive vertices on
line k lies one arrangement edge; its sign pattern is known incrementally
(crossing a vertex flips exactly the lines through it), and the two faces
it separates are that pattern with bit k cleared and set.  Every face of a
nonempty arrangement has at least one edge, so this enumerates all faces,
and each edge yields exactly one adjacency pair.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionUnsupported, OnHyperplane
from .geometry import Hyperplane, Instance


@dataclass(frozen=True)
class Face:
    id: int
    key: int
    r: int

    @property
    def sign_pattern(self) -> tuple[int, ...]:
        return tuple(1 if (self.key >> (self.r - 1 - k)) & 1 else -1 for k in range(self.r))


@dataclass
class Arrangement:
    lines: tuple[int, ...]
    hyperplanes: tuple[Hyperplane, ...]
    faces: list[Face]
    adjacency: list[list[tuple[int, int]]]
    vertices: list[tuple[int, int, int]]
    n_edges: int
    _index: dict[int, int] = field(repr=False)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def euler_characteristic(self) -> int:
        """V - E + F on the sphere obtained by adding one vertex at infinity."""
        return (self.n_vertices + 1) - self.n_edges + self.n_faces

    def adjacency_pairs(self) -> list[tuple[int, int, int]]:
        return [(f, g, line) for f, nbrs in enumerate(self.adjacency) for g, line in nbrs if f < g]

    def face_of_key(self, key: int) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise LookupError(f"no face with sign pattern key {key}") from None

    def locate_signs(self, signs: np.ndarray) -> list[int]:
        return [self._index[k] for k in pattern_keys(signs)]


def pattern_keys(signs: np.ndarray) -> list[int]:
    signs = np.asarray(signs, dtype=bool)
    if signs.ndim != 2:
        raise ValueError("expected a 2-d sign matrix")
    n, r = signs.shape
    if r == 0:
        return [0] * n
    if r <= 63:
        weights = np.left_shift(np.uint64(1), np.arange(r - 1, -1, -1, dtype=np.uint64))
        return [int(x) for x in (signs.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)]
    pad = (-r) % 8
    packed = np.packbits(signs, axis=1)
    return [int.from_bytes(row.tobytes(), "big") >> pad for row in packed]


def _coeffs(h: Hyperplane) -> tuple[int, int, int]:
    a, b = h.normal
    return int(a), int(b), int(h.offset)


def build_arrangement(inst: Instance, R: Iterable[int], budget: int | None = None) -> Arrangement:
    """Arrangement of the lines ``R`` (ids into ``inst.hyperplanes``).

    ``budget`` caps the number of faces created; exceeding it raises
    ``BudgetExceeded``.
    """
    if inst.dim != 2:
        raise DimensionUnsupported(f"arrangements are built only in the plane, got dim={inst.dim}")
    lines = tuple(sorted(set(int(j) for j in R)))
    hs = tuple(inst.hyperplanes[j] for j in lines)
    r = len(lines)
    coeffs = [_coeffs(h) for h in hs]

    index: dict[int, int] = {}

    def add_face(key: int) -> None:
        if key not in index:
            index[key] = len(index)
            if budget is not None and len(index) > budget:
                raise BudgetExceeded(f"arrangement of {r} lines exceeded a budget of {budget} cells")

    if r == 0:
        add_face(0)
        return _finish(lines, hs, index, [], [], 0)

    masks = [1 << (r - 1 - k) for k in range(r)]
    events: list[list[tuple[float, int, int, int]]] = [[] for _ in range(r)]
    vertex_of: dict[tuple[int, int, int], None] = {}
    for k in range(r):
        ak, bk, ck = coeffs[k]
        for j in range(k + 1, r):
            aj, bj, cj = coeffs[j]
            det = ak * bj - aj * bk
            if det == 0:
                continue
            X = bk * cj - bj * ck
            Y = aj * ck - ak * cj
            W = det
            if W < 0:
                X, Y, W = -X, -Y, -W
            g = math.gcd(math.gcd(X, Y), W)
            vertex_of[(X // g, Y // g, W // g)] = None
            num_k, num_j = bk * X - ak * Y, bj * X - aj * Y
            events[k].append((num_k / W, num_k, W, j))
            events[j].append((num_j / W, num_j, W, k))

    pairs: list[tuple[int, int, int]] = []
    n_edges = 0
    for k in range(r):
        ak, bk, ck = coeffs[k]
        # a rational point on line k, for the sign of lines parallel to it
        X0, Y0, W0 = -ck * ak, -ck * bk, ak * ak + bk * bk
        pattern = 0
        for j in range(r):
            if j == k:
                continue
            aj, bj, cj = coeffs[j]
            nd = aj * bk - bj * ak
            if nd != 0:
                positive = nd < 0  # sign far along -d, with d = (b_k, -a_k)
            else:
                positive = aj * X0 + bj * Y0 + cj * W0 > 0
            if positive:
                pattern |= masks[j]
        flips = [sum(masks[j] for j in group) for group in _vertex_groups(events[k])]
        for step in range(len(flips) + 1):
            lo, hi = pattern, pattern | masks[k]
            add_face(lo)
            add_face(hi)
            pairs.append((lo, hi, lines[k]))
            n_edges += 1
            if step < len(flips):
                pattern ^= flips[step]
    return _finish(lines, hs, index, pairs, list(vertex_of), n_edges)


def _vertex_groups(events: list[tuple[float, int, int, int]]) -> list[list[int]]:
    """Group crossings on one line by position, in increasing order.

    Correctly rounded division is monotone, so sorting by the float position
    never inverts two distinct crossings; only equal floats need the exact
    rational comparison.
    """
    events.sort(key=lambda e: e[0])
    groups: list[list[int]] = []
    i = 0
    while i < len(events):
        j = i + 1
        while j < len(events) and events[j][0] == events[i][0]:
            j += 1
        if j == i + 1:
            groups.append([events[i][3]])
        else:
            run = sorted(events[i:j], key=lambda e: Fraction(e[1], e[2]))
            pos = None
            for e in run:
                q = Fraction(e[1], e[2])
                if q != pos:
                    groups.append([])
                    pos = q
                groups[-1].append(e[3])
        i = j
    return groups


def _finish(lines, hs, index, pairs, vertices, n_edges) -> Arrangement:
    r = len(lines)
    keys = sorted(index)
    ids = {key: i for i, key in enumerate(keys)}
    faces = [Face(i, key, r) for i, key in enumerate(keys)]
    adjacency: list[list[tuple[int, int]]] = [[] for _ in keys]
    for lo, hi, line in pairs:
        f, g = ids[lo], ids[hi]
        adjacency[f].append((g, line))
        adjacency[g].append((f, line))
    return Arrangement(lines, hs, faces, adjacency, vertices, n_edges, ids)


def locate(arr: Arrangement, p: Sequence[int]) -> int:
    """Id of the face of ``arr`` containing p."""
    key = 0
    r = len(arr.lines)
    for k, h in enumerate(arr.hyperplanes):
        v = h.value(p)
        if v == 0:
            raise OnHyperplane(f"point {tuple(p)} lies on line {h.id}")
        if v > 0:
            key |= 1 << (r - 1 - k)
    return arr.face_of_key(key)


def locate_points(arr: Arrangement, inst: Instance) -> list[int]:
    """Face id of every point of the instance (uses the cached sign matrix)."""
    S = inst.signs[:, np.asarray(arr.lines, dtype=np.intp)] if arr.lines else np.zeros((inst.n, 0), bool)
    return arr.locate_signs(S)


def flood(
    adjacency: Sequence[Sequence[tuple[int, int]]],
    seeds: Mapping[int, int],
    max_depth: int | None = None,
):
    """Level-synchronous multi-source BFS.

    ``seeds`` maps a face to its label.  Yields ``(depth, newly_reached)``
    per level, after the ``dist``/``label`` arrays it returns first have
    been filled for that level.  A face reached from several labels at the
    same depth takes the smallest label.
    """
    n = len(adjacency)
    dist = np.full(n, -1, dtype=np.int64)
    label = np.full(n, -1, dtype=np.int64)

    def levels():
        frontier = sorted(seeds)
        for f in frontier:
            dist[f] = 0
            label[f] = seeds[f]
        yield 0, frontier
        depth = 0
        while frontier and (max_depth is None or depth < max_depth):
            depth += 1
            best: dict[int, int] = {}
            for f in frontier:
                lf = label[f]
                for g, _ in adjacency[f]:
                    if dist[g] < 0:
                        cur = best.get(g)
                        if cur is None or lf < cur:
                            best[g] = lf
            frontier = sorted(best)
            for g in frontier:
                dist[g] = depth
                label[g] = best[g]
            if frontier:
                yield depth, frontier

    return dist, label, levels()


def face_bfs_layers(arr: Arrangement, sources: Iterable[int], max_depth: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Hop distance and nearest source for every face reached within ``max_depth``.

    Unreached faces get ``-1`` in both arrays.  Among equidistant sources the
    smallest face id wins.
    """
    seeds = {int(f): int(f) for f in sources}
    if not seeds:
        raise ValueError("need at least one source face")
    dist, label, levels = flood(arr.adjacency, seeds, max_depth)
    for _ in levels:
        pass
    return dist, label


def grouped_by_face(face_ids: Sequence[int]) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = defaultdict(list)
    for i, f in enumerate(face_ids):
        groups[f].append(i)
    return dict(groups)
