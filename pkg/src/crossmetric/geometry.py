"""Exact geometric primitives and the crossing-distance oracle.

Points and hyperplanes carry integer coordinates.  The side of a point with
respect to ``normal . x + offset = 0`` is the sign of an integer dot product,
so every predicate here is exact.  The crossing distance between two points
is the number of hyperplanes strictly separating them, which is the Hamming
distance between their sign vectors.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInstance, OnHyperplane, ResampleExhausted
from .seeding import derive_rng

Point = tuple[int, ...]

COORD_LIMIT = 1 << 30
# Lines through two lattice points of the coordinate box have offsets of
# size ~coord^2, so offsets get a wider cap than coordinates and normals.
OFFSET_LIMIT_PER_DIM = 1 << 61
MAX_REJECTIONS = 1000
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple[int, ...]
    offset: int
    id: int = 0

    def value(self, p: Sequence[int]) -> int:
        return sum(a * x for a, x in zip(self.normal, p)) + self.offset

    def canonical(self) -> tuple[int, ...]:
        """Coefficients reduced by their gcd with the first nonzero normal entry positive.

        Two hyperplanes describe the same point set iff their canonical forms agree.
        """
        coeffs = (*self.normal, self.offset)
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        lead = next(c for c in self.normal if c != 0)
        s = 1 if lead > 0 else -1
        return tuple(s * c // g for c in coeffs)


def side(h: Hyperplane, p: Sequence[int]) -> int:
    v = h.value(p)
    if v == 0:
        raise OnHyperplane(f"point {tuple(p)} lies on hyperplane {h.id}")
    return 1 if v > 0 else -1


def _as_int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        raise InvalidInstance(f"{what} must be an integer, got {x!r}")
    return int(x)


def evaluate(points: Sequence[Sequence[int]], hyperplanes: Sequence[Hyperplane], dim: int) -> np.ndarray:
    """Exact values ``normal . p + offset`` for every (point, hyperplane) pair.

    Uses int64 arithmetic when a magnitude bound proves it cannot overflow,
    Python integers otherwise.
    """
    n, m = len(points), len(hyperplanes)
    if n == 0 or m == 0:
        return np.zeros((n, m), dtype=np.int64)
    pmax = max(abs(c) for p in points for c in p)
    nsum = max(sum(abs(a) for a in h.normal) for h in hyperplanes)
    omax = max(abs(h.offset) for h in hyperplanes)
    if pmax * nsum + omax < _INT64_SAFE:
        P = np.array(points, dtype=np.int64).reshape(n, dim)
        N = np.array([h.normal for h in hyperplanes], dtype=np.int64)
        c = np.array([h.offset for h in hyperplanes], dtype=np.int64)
        return P @ N.T + c
    P = np.array([[int(x) for x in p] for p in points], dtype=object).reshape(n, dim)
    N = np.array([[int(a) for a in h.normal] for h in hyperplanes], dtype=object)
    c = np.array([int(h.offset) for h in hyperplanes], dtype=object)
    return P.dot(N.T) + c


def _signs_from_values(vals: np.ndarray) -> np.ndarray:
    zero = vals == 0
    if zero.any():
        i, j = map(int, np.argwhere(zero)[0])
        raise OnHyperplane(f"point {i} lies on hyperplane {j}")
    return np.asarray(vals > 0, dtype=bool)


@dataclass(frozen=True)
class Instance:
    """A point set P and hyperplane set L in general position.

    ``hyperplanes`` may be given as ``Hyperplane`` objects or ``(normal,
    offset)`` pairs; ids are reassigned to list positions.
    """

    dim: int
    points: tuple[Point, ...]
    hyperplanes: tuple[Hyperplane, ...]
    seed: int = 0

    def __post_init__(self):
        dim = _as_int(self.dim, "dim")
        if dim < 1:
            raise InvalidInstance("dim must be positive")
        pts = []
        for p in self.points:
            p = tuple(_as_int(x, "coordinate") for x in p)
            if len(p) != dim:
                raise InvalidInstance(f"point {p} does not have dimension {dim}")
            if any(abs(x) > COORD_LIMIT for x in p):
                raise InvalidInstance(f"point {p} exceeds coordinate cap 2^30")
            pts.append(p)
        hs = []
        for i, h in enumerate(self.hyperplanes):
            normal, offset = (h.normal, h.offset) if isinstance(h, Hyperplane) else h
            normal = tuple(_as_int(a, "normal entry") for a in normal)
            offset = _as_int(offset, "offset")
            if len(normal) != dim:
                raise InvalidInstance(f"hyperplane {i} does not have dimension {dim}")
            if not any(normal):
                raise InvalidInstance(f"hyperplane {i} has a zero normal")
            if any(abs(a) > COORD_LIMIT for a in normal) or abs(offset) > dim * OFFSET_LIMIT_PER_DIM:
                raise InvalidInstance(f"hyperplane {i} exceeds the coefficient caps")
            hs.append(Hyperplane(normal, offset, i))
        seen: dict[tuple[int, ...], int] = {}
        for h in hs:
            key = h.canonical()
            if key in seen:
                raise InvalidInstance(f"hyperplanes {seen[key]} and {h.id} coincide")
            seen[key] = h.id
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "hyperplanes", tuple(hs))
        object.__setattr__(self, "seed", _as_int(self.seed, "seed"))
        # general position: raises OnHyperplane
        self.signs  # noqa: B018

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.hyperplanes)

    @cached_property
    def signs(self) -> np.ndarray:
        """``signs[i, j]`` is True iff point i is on the positive side of hyperplane j."""
        out = _signs_from_values(evaluate(self.points, self.hyperplanes, self.dim))
        out.setflags(write=False)
        return out

    def signs_of(self, points: Sequence[Sequence[int]], lines: Sequence[int] | None = None) -> np.ndarray:
        hs = self.hyperplanes if lines is None else [self.hyperplanes[j] for j in lines]
        pts = [tuple(int(x) for x in p) for p in points]
        for p in pts:
            if len(p) != self.dim:
                raise InvalidInstance(f"point {p} does not have dimension {self.dim}")
        return _signs_from_values(evaluate(pts, hs, self.dim))

    def distance(self, i: int, j: int, lines: Sequence[int] | None = None) -> int:
        a, b = self.signs[i], self.signs[j]
        if lines is not None:
            idx = np.asarray(lines, dtype=np.intp)
            a, b = a[idx], b[idx]
        return int(np.count_nonzero(a != b))

    def distance_matrix(self, lines: Sequence[int] | None = None) -> np.ndarray:
        """All-pairs crossing distances (n x n, int64), optionally restricted to a line subset."""
        S = self.signs if lines is None else self.signs[:, np.asarray(lines, dtype=np.intp)]
        return hamming_matrix(S)

    def digest(self) -> str:
        import hashlib

        return hashlib.sha256(to_json(self).encode()).hexdigest()


def hamming_matrix(S: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distances between the boolean rows of S."""
    A = S.astype(np.float64)
    B = 1.0 - A
    # exact: entries are integers far below 2^53
    return np.rint(A @ B.T + B @ A.T).astype(np.int64)


def sign_vector(inst: Instance, p: Sequence[int]) -> np.ndarray:
    return inst.signs_of([p])[0]


def crossing_distance(inst: Instance, p: Sequence[int], q: Sequence[int]) -> int:
    S = inst.signs_of([p, q])
    return int(np.count_nonzero(S[0] != S[1]))


def popcount_xor(u: np.ndarray, v: np.ndarray) -> int:
    """Hamming distance of two sign vectors via packed XOR popcount."""
    a = np.packbits(np.asarray(u, dtype=bool))
    b = np.packbits(np.asarray(v, dtype=bool))
    return int(np.bitwise_count(np.bitwise_xor(a, b)).sum())


# ---------------------------------------------------------------------------
# generation


def generate_instance(dim: int, n_points: int, n_hyperplanes: int, coord_range: int, seed: int) -> Instance:
    """Random instance with coordinates in ``[0, coord_range]``.

    In the plane every line passes through two random lattice points; for
    dim > 2 a random integer normal is placed through a random lattice point.
    Points on a hyperplane and repeated hyperplanes are resampled.
    """
    if dim < 1:
        raise InvalidInstance("dim must be positive")
    if not 0 <= coord_range <= COORD_LIMIT:
        raise InvalidInstance("coord_range must lie in [0, 2^30]")
    rng = derive_rng(seed, "generate")
    R = int(coord_range)

    def lattice_point() -> tuple[int, ...]:
        return tuple(int(x) for x in rng.integers(0, R + 1, size=dim))

    hyperplanes: list[Hyperplane] = []
    seen: set[tuple[int, ...]] = set()
    for i in range(n_hyperplanes):
        for _ in range(MAX_REJECTIONS):
            if dim == 2:
                (x1, y1), (x2, y2) = lattice_point(), lattice_point()
                normal = (y1 - y2, x2 - x1)
                if normal == (0, 0):
                    continue
                offset = -(normal[0] * x1 + normal[1] * y1)
            else:
                normal = tuple(int(a) for a in rng.integers(-R, R + 1, size=dim))
                if not any(normal):
                    continue
                x0 = lattice_point()
                offset = -sum(a * x for a, x in zip(normal, x0))
            h = Hyperplane(normal, offset, i)
            key = h.canonical()
            if key in seen:
                continue
            seen.add(key)
            hyperplanes.append(h)
            break
        else:
            raise ResampleExhausted(f"could not place hyperplane {i} after {MAX_REJECTIONS} attempts")

    points: list[tuple[int, ...]] = []
    for i in range(n_points):
        for _ in range(MAX_REJECTIONS):
            p = lattice_point()
            if not hyperplanes or np.all(evaluate([p], hyperplanes, dim) != 0):
                points.append(p)
                break
        else:
            raise ResampleExhausted(f"point {i} kept landing on a hyperplane")
    return Instance(dim, tuple(points), tuple(hyperplanes), seed=int(seed))


# ---------------------------------------------------------------------------
# JSON

_FIELDS = {"dim", "seed", "points", "hyperplanes"}


def to_dict(inst: Instance) -> dict:
    return {
        "dim": inst.dim,
        "seed": inst.seed,
        "points": [list(p) for p in inst.points],
        "hyperplanes": [{"normal": list(h.normal), "offset": h.offset} for h in inst.hyperplanes],
    }


def to_json(inst: Instance) -> str:
    return json.dumps(to_dict(inst), separators=(",", ":"))


def from_dict(obj: dict) -> Instance:
    if not isinstance(obj, dict):
        raise InvalidInstance("instance JSON must be an object")
    unknown = set(obj) - _FIELDS
    if unknown:
        raise InvalidInstance(f"unknown instance fields: {sorted(unknown)}")
    for key in ("dim", "points", "hyperplanes"):
        if key not in obj:
            raise InvalidInstance(f"missing field {key!r}")
    hyperplanes = []
    for h in obj["hyperplanes"]:
        if not isinstance(h, dict) or set(h) != {"normal", "offset"}:
            raise InvalidInstance(f"hyperplane entries need exactly 'normal' and 'offset': {h!r}")
        hyperplanes.append((tuple(h["normal"]), h["offset"]))
    points = [tuple(p) for p in obj["points"]]
    return Instance(obj["dim"], tuple(points), tuple(hyperplanes), seed=obj.get("seed", 0))


def from_json(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"malformed instance JSON: {exc}") from exc
    return from_dict(obj)


def restrict(inst: Instance, lines: Iterable[int]) -> Instance:
    """Same points, hyperplanes limited to ``lines`` (ids are renumbered)."""
    hs = tuple(inst.hyperplanes[j] for j in sorted(set(lines)))
    return Instance(inst.dim, inst.points, hs, seed=inst.seed)
