"""Union-find backed spanning forest shared by every MST algorithm."""
from __future__ import annotations

from typing import Sequence


class SpanningForest:
    """Forest on points ``0..n-1`` with an explicit weighted edge list.

    ``lines`` records which hyperplane subset the edge weights are measured
    under (``None`` means all of L).
    """

    def __init__(self, n: int, lines: Sequence[int] | None = None):
        self.n = n
        self.lines = None if lines is None else tuple(sorted(lines))
        self.parent = list(range(n))
        self.rank = [0] * n
        self.edges: list[tuple[int, int, int]] = []
        self.components = n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def add_edge(self, a: int, b: int, weight: int) -> bool:
        """Union a and b, recording the edge; False (and no edge) if already connected."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.edges.append((min(a, b), max(a, b), int(weight)))
        self.components -= 1
        return True

    @property
    def weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def is_spanning(self) -> bool:
        return self.components <= 1

    def component_labels(self) -> list[int]:
        return [self.find(i) for i in range(self.n)]

    def copy(self) -> "SpanningForest":
        other = SpanningForest(self.n, self.lines)
        other.parent = list(self.parent)
        other.rank = list(self.rank)
        other.edges = list(self.edges)
        other.components = self.components
        return other

    def check(self) -> None:
        """Assert the edge list is acyclic and induces exactly the union-find components."""
        shadow = list(range(self.n))

        def root(x):
            while shadow[x] != x:
                shadow[x] = shadow[shadow[x]]
                x = shadow[x]
            return x

        for a, b, _ in self.edges:
            ra, rb = root(a), root(b)
            assert ra != rb, f"edge ({a}, {b}) closes a cycle"
            shadow[ra] = rb
        mine = {}
        for i in range(self.n):
            mine.setdefault(self.find(i), set()).add(root(i))
        assert all(len(v) == 1 for v in mine.values()), "union-find and edge components disagree"
        assert len(self.edges) == self.n - self.components

    def to_dict(self) -> dict:
        return {"weight": self.weight, "edges": [list(e) for e in sorted(self.edges)]}
