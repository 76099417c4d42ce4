"""Random-subset embedding of the crossing metric into Hamming space.

For a threshold ``r`` the embedding draws ``mu`` subsets R_1..R_mu, each of
``k`` lines sampled with replacement.  Coordinate ``j`` of a point's label
is a hash of its cell in the arrangement of R_j: the wraparound 64-bit sum
of random weights of the lines of R_j that have the point on their positive
side.  Two points at crossing distance D are separated by one subset with
probability ``U(D/m) = 1 - (1 - D/m)^k``, so label Hamming distance
concentrates around ``mu * U`` and splits pairs at distance ``<= r`` from
pairs at distance ``>= (1 + eps) r``.

When ``m / r < ln n``, ``k`` would fall below one; the formulas then use
``m_eff = r ln n`` lines, the extra ones fictitious: a draw hits a real line
with probability ``m / m_eff`` and otherwise contributes nothing.

Labels are finally expanded into bits: each coordinate contributes ``T``
parity bits ``parity(label & w_t)`` for random masks ``w_t``, so two
differing labels differ in each bit with probability 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import GapDegenerate
from .geometry import Instance
from .seeding import derive_rng

U64 = np.uint64


def separation_probability(rho, k: int) -> Fraction:
    """Exact ``1 - (1 - rho)^k``: chance that k draws hit a set of relative size rho."""
    rho = Fraction(rho)
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    if k < 1:
        raise ValueError("k must be positive")
    return 1 - (1 - rho) ** k


@dataclass(frozen=True)
class EmbeddingConfig:
    C_embed: float = 1.0
    binary_reps: int | None = None
    seed: int = 0


@dataclass(frozen=True)
class EmbeddingSpec:
    n: int
    m: int
    r: int
    eps: float
    alpha: float
    m_eff: float
    k: int
    mu: int
    z: float
    Z: float
    T: int
    C_embed: float
    seed: int

    @property
    def near_threshold(self) -> float:
        return self.z * (1 + self.alpha) * self.mu

    @property
    def far_threshold(self) -> float:
        return self.Z * (1 - self.alpha) * self.mu

    @property
    def gap_ratio(self) -> float:
        return self.far_threshold / self.near_threshold

    @property
    def degenerate(self) -> bool:
        return self.Z >= 0.5 or self.far_threshold <= self.near_threshold

    def resolvable_factor(self) -> float:
        """Smallest f such that pairs at distance f * r clear the far threshold in expectation.

        This is ``1 + eps`` when the planned gap is exactly tight, larger
        when the thresholds overlap.
        """
        target = self.near_threshold / ((1 - self.alpha) * self.mu)
        if target >= 1:
            return math.inf
        return self.m_eff / self.r * (1 - (1 - target) ** (1 / self.k))

    @property
    def real_draw_probability(self) -> float:
        return self.m / self.m_eff

    def to_dict(self) -> dict:
        return {
            "r": self.r, "eps": self.eps, "k": self.k, "mu": self.mu, "z": self.z, "Z": self.Z,
            "alpha": self.alpha, "m_eff": self.m_eff, "T": self.T,
            "thresholds": {"near": self.near_threshold, "far": self.far_threshold},
            "gap_ratio": self.gap_ratio, "resolvable_factor": self.resolvable_factor(),
        }


def plan_embedding(inst: Instance, r: int, eps: float, cfg: EmbeddingConfig | None = None, strict: bool = True) -> EmbeddingSpec:
    """Closed-form parameters for threshold ``r``.

    With ``strict`` a spec without a usable gap raises ``GapDegenerate``;
    otherwise it is returned and ``spec.degenerate`` tells.
    """
    cfg = cfg or EmbeddingConfig()
    m = inst.m
    if not 1 <= r <= m:
        raise ValueError(f"threshold r={r} must lie in [1, m={m}]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    ln = math.log(max(inst.n, 2))
    alpha = 1 / ln
    m_eff = max(float(m), r * ln)
    # the small slack keeps k = 1 when alpha * m_eff / r is one up to rounding
    k = max(1, math.ceil(alpha * m_eff / r - 1e-9))
    z = 1 - (1 - r / m_eff) ** k
    Z = 1 - max(0.0, 1 - (1 + eps) * r / m_eff) ** k
    mu = max(1, math.ceil(cfg.C_embed * ln / (z * alpha**2)))
    T = cfg.binary_reps if cfg.binary_reps is not None else math.ceil(2 * ln)
    spec = EmbeddingSpec(inst.n, m, r, eps, alpha, m_eff, k, mu, z, Z, T, cfg.C_embed, cfg.seed)
    if strict and spec.degenerate:
        raise GapDegenerate(
            f"no gap at r={r}, eps={eps}: Z={Z:.4f}, near={spec.near_threshold:.1f}, far={spec.far_threshold:.1f}"
        )
    return spec


def draw_subset(spec: EmbeddingSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """One subset: the real lines hit by the k draws and a 64-bit weight per draw."""
    real = rng.random(spec.k) < spec.real_draw_probability
    lines = rng.integers(0, spec.m, size=spec.k)
    weights = rng.integers(0, 2**64, size=spec.k, dtype=U64)
    return lines[real], weights[real]


@dataclass(frozen=True)
class EmbeddedPoints:
    spec: EmbeddingSpec
    subsets: tuple[np.ndarray, ...]
    labels: np.ndarray
    binary: np.ndarray

    @property
    def packed_binary(self) -> np.ndarray:
        return np.packbits(self.binary, axis=1)


def embed_points(inst: Instance, spec: EmbeddingSpec) -> EmbeddedPoints:
    if inst.m != spec.m or inst.n != spec.n:
        raise ValueError("embedding spec was planned for a different instance")
    n, mu, T = inst.n, spec.mu, spec.T
    W = np.zeros((inst.m, mu), dtype=U64)
    masks = np.zeros((mu, T), dtype=U64)
    subsets = []
    for j in range(mu):
        rng = derive_rng(spec.seed, "embed", j)
        lines, weights = draw_subset(spec, rng)
        masks[j] = rng.integers(0, 2**64, size=T, dtype=U64)
        np.add.at(W[:, j], lines, weights)
        subsets.append(lines)
    with np.errstate(over="ignore"):
        labels = inst.signs.astype(U64) @ W if inst.m else np.zeros((n, mu), dtype=U64)
    bits = np.bitwise_count(labels[:, :, None] & masks[None, :, :]) & 1
    binary = bits.reshape(n, mu * T).astype(bool)
    labels.setflags(write=False)
    binary.setflags(write=False)
    return EmbeddedPoints(spec, tuple(subsets), labels, binary)


def label_hamming(e: EmbeddedPoints, i: int, j: int) -> int:
    return int(np.count_nonzero(e.labels[i] != e.labels[j]))


def binary_hamming(e: EmbeddedPoints, i: int, j: int) -> int:
    return int(np.count_nonzero(e.binary[i] != e.binary[j]))


class Verdict(str, Enum):
    NEAR = "near"
    FAR = "far"
    INDETERMINATE = "indeterminate"


def classify_pair(e: EmbeddedPoints, i: int, j: int, spec: EmbeddingSpec | None = None) -> Verdict:
    spec = spec or e.spec
    x = label_hamming(e, i, j)
    if x <= spec.near_threshold:
        return Verdict.NEAR
    if x >= spec.far_threshold:
        return Verdict.FAR
    return Verdict.INDETERMINATE


def label_collisions(inst: Instance, e: EmbeddedPoints) -> int:
    """Cells merged by a hash collision, summed over coordinates.

    A label is a function of the sign pattern on R_j, so the partition by
    label is at most as fine as the partition by pattern; any shortfall in
    the number of distinct labels is a collision.
    """
    if inst.n == 0:
        return 0
    total = 0
    for j, lines in enumerate(e.subsets):
        distinct = np.unique(lines)
        S = inst.signs[:, distinct]
        if len(distinct) <= 63:
            cells = len(np.unique(S.astype(np.uint64) @ (U64(1) << np.arange(len(distinct), dtype=U64))))
        else:
            cells = len(np.unique(S, axis=0))
        total += cells - len(np.unique(e.labels[:, j]))
    return total
