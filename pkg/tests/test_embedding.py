import math
from fractions import Fraction

import numpy as np
import pytest

from crossmetric.arrangement import build_arrangement, locate_points
from crossmetric.embedding import (
    EmbeddingConfig,
    Verdict,
    binary_hamming,
    classify_pair,
    embed_points,
    label_hamming,
    plan_embedding,
    separation_probability,
)
from crossmetric.errors import GapDegenerate
from crossmetric.geometry import Instance, generate_instance


def test_separation_probability():
    assert separation_probability(0, 5) == 0
    assert separation_probability(1, 5) == 1
    assert separation_probability(Fraction(1, 2), 1) == Fraction(1, 2)
    assert separation_probability(Fraction(1, 3), 2) == Fraction(5, 9)
    with pytest.raises(ValueError):
        separation_probability(Fraction(3, 2), 1)
    with pytest.raises(ValueError):
        separation_probability(Fraction(1, 2), 0)


def test_plan_closed_form():
    inst = generate_instance(2, 256, 256, 1000, 0)
    spec = plan_embedding(inst, 16, 0.5)
    ln = math.log(256)
    assert spec.alpha == pytest.approx(1 / ln)
    assert spec.k == math.ceil(256 / (16 * ln))
    assert spec.z == pytest.approx(1 - (1 - 16 / 256) ** spec.k)
    assert spec.Z == pytest.approx(1 - (1 - 24 / 256) ** spec.k)
    assert spec.mu == math.ceil(ln / (spec.z * spec.alpha**2))
    assert spec.T == math.ceil(2 * ln)
    assert spec.near_threshold < spec.far_threshold and spec.Z < 0.5
    assert plan_embedding(inst, 16, 0.5) == spec


def test_plan_pads_with_fictitious_lines():
    inst = generate_instance(2, 256, 100, 1000, 0)
    spec = plan_embedding(inst, 50, 0.5, strict=False)
    assert spec.m_eff == pytest.approx(50 * math.log(256))
    assert spec.k == 1
    assert spec.real_draw_probability == pytest.approx(100 / spec.m_eff)


def test_plan_boundary_and_errors():
    # r = m: padding leaves k = 1 and z = r / m_eff
    inst = generate_instance(2, 64, 40, 1000, 0)
    spec = plan_embedding(inst, 40, 1.0)
    assert spec.k == 1 and spec.z == pytest.approx(40 / spec.m_eff)
    # with two points there is nothing to pad: every draw separates, Z = 1
    pair = generate_instance(2, 2, 40, 1000, 0)
    with pytest.raises(GapDegenerate):
        plan_embedding(pair, 40, 1.0)
    spec = plan_embedding(pair, 40, 1.0, strict=False)
    assert spec.degenerate and spec.z == 1 and spec.k == 2
    for r in (0, 41):
        with pytest.raises(ValueError):
            plan_embedding(inst, r, 0.5)


def test_resolvable_factor_matches_gap():
    inst = generate_instance(2, 256, 256, 1000, 0)
    spec = plan_embedding(inst, 16, 0.5)
    f = spec.resolvable_factor()
    assert 1 < f <= 1.5
    Zf = 1 - (1 - f * spec.r / spec.m_eff) ** spec.k
    assert Zf * (1 - spec.alpha) * spec.mu == pytest.approx(spec.near_threshold)


def test_single_hyperplane_labels():
    inst = Instance(2, ((0, 0), (5, 5), (1, 4)), (((1, -1), 1),))
    e = embed_points(inst, plan_embedding(inst, 1, 0.5, strict=False))
    neg = ~inst.signs[:, 0]
    for j, lines in enumerate(e.subsets):
        assert (e.labels[neg, j] == 0).all()
        if len(lines):
            assert (e.labels[~neg, j] != 0).all()
        else:
            assert (e.labels[:, j] == 0).all()


def _instance_with_duplicates():
    base = generate_instance(2, 40, 60, 1000, 1)
    return Instance(2, base.points + base.points[:2], base.hyperplanes)


def test_identical_points_identical_rows():
    inst = _instance_with_duplicates()
    e = embed_points(inst, plan_embedding(inst, 8, 0.5, strict=False))
    assert (e.labels[0] == e.labels[40]).all() and (e.binary[1] == e.binary[41]).all()
    assert label_hamming(e, 0, 40) == 0
    assert classify_pair(e, 0, 40) is Verdict.NEAR


def test_label_hamming_counts_separating_subsets():
    inst = generate_instance(2, 30, 80, 1000, 4)
    e = embed_points(inst, plan_embedding(inst, 6, 0.5, strict=False))
    for i, j in [(0, 1), (2, 9), (5, 29)]:
        differ = sum(bool((inst.signs[i, R] != inst.signs[j, R]).any()) for R in e.subsets)
        assert label_hamming(e, i, j) == differ


def test_binary_expansion_halves_label_distance():
    inst = generate_instance(2, 40, 120, 1000, 2)
    spec = plan_embedding(inst, 10, 0.5, EmbeddingConfig(binary_reps=16), strict=False)
    e = embed_points(inst, spec)
    assert e.binary.shape == (40, spec.mu * 16)
    for i, j in [(0, 1), (3, 7), (10, 30)]:
        x = label_hamming(e, i, j)
        b = binary_hamming(e, i, j)
        assert abs(b - 8 * x) <= 3 * math.sqrt(4 * x) + 1e-9
        # agreeing coordinates contribute no bits
        agree = np.flatnonzero(e.labels[i] == e.labels[j])
        for c in agree[:5]:
            assert (e.binary[i, c * 16:(c + 1) * 16] == e.binary[j, c * 16:(c + 1) * 16]).all()


def test_planar_labels_partition_like_faces():
    inst = generate_instance(2, 60, 40, 1000, 5)
    e = embed_points(inst, plan_embedding(inst, 5, 0.5, strict=False))
    for j, lines in enumerate(e.subsets[:40]):
        faces = locate_points(build_arrangement(inst, lines), inst)
        by_label = {}
        for p in range(inst.n):
            by_label.setdefault(int(e.labels[p, j]), set()).add(faces[p])
        assert all(len(s) == 1 for s in by_label.values())
        assert len(by_label) == len(set(faces))


def test_embedding_is_deterministic():
    inst = generate_instance(3, 30, 30, 100, 0)
    spec = plan_embedding(inst, 4, 0.5, EmbeddingConfig(seed=3), strict=False)
    a, b = embed_points(inst, spec), embed_points(inst, spec)
    assert (a.labels == b.labels).all() and (a.binary == b.binary).all()
    with pytest.raises(ValueError):
        embed_points(generate_instance(3, 31, 30, 100, 0), spec)


def test_far_pairs_classified_far():
    inst = generate_instance(2, 256, 256, 1000, 7)
    D = inst.distance_matrix()
    i, j = map(int, np.argwhere(D >= 90)[0])
    far = 0
    for seed in range(20):
        e = embed_points(inst, plan_embedding(inst, 50, 0.5, EmbeddingConfig(seed=seed)))
        far += classify_pair(e, i, j) is Verdict.FAR
    assert far >= 18
