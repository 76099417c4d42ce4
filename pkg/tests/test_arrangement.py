import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossmetric.arrangement import (
    build_arrangement,
    face_bfs_layers,
    flood,
    locate,
    locate_points,
    pattern_keys,
)
from crossmetric.errors import BudgetExceeded, DimensionUnsupported, OnHyperplane
from crossmetric.geometry import Instance, generate_instance

from oracles import face_count


@pytest.mark.parametrize("coord_range", [6, 15, 1000])
@pytest.mark.parametrize("seed", range(4))
def test_face_count_and_euler(coord_range, seed):
    inst = generate_instance(2, 5, 18, coord_range, seed)
    arr = build_arrangement(inst, range(inst.m))
    assert arr.n_faces == face_count(inst.hyperplanes)
    assert arr.euler_characteristic() == 2


def test_general_position_face_count():
    inst = generate_instance(2, 0, 60, 10**6, 5)
    r = inst.m
    assert build_arrangement(inst, range(r)).n_faces == 1 + r + math.comb(r, 2)


def test_parallel_lines():
    inst = Instance(2, (), tuple(((0, 1), -k) for k in range(5)))
    arr = build_arrangement(inst, range(5))
    assert arr.n_faces == 6 and arr.n_vertices == 0 and arr.euler_characteristic() == 2


def test_empty_subset_has_one_face():
    inst = generate_instance(2, 4, 3, 100, 0)
    arr = build_arrangement(inst, [])
    assert arr.n_faces == 1 and set(locate_points(arr, inst)) == {0}


def test_adjacent_faces_differ_in_their_line():
    inst = generate_instance(2, 0, 12, 20, 1)
    arr = build_arrangement(inst, range(0, 12, 2))
    pos = {line: k for k, line in enumerate(arr.lines)}
    for f, g, line in arr.adjacency_pairs():
        diff = arr.faces[f].key ^ arr.faces[g].key
        assert diff == 1 << (len(arr.lines) - 1 - pos[line])


def test_locate_matches_sign_vector():
    inst = generate_instance(2, 30, 15, 1000, 2)
    R = [0, 3, 5, 9, 14]
    arr = build_arrangement(inst, R)
    for i, p in enumerate(inst.points):
        f = locate(arr, p)
        pattern = arr.faces[f].sign_pattern
        assert pattern == tuple(1 if s else -1 for s in inst.signs[i, R])
    assert locate_points(arr, inst) == [locate(arr, p) for p in inst.points]


def test_locate_on_a_line_raises():
    inst = Instance(2, ((0, 0),), (((0, 1), -1), ((1, 0), -3)))
    arr = build_arrangement(inst, range(2))
    with pytest.raises(OnHyperplane):
        locate(arr, (5, 1))


def test_pattern_keys_wide():
    S = np.random.default_rng(3).random((10, 130)) < 0.5
    keys = pattern_keys(S)
    for row, key in zip(S, keys):
        assert key == int("".join("1" if b else "0" for b in row), 2)
    narrow = S[:, :40]
    assert pattern_keys(narrow) == [int("".join("1" if b else "0" for b in row), 2) for row in narrow]


def test_budget_and_dimension_errors():
    inst = generate_instance(2, 0, 20, 1000, 0)
    with pytest.raises(BudgetExceeded):
        build_arrangement(inst, range(20), budget=50)
    assert build_arrangement(inst, range(20), budget=10**6).n_faces == 211
    with pytest.raises(DimensionUnsupported):
        build_arrangement(generate_instance(3, 2, 2, 10, 0), [0])


def test_flood_ties_go_to_smallest_label():
    adjacency = [[(1, 0)], [(0, 0), (2, 0)], [(1, 0)]]
    dist, label, levels = flood(adjacency, {0: 7, 2: 3})
    assert [d for d, _ in levels] == [0, 1]
    assert dist.tolist() == [0, 1, 0] and label.tolist() == [7, 3, 3]


def test_flood_depth_limit():
    adjacency = [[(1, 0)], [(0, 0), (2, 0)], [(1, 0)]]
    dist, label, levels = flood(adjacency, {0: 0}, max_depth=1)
    list(levels)
    assert dist.tolist() == [0, 1, -1]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 15), st.sampled_from([8, 1000]))
def test_bfs_distance_is_crossing_distance(seed, n, coord_range):
    inst = generate_instance(2, n, 10, coord_range, seed)
    arr = build_arrangement(inst, range(inst.m))
    faces = locate_points(arr, inst)
    dist, label = face_bfs_layers(arr, [faces[0]])
    assert (dist >= 0).all()
    for j in range(inst.n):
        assert dist[faces[j]] == inst.distance(0, j)
