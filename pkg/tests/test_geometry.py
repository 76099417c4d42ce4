import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossmetric.errors import InvalidInstance, OnHyperplane, ResampleExhausted
from crossmetric.geometry import (
    Hyperplane,
    Instance,
    crossing_distance,
    from_json,
    generate_instance,
    hamming_matrix,
    popcount_xor,
    restrict,
    side,
    sign_vector,
    to_json,
)

from oracles import crossing_count_segments


def test_side_and_on_hyperplane():
    h = Hyperplane((1, -1), 0)
    assert side(h, (2, 1)) == 1
    assert side(h, (1, 2)) == -1
    with pytest.raises(OnHyperplane):
        side(h, (3, 3))


def test_canonical_identifies_scaled_copies():
    assert Hyperplane((2, -4), 6).canonical() == Hyperplane((-1, 2), -3).canonical() == (1, -2, 3)


@pytest.mark.parametrize(
    "points, hyperplanes",
    [
        ([(0, 0, 0)], []),
        ([(0.5, 1)], []),
        ([(0, 0)], [((0, 0), 1)]),
        ([(0, 0)], [((1, 2), 3), ((2, 4), 6)]),
        ([(2**31, 0)], []),
        ([(0, 0)], [((1,), 3)]),
    ],
)
def test_invalid_instances(points, hyperplanes):
    with pytest.raises(InvalidInstance):
        Instance(2, tuple(points), tuple(hyperplanes))


def test_point_on_hyperplane_rejected():
    with pytest.raises(OnHyperplane):
        Instance(2, ((1, 1),), (((1, -1), 0),))


def test_ids_follow_positions():
    inst = Instance(2, ((0, 0),), (Hyperplane((1, 0), 5, id=9), ((0, 1), 7)))
    assert [h.id for h in inst.hyperplanes] == [0, 1]


def test_signs_read_only():
    inst = generate_instance(2, 5, 5, 100, 1)
    with pytest.raises(ValueError):
        inst.signs[0, 0] = True


def test_generate_is_deterministic_and_roundtrips():
    a = generate_instance(2, 40, 30, 1000, 3)
    b = generate_instance(2, 40, 30, 1000, 3)
    assert to_json(a) == to_json(b)
    assert to_json(from_json(to_json(a))) == to_json(a)
    assert a.digest() == from_json(to_json(a)).digest()
    assert to_json(generate_instance(2, 40, 30, 1000, 4)) != to_json(a)


def test_generate_empty_and_higher_dims():
    assert generate_instance(2, 0, 0, 10, 0).n == 0
    inst = generate_instance(4, 20, 15, 50, 0)
    assert inst.signs.shape == (20, 15)


def test_generate_exhausts_on_degenerate_box():
    with pytest.raises(ResampleExhausted):
        generate_instance(2, 1, 1, 0, 0)


def test_json_schema_checks():
    with pytest.raises(InvalidInstance):
        from_json('{"dim": 2, "points": [], "hyperplanes": [], "colour": 1}')
    with pytest.raises(InvalidInstance):
        from_json("not json")
    with pytest.raises(InvalidInstance):
        from_json('{"dim": 2, "points": [], "hyperplanes": [{"normal": [1, 0]}]}')
    inst = from_json('{"dim": 2, "points": [[1, 1]], "hyperplanes": [{"normal": [1, 0], "offset": -3}]}')
    assert inst.seed == 0 and inst.signs.tolist() == [[False]]
    assert list(json.loads(to_json(inst))) == ["dim", "seed", "points", "hyperplanes"]


def test_distance_agrees_with_segment_oracle():
    inst = generate_instance(2, 25, 30, 40, 11)
    D = inst.distance_matrix()
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            assert D[i, j] == crossing_count_segments(inst, i, j) == inst.distance(i, j)
            assert popcount_xor(inst.signs[i], inst.signs[j]) == D[i, j]


def test_restrict_and_subset_distances():
    inst = generate_instance(2, 10, 20, 100, 2)
    R = [1, 4, 7, 19]
    sub = restrict(inst, R)
    assert np.array_equal(sub.distance_matrix(), inst.distance_matrix(R))


def test_hamming_matrix_matches_xor():
    S = np.random.default_rng(0).random((30, 70)) < 0.5
    H = hamming_matrix(S)
    assert H[3, 8] == np.count_nonzero(S[3] != S[8])
    assert (np.diag(H) == 0).all()


def test_sign_vector_of_new_point():
    inst = Instance(2, ((0, 0),), (((1, 0), -1), ((0, 1), 1)))
    assert sign_vector(inst, (5, 5)).tolist() == [True, True]
    assert crossing_distance(inst, (0, 0), (5, -5)) == 2


instances = st.builds(
    lambda n, m, R, seed: generate_instance(2, n, m, R, seed),
    st.integers(3, 12),
    st.integers(0, 15),
    st.sampled_from([12, 1000]),
    st.integers(0, 10**6),
)


@settings(max_examples=40, deadline=None)
@given(instances, st.data())
def test_metric_properties(inst, data):
    D = inst.distance_matrix()
    assert (D == D.T).all()
    assert (np.diag(D) == 0).all()
    i, j, k = (data.draw(st.integers(0, inst.n - 1)) for _ in range(3))
    assert D[i, k] <= D[i, j] + D[j, k]
    R = data.draw(st.lists(st.integers(0, max(inst.m - 1, 0)), unique=True)) if inst.m else []
    assert (inst.distance_matrix(R) <= D).all()
