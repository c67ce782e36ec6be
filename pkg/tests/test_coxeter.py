import random

import pytest

from cocenter.coxeter import (
    CoxeterMatrix,
    GroupTooLarge,
    build_group,
    class_of,
    conjugacy_classes,
    is_elliptic,
    length,
    meets_proper_parabolic,
)

TYPES = ["A1", "A2", "A1xA1", "B2", "G2", "A3", "B3"]
ORDERS = {"A1": 2, "A2": 6, "A1xA1": 4, "B2": 8, "G2": 12, "A3": 24, "B3": 48}
CLASSES = {"A1": 2, "A2": 3, "A1xA1": 4, "B2": 5, "G2": 6, "A3": 5, "B3": 10}
ELLIPTIC = {"A1": 1, "A2": 1, "A1xA1": 1, "B2": 2, "G2": 3, "A3": 1, "B3": 3}


@pytest.fixture(scope="module", params=TYPES)
def group(request):
    return request.param, build_group(request.param)


def test_orders(group):
    name, W = group
    assert W.order == ORDERS[name]


def test_length_examples():
    W = build_group("A2")
    assert length(W, W.identity) == 0
    assert all(length(W, W.simple(s)) == 1 for s in range(2))
    assert length(W, W.longest_element) == 3


def test_root_count_matches_word_length(group):
    _, W = group
    for w in W:
        assert W.root_length(w) == len(W.word(w)) == W.length(w)
        assert W.from_word(W.word(w)) == w


def test_simple_multiplication_changes_length_by_one(group):
    _, W = group
    for w in W:
        for s in range(W.rank):
            assert abs(W.length(W.left[s][w]) - W.length(w)) == 1


def test_class_counts_and_partition(group):
    name, W = group
    cls = conjugacy_classes(W)
    assert len(cls) == CLASSES[name]
    assert sum(len(c) for c in cls) == W.order
    assert sum(is_elliptic(c) for c in cls) == ELLIPTIC[name]
    for c in cls:
        assert c.min_elements and all(W.length(w) == c.min_length for w in c.min_elements)


def test_conjugation_preserves_class(group):
    _, W = group
    cls = conjugacy_classes(W)
    rng = random.Random(1)
    for _ in range(30):
        w, g = rng.randrange(W.order), rng.randrange(W.order)
        assert class_of(cls, W.conj(g, w)) == class_of(cls, w)


def test_ellipticity_flag_constant_and_matches_parabolic_avoidance(group):
    _, W = group
    for c in conjugacy_classes(W):
        assert len({W.fixed_space_trivial(w) for w in c.elements}) == 1
        assert c.elliptic == (not meets_proper_parabolic(W, c))


def test_a2_coxeter_class_is_elliptic_identity_is_not():
    W = build_group("A2")
    cls = conjugacy_classes(W)
    assert cls[class_of(cls, W.from_word((0, 1)))].elliptic
    assert not cls[class_of(cls, W.identity)].elliptic


def test_invalid_matrices():
    with pytest.raises(ValueError):
        CoxeterMatrix(((1, 3), (2, 1)))
    with pytest.raises(ValueError):
        CoxeterMatrix(((2, 3), (3, 1)))


def test_infinite_type_hits_cap():
    with pytest.raises(GroupTooLarge):
        build_group(CoxeterMatrix.from_rows([[1, "inf"], ["inf", 1]]), element_cap=50)
