import pytest

from cocenter.affine import build_affine
from cocenter.conjugacy import (
    ConjugacyTable,
    GroupView,
    NotFound,
    classes_in_ball,
    gp_path,
    is_elliptic_affine,
    newton_zero_classes,
    parametrize_class,
    strong_conjugacy_witness,
    verify_gp,
    verify_param_bijection,
)
from cocenter.coxeter import build_group, conjugacy_classes


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_finite_tables_agree_with_coxeter_classes(name):
    W = build_group(name)
    ours = {frozenset(c.members_in_ball) for c in classes_in_ball(W)}
    theirs = {c.elements for c in conjugacy_classes(W)}
    assert ours == theirs


def test_sl2_translations_separated_by_newton_point():
    G = build_affine("SL2")
    table = ConjugacyTable(G, 4)
    idx = {n: table.class_index(G.translation((n,))) for n in range(-2, 3)}
    assert idx[1] == idx[-1] and idx[2] == idx[-2]
    assert len({idx[0], idx[1], idx[2]}) == 3


def test_class_count_nondecreasing():
    G = build_affine("SL2")
    counts = [len(ConjugacyTable(G, L)) for L in range(2, 9)]
    assert counts == sorted(counts)


def test_members_share_invariant_and_minimal_length():
    G = build_affine("PGL2")
    view = GroupView(G)
    for c in ConjugacyTable(G, 6):
        assert {G.invariant_f(x) for x in c.members_in_ball} == {c.invariant}
        assert all(view.length(x) == c.min_length for x in c.min_elements)
        assert min(view.length(x) for x in c.members_in_ball) == c.min_length


def test_gp_path_on_minimal_element_is_empty():
    W = build_group("A2")
    table = ConjugacyTable(W)
    s = W.simple(0)
    assert len(gp_path(W, s, table.class_of(s))) == 0


def test_gp_path_a2_longest_element():
    W = build_group("A2")
    w = W.from_word((0, 1, 0))
    path = gp_path(W, w, ConjugacyTable(W).class_of(w))
    assert [(lab, d) for lab, _, d in path.steps] == [("s1", -2)]
    assert path.end == W.simple(1)


@pytest.mark.parametrize("name", ["B2", "G2", "A3", "B3"])
def test_every_finite_element_reaches_the_minimum(name):
    report = verify_gp(ConjugacyTable(build_group(name)))
    assert report["failures"] == []
    assert report["checked"] == build_group(name).order


def test_affine_paths_in_small_balls():
    report = verify_gp(ConjugacyTable(build_affine("PGL2"), 6))
    assert report["failures"] == [] and report["checked"] > 0


def test_strong_conjugacy_of_simple_reflections():
    W = build_group("A2")
    chain = strong_conjugacy_witness(W, W.simple(0), W.simple(1))
    assert chain and chain[-1][1] == W.simple(1)
    with pytest.raises(ValueError):
        strong_conjugacy_witness(W, W.simple(0), W.longest_element)


def test_strong_conjugacy_can_fail_between_classes():
    W = build_group("A1xA1")
    with pytest.raises(NotFound):
        strong_conjugacy_witness(W, W.simple(0), W.simple(1))


def test_newton_zero_classes():
    assert len(newton_zero_classes(build_affine("SL2"), 6)) == 3
    assert len(newton_zero_classes(build_affine("PGL2"), 6)) == 3


@pytest.mark.parametrize("name", ["SL2", "PGL2"])
def test_parametrization_is_a_bijection(name):
    report = verify_param_bijection(build_affine(name), 8)
    assert report["ok"], report


def test_elliptic_affine_classes_have_full_J():
    G = build_affine("SL2")
    table = ConjugacyTable(G, 6)
    for c in table.closed_classes():
        J, _, _ = parametrize_class(G, c)
        assert is_elliptic_affine(G, c) == (len(J) == 1)
    assert not is_elliptic_affine(G, table.class_of(G.translation((1,))))
