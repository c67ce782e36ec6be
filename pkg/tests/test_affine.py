import random
from collections import deque
from fractions import Fraction

import pytest

from cocenter.affine import BasedRootDatum, build_affine

PRESETS = ["SL2", "PGL2", "SL3", "PGL3", "Sp4"]


@pytest.fixture(scope="module", params=PRESETS)
def G(request):
    return build_affine(request.param)


def _bfs_lengths(G, L):
    """Word length over the affine simple reflections, by breadth-first search."""
    S = G.simple_reflections()
    dist = {G.identity: 0}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        if dist[x] == L:
            continue
        for s in S:
            y = G.mul(x, s)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def test_length_formula_matches_word_length(G):
    for x, d in _bfs_lengths(G, 6).items():
        assert G.length(x) == d


def test_simple_reflections_have_length_one(G):
    S = G.simple_reflections()
    assert all(G.length(s) == 1 for s in S)
    assert len(S) == G.datum.semisimple_rank + 1


def test_sl2_translation_by_lattice_generator_has_length_two():
    G = build_affine("SL2")
    assert G.length(G.translation((1,))) == 2


def test_omega_sizes():
    assert len(build_affine("SL3").omega()) == 1
    assert len(build_affine("SL2").omega()) == 1
    assert len(build_affine("PGL3").omega()) == 3
    assert len(build_affine("PGL2").omega()) == 2


def test_omega_elements_have_length_zero_and_permute_simples(G):
    S = set(G.simple_reflections())
    for om in G.omega():
        assert G.length(om) == 0
        assert {G.conj(om, s) for s in S} == S


def test_gl2_has_infinite_omega():
    G = build_affine("GL2")
    assert not G.omega_finite
    assert len(G.simple_reflections()) == 2


def test_newton_points_gl2():
    G = build_affine("GL2")
    x = G.mul(G.translation((1, 0)), G.finite(1))
    assert G.newton_point(x) == (Fraction(1, 2), Fraction(1, 2))
    assert G.dominant_newton(G.translation((0, 1))) == (1, 0)


def test_newton_point_is_homogeneous(G):
    rng = random.Random(2)
    B = G.ball(5)
    for x in rng.sample(B, min(15, len(B))):
        nu = G.newton_point(x)
        assert G.newton_point(G.power(x, 3)) == tuple(3 * c for c in nu)


def test_invariants_are_conjugation_invariant(G):
    rng = random.Random(3)
    B = G.ball(4)
    for _ in range(30):
        x, g = rng.choice(B), rng.choice(B)
        y = G.conj(g, x)
        assert G.invariant_f(y) == G.invariant_f(x)
    for _ in range(20):
        x, y = rng.choice(B), rng.choice(B)
        assert G.kottwitz(G.mul(x, y)) == G.kottwitz_add(G.kottwitz(x), G.kottwitz(y))


def test_omega_conjugation_preserves_length(G):
    for x in G.ball(4):
        for om in G.omega():
            assert G.length(G.conj(om, x)) == G.length(x)


def test_length_subadditive(G):
    rng = random.Random(4)
    B = G.ball(4)
    for _ in range(40):
        x, y = rng.choice(B), rng.choice(B)
        assert G.length(G.mul(x, y)) <= G.length(x) + G.length(y)


def test_ball_nesting_and_small_balls():
    G = build_affine("SL2")
    assert len(G.ball(0)) == 1
    assert set(G.ball(1)) == {G.identity, *G.simple_reflections()}
    sizes = [len(G.ball(L)) for L in range(6)]
    assert sizes == sorted(sizes)
    assert len(build_affine("PGL3").ball(0)) == 3


def test_pgl3_kottwitz_of_fundamental_coweight():
    G = build_affine("PGL3")
    k = G.kottwitz(G.translation((1, 0)))
    assert k != G.kottwitz(G.identity)
    assert G.kottwitz(G.power(G.translation((1, 0)), 3)) == G.kottwitz(G.identity)


def test_parahorics():
    SL3, SL2 = build_affine("SL3"), build_affine("SL2")
    assert len(SL3.parahoric([])) == 1
    assert len(SL3.parahoric([0, 1])) == 6
    assert not SL2.parahoric([0, 1]).finite


def test_sharp_groups():
    PGL3, SL3 = build_affine("PGL3"), build_affine("SL3")
    assert SL3.wj_sharp([0, 1]).order == 6
    assert PGL3.wj_sharp([]).order == 3
    assert PGL3.wj_sharp([0, 1]).order == 6


def test_maximal_I():
    assert build_affine("SL3").maximal_I() == [[(0, 1)], [(0, 2)], [(1, 2)]]
    assert build_affine("PGL3").maximal_I() == [[()], [(0, 1), (0, 2), (1, 2)]]
    assert build_affine("SL2").maximal_I() == [[(0,)], [(1,)]]


def test_datum_json_round_trip():
    d = BasedRootDatum.preset("PGL3")
    assert BasedRootDatum.from_json(d.to_json()) == d


def test_bad_datum_rejected():
    with pytest.raises(ValueError):
        BasedRootDatum(rank=1, simple_roots=((1,),), simple_coroots=((1,),))
