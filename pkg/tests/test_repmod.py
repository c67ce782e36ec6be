import pytest
from hypothesis import given, settings, strategies as st

from cocenter.affine import build_affine
from cocenter.coxeter import build_group, conjugacy_classes
from cocenter.exactscalar import QQ, cyclotomic_field, prime_field
from cocenter.linalg import as_matrix
from cocenter.repmod import (
    FDModule,
    Inclusion,
    RelationError,
    chop,
    character,
    elliptic_rank,
    finite_hecke,
    hom_space,
    induce,
    isomorphic,
    one_dimensional,
    proper_subalgebras,
    regular_module,
    sharp_algebra,
    sign_module,
    simples,
    trace_pairing_matrix,
    trivial_module,
)


@pytest.mark.parametrize("name,dim", [("A1", 2), ("A2", 6), ("A1xA1", 4), ("B2", 8)])
def test_regular_module_dimension(name, dim):
    assert regular_module(finite_hecke(name, 25)).dimension == dim


def test_trivial_and_sign_modules():
    A = finite_hecke("A2", 25)
    triv, sgn = trivial_module(A), sign_module(A)
    s = A.group.simple(0)
    assert character(triv, s) == QQ(25)
    assert character(sgn, s) == QQ(-1)
    assert not isomorphic(triv, sgn)


def test_relations_are_checked():
    A = finite_hecke("A1", 25)
    with pytest.raises(RelationError):
        FDModule(A, [as_matrix(QQ, [[2]])])
    with pytest.raises(RelationError):
        one_dimensional(finite_hecke("A2", 25), [QQ(25), QQ(-1)])


@pytest.mark.parametrize("name,count,dims", [
    ("A2", 3, [1, 1, 2]),
    ("B2", 5, [1, 1, 1, 1, 2]),
    ("G2", 6, [1, 1, 1, 1, 2, 2]),
    ("A3", 5, [1, 1, 2, 3, 3]),
])
def test_generic_simples_match_classes(name, count, dims):
    res = simples(finite_hecke(name, 25))
    assert len(res.modules) == count == len(conjugacy_classes(build_group(name)))
    assert sorted(m.dimension for m in res.modules) == dims
    assert sum(m.dimension * k for m, k in res.factors) == build_group(name).order


def test_jordan_holder_independent_of_seed():
    for Q in (25, -1):
        A = finite_hecke("A2", Q)
        r0, r1 = simples(A, seed=0), simples(A, seed=1)
        assert r0.dimensions() == r1.dimensions()
        assert r0.field == r1.field
        for (m, k) in r0.factors:
            assert sum(k1 for m1, k1 in r1.factors if isomorphic(m, m1)) == k


def test_degenerate_a2_points():
    K = cyclotomic_field(3)
    res = simples(finite_hecke("A2", K.gen(), K))
    assert res.dimensions() == [(1, 3), (1, 3)]
    res = simples(finite_hecke("A2", -1))
    assert res.dimensions() == [(1, 2), (2, 2)]


def test_a1_in_characteristic_two():
    A = finite_hecke("A1", 1, prime_field(2))
    res = simples(A)
    assert res.dimensions() == [(1, 2)]
    er = elliptic_rank(A)
    assert er.rank == 0 and er.torsion == [2]


def test_cyclic_omega_needs_cube_roots_of_unity():
    G = build_affine("PGL3")
    res = simples(sharp_algebra(G, (), 1, QQ))
    assert len(res.modules) == 3 and res.extensions
    assert res.field.spec.cyclotomic % 3 == 0
    res3 = simples(sharp_algebra(G, (), 1, prime_field(3)))
    assert res3.dimensions() == [(1, 3)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.integers(-3, 3))
def test_character_is_a_trace(i, j, c):
    A = finite_hecke("A2", 25)
    V = simples(A).modules[-1]
    a = {(i, 0): QQ(1), (0, 0): QQ(c)}
    b = {(j, 0): QQ(1)}
    assert character(V, A.product(a, b)) == character(V, A.product(b, a))


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "A1xA1"])
def test_trace_pairing_invertible(name):
    tp = trace_pairing_matrix(finite_hecke(name, 25))
    assert tp.square and tp.invertible and tp.well_defined()


def test_trace_pairing_determinants():
    assert trace_pairing_matrix(finite_hecke("A2", 1)).determinant() == QQ(-6)
    assert trace_pairing_matrix(finite_hecke("A2", 25)).determinant() == QQ(-16926)


def test_trace_pairing_rejects_omega():
    with pytest.raises(ValueError):
        trace_pairing_matrix(sharp_algebra(build_affine("PGL3"), (), 1))


def test_frobenius_reciprocity_a2_over_a1():
    A = finite_hecke("A2", 25)
    inc = Inclusion(A, (0,))
    big = simples(A).modules
    for V in simples(inc.sub).modules:
        ind = induce(inc, V)
        assert ind.dimension == 3 * V.dimension
        for W in big:
            res = FDModule(inc.sub, [W.T[s] for s in inc.K])
            assert len(hom_space(ind, W)) == len(hom_space(V, res))


def test_induction_from_trivial_subalgebra_is_regular():
    A = finite_hecke("A2", 25)
    inc = Inclusion(A, ())
    ind = induce(inc, trivial_module(inc.sub))
    assert chop(ind).dimensions() == chop(regular_module(A)).dimensions()


@pytest.mark.parametrize("name,expected", [("A1", 1), ("A2", 1), ("B2", 2), ("G2", 3), ("A1xA1", 1)])
def test_generic_elliptic_rank_equals_elliptic_class_count(name, expected):
    assert elliptic_rank(finite_hecke(name, 25)).rank == expected
    assert sum(c.elliptic for c in conjugacy_classes(build_group(name))) == expected


def test_a2_elliptic_rank_degenerates_at_phi3():
    K = cyclotomic_field(3)
    assert elliptic_rank(finite_hecke("A2", K.gen(), K)).rank == 0
    assert elliptic_rank(finite_hecke("A2", -1)).rank == 1


def test_proper_subalgebras_of_cyclic_omega():
    A = sharp_algebra(build_affine("PGL3"), (), 1, QQ)
    assert proper_subalgebras(A) == [((), (0,))]
