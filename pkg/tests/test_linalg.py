from hypothesis import given, settings, strategies as st

from cocenter.exactscalar import QQ, finite_field, prime_field
from cocenter.linalg import (
    as_matrix,
    charpoly,
    cokernel,
    det,
    identity,
    inverse,
    matmul,
    nullspace,
    rank,
    smith_normal_form,
    solve,
)


def _int_matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def test_smith_form_small():
    inv, u, v = smith_normal_form([[2, 4], [6, 8]])
    assert inv == [2, 4]
    d = _int_matmul(_int_matmul(u, [[2, 4], [6, 8]]), v)
    assert d == [[2, 0], [0, 4]]


def test_cokernel_free_and_torsion():
    assert cokernel([[2, 0], [0, 3], [0, 0]], 3) == (1, [6])
    assert cokernel([], 4) == (4, [])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=2, max_size=4))
def test_smith_form_is_equivalent(a):
    inv, u, v = smith_normal_form(a)
    d = _int_matmul(_int_matmul(u, a), v)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            assert x == (inv[i] if i == j and i < len(inv) else 0)
    nz = [x for x in inv if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert det(as_matrix(QQ, u)) in (QQ(1), QQ(-1))


def test_charpoly_of_companion():
    F = prime_field(5)
    a = as_matrix(F, [[0, -6], [1, 5]])
    assert charpoly(a) == [F(6), F(-5), F(1)]


def test_inverse_and_solve_over_f9():
    F = finite_field(3, 2)
    z = F.gen()
    a = [[z, F.one], [F.one, z * z]]
    assert matmul(a, inverse(a)) == identity(F, 2)
    x = solve(a, [F.one, F.zero])
    assert matmul(a, [[c] for c in x]) == [[F.one], [F.zero]]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rank_nullity(rows):
    a = as_matrix(QQ, rows)
    assert rank(a) + len(nullspace(a)) == 3
    cp = charpoly(a)
    assert cp[0] == (-1) ** 3 * det(a)
