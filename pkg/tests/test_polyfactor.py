import pytest

from cocenter.exactscalar import QQ, cyclotomic_field, finite_field, prime_field
from cocenter.polyfactor import irreducible_factors, pmod, pmul, roots


def _poly(F, coeffs):
    return [F(c) for c in coeffs]


def _product(fs):
    out = fs[0]
    for f in fs[1:]:
        out = pmul(out, f)
    return out


@pytest.mark.parametrize(
    "F",
    [prime_field(2), prime_field(3), prime_field(5), finite_field(2, 2), finite_field(3, 2)],
    ids=["F2", "F3", "F5", "F4", "F9"],
)
def test_squarefree_product_recovers_factors(F):
    f = _poly(F, [1, 1, 1])  # x^2 + x + 1
    g = _poly(F, [1, 0, 1, 1])  # x^3 + x^2 + 1
    h = _poly(F, [F.order - 1, 1])  # x - 1 shifted
    fgh = _product([f, g, h])
    facs = irreducible_factors(fgh)
    rad = _product(facs)
    assert not pmod(fgh, rad)
    assert not pmod(_product([rad] * 6), fgh)
    assert len({tuple(map(str, a)) for a in facs}) == len(facs)
    for a in facs:
        assert irreducible_factors(a) == [a]


def test_phi3_over_rationals_and_f_seven():
    assert len(irreducible_factors(_poly(QQ, [1, 1, 1]))) == 1
    F7 = prime_field(7)
    assert sorted(int(str(r)) for r in roots(_poly(F7, [1, 1, 1]))) == [2, 4]


def test_phi3_splits_over_q_zeta3():
    K = cyclotomic_field(3)
    rs = roots([K(1), K(1), K(1)])
    assert len(rs) == 2
    assert all(r * r + r + 1 == 0 for r in rs)


def test_repeated_factor_reported_once():
    F3 = prime_field(3)
    x1 = _poly(F3, [1, 1])
    assert irreducible_factors(pmul(pmul(x1, x1), x1)) == [x1]


def test_constant_has_no_factors():
    assert irreducible_factors([QQ(3)]) == []
