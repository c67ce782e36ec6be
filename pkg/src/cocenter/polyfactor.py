"""Univariate polynomials over an exact :class:`Field` and their irreducible
factors.

Polynomials are coefficient lists, constant term first.  Over finite fields
factoring is done here (distinct-degree plus Cantor-Zassenhaus splitting);
over Q and cyclotomic fields it is delegated to sympy.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .exactscalar import Field, FieldElem, cyclotomic_poly


def trim(a: list) -> list:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def deg(a: list) -> int:
    return len(trim(a)) - 1


def padd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    zero = (a or b)[0].field.zero
    return trim([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)])


def psub(a: list, b: list) -> list:
    return padd(a, [-x for x in b])


def pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    zero = a[0].field.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def pdivmod(a: list, b: list) -> tuple[list, list]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    zero = b[0].field.zero
    inv = b[-1].inverse()
    q = [zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = a[k + i] - c * y
        a = trim(a)
    return trim(q), a


def pmod(a: list, b: list) -> list:
    return pdivmod(a, b)[1]


def monic(a: list) -> list:
    a = trim(a)
    inv = a[-1].inverse()
    return [x * inv for x in a]


def pgcd(a: list, b: list) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pmod(a, b)
    return monic(a) if a else a


def ppowmod(base: list, e: int, mod: list) -> list:
    one = mod[0].field.one
    out = [one]
    base = pmod(base, mod)
    while e:
        if e & 1:
            out = pmod(pmul(out, base), mod)
        base = pmod(pmul(base, base), mod)
        e >>= 1
    return out


def peval(a: list, x):
    acc = x * 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pderiv(a: list) -> list:
    return trim([c * k for k, c in enumerate(a)][1:])


# ---------------------------------------------------------------------------
# finite fields


def _equal_degree_split(f: list, d: int, field: Field, rng: random.Random) -> list[list]:
    """Split a squarefree f whose irreducible factors all have degree d."""
    if deg(f) == d:
        return [f]
    q = field.order
    elems = list(field.elements())
    one = field.one
    while True:
        a = trim([rng.choice(elems) for _ in range(deg(f))])
        if deg(a) < 1:
            continue
        if q % 2:
            b = psub(ppowmod(a, (q**d - 1) // 2, f), [one])
        else:
            # absolute trace to F_2
            k = q.bit_length() - 1
            b, t = list(a), list(a)
            for _ in range(k * d - 1):
                t = pmod(pmul(t, t), f)
                b = padd(b, t)
        g = pgcd(f, b) if b else []
        if g and 0 < deg(g) < deg(f):
            return _equal_degree_split(g, d, field, rng) + _equal_degree_split(pdivmod(f, g)[0], d, field, rng)


def _finite_factors(f: list, field: Field) -> list[list]:
    rng = random.Random(0)
    q = field.order
    f = monic(f)
    out: list[list] = []
    x = [field.zero, field.one]
    rest = f
    d = 0
    xp = x
    while deg(rest) > 0:
        d += 1
        xp = ppowmod(xp, q, rest) if deg(rest) > 0 else xp
        g = pgcd(rest, psub(xp, x))
        if deg(g) > 0:
            out.extend(monic(h) for h in _equal_degree_split(g, d, field, rng))
            while True:
                qq, r = pdivmod(rest, g)
                if r:
                    break
                rest = qq
                g = pgcd(rest, g)
                if deg(g) < 1:
                    break
            if deg(rest) > 0:
                xp = pmod(xp, rest)
    return out


# ---------------------------------------------------------------------------
# characteristic 0 via sympy


@lru_cache(maxsize=None)
def _sympy_domain(n: int):
    import sympy

    if n <= 2:
        return sympy.QQ
    x = sympy.Symbol("x")
    phi = sum(c * x**k for k, c in enumerate(cyclotomic_poly(n)))
    return sympy.QQ.algebraic_field(sympy.CRootOf(phi, 0))


def _to_sympy(c: FieldElem, dom):
    import sympy

    if c.field.modulus is None:
        return dom.convert(sympy.Rational(c.rep.numerator, c.rep.denominator))
    coeffs = [sympy.Rational(x.numerator, x.denominator) for x in c.coords()]
    return dom(list(reversed(coeffs)))


def _from_sympy(c, field: Field) -> FieldElem:
    if field.modulus is None:
        return field(Fraction(int(c.numerator), int(c.denominator)))
    coeffs = [Fraction(int(x.numerator), int(x.denominator)) for x in reversed(c.to_list())]
    return field(coeffs or [0])


def _char0_factors(f: list, field: Field) -> list[list]:
    import sympy

    dom = _sympy_domain(field.spec.cyclotomic)
    x = sympy.Symbol("x")
    poly = sympy.Poly.from_list([_to_sympy(c, dom) for c in reversed(f)], x, domain=dom)
    _, facs = poly.factor_list()
    out = []
    for g, _ in facs:
        coeffs = [_from_sympy(c, field) for c in reversed(g.rep.to_list())]
        out.append(monic(coeffs))
    return out


def irreducible_factors(f: list) -> list[list]:
    """Distinct monic irreducible factors of f, sorted by degree then coefficients."""
    f = trim(f)
    if deg(f) < 1:
        return []
    field = f[0].field
    facs = _finite_factors(f, field) if field.p else _char0_factors(f, field)
    return sorted(facs, key=lambda g: (len(g), [str(c) for c in g]))


def roots(f: list) -> list:
    """Roots of f lying in its coefficient field."""
    return [-g[0] for g in irreducible_factors(f) if len(g) == 2]
