"""Exact coefficient arithmetic.

Fields: the rationals, prime fields, cyclotomic fields Q(zeta_n) realized as
Q[x]/(Phi_n), and extensions F_p[x]/(f) for an irreducible monic f.  The
generic parameter ring Z[q(s)^{+-1}] is :class:`LaurentPoly`.

Every element is immutable and hashable; equality is structural on the
canonical (fully reduced) representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


class FieldError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# univariate polynomials as coefficient tuples (low degree first)


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: Sequence, b: Sequence, zero=0) -> list:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            den = list(cyclotomic_poly(d))
            q = [0] * (len(num) - len(den) + 1)
            rem = num[:]
            for k in range(len(q) - 1, -1, -1):
                c = rem[k + len(den) - 1] // den[-1]
                q[k] = c
                for i, y in enumerate(den):
                    rem[k + i] -= c * y
            num = q
    return tuple(num)


def eval_int_poly(coeffs: Sequence[int], x):
    """Horner evaluation of an integer polynomial at a field element."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class FieldSpec:
    """Which exact field to work in.

    ``characteristic`` is 0 or a prime.  For characteristic 0, ``cyclotomic``
    is the index n of Q(zeta_n) (n = 1 means Q).  For characteristic p,
    ``extension`` is an optional monic polynomial over F_p (coefficients
    constant-term first).
    """

    characteristic: int = 0
    extension: tuple[int, ...] | None = None
    cyclotomic: int = 1

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise FieldError(f"characteristic {p} is neither 0 nor prime")
        if self.cyclotomic < 1:
            raise FieldError("cyclotomic index must be >= 1")
        if p == 0 and self.extension is not None:
            raise FieldError("characteristic-0 extensions are given by a cyclotomic index")
        if p and self.cyclotomic != 1:
            raise FieldError("cyclotomic index only applies in characteristic 0")
        if self.extension is not None:
            ext = tuple(int(c) % p for c in self.extension)
            if len(ext) < 2 or ext[-1] != 1:
                raise FieldError("extension polynomial must be monic of degree >= 1")
            if not is_irreducible_mod_p(ext, p):
                raise FieldError(f"extension polynomial {ext} is reducible over F_{p}")
            object.__setattr__(self, "extension", ext)

    @classmethod
    def from_json(cls, obj: Mapping) -> "FieldSpec":
        p = int(obj.get("char", 0))
        if p == 0:
            return cls(0, cyclotomic=int(obj.get("cyclotomic", 1)))
        ext = obj.get("ext")
        return cls(p, tuple(ext) if ext else None)

    def to_json(self) -> dict:
        if self.characteristic == 0:
            return {"char": 0, "cyclotomic": self.cyclotomic}
        out: dict = {"char": self.characteristic}
        if self.extension is not None:
            out["ext"] = list(self.extension)
        return out

    @property
    def degree(self) -> int:
        if self.characteristic == 0:
            return _euler_phi(self.cyclotomic)
        return 1 if self.extension is None else len(self.extension) - 1

    def __str__(self):
        if self.characteristic == 0:
            return "Q" if self.cyclotomic <= 2 else f"Q(zeta{self.cyclotomic})"
        if self.extension is None or self.degree == 1:
            return f"F{self.characteristic}"
        return f"F{self.characteristic}^{self.degree}"


class Field:
    """An exact field; elements are :class:`FieldElem` wrapping a canonical rep."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.characteristic
        if self.p == 0:
            n = spec.cyclotomic
            self.modulus = tuple(Fraction(c) for c in cyclotomic_poly(n)) if _euler_phi(n) > 1 else None
        else:
            self.modulus = spec.extension if spec.extension and len(spec.extension) > 2 else None
        self.degree = 1 if self.modulus is None else len(self.modulus) - 1
        if self.p and spec.extension and len(spec.extension) == 2:
            # degree-1 extension is the prime field itself
            self.degree = 1
        self.zero = FieldElem(self, self._canon_int(0))
        self.one = FieldElem(self, self._canon_int(1))

    # -- canonical reps --------------------------------------------------
    # prime field / Q: a scalar (int mod p or Fraction); extensions: tuple of
    # length ``degree`` of scalars.

    def _scalar(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def _canon_int(self, x):
        s = self._scalar(x)
        if self.modulus is None:
            return s
        return (s,) + (self._scalar(0),) * (self.degree - 1)

    def _reduce(self, coeffs: list):
        """Reduce a coefficient list modulo the defining polynomial."""
        m = self.modulus
        d = self.degree
        c = list(coeffs)
        z = self._scalar(0)
        for k in range(len(c) - 1, d - 1, -1):
            lead = c[k]
            if lead == 0:
                continue
            c[k] = z
            for i in range(d):
                c[k - d + i] = self._norm(c[k - d + i] - lead * m[i])
        c = [self._norm(x) for x in c[:d]]
        c += [z] * (d - len(c))
        return tuple(c)

    def _norm(self, x):
        return x % self.p if self.p else x

    def __call__(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            if x.field is self:
                return x
            if x.field.spec == self.spec:
                return FieldElem(self, x.rep)
            raise FieldError(f"cannot coerce element of {x.field} into {self}")
        if isinstance(x, (list, tuple)):
            if self.modulus is None:
                if len(x) != 1:
                    raise FieldError("too many coordinates for a prime field")
                return FieldElem(self, self._scalar(x[0]))
            return FieldElem(self, self._reduce([self._scalar(c) for c in x]))
        return FieldElem(self, self._canon_int(x))

    def gen(self) -> "FieldElem":
        """The class of x in the defining quotient (zeta_n for cyclotomic fields)."""
        if self.modulus is None:
            if self.p == 0 and self.spec.cyclotomic == 2:
                return self(-1)
            if self.p == 0:
                return self.one
            # root of the linear extension polynomial, if any
            if self.spec.extension:
                return self(-self.spec.extension[0])
            raise FieldError("prime field has no distinguished generator")
        return self([0, 1])

    def elements(self):
        """All elements of a finite field, in a fixed order."""
        if not self.p:
            raise FieldError("cannot enumerate an infinite field")
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            yield self(list(reversed(coeffs)) if self.degree > 1 else coeffs[0])

    @property
    def order(self) -> int | None:
        return self.p**self.degree if self.p else None

    def primitive_root_of_unity(self, n: int) -> "FieldElem":
        """A primitive n-th root of unity in this field (deterministic choice)."""
        if self.p == 0:
            return _search_root(self, n)
        if n % self.p == 0:
            raise FieldError(f"no primitive {n}-th roots of unity in characteristic {self.p}")
        for x in self.elements():
            if x != 0 and x.multiplicative_order() == n:
                return x
        raise FieldError(f"{self} has no primitive {n}-th root of unity")

    def roots_of_unity(self, n: int) -> list["FieldElem"]:
        """All x in the field with x^n = 1, in a fixed order."""
        if self.p:
            return [x for x in self.elements() if x != 0 and x**n == self.one]
        m = self.spec.cyclotomic
        order = 2 if m <= 2 else (2 * m if m % 2 else m)
        z = _search_root(self, order)
        return [z**k for k in range(order) if (z**k) ** n == self.one]

    def __eq__(self, other):
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"Field({self.spec})"

    def __str__(self):
        return str(self.spec)


def _search_root(field: Field, n: int) -> "FieldElem":
    # the roots of unity of Q(zeta_m) form a cyclic group of order lcm(2, m)
    m = field.spec.cyclotomic
    if m <= 2:
        zeta, order = field(-1), 2
    elif m % 2:
        zeta, order = -field.gen(), 2 * m
    else:
        zeta, order = field.gen(), m
    if n < 1 or order % n:
        raise FieldError(f"{field} has no primitive {n}-th root of unity")
    return zeta ** (order // n)


@lru_cache(maxsize=None)
def make_field(spec: FieldSpec) -> Field:
    return Field(spec)


def prime_field(p: int) -> Field:
    return make_field(FieldSpec(p))


def cyclotomic_field(n: int) -> Field:
    return make_field(FieldSpec(0, cyclotomic=n))


class FieldElem:
    """Immutable element of a :class:`Field`."""

    __slots__ = ("field", "rep")

    def __init__(self, field: Field, rep):
        self.field = field
        self.rep = rep

    def _coerce(self, other) -> "FieldElem | None":
        if isinstance(other, FieldElem):
            if other.field is self.field or other.field.spec == self.field.spec:
                return other
            raise FieldError(f"mixing {self.field} and {other.field}")
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def _scalar_op(self, other, op):
        f = self.field
        if f.modulus is None:
            return FieldElem(f, f._norm(op(self.rep, other.rep)))
        return FieldElem(f, tuple(f._norm(op(a, b)) for a, b in zip(self.rep, other.rep)))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._scalar_op(o, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._scalar_op(o, lambda a, b: a - b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        f = self.field
        if f.modulus is None:
            return FieldElem(f, f._norm(-self.rep))
        return FieldElem(f, tuple(f._norm(-a) for a in self.rep))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        if f.modulus is None:
            return FieldElem(f, f._norm(self.rep * o.rep))
        return FieldElem(f, f._reduce(_pmul(self.rep, o.rep, f._scalar(0))))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of zero in {f}")
        if f.modulus is None:
            if f.p:
                return FieldElem(f, pow(self.rep, -1, f.p))
            return FieldElem(f, 1 / self.rep)
        # solve (self * y) = 1 via the multiplication matrix
        d = f.degree
        cols = []
        basis = [f([0] * k + [1]) for k in range(d)]
        for b in basis:
            cols.append((self * b).rep)
        mat = [[cols[j][i] for j in range(d)] + [f._scalar(1 if i == 0 else 0)] for i in range(d)]
        sol = _solve_scalars(mat, f)
        return FieldElem(f, tuple(sol))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        if self.field.modulus is None:
            return self.rep == 0
        return all(c == 0 for c in self.rep)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field.spec == other.field.spec and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            return self.rep == self.field(other).rep
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.rep))

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        x, k = self, 1
        one = self.field.one
        limit = (self.field.order or 10**6) + 1
        while x != one:
            x = x * self
            k += 1
            if k > limit:
                raise FieldError("element of infinite order")
        return k

    def coords(self) -> tuple:
        if self.field.modulus is None:
            return (self.rep,)
        return self.rep

    def to_json(self):
        def enc(c):
            if isinstance(c, Fraction):
                return str(c) if c.denominator != 1 else int(c)
            return int(c)

        return [enc(c) for c in self.coords()] if self.field.modulus is not None else enc(self.rep)

    def __repr__(self):
        return f"FieldElem({self}, {self.field})"

    def __str__(self):
        if self.field.modulus is None:
            return str(self.rep)
        sym = "z" if self.field.p == 0 else "a"
        parts = []
        for k, c in enumerate(self.rep):
            if c == 0:
                continue
            mon = "" if k == 0 else (sym if k == 1 else f"{sym}^{k}")
            if mon and c == 1:
                parts.append(mon)
            elif mon:
                parts.append(f"{c}*{mon}")
            else:
                parts.append(str(c))
        return " + ".join(parts) if parts else "0"


def _solve_scalars(mat: list[list], f: Field) -> list:
    """Gauss-Jordan on an augmented square system of raw scalars."""
    n = len(mat)
    m = [row[:] for row in mat]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], -1, f.p) if f.p else 1 / m[col][col]
        m[col] = [f._norm(x * inv) for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                c = m[r][col]
                m[r] = [f._norm(a - c * b) for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


QQ = make_field(FieldSpec(0))


def field_inverse(x: FieldElem) -> FieldElem:
    return x.inverse()


# ---------------------------------------------------------------------------
# polynomials over F_p: irreducibility and enumeration


def _pmod_p(a: list, b: Sequence[int], p: int) -> list:
    a = [x % p for x in a]
    _trim(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _pgcd_p(a: list, b: list, p: int) -> list:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _pmod_p(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _ppowmod_p(base: list, e: int, mod: Sequence[int], p: int) -> list:
    result = [1]
    base = _pmod_p(base, mod, p)
    while e:
        if e & 1:
            result = _pmod_p(_pmul(result, base), mod, p)
        base = _pmod_p(_pmul(base, base), mod, p)
        e >>= 1
    return result


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = [c % p for c in f]
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    primes = [q for q in range(2, n + 1) if n % q == 0 and _is_prime(q)]
    for q in primes:
        h = _ppowmod_p(x, p ** (n // q), f, p)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_pgcd_p(f[:], diff, p)) > 1:
            return False
    h = _ppowmod_p(x, p**n, f, p)
    diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
    return not diff


def monic_irreducibles(p: int, degree: int):
    """Monic irreducible polynomials over F_p of a given degree, deterministic order."""
    for tail in itertools.product(range(p), repeat=degree):
        f = tuple(reversed(tail)) + (1,)
        if is_irreducible_mod_p(f, p):
            yield f


def finite_field(p: int, degree: int = 1) -> Field:
    """F_{p^degree} defined by the first monic irreducible in enumeration order."""
    if degree == 1:
        return prime_field(p)
    f = next(monic_irreducibles(p, degree))
    return make_field(FieldSpec(p, f))


def embed(x: FieldElem, target: Field) -> FieldElem:
    """Map ``x`` into a field containing its own (same characteristic)."""
    src = x.field
    if src == target:
        return target(x)
    if src.p != target.p:
        raise FieldError("cannot embed across characteristics")
    if src.modulus is None:
        return target(x.rep)
    image = _generator_image(src.spec, target.spec)
    acc = target.zero
    for k, c in enumerate(x.coords()):
        if c != 0:
            acc = acc + target(c) * image**k
    return acc


@lru_cache(maxsize=None)
def _generator_image(src: FieldSpec, dst: FieldSpec) -> FieldElem:
    s, t = make_field(src), make_field(dst)
    if s.p == 0:
        n = src.cyclotomic
        return t.primitive_root_of_unity(n if n % 2 == 0 or n == 1 else n)
    # finite fields: find a root of the defining polynomial of src in dst
    f = src.extension
    for y in t.elements():
        if eval_int_poly(f, y) == 0:
            return y
    raise FieldError(f"{src} does not embed into {dst}")


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Element of Z[q_1^{+-1}, ..., q_k^{+-1}] with sparse canonical terms."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], int] | None = None):
        self.variables = tuple(variables)
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                if len(e) != len(self.variables):
                    raise ValueError("exponent length does not match variables")
                clean[tuple(e)] = int(c)
        self.terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def constant(cls, variables: Sequence[str], c: int) -> "LaurentPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Mapping[str, int] | Sequence[int], c: int = 1):
        variables = tuple(variables)
        if isinstance(exps, Mapping):
            e = tuple(exps.get(v, 0) for v in variables)
        else:
            e = tuple(exps)
        return cls(variables, {e: c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str, power: int = 1) -> "LaurentPoly":
        return cls.monomial(variables, {name: power})

    def _check(self, other: "LaurentPoly"):
        if other.variables != self.variables:
            raise ValueError(f"variable sets differ: {self.variables} vs {other.variables}")

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.variables, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly(self.variables, {tuple(-k * (-n) for k in e): c ** (-n)})
        acc = LaurentPoly.constant(self.variables, 1)
        for _ in range(n):
            acc = acc * self
        return acc

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.variables, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self.terms.items())))
        return self._hash

    def specialize(self, assignment: Mapping[str, FieldElem], field: Field | None = None) -> FieldElem:
        return laurent_specialize(self, assignment, field)

    def to_json(self) -> list:
        return [[list(e), c] for e, c in self.terms.items()]

    @classmethod
    def from_json(cls, variables: Sequence[str], data: Iterable) -> "LaurentPoly":
        return cls(variables, {tuple(e): c for e, c in data})

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mon:
                out.append(str(c))
            elif c == 1:
                out.append(mon)
            elif c == -1:
                out.append("-" + mon)
            else:
                out.append(f"{c}*{mon}")
        return " + ".join(out).replace("+ -", "- ")


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a * b


def laurent_specialize(
    p: LaurentPoly, assignment: Mapping[str, FieldElem], field: Field | None = None
) -> FieldElem:
    """Evaluate ``p`` at the given field values (all variables must be assigned)."""
    missing = [v for v in p.variables if v not in assignment]
    used = {v for e in p.terms for v, k in zip(p.variables, e) if k}
    if missing:
        raise KeyError(f"no value assigned to {missing}")
    if field is None:
        vals = [assignment[v] for v in p.variables]
        field = next((x.field for x in vals if isinstance(x, FieldElem)), QQ)
    vals = [field(assignment[v]) for v in p.variables]
    for v, x in zip(p.variables, vals):
        if v in used and x.is_zero():
            raise ZeroDivisionError(f"parameter {v} specialized to 0 is not invertible")
    acc = field.zero
    for e, c in p.terms.items():
        term = field(c)
        for x, k in zip(vals, e):
            if k:
                term = term * x**k
        acc = acc + term
    return acc
