"""Finite-dimensional modules over specialized finite (parahoric) Hecke
algebras, possibly extended by a group Omega of diagram automorphisms.

The algebra has basis T_w * omega with omega T_s omega^-1 = T_{omega(s)}.
Modules are given by one matrix per generator acting on column vectors.
Composition factors are found by a seeded MeatAxe-style search, extending
the field when a simple module is not absolutely irreducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Sequence

from .coxeter import CoxeterGroup, CoxeterMatrix, build_group, conjugacy_classes
from .exactscalar import Field, FieldElem, FieldSpec, QQ, embed, finite_field, make_field
from .linalg import (
    Subspace,
    charpoly,
    det,
    identity,
    inverse,
    matadd,
    matmul,
    matvec,
    nullspace,
    scale,
    trace,
    transpose,
    zeros,
    cokernel,
)
from .polyfactor import irreducible_factors, roots

MAX_EXTENSION_DEGREE = 6


class RelationError(ValueError):
    """Generator matrices violate the defining relations."""


class SplittingError(RuntimeError):
    """No splitting field was found within the degree bound."""


# ---------------------------------------------------------------------------
# algebras


@dataclass
class FiniteHeckeAlgebra:
    """H(W) ⋊ Omega over a field, with quadratic relations (T_s+1)(T_s-Q_s) = 0.

    ``Q`` holds the value of q(s)^2 for each generator.  ``omega_perms[k]``
    is the diagram permutation of omega_k (index 0 is the identity) and
    ``omega_mul[a][b]`` the index of omega_a omega_b.
    """

    group: CoxeterGroup
    field: Field
    Q: tuple
    omega_perms: tuple = ()
    omega_mul: tuple = ()
    labels: tuple = ()
    omega_labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        r = self.group.rank
        self.Q = tuple(self.field(x) for x in self.Q)
        if len(self.Q) != r:
            raise ValueError(f"need {r} parameter values, got {len(self.Q)}")
        if not self.omega_perms:
            self.omega_perms = (tuple(range(r)),)
            self.omega_mul = ((0,),)
        if not self.labels:
            self.labels = tuple(self.group.coxeter_matrix.labels)
        if not self.omega_labels:
            self.omega_labels = tuple("e" if k == 0 else f"omega{k}" for k in range(len(self.omega_perms)))
        cm = self.group.coxeter_matrix
        for i in range(r):
            for j in range(r):
                if cm.m(i, j) % 2 == 1 and self.Q[i] != self.Q[j]:
                    raise RelationError("parameters differ on conjugate generators")
        for p in self.omega_perms:
            if any(self.Q[p[i]] != self.Q[i] for i in range(r)):
                raise RelationError("parameters are not Omega-invariant")

    @property
    def rank(self) -> int:
        return self.group.rank

    @property
    def n_omega(self) -> int:
        return len(self.omega_perms)

    @property
    def dimension(self) -> int:
        return self.group.order * self.n_omega

    @property
    def sharp(self) -> bool:
        return self.n_omega > 1

    def basis(self) -> list[tuple[int, int]]:
        """Basis labels (w, k) for T_w omega_k; position k*|W| + w."""
        return [(w, k) for k in range(self.n_omega) for w in range(self.group.order)]

    def index(self, w: int, k: int = 0) -> int:
        return k * self.group.order + w

    def omega_inverse(self, k: int) -> int:
        return next(j for j in range(self.n_omega) if self.omega_mul[k][j] == 0)

    def over(self, target: Field) -> "FiniteHeckeAlgebra":
        if target == self.field:
            return self
        return FiniteHeckeAlgebra(
            self.group,
            target,
            tuple(embed(x, target) for x in self.Q),
            self.omega_perms,
            self.omega_mul,
            self.labels,
            self.omega_labels,
            self.name,
        )

    def format_basis(self, w: int, k: int = 0) -> str:
        word = " ".join(self.labels[s] for s in self.group.word(w)) or "e"
        return word if k == 0 else f"{word}*{self.omega_labels[k]}"

    def poincare_value(self):
        """sum_w Q^l(w) (equal parameters assumed only through the values)."""
        acc = self.field.zero
        for w in range(self.group.order):
            term = self.field.one
            for s in self.group.word(w):
                term = term * self.Q[s]
            acc = acc + term
        return acc

    # -- products in the regular representation ---------------------------------

    def left_T(self, s: int, vec: dict) -> dict:
        """T_s * (sum c_(w,k) T_w omega_k)."""
        g = self.group
        out: dict = {}
        Q = self.Q[s]
        for (w, k), c in vec.items():
            sw = g.left[s][w]
            if g.lengths[sw] > g.lengths[w]:
                _acc(out, (sw, k), c)
            else:
                _acc(out, (w, k), c * (Q - 1))
                _acc(out, (sw, k), c * Q)
        return {b: c for b, c in out.items() if not c.is_zero()}

    def right_T(self, s: int, vec: dict) -> dict:
        """(sum c_(w,k) T_w omega_k) * T_s."""
        g = self.group
        out: dict = {}
        for (w, k), c in vec.items():
            t = self.omega_perms[k][s]
            wt = g.right[t][w]
            if g.lengths[wt] > g.lengths[w]:
                _acc(out, (wt, k), c)
            else:
                _acc(out, (w, k), c * (self.Q[t] - 1))
                _acc(out, (wt, k), c * self.Q[t])
        return {b: c for b, c in out.items() if not c.is_zero()}

    def left_omega(self, j: int, vec: dict) -> dict:
        g = self.group
        return {(g.apply_automorphism(self.omega_perms[j], w), self.omega_mul[j][k]): c for (w, k), c in vec.items()}

    def right_omega(self, j: int, vec: dict) -> dict:
        return {(w, self.omega_mul[k][j]): c for (w, k), c in vec.items()}

    def product(self, a: dict, b: dict) -> dict:
        """Product of two algebra elements given as {(w, k): coefficient}."""
        out: dict = {}
        for (w, k), c in a.items():
            # T_w omega_k * b = T_w * (omega_k b)
            part = self.left_omega(k, b)
            for s in reversed(self.group.word(w)):
                part = self.left_T(s, part)
            for basis_elt, d in part.items():
                _acc(out, basis_elt, c * d)
        return {x: c for x, c in out.items() if not c.is_zero()}

    def T(self, w: int, k: int = 0) -> dict:
        return {(w, k): self.field.one}


def _acc(d: dict, key, c):
    if c.is_zero():
        return
    if key in d:
        d[key] = d[key] + c
    else:
        d[key] = c


def _finite_hecke(group: CoxeterGroup | CoxeterMatrix | str, field: Field, Q) -> FiniteHeckeAlgebra:
    if not isinstance(group, CoxeterGroup):
        group = build_group(group)
    if not isinstance(Q, (list, tuple)):
        Q = (Q,) * group.rank
    return FiniteHeckeAlgebra(group, field, tuple(Q), name=str(""))


def finite_hecke(group, Q=1, field: Field | None = None) -> FiniteHeckeAlgebra:
    """Hecke algebra of a finite Coxeter group with Q = q(s)^2 given per generator or uniformly."""
    if field is None:
        vals = Q if isinstance(Q, (list, tuple)) else [Q]
        field = next((x.field for x in vals if isinstance(x, FieldElem)), QQ)
    return _finite_hecke(group, field, Q)


def sharp_algebra(G, J, Q, field: Field | None = None) -> FiniteHeckeAlgebra:
    """The algebra of W_J^sharp = W_J ⋊ Omega_J inside an extended affine Weyl group.

    ``Q`` is either one value for every generator or a sequence indexed by
    the simple reflections of G.
    """
    sg = G.wj_sharp(J)
    J = sg.J
    grp = sg.parahoric.group
    if not isinstance(Q, (list, tuple)):
        Q = [Q] * len(G.simple)
    if field is None:
        field = next((x.field for x in Q if isinstance(x, FieldElem)), QQ)
    labels = tuple(G.simple_labels[j] for j in J)
    return FiniteHeckeAlgebra(
        grp,
        field,
        tuple(Q[j] for j in J),
        tuple(sg.perms),
        tuple(sg.omega_mul),
        labels,
        tuple(G.omega_label(om) if k else "e" for k, om in enumerate(sg.omega)),
        name=f"H(W_{{{','.join(labels)}}}^#)",
    )


# ---------------------------------------------------------------------------
# modules


@dataclass
class FDModule:
    """A module given by matrices for T_s (one per generator) and omega_k (k >= 0).

    Relations are verified on construction unless ``check`` is False.
    """

    algebra: FiniteHeckeAlgebra
    T: list
    omega: list = dc_field(default_factory=list)
    check: bool = True

    def __post_init__(self):
        A = self.algebra
        if len(self.T) != A.rank:
            raise RelationError(f"expected {A.rank} T-matrices, got {len(self.T)}")
        n = self.dimension
        if not self.omega:
            if A.n_omega > 1:
                raise RelationError("Omega matrices missing")
            self.omega = [identity(A.field, n)]
        for m in list(self.T) + list(self.omega):
            if len(m) != n or any(len(row) != n for row in m):
                raise RelationError("generator matrix has the wrong size")
        self._cache: dict = {}
        if self.check:
            self.check_relations()

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def spec(self) -> FieldSpec:
        return self.field.spec

    @property
    def dimension(self) -> int:
        if self.T:
            return len(self.T[0])
        return len(self.omega[0]) if self.omega else 0

    def generators(self) -> list:
        return list(self.T) + list(self.omega[1:])

    def check_relations(self) -> None:
        A, F, n = self.algebra, self.field, self.dimension
        one = identity(F, n)
        cm = A.group.coxeter_matrix
        for s, m in enumerate(self.T):
            lhs = matmul(matadd(m, one), matadd(m, scale(-A.Q[s], one)))
            if any(not x.is_zero() for row in lhs for x in row):
                raise RelationError(f"quadratic relation fails for generator {A.labels[s]}")
        for s in range(A.rank):
            for t in range(s + 1, A.rank):
                k = cm.m(s, t)
                if k == 0:
                    continue
                a, b = one, one
                for i in range(k):
                    a = matmul(a, self.T[s] if i % 2 == 0 else self.T[t])
                    b = matmul(b, self.T[t] if i % 2 == 0 else self.T[s])
                if a != b:
                    raise RelationError(f"braid relation fails for {A.labels[s]}, {A.labels[t]}")
        if self.omega[0] != one:
            raise RelationError("omega_0 must act as the identity")
        for a in range(A.n_omega):
            for b in range(A.n_omega):
                if matmul(self.omega[a], self.omega[b]) != self.omega[A.omega_mul[a][b]]:
                    raise RelationError("Omega matrices do not multiply as the group")
            for s in range(A.rank):
                left = matmul(self.omega[a], self.T[s])
                right = matmul(self.T[A.omega_perms[a][s]], self.omega[a])
                if left != right:
                    raise RelationError("Omega action incompatible with the diagram automorphism")

    # -- action of basis elements ------------------------------------------------

    def matrix_T(self, w: int) -> list:
        key = ("T", w)
        if key not in self._cache:
            g = self.algebra.group
            if w == g.identity:
                self._cache[key] = identity(self.field, self.dimension)
            else:
                s = g.words[w][0]
                self._cache[key] = matmul(self.T[s], self.matrix_T(g.left[s][w]))
        return self._cache[key]

    def matrix_of_basis(self, w: int, k: int = 0) -> list:
        return self.matrix_T(w) if k == 0 else matmul(self.matrix_T(w), self.omega[k])

    def matrix_of(self, h: dict) -> list:
        """Matrix of an algebra element {(w, k): coefficient}."""
        out = zeros(self.field, self.dimension)
        for (w, k), c in h.items():
            out = matadd(out, scale(c, self.matrix_of_basis(w, k)))
        return out

    def over(self, target: Field) -> "FDModule":
        if target == self.field:
            return self
        conv = lambda m: [[embed(x, target) for x in row] for row in m]
        return FDModule(self.algebra.over(target), [conv(m) for m in self.T], [conv(m) for m in self.omega], check=False)

    def to_json(self) -> dict:
        enc = lambda m: [[x.to_json() for x in row] for row in m]
        return {
            "field": self.spec.to_json(),
            "dimension": self.dimension,
            "T": {self.algebra.labels[s]: enc(m) for s, m in enumerate(self.T)},
            "omega": {self.algebra.omega_labels[k]: enc(m) for k, m in enumerate(self.omega) if k},
        }


def regular_module(algebra: FiniteHeckeAlgebra) -> FDModule:
    """Left multiplication of the algebra on itself."""
    basis = algebra.basis()
    pos = {b: i for i, b in enumerate(basis)}
    F = algebra.field
    n = len(basis)

    def mat(fn):
        m = zeros(F, n)
        for j, b in enumerate(basis):
            for b2, c in fn({b: F.one}).items():
                m[pos[b2]][j] = c
        return m

    T = [mat(lambda v, s=s: algebra.left_T(s, v)) for s in range(algebra.rank)]
    om = [mat(lambda v, k=k: algebra.left_omega(k, v)) for k in range(algebra.n_omega)]
    return FDModule(algebra, T, om)


def one_dimensional(algebra: FiniteHeckeAlgebra, t_values: Sequence, omega_values: Sequence | None = None) -> FDModule:
    """Module of dimension 1 from eigenvalues (each T_s acts by -1 or Q_s)."""
    F = algebra.field
    if omega_values is None:
        omega_values = [F.one] * algebra.n_omega
    return FDModule(algebra, [[[F(x)]] for x in t_values], [[[F(x)]] for x in omega_values])


def trivial_module(algebra: FiniteHeckeAlgebra) -> FDModule:
    """T_s acts by Q_s and Omega trivially."""
    return one_dimensional(algebra, algebra.Q)


def sign_module(algebra: FiniteHeckeAlgebra) -> FDModule:
    return one_dimensional(algebra, [-algebra.field.one] * algebra.rank)


# ---------------------------------------------------------------------------
# submodules, homomorphisms


def spin(gens: Sequence, vectors: Sequence, field: Field, n: int) -> Subspace:
    """Smallest subspace containing ``vectors`` and stable under ``gens``."""
    sub = Subspace(field, n)
    queue = []
    for v in vectors:
        if sub.add(v):
            queue.append(list(v))
    while queue and len(sub) < n:
        v = queue.pop()
        for g in gens:
            u = matvec(g, v)
            if sub.add(u):
                queue.append(u)
    return sub


def _sub_and_quotient(m: FDModule, sub: Subspace) -> tuple[FDModule, FDModule]:
    n, k = m.dimension, len(sub)
    F = m.field
    piv = set(sub.pivots)
    cols = [list(r) for r in sub.rows]
    for j in range(n):
        if j not in piv:
            cols.append([F.one if i == j else F.zero for i in range(n)])
    B = transpose(cols)
    P = inverse(B)

    def conj(g):
        h = matmul(P, matmul(g, B))
        return [row[:k] for row in h[:k]], [row[k:] for row in h[k:]]

    parts = [conj(g) for g in m.T]
    oparts = [conj(g) for g in m.omega]
    A = m.algebra
    S = FDModule(A, [p[0] for p in parts], [p[0] for p in oparts], check=False)
    Qt = FDModule(A, [p[1] for p in parts], [p[1] for p in oparts], check=False)
    return S, Qt


def submodule(m: FDModule, vectors: Sequence) -> FDModule:
    return _sub_and_quotient(m, spin(m.generators(), vectors, m.field, m.dimension))[0]


def hom_space(m: FDModule, n: FDModule) -> list:
    """Basis of Hom_A(m, n) as matrices X (dim n x dim m) with X g_m = g_n X."""
    if m.algebra.rank != n.algebra.rank or m.field != n.field:
        raise ValueError("modules over different algebras")
    a, b = m.dimension, n.dimension
    F = m.field
    rows = []
    # unknown X[i][j] at position i*a + j
    for gm, gn in zip(m.generators(), n.generators()):
        for i in range(b):
            for j in range(a):
                row = [F.zero] * (a * b)
                for k in range(a):
                    c = gm[k][j]
                    if not c.is_zero():
                        row[i * a + k] = row[i * a + k] + c
                for k in range(b):
                    c = gn[i][k]
                    if not c.is_zero():
                        row[k * a + j] = row[k * a + j] - c
                if any(not x.is_zero() for x in row):
                    rows.append(row)
    basis = nullspace(rows, a * b, F) if rows else nullspace([], a * b, F)
    return [[vec[i * a:(i + 1) * a] for i in range(b)] for vec in basis]


def endomorphism_dimension(m: FDModule) -> int:
    return len(hom_space(m, m))


def character(v: FDModule, h) -> FieldElem:
    """Trace of an algebra element: a dict {(w, k): c}, a group index, or a (w, k) pair."""
    if isinstance(h, int):
        return trace(v.matrix_T(h))
    if isinstance(h, tuple):
        return trace(v.matrix_of_basis(*h))
    if hasattr(h, "min_elements"):
        return trace(v.matrix_T(min(h.min_elements)))
    return trace(v.matrix_of(h))


def _signature(v: FDModule) -> tuple:
    g = v.algebra.group
    sample = range(min(g.order, 64))
    chars = tuple(trace(v.matrix_T(w)) for w in sample)
    ochars = tuple(trace(o) for o in v.omega)
    return (v.dimension, chars, ochars)


def isomorphic(m: FDModule, n: FDModule) -> bool:
    """Isomorphism of simple modules: equal invariants and a nonzero homomorphism."""
    if m.dimension != n.dimension:
        return False
    if _signature(m) != _signature(n):
        return False
    return bool(hom_space(m, n))


# ---------------------------------------------------------------------------
# chopping


class _NeedsExtension(Exception):
    def __init__(self, field: Field, note: str):
        super().__init__(note)
        self.field = field
        self.note = note


@dataclass
class ChopResult:
    """Composition factors (pairwise non-isomorphic) with multiplicities."""

    factors: list  # list of (FDModule, multiplicity)
    field: Field
    extensions: list  # human-readable record of field extensions

    @property
    def modules(self) -> list:
        return [m for m, _ in self.factors]

    @property
    def length(self) -> int:
        return sum(k for _, k in self.factors)

    def dimensions(self) -> list[tuple[int, int]]:
        return sorted((m.dimension, k) for m, k in self.factors)


def _random_scalar(field: Field, rng: random.Random) -> FieldElem:
    if field.p and field.order <= 4096:
        elems = list(field.elements())
        return rng.choice(elems)
    c = [rng.randint(-3, 3) for _ in range(field.degree)]
    return field(c if field.degree > 1 else c[0])


def _random_element(m: FDModule, rng: random.Random) -> list:
    gens = m.generators()
    F = m.field
    n = m.dimension
    acc = zeros(F, n)
    for _ in range(3):
        word = identity(F, n)
        for _ in range(rng.randint(1, 4)):
            word = matmul(word, rng.choice(gens)) if gens else word
        acc = matadd(acc, scale(_random_scalar(F, rng), word))
    return acc


def _poly_at(f: list, a: list) -> list:
    F = a[0][0].field
    n = len(a)
    acc = zeros(F, n)
    for c in reversed(f):
        acc = matmul(acc, a)
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc


def _split(m: FDModule, rng: random.Random, attempts: int = 40):
    """Return ("sub", Subspace), ("irreducible", None) or ("unknown", None)."""
    n = m.dimension
    F = m.field
    gens = m.generators()
    tgens = [transpose(g) for g in gens]
    for _ in range(attempts):
        a = _random_element(m, rng)
        for f in irreducible_factors(charpoly(a)):
            theta = _poly_at(f, a)
            ker = nullspace(theta, n, F)
            if not ker:
                continue
            sub = spin(gens, [ker[0]], F, n)
            if len(sub) < n:
                return "sub", sub
            dual = nullspace(transpose(theta), n, F)
            dsub = spin(tgens, [dual[0]], F, n)
            if len(dsub) < n:
                ann = nullspace(dsub.rows, n, F)
                sp = Subspace(F, n)
                for v in ann:
                    sp.add(v)
                return "sub", sp
            if len(ker) == len(f) - 1:
                return "irreducible", None
    return "unknown", None


def _cyclotomic_candidates(m: int, degree_bound: int):
    from .exactscalar import _euler_phi

    base = 1 if m <= 2 else m
    phi_m = _euler_phi(base)
    out = []
    for n in range(3, 200):
        if n % base or n % 4 == 2:
            continue
        rel = _euler_phi(n) // phi_m
        if 1 < rel <= degree_bound:
            out.append((rel, n))
    return [n for _, n in sorted(out)]


def _splitting_field(m: FDModule, rng: random.Random, degree_bound: int) -> Field:
    """A field over which the (irreducible) module m splits further."""
    F = m.field
    ends = hom_space(m, m)
    d = len(ends)
    gen_poly = None
    for _ in range(50):
        X = zeros(F, m.dimension)
        for e in ends:
            X = matadd(X, scale(_random_scalar(F, rng), e))
        facs = irreducible_factors(charpoly(X))
        if len(facs) == 1 and len(facs[0]) - 1 == d:
            gen_poly = facs[0]
            break
    if gen_poly is None:
        raise SplittingError("could not find a generator of the endomorphism field")
    if F.p:
        if d > degree_bound:
            raise SplittingError(f"extension of degree {d} exceeds the bound {degree_bound}")
        return finite_field(F.p, F.degree * d)
    for n in _cyclotomic_candidates(F.spec.cyclotomic, degree_bound):
        K = make_field(FieldSpec(0, cyclotomic=n))
        if roots([embed(c, K) for c in gen_poly]):
            return K
    raise SplittingError(f"no cyclotomic splitting field of relative degree <= {degree_bound}")


def _chop_over(module: FDModule, rng: random.Random, degree_bound: int) -> list:
    stack = [module]
    simple = []
    while stack:
        m = stack.pop()
        if m.dimension == 0:
            continue
        if m.dimension == 1:
            simple.append(m)
            continue
        kind, sub = _split(m, rng)
        if kind == "sub":
            S, Qt = _sub_and_quotient(m, sub)
            stack.extend([Qt, S])
        elif kind == "irreducible":
            if endomorphism_dimension(m) == 1:
                simple.append(m)
            else:
                K = _splitting_field(m, rng, degree_bound)
                raise _NeedsExtension(K, f"{m.field} -> {K} to split a module of dimension {m.dimension}")
        else:
            raise SplittingError(f"no splitting element found for a module of dimension {m.dimension}")
    return simple


def chop(module: FDModule, seed: int = 0, degree_bound: int = MAX_EXTENSION_DEGREE) -> ChopResult:
    """Composition factors of ``module``, extended to a splitting field if needed."""
    field = module.field
    extensions = []
    while True:
        rng = random.Random(seed)
        try:
            pieces = _chop_over(module.over(field), rng, degree_bound)
            break
        except _NeedsExtension as ext:
            field = ext.field
            extensions.append(ext.note)
    classes: list = []
    for p in pieces:
        for entry in classes:
            if isomorphic(entry[0], p):
                entry[1] += 1
                break
        else:
            classes.append([p, 1])
    classes.sort(key=lambda e: (e[0].dimension, [str(x) for x in _signature(e[0])[1]]))
    return ChopResult([(m, k) for m, k in classes], field, extensions)


def simples(algebra: FiniteHeckeAlgebra, seed: int = 0, degree_bound: int = MAX_EXTENSION_DEGREE) -> ChopResult:
    """Pairwise non-isomorphic simple modules, as the factors of the regular module."""
    return chop(regular_module(algebra), seed, degree_bound)


# ---------------------------------------------------------------------------
# parabolic subalgebras and induction


@dataclass
class Inclusion:
    """The subalgebra generated by T_s (s in K) and omega_k (k in ``omegas``)."""

    big: FiniteHeckeAlgebra
    K: tuple
    omegas: tuple = (0,)

    def __post_init__(self):
        self.K = tuple(sorted(set(self.K)))
        oms = sorted(set(self.omegas) | {0})
        B = self.big
        for k in oms:
            if {B.omega_perms[k][s] for s in self.K} != set(self.K):
                raise ValueError(f"omega{k} does not stabilize K = {self.K}")
            if any(B.omega_mul[k][j] not in oms for j in oms):
                raise ValueError("omega indices do not form a subgroup")
        self.omegas = tuple(oms)
        cm = B.group.coxeter_matrix.submatrix(self.K)
        grp = CoxeterGroup(cm)
        pos = {k: i for i, k in enumerate(self.omegas)}
        perms = tuple(tuple(self.K.index(B.omega_perms[k][s]) for s in self.K) for k in self.omegas)
        mul = tuple(tuple(pos[B.omega_mul[a][b]] for b in self.omegas) for a in self.omegas)
        self.sub = FiniteHeckeAlgebra(
            grp,
            B.field,
            tuple(B.Q[s] for s in self.K),
            perms,
            mul,
            tuple(B.labels[s] for s in self.K),
            tuple(B.omega_labels[k] for k in self.omegas),
            name=f"{B.name}|{','.join(B.labels[s] for s in self.K)}",
        )
        self.element_map = [B.group.from_word(self.K[s] for s in grp.word(u)) for u in range(grp.order)]

    @property
    def proper(self) -> bool:
        return len(self.K) < self.big.rank or len(self.omegas) < self.big.n_omega

    @property
    def index(self) -> int:
        return self.big.dimension // self.sub.dimension

    def over(self, field: Field) -> "Inclusion":
        return Inclusion(self.big.over(field), self.K, self.omegas)


def _omega_coset_reps(big: FiniteHeckeAlgebra, omegas: Sequence[int]) -> list[int]:
    reps, seen = [], set()
    for k in range(big.n_omega):
        if k in seen:
            continue
        reps.append(k)
        seen |= {big.omega_mul[k][j] for j in omegas}
    return reps


def induce(inc: Inclusion, v: FDModule) -> FDModule:
    """H ⊗_{H'} v, with free basis omega_k T_d (d minimal in its coset d W_K)."""
    B = inc.big
    F = v.field
    if F != B.field:
        B = B.over(F)
        inc = Inclusion(B, inc.K, inc.omegas)
    n = v.dimension
    basis = B.basis()
    pos = {b: i for i, b in enumerate(basis)}
    N = len(basis) * n
    idx = lambda b, i: pos[b] * n + i

    def tensor(h: dict, vec: Sequence) -> list:
        out = [F.zero] * N
        for b, c in h.items():
            for i, x in enumerate(vec):
                if not x.is_zero():
                    out[idx(b, i)] = out[idx(b, i)] + c * x
        return out

    # relations  h b (x) v - h (x) b v  for algebra generators b of the subalgebra
    relations = Subspace(F, N)
    unit = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    for b in basis:
        h = {b: F.one}
        for si, s in enumerate(inc.K):
            hb = B.right_T(s, h)
            for e in unit:
                r = tensor(hb, e)
                bv = matvec(v.T[si], e)
                relations.add([x - y for x, y in zip(r, tensor(h, bv))])
        for oi, k in enumerate(inc.omegas):
            if k == 0:
                continue
            hb = B.right_omega(k, h)
            for e in unit:
                ov = matvec(v.omega[oi], e)
                relations.add([x - y for x, y in zip(tensor(hb, e), tensor(h, ov))])
    # chosen basis of the quotient
    dreps = B.group.min_coset_reps(inc.K)
    chosen = []
    for k in _omega_coset_reps(B, inc.omegas):
        for d in dreps:
            h = B.left_omega(k, {(d, 0): F.one})
            for e in unit:
                chosen.append(tensor(h, e))
    m = len(chosen)
    if m + len(relations) != N:
        raise ArithmeticError("induced module has the wrong dimension")
    cols = [list(r) for r in relations.rows] + chosen
    P = inverse(transpose(cols))
    off = len(relations)

    def action(fn):
        mat = [[F.zero] * m for _ in range(m)]
        for j, vec in enumerate(chosen):
            image = [F.zero] * N
            for pos_b, b in enumerate(basis):
                blk = vec[pos_b * n:(pos_b + 1) * n]
                if all(x.is_zero() for x in blk):
                    continue
                for b2, c in fn({b: F.one}).items():
                    base = pos[b2] * n
                    for i, x in enumerate(blk):
                        if not x.is_zero():
                            image[base + i] = image[base + i] + c * x
            coords = matvec(P, image)
            for i in range(m):
                mat[i][j] = coords[off + i]
        return mat

    T = [action(lambda h, s=s: B.left_T(s, h)) for s in range(B.rank)]
    om = [action(lambda h, k=k: B.left_omega(k, h)) for k in range(B.n_omega)]
    return FDModule(B, T, om)


# ---------------------------------------------------------------------------
# Grothendieck groups


@dataclass
class GrothVector:
    """Integer coordinates on an ordered list of simple modules."""

    basis: list
    coords: list

    def __post_init__(self):
        if len(self.basis) != len(self.coords):
            raise ValueError("coordinate vector and basis differ in length")

    def __add__(self, other: "GrothVector") -> "GrothVector":
        if other.basis is not self.basis and len(other.basis) != len(self.basis):
            raise ValueError("different Grothendieck groups")
        return GrothVector(self.basis, [a + b for a, b in zip(self.coords, other.coords)])


def grothendieck_class(m: FDModule, basis: Sequence[FDModule], seed: int = 0) -> GrothVector:
    """Class of m on the given simple modules (all over the field of m)."""
    res = chop(m, seed)
    if res.field != m.field:
        raise SplittingError("module needs a larger field than its Grothendieck basis")
    coords = [0] * len(basis)
    for factor, mult in res.factors:
        j = next((i for i, s in enumerate(basis) if isomorphic(s, factor)), None)
        if j is None:
            raise ValueError("composition factor not among the given simples")
        coords[j] += mult
    return GrothVector(list(basis), coords)


def _subgroups(big: FiniteHeckeAlgebra, allowed: Sequence[int]) -> list[tuple]:
    def close(gens):
        sub = {0}
        frontier = [0]
        while frontier:
            a = frontier.pop()
            for g in gens:
                c = big.omega_mul[a][g]
                if c not in sub:
                    sub.add(c)
                    frontier.append(c)
        return tuple(sorted(sub))

    out = {close(())}
    for g in allowed:
        out.add(close((g,)))
        for h in allowed:
            out.add(close((g, h)))
    return sorted(out, key=lambda t: (len(t), t))


def proper_subalgebras(algebra: FiniteHeckeAlgebra) -> list[tuple[tuple, tuple]]:
    """Pairs (K, Omega') with Omega' stabilizing K, other than the whole algebra."""
    out = []
    r = algebra.rank
    for size in range(r + 1):
        for K in combinations(range(r), size):
            stab = [k for k in range(algebra.n_omega) if {algebra.omega_perms[k][s] for s in K} == set(K)]
            for oms in _subgroups(algebra, stab):
                if size == r and len(oms) == algebra.n_omega:
                    continue
                out.append((K, oms))
    return out


@dataclass
class EllipticRank:
    rank: int
    torsion: list
    n_simples: int
    field: Field
    extensions: list
    columns: list
    simple_dimensions: list

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "torsion": self.torsion,
            "simples": self.n_simples,
            "simple_dimensions": self.simple_dimensions,
            "field": self.field.spec.to_json(),
            "extensions": self.extensions,
            "induced_classes": self.columns,
        }


def elliptic_rank(algebra: FiniteHeckeAlgebra, seed: int = 0, degree_bound: int = MAX_EXTENSION_DEGREE) -> EllipticRank:
    """Free rank of R(H) modulo the classes induced from all proper subalgebras."""
    field = algebra.field
    extensions: list = []
    while True:
        top = simples(algebra.over(field), seed, degree_bound)
        extensions.extend(top.extensions)
        field = top.field
        A = algebra.over(field)
        cols = []
        restart = False
        for K, oms in proper_subalgebras(A):
            inc = Inclusion(A, K, oms)
            subs = simples(inc.sub, seed, degree_bound)
            if subs.field != field:
                extensions.extend(subs.extensions)
                field = subs.field
                restart = True
                break
            for v in subs.modules:
                cols.append(grothendieck_class(induce(inc, v), top.modules, seed).coords)
        if not restart:
            break
    n = len(top.modules)
    mat = [[c[i] for c in cols] for i in range(n)]
    free, torsion = cokernel(mat, n) if cols else (n, [])
    return EllipticRank(free, torsion, n, field, extensions, cols, [m.dimension for m in top.modules])


# ---------------------------------------------------------------------------
# trace pairing


@dataclass
class TracePairing:
    """Characters of the simple modules at minimal-length class representatives."""

    rows: list  # class labels
    cols: list  # simple module labels
    entries: list  # entries[i][j] = Tr(T_{w_min(O_i)}, V_j)
    field: Field
    classes: list = dc_field(default_factory=list, repr=False)
    modules: list = dc_field(default_factory=list, repr=False)

    @property
    def square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def determinant(self):
        if not self.square:
            return None
        if not self.rows:
            return self.field.one
        return det(self.entries)

    @property
    def invertible(self) -> bool:
        d = self.determinant()
        return d is not None and not d.is_zero()

    def well_defined(self) -> bool:
        """Every minimal element of a class gives the same trace."""
        for cls, row in zip(self.classes, self.entries):
            for w in cls.min_elements:
                if [trace(v.matrix_T(w)) for v in self.modules] != row:
                    return False
        return True

    def to_json(self) -> dict:
        d = self.determinant()
        return {
            "field": self.field.spec.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[x.to_json() for x in row] for row in self.entries],
            "square": self.square,
            "determinant": None if d is None else d.to_json(),
            "invertible": self.invertible,
        }


def trace_pairing_matrix(algebra: FiniteHeckeAlgebra, seed: int = 0) -> TracePairing:
    if algebra.n_omega > 1:
        raise ValueError("the trace pairing is implemented for algebras without Omega")
    res = simples(algebra, seed)
    g = algebra.group
    classes = conjugacy_classes(g)
    mods = res.modules
    rows = [algebra.format_basis(min(c.min_elements)) for c in classes]
    cols = [f"V{j}(dim {m.dimension})" for j, m in enumerate(mods)]
    entries = [[trace(v.matrix_T(min(c.min_elements))) for v in mods] for c in classes]
    return TracePairing(rows, cols, entries, res.field, classes, mods)


# ---------------------------------------------------------------------------
# rank tables

# preset -> (n of the cyclotomic row condition, characteristic of the special column).
# PGL3 shares its A2 summand with SL3, so both degenerate along Phi_3.
TABLE_LAYOUT = {"SL3": (3, 3), "PGL3": (3, 3), "SL2": (2, 2), "PGL2": (2, 2)}
GENERIC_Q = 25  # q(s) = 5


def _phi_value(n: int, x):
    from .exactscalar import cyclotomic_poly, eval_int_poly

    return eval_int_poly(cyclotomic_poly(n), x)


def _poincare_ok(algebras: Sequence[FiniteHeckeAlgebra]) -> bool:
    return all(not A.poincare_value().is_zero() for A in algebras)


def parameter_point(n: int, characteristic: int, vanishing: bool, G, Js, max_degree: int = MAX_EXTENSION_DEGREE):
    """(field, Q) for one cell, with Q = q(s)^2 shared by all generators."""
    def algebras(F, Q):
        return [sharp_algebra(G, J, Q, F) for J in Js]

    if characteristic == 0:
        if vanishing:
            F = make_field(FieldSpec(0, cyclotomic=n))
            return F, F.primitive_root_of_unity(n)
        F = QQ
        Q = F(GENERIC_Q)
        if _poincare_ok(algebras(F, Q)):
            return F, Q
        raise ValueError("generic point hits a root of a Poincare polynomial")
    for k in range(1, max_degree + 1):
        F = finite_field(characteristic, k)
        for x in F.elements():
            if x.is_zero():
                continue
            phi_zero = _phi_value(n, x).is_zero()
            if vanishing and phi_zero:
                return F, x
            if not vanishing and _poincare_ok(algebras(F, x)):
                return F, x
    raise ValueError(f"no parameter point found in characteristic {characteristic}")


@dataclass
class RankCell:
    row: str
    col: str
    field: FieldSpec
    Q: FieldElem
    summands: list  # (J, EllipticRank)
    total: int

    def to_json(self) -> dict:
        return {
            "row": self.row,
            "col": self.col,
            "field": self.field.to_json(),
            "field_name": str(self.field),
            "Q": self.Q.to_json(),
            "parameter": "Q = q(s)^2, equal for all s",
            "summands": [{"J": list(J), "labels": labels, **er.to_json()} for J, labels, er in self.summands],
            "total": self.total,
        }


@dataclass
class RankTable:
    name: str
    rows: list
    cols: list
    cells: list  # RankCell, row-major
    seed: int = 0

    @property
    def values(self) -> list[list[int]]:
        nc = len(self.cols)
        return [[c.total for c in self.cells[i * nc:(i + 1) * nc]] for i in range(len(self.rows))]

    def to_json(self) -> dict:
        return {
            "datum": self.name,
            "rows": self.rows,
            "cols": self.cols,
            "values": self.values,
            "seed": self.seed,
            "cells": [c.to_json() for c in self.cells],
        }

    def to_csv(self) -> str:
        lines = [",".join([self.name] + [f'"{c}"' for c in self.cols])]
        for r, vals in zip(self.rows, self.values):
            lines.append(",".join([f'"{r}"'] + [str(v) for v in vals]))
        return "\n".join(lines) + "\n"


def rank_table(G, n: int | None = None, p: int | None = None, seed: int = 0, name: str | None = None) -> RankTable:
    """Sum over I/~ of the elliptic ranks of the W_J^sharp algebras, per cell."""
    from .affine import build_affine

    if isinstance(G, str):
        name = name or G
        G = build_affine(G)
    name = name or G.datum.name or "datum"
    if n is None or p is None:
        dn, dp = TABLE_LAYOUT.get(name, (2, 2))
        n, p = n or dn, p or dp
    groups = G.maximal_I()
    Js = [grp[0] for grp in groups]
    rows = [f"Phi_{n}(q) != 0", f"Phi_{n}(q) = 0"]
    cols = [f"char != {p}", f"char = {p}"]
    cells = []
    for vanishing, row in zip((False, True), rows):
        for char, col in zip((0, p), cols):
            F, Q = parameter_point(n, char, vanishing, G, Js)
            summands = []
            total = 0
            for J in Js:
                er = elliptic_rank(sharp_algebra(G, J, Q, F), seed)
                labels = [G.simple_labels[j] for j in J]
                summands.append((J, labels, er))
                total += er.rank
            cells.append(RankCell(row, col, F.spec, Q, summands, total))
    return RankTable(name, rows, cols, cells, seed)
