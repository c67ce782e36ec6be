"""Iwahori-Hecke algebras in the basis {T_w}, with the quadratic relation
(T_s + 1)(T_s - q(s)^2) = 0, and reduction to the cocenter basis {T_O}.

Coefficients are either :class:`LaurentPoly` in the variables q(s)
(generic mode) or field elements obtained from an assignment of q(s)
(specialized mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .affine import AffineElement, ExtendedAffineWeylGroup
from .conjugacy import (
    AffineConjClass,
    ConjugacyTable,
    GroupView,
    Parametrizer,
    UnstableBall,
    gp_path,
    parametrize_class,
)
from .exactscalar import Field, FieldElem, LaurentPoly, laurent_specialize


class NonClosedClass(RuntimeError):
    """Reduction reached a class that is not certified closed in the ball."""


def _parameter_classes(view: GroupView) -> list[list[int]]:
    """Simple reflections up to conjugacy: odd edges of the Coxeter graph plus Omega."""
    g = view.group
    n = view.n_simple
    if view.affine:
        cm = g.affine_coxeter_matrix
        perms = [g.omega_permutation(om) for om in g.omega().elements]
    else:
        cm = g.coxeter_matrix
        perms = []
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    def union(i, j):
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)

    for i in range(n):
        for j in range(n):
            m = cm.m(i, j)
            if i != j and m % 2 == 1:
                union(i, j)
        for p in perms:
            union(i, p[i])
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


class HeckeAlgebra:
    """The Hecke algebra of a finite Coxeter group or an extended affine Weyl group.

    ``values`` maps variable names to field elements (the value of q(s), not
    q(s)^2); when omitted the algebra is generic over Laurent polynomials.
    """

    def __init__(
        self,
        group,
        values: Mapping[str, Any] | None = None,
        field: Field | None = None,
        variables: Sequence[str] | None = None,
        var_of_generator: Sequence[int] | None = None,
    ):
        self.view = view = group if isinstance(group, GroupView) else GroupView(group)
        self.group = view.group
        if variables is None:
            classes = _parameter_classes(view)
            if len(classes) == 1:
                variables = ["q"]
            else:
                variables = [f"q_{view.simple_labels[c[0]]}" for c in classes]
            var_of_generator = [0] * view.n_simple
            for k, c in enumerate(classes):
                for i in c:
                    var_of_generator[i] = k
        self.variables = tuple(variables)
        self.var_of_generator = tuple(var_of_generator)
        self.generic = values is None
        if self.generic:
            self.field = None
            self.zero = LaurentPoly.constant(self.variables, 0)
            self.one = LaurentPoly.constant(self.variables, 1)
            qs = [LaurentPoly.var(self.variables, v) for v in self.variables]
            qinv2 = [LaurentPoly.var(self.variables, v, -2) for v in self.variables]
            self.values = None
        else:
            missing = [v for v in self.variables if v not in values]
            if missing:
                raise KeyError(f"no value for parameters {missing}")
            if field is None:
                field = next((x.field for x in values.values() if isinstance(x, FieldElem)), None)
                if field is None:
                    from .exactscalar import QQ

                    field = QQ
            self.field = field
            self.values = {v: field(values[v]) for v in self.variables}
            self.zero, self.one = field.zero, field.one
            qs = [self.values[v] for v in self.variables]
            qinv2 = []
            for v, q in zip(self.variables, qs):
                qinv2.append(None if q.is_zero() else (q * q).inverse())
        self._Q = [qs[self.var_of_generator[i]] ** 2 for i in range(view.n_simple)]
        self._Qinv = [qinv2[self.var_of_generator[i]] for i in range(view.n_simple)]

    # -- scalars -----------------------------------------------------------------

    def scalar(self, c):
        if self.generic:
            if isinstance(c, LaurentPoly):
                return c
            return LaurentPoly.constant(self.variables, int(c))
        return self.field(c)

    def Q(self, i: int):
        """q(s_i)^2."""
        return self._Q[i]

    def Qinv(self, i: int):
        q = self._Qinv[i]
        if q is None:
            raise ZeroDivisionError(f"parameter of {self.view.simple_labels[i]} is not invertible")
        return q

    def specialize_scalar(self, c, target: "HeckeAlgebra"):
        if not self.generic:
            raise ValueError("only generic scalars can be specialized")
        return laurent_specialize(c, target.values, target.field)

    # -- elements ------------------------------------------------------------------

    def T(self, x) -> "HeckeElem":
        return HeckeElem(self, {x: self.one})

    def T_word(self, word: Sequence[int]) -> "HeckeElem":
        view = self.view
        if view.affine:
            x = self.group.from_word(word)
        else:
            x = self.group.from_word(word)
        return self.T(x)

    def zero_elem(self) -> "HeckeElem":
        return HeckeElem(self, {})

    def unit(self) -> "HeckeElem":
        return self.T(self.view.identity)

    def element(self, terms: Mapping) -> "HeckeElem":
        return HeckeElem(self, {x: self.scalar(c) for x, c in terms.items()})

    # -- multiplication -----------------------------------------------------------

    def _left_simple(self, i: int, terms: dict) -> dict:
        """T_{s_i} * sum c_w T_w."""
        view, out = self.view, {}
        g = self.group
        Q = self._Q[i]
        for w, c in terms.items():
            if view.affine:
                sw = g.mul(g.simple[i], w)
            else:
                sw = g.left[i][w]
            if view.length(sw) > view.length(w):
                _acc(out, sw, c)
            else:
                _acc(out, w, c * (Q - self.one))
                _acc(out, sw, c * Q)
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _right_simple(self, terms: dict, i: int) -> dict:
        view, out = self.view, {}
        g = self.group
        Q = self._Q[i]
        for w, c in terms.items():
            if view.affine:
                ws = g.mul(w, g.simple[i])
            else:
                ws = g.right[i][w]
            if view.length(ws) > view.length(w):
                _acc(out, ws, c)
            else:
                _acc(out, w, c * (Q - self.one))
                _acc(out, ws, c * Q)
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _decompose(self, x):
        """(word, omega) with T_x = T_{s_word[0]} ... T_{s_word[-1]} T_omega."""
        if self.view.affine:
            return self.group.reduced_word(x)
        return self.group.word(x), None

    def mul(self, a: "HeckeElem", b: "HeckeElem") -> "HeckeElem":
        out: dict = {}
        g = self.group
        for x, c in a.terms.items():
            word, om = self._decompose(x)
            terms = dict(b.terms)
            if om is not None and om != self.view.identity:
                terms = {g.mul(om, y): d for y, d in terms.items()}
            for i in reversed(word):
                terms = self._left_simple(i, terms)
            for y, d in terms.items():
                _acc(out, y, c * d)
        return HeckeElem(self, out)

    def t_inverse(self, x) -> "HeckeElem":
        """T_x^{-1}, using T_s^{-1} = q(s)^-2 T_s + (q(s)^-2 - 1) T_e along a reduced word."""
        word, om = self._decompose(x)
        g = self.group
        if om is not None:
            terms = {g.inv(om): self.one}
        else:
            terms = {self.view.identity: self.one}
        for i in reversed(word):
            qi = self.Qinv(i)
            ts = self._right_simple(terms, i)
            new: dict = {}
            for y, d in ts.items():
                _acc(new, y, d * qi)
            for y, d in terms.items():
                _acc(new, y, d * (qi - self.one))
            terms = {k: v for k, v in new.items() if not v.is_zero()}
        return HeckeElem(self, terms)

    # -- Bernstein-Lusztig elements -------------------------------------------------

    def theta(self, x: Sequence[int], check: bool = True) -> "HeckeElem":
        """theta_x = T_{t^{x1}} T_{t^{x2}}^{-1} for dominant x1, x2 with x = x1 - x2."""
        g = self.group
        if not self.view.affine:
            raise ValueError("theta elements need an extended affine Weyl group")
        x = tuple(int(v) for v in x)
        results = []
        for extra in ((0, 1) if check else (0,)):
            x1, x2 = _dominant_split(g, x, extra)
            h = self.T(g.translation(x1)) * self.t_inverse(g.translation(x2))
            results.append(h)
        if check and results[0] != results[1]:
            raise AssertionError(f"theta_{x} depends on the decomposition")
        return results[0]


def _dominant_split(g: ExtendedAffineWeylGroup, x: tuple, extra: int) -> tuple[tuple, tuple]:
    rho2 = [sum(a[p] for a in g.positive_roots) for p in range(g.n)]
    k = 0
    while not g.is_dominant([a + k * b for a, b in zip(x, rho2)]):
        k += 1
    if g.is_dominant(x) and extra == 0:
        k = 0
    else:
        k += extra
    x2 = tuple(k * b for b in rho2)
    x1 = tuple(a + b for a, b in zip(x, x2))
    return x1, x2


def _acc(d: dict, k, c):
    if k in d:
        d[k] = d[k] + c
    else:
        d[k] = c


class HeckeElem:
    """A finite sum of T_w with nonzero coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: HeckeAlgebra, terms: Mapping):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def __add__(self, other: "HeckeElem") -> "HeckeElem":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return HeckeElem(self.algebra, out)

    def __neg__(self):
        return HeckeElem(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElem):
            return self.algebra.mul(self, other)
        c = self.algebra.scalar(other)
        return HeckeElem(self.algebra, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = self.algebra.scalar(other)
        return HeckeElem(self.algebra, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, HeckeElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, x):
        return self.terms.get(x, self.algebra.zero)

    def support(self) -> list:
        return sorted(self.terms, key=self.algebra.view.key)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        view = self.algebra.view
        if not self.terms:
            return "0"
        parts = []
        for x in self.support():
            parts.append(f"({self.terms[x]})*T[{view.fmt(x)}]")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        view = self.algebra.view
        return [{"element": view.fmt(x), "coefficient": _coef_json(self.terms[x])} for x in self.support()]


def _coef_json(c):
    if isinstance(c, LaurentPoly):
        return {"variables": list(c.variables), "terms": c.to_json(), "text": str(c)}
    return c.to_json()


def hecke_mul(a: HeckeElem, b: HeckeElem) -> HeckeElem:
    return a.algebra.mul(a, b)


def t_inverse(algebra: HeckeAlgebra, x) -> HeckeElem:
    return algebra.t_inverse(x)


def theta(algebra: HeckeAlgebra, x) -> HeckeElem:
    return algebra.theta(x)


def specialize(h: HeckeElem, target: HeckeAlgebra) -> HeckeElem:
    src = h.algebra
    return HeckeElem(target, {x: src.specialize_scalar(c, target) for x, c in h.terms.items()})


# ---------------------------------------------------------------------------
# cocenter


class CocenterElem:
    """A finite sum of class symbols T_O (keys are class indices of a table)."""

    __slots__ = ("table", "algebra", "terms")

    def __init__(self, algebra: HeckeAlgebra, table: ConjugacyTable, terms: Mapping[int, Any]):
        self.algebra = algebra
        self.table = table
        self.terms = dict(sorted((k, v) for k, v in terms.items() if not v.is_zero()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return CocenterElem(self.algebra, self.table, out)

    def __sub__(self, other):
        return self + other.scale(self.algebra.scalar(-1))

    def scale(self, c):
        return CocenterElem(self.algebra, self.table, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, CocenterElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def coefficient(self, index: int):
        return self.terms.get(index, self.algebra.zero)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v})*{self.table.label(self.table[k])}" for k, v in self.terms.items())

    __repr__ = __str__

    def to_json(self):
        view = self.table.view
        out = []
        for k, v in self.terms.items():
            c = self.table[k]
            out.append(
                {
                    "class": self.table.label(c),
                    "class_invariant": _invariant_json(c.invariant),
                    "min_word": view.fmt(c.representative),
                    "coefficient": _coef_json(v),
                }
            )
        return out


def _invariant_json(inv):
    kott, nu = inv
    return {"kottwitz": list(kott), "newton": [str(v) for v in nu]}


class CocenterReducer:
    """Rewrites T_w into the {T_O} basis along non-increasing conjugation paths."""

    def __init__(self, algebra: HeckeAlgebra, table: ConjugacyTable):
        if table.view.group is not algebra.group:
            raise ValueError("table and algebra are built on different groups")
        self.algebra = algebra
        self.table = table
        self.view = table.view
        self._memo: dict = {}

    def _class(self, w) -> AffineConjClass:
        c = self.table.class_of(w)
        if not c.closed:
            raise NonClosedClass(f"class of {self.view.fmt(w)} is not closed; enlarge the ball")
        return c

    def step_options(self, w) -> list:
        """Admissible first moves: (label, kind, data) for non-increasing conjugations."""
        view = self.view
        lw = view.length(w)
        out = []
        for i in range(view.n_simple):
            y = view.conj_simple(i, w)
            ly = view.length(y)
            if ly <= lw and y != w:
                out.append((view.simple_labels[i], ("s", i), y, ly - lw))
        for k in range(len(view.omegas)):
            y = view.conj_omega(k, w)
            if y != w:
                out.append((view.omega_label(k), ("omega", k), y, 0))
        return out

    def rewrite(self, w, move) -> dict:
        """One cocenter rewrite of T_w; returns {element: coefficient}."""
        alg, view, g = self.algebra, self.view, self.view.group
        kind, idx = move
        if kind == "omega":
            return {view.conj_omega(idx, w): alg.one}
        y = view.conj_simple(idx, w)
        if view.length(y) == view.length(w):
            return {y: alg.one}
        if view.length(y) != view.length(w) - 2:
            raise ValueError("conjugation increases the length")
        sw = g.mul(g.simple[idx], w) if view.affine else g.left[idx][w]
        Q = alg.Q(idx)
        return {sw: Q - alg.one, y: Q}

    def reduce_basis(self, w) -> CocenterElem:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        c = self._class(w)
        alg = self.algebra
        if self.view.length(w) == c.min_length:
            res = CocenterElem(alg, self.table, {c.index: alg.one})
        else:
            path = gp_path(self.view, w, c)
            lab = path.steps[0][0]
            move = self._move_of_label(lab)
            res = self._reduce_terms(self.rewrite(w, move))
        self._memo[w] = res
        return res

    def _move_of_label(self, lab: str):
        view = self.view
        if lab in view.simple_labels:
            return ("s", view.simple_labels.index(lab))
        for k in range(len(view.omegas)):
            if view.omega_label(k) == lab:
                return ("omega", k)
        raise KeyError(lab)

    def _reduce_terms(self, terms: Mapping) -> CocenterElem:
        out = CocenterElem(self.algebra, self.table, {})
        for x, c in terms.items():
            out = out + self.reduce_basis(x).scale(c)
        return out

    def reduce(self, h: HeckeElem) -> CocenterElem:
        return self._reduce_terms(h.terms)

    def reduce_with_first_move(self, w, move) -> CocenterElem:
        return self._reduce_terms(self.rewrite(w, move))

    def confluence(self, w) -> tuple[bool, list]:
        """Compare the reduction of T_w over every admissible first move."""
        base = self.reduce_basis(w)
        results = []
        ok = True
        for lab, move, _, _ in self.step_options(w):
            r = self.reduce_with_first_move(w, move)
            results.append((lab, r))
            if r != base:
                ok = False
        return ok, results


def cocenter_reduce(h: HeckeElem, table: ConjugacyTable) -> CocenterElem:
    return CocenterReducer(h.algebra, table).reduce(h)


@dataclass(frozen=True)
class ClassSymbol:
    index: int
    label: str
    min_word: str
    invariant: tuple
    representative: Any
    newton_zero: bool


def cocenter_basis(algebra: HeckeAlgebra, L: int | None = None, table: ConjugacyTable | None = None) -> list:
    table = table or ConjugacyTable(algebra.group, L)
    view = table.view
    out = []
    for c in table.classes:
        if not c.closed:
            continue
        out.append(
            ClassSymbol(c.index, table.label(c), view.fmt(c.representative), c.invariant, c.representative, c.newton_zero)
        )
    return out


def _has_finite_order(g: ExtendedAffineWeylGroup, x: AffineElement, bound: int) -> bool:
    y = x
    for _ in range(bound):
        if y == g.identity:
            return True
        y = g.mul(y, x)
    return False


def newton_zero_subspace(algebra: HeckeAlgebra, L: int, step: int = 2) -> list:
    """Basis symbols T_O whose representative has finite order (Newton point zero).

    Finite order is tested by repeated multiplication, independently of the
    Newton point computation; stabilization from L to L+step is required.
    """
    g = algebra.group
    if not algebra.view.affine:
        raise ValueError("needs an extended affine Weyl group")
    if not g.omega_finite:
        raise ValueError("needs a semisimple root datum")
    bound = g.W0.order * max(1, len(g.omega())) + 1
    counts, first = [], None
    for radius in (L, L + step):
        syms = [s for s in cocenter_basis(algebra, radius) if _has_finite_order(g, s.representative, bound)]
        counts.append(len(syms))
        if first is None:
            first = syms
    if counts[0] != counts[1]:
        raise UnstableBall(f"Newton-zero basis size {counts[0]} at L={L} but {counts[1]} at L={L + step}")
    return first


# ---------------------------------------------------------------------------
# parabolic subalgebras and the matching T_O = i_J(T^J_C)


class ParabolicEmbedding:
    """The subalgebra H_J of an affine Hecke algebra spanned by theta_x T_v (v in W_J).

    An element T^J_y of the Hecke algebra of X ⋊ W_J is factored, using
    lengths in X ⋊ W_J only, as a product of T_s^{+-1} (s in J), one
    theta^J_lambda with lambda J-dominant, and further T_s^{+-1}.  The image in
    the big algebra replaces T^J_s by T_s and theta^J by theta, so the
    parameters of H_J are those inherited from the embedding.
    """

    def __init__(self, algebra: HeckeAlgebra, J: tuple, param: Parametrizer | None = None):
        self.algebra = algebra
        self.G = algebra.group
        self.J = J
        self.param = param or Parametrizer(self.G)
        self.sub = self.param.subgroup(J)

    def factor(self, y: AffineElement) -> tuple[list, tuple, list]:
        """(left, lambda, right): T^J_y = prod(left) theta^J_lambda prod(right).

        ``left`` and ``right`` are lists of (local simple index, +1 or -1).
        """
        sub = self.sub
        r = sub.datum.semisimple_rank
        left = []
        while True:
            i = next((i for i in range(r) if sub.root_pairing(y.lam, i) < 0), None)
            if i is None:
                break
            s = sub.simple[sub.n_affine + i]
            sy = sub.mul(s, y)
            # T_y = T_s^{-1} T_{sy} if l(sy) > l(y), else T_s T_{sy}
            left.append((i, -1 if sub.length(sy) > sub.length(y) else 1))
            y = sy
        right = []
        while y.w != 0:
            i = sub.W0.right_descents(y.w)[0]
            s = sub.simple[sub.n_affine + i]
            ys = sub.mul(y, s)
            right.append((i, -1 if sub.length(ys) > sub.length(y) else 1))
            y = ys
        return left, y.lam, right[::-1]

    def _T_pm(self, i: int, sign: int) -> HeckeElem:
        alg = self.algebra
        s = self.G.simple[self.G.n_affine + self.J[i]]
        return alg.T(s) if sign > 0 else alg.t_inverse(s)

    def embed(self, w_sub: AffineElement) -> HeckeElem:
        left, lam, right = self.factor(w_sub)
        alg = self.algebra
        h = alg.unit()
        for i, sign in left:
            h = h * self._T_pm(i, sign)
        h = h * alg.theta(lam, check=False)
        for i, sign in right:
            h = h * self._T_pm(i, sign)
        return h


def verify_bl_matching(
    algebra: HeckeAlgebra, c: AffineConjClass, table: ConjugacyTable, param: Parametrizer | None = None
) -> dict:
    """Reduce the image of T^J_{w_C} in the cocenter and compare with 1 * T_O."""
    G = algebra.group
    param = param or Parametrizer(G)
    J, key, x = parametrize_class(G, c, param)
    r = G.datum.semisimple_rank
    if len(J) == r:
        w_c = min(c.min_elements, key=table.view.key)
        image = algebra.T(w_c)
    elif not J:
        w_c = x
        image = algebra.theta(x.lam)
    else:
        emb = ParabolicEmbedding(algebra, J, param)
        sub_view = GroupView(emb.sub)
        mins = [param.to_sub(y, J) for y in key[1]]
        w_sub = min(mins, key=sub_view.key)
        w_c = param.from_sub(w_sub, J)
        image = emb.embed(w_sub)
    reduced = CocenterReducer(algebra, table).reduce(image)
    expected = CocenterElem(algebra, table, {c.index: algebra.one})
    diff = reduced - expected
    return {
        "class": table.label(c),
        "J": [G.simple_labels[G.n_affine + j] for j in J],
        "w_C": G.format(w_c),
        "reduced": reduced.to_json(),
        "equal": diff.terms == {},
        "discrepancy": diff.to_json(),
    }
