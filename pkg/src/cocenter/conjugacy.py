"""Conjugacy classes inside a length ball, minimal length elements and
non-increasing conjugation paths.

A single code path serves finite Coxeter groups (elements are integer
indices) and extended affine Weyl groups (elements are ``AffineElement``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Sequence

from .affine import AffineElement, BasedRootDatum, ExtendedAffineWeylGroup

SLACK = 2


class Counterexample(RuntimeError):
    """A search that a theorem says must succeed did not; carries a certificate."""

    def __init__(self, message: str, certificate: dict):
        super().__init__(message)
        self.certificate = certificate


class UnstableBall(RuntimeError):
    """A count that should stabilize in the ball size did not."""


class NotFound(LookupError):
    """Bounded search exhausted without a witness (inconclusive)."""


class GroupView:
    """Uniform access to a finite Coxeter group or an extended affine Weyl group."""

    def __init__(self, group):
        self.group = group
        self.affine = isinstance(group, ExtendedAffineWeylGroup)
        g = group
        if self.affine:
            self.n_simple = len(g.simple)
            self.simple_labels = list(g.simple_labels)
            self.omegas = [om for om in g.omega().elements if om != g.identity]
            self.identity = g.identity
        else:
            self.n_simple = g.rank
            self.simple_labels = list(g.coxeter_matrix.labels)
            self.omegas = []
            self.identity = 0
        self._key: dict = {}

    def length(self, x) -> int:
        return self.group.length(x)

    def elements(self, L: int | None) -> list:
        g = self.group
        if self.affine:
            return g.ball(L)
        return [w for w in range(g.order) if L is None or g.lengths[w] <= L]

    def max_length(self) -> int | None:
        return None if self.affine else max(self.group.lengths)

    def conj_simple(self, i: int, x):
        g = self.group
        if self.affine:
            s = g.simple[i]
            return g.mul(g.mul(s, x), s)
        return g.conj_simple(i, x)

    def conj_omega(self, k: int, x):
        return self.group.conj(self.omegas[k], x)

    def omega_label(self, k: int) -> str:
        return self.group.omega_label(self.omegas[k])

    def mul(self, x, y):
        return self.group.mul(x, y)

    def inv(self, x):
        g = self.group
        return g.inv(x) if self.affine else g.inverse(x)

    def conj(self, g, x):
        return self.group.conj(g, x)

    def word(self, x) -> tuple:
        if self.affine:
            return self.group.reduced_word(x)[0]
        return self.group.word(x)

    def key(self, x):
        k = self._key.get(x)
        if k is None:
            if self.affine:
                word, om = self.group.reduced_word(x)
                k = (len(word), word, self.group.kottwitz(om))
            else:
                k = (self.group.lengths[x], self.group.word(x))
            self._key[x] = k
        return k

    def fmt(self, x) -> str:
        if self.affine:
            return self.group.format(x)
        return self.group.format_word(x)

    def invariant(self, x) -> tuple:
        if self.affine:
            return self.group.invariant_f(x)
        return ((), ())

    def neighbours(self, x):
        """(label, conjugate) for all elementary conjugations of x."""
        for i in range(self.n_simple):
            yield self.simple_labels[i], self.conj_simple(i, x)
        for k in range(len(self.omegas)):
            yield self.omega_label(k), self.conj_omega(k, x)


@dataclass
class AffineConjClass:
    invariant: tuple
    members_in_ball: frozenset
    min_length: int
    min_elements: frozenset
    representative: Any
    closed: bool = True
    param_pair: tuple | None = None
    index: int = -1

    def __contains__(self, x):
        return x in self.members_in_ball

    def __len__(self):
        return len(self.members_in_ball)

    @property
    def newton(self) -> tuple:
        return self.invariant[1]

    @property
    def kottwitz(self) -> tuple:
        return self.invariant[0]

    @property
    def newton_zero(self) -> bool:
        return all(v == 0 for v in self.invariant[1])


@dataclass
class ConjPath:
    start: Any
    end: Any
    steps: list = field(default_factory=list)  # (conjugator label, element, delta)

    def __len__(self):
        return len(self.steps)

    def to_json(self, view: GroupView) -> dict:
        return {
            "start": view.fmt(self.start),
            "start_length": view.length(self.start),
            "end": view.fmt(self.end),
            "end_length": view.length(self.end),
            "steps": [
                {"conjugator": lab, "element": view.fmt(y), "length": view.length(y), "delta": d}
                for lab, y, d in self.steps
            ],
        }


def _components(view: GroupView, elems: list) -> list[list]:
    inside = {x: i for i, x in enumerate(elems)}
    parent = list(range(len(elems)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, x in enumerate(elems):
        for _, y in view.neighbours(x):
            j = inside.get(y)
            if j is not None:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list] = {}
    for i, x in enumerate(elems):
        groups.setdefault(find(i), []).append(x)
    return list(groups.values())


class ConjugacyTable:
    """Classes of a group meeting the ball of radius L, with element lookup."""

    def __init__(self, group, L: int | None = None, slack: int = SLACK):
        self.view = view = group if isinstance(group, GroupView) else GroupView(group)
        if not view.affine:
            L = view.max_length() if L is None else L
        elif L is None:
            raise ValueError("an affine group needs a ball radius L")
        self.L = L
        self.slack = slack
        self.classes = self._build()
        self._lookup = {x: c.index for c in self.classes for x in c.members_in_ball}

    def _partition(self, slack: int) -> list[frozenset]:
        v = self.view
        top = None if not v.affine and self.L >= v.max_length() else self.L + slack
        parts = []
        for comp in _components(v, v.elements(top)):
            members = frozenset(x for x in comp if v.length(x) <= self.L)
            if members:
                parts.append(members)
        return parts

    def _build(self) -> list[AffineConjClass]:
        v = self.view
        parts = self._partition(self.slack)
        if v.affine:
            wider = {}
            for members in self._partition(self.slack + 2):
                for x in members:
                    wider[x] = members
        out = []
        for members in parts:
            lmin = min(v.length(x) for x in members)
            mins = frozenset(x for x in members if v.length(x) == lmin)
            rep = min(mins, key=v.key)
            inv = v.invariant(rep)
            closed = True
            if v.affine:
                closed = wider[rep] == members
            out.append(AffineConjClass(inv, members, lmin, mins, rep, closed))
        out.sort(key=lambda c: (c.min_length, v.key(c.representative)))
        for i, c in enumerate(out):
            c.index = i
        return out

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    def class_index(self, x) -> int:
        try:
            return self._lookup[x]
        except KeyError:
            raise KeyError(f"{self.view.fmt(x)} lies outside the ball of radius {self.L}") from None

    def class_of(self, x) -> AffineConjClass:
        return self.classes[self.class_index(x)]

    def check_invariants(self) -> list:
        """Classes on which invariant_f is not constant (should be empty)."""
        bad = []
        for c in self.classes:
            vals = {self.view.invariant(x) for x in c.members_in_ball}
            if len(vals) != 1:
                bad.append(c.index)
        return bad

    def closed_classes(self) -> list[AffineConjClass]:
        return [c for c in self.classes if c.closed]

    def fiber_counts(self) -> dict:
        """Number of computed classes per value of invariant_f."""
        counts: dict = {}
        for c in self.classes:
            counts[c.invariant] = counts.get(c.invariant, 0) + 1
        return counts

    def label(self, c: AffineConjClass) -> str:
        return f"O{c.index}[{self.view.fmt(c.representative)}]"


def conjugacy_table(group, L: int | None = None, slack: int = SLACK) -> ConjugacyTable:
    return ConjugacyTable(group, L, slack)


def classes_in_ball(group, L: int | None = None) -> list[AffineConjClass]:
    return ConjugacyTable(group, L).classes


def gp_path(view: GroupView | Any, w, cls: AffineConjClass) -> ConjPath:
    """Breadth-first search for a length non-increasing conjugation path from
    w to an element of minimal length in its class."""
    view = view if isinstance(view, GroupView) else GroupView(view)
    target = cls.min_length
    if view.length(w) == target:
        return ConjPath(w, w, [])
    parent = {w: None}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        lx = view.length(x)
        for lab, y in view.neighbours(x):
            if y in parent:
                continue
            ly = view.length(y)
            if ly > lx:
                continue
            parent[y] = (x, lab, ly - lx)
            if ly == target:
                steps = []
                z = y
                while parent[z] is not None:
                    px, plab, d = parent[z]
                    steps.append((plab, z, d))
                    z = px
                steps.reverse()
                return ConjPath(w, y, steps)
            queue.append(y)
    cert = {
        "kind": "COUNTEREXAMPLE",
        "start": view.fmt(w),
        "start_length": view.length(w),
        "class_min_length": target,
        "reachable": sorted((view.fmt(x) for x in parent), key=lambda s: (len(s), s)),
    }
    raise Counterexample(f"no non-increasing path from {view.fmt(w)}", cert)


def verify_gp(table: ConjugacyTable, max_length: int | None = None, closed_only: bool = True) -> dict:
    """Run gp_path from every element of the ball; return a report."""
    view = table.view
    failures, checked, steps_hist = [], 0, {}
    for c in table.classes:
        if closed_only and not c.closed:
            continue
        for x in sorted(c.members_in_ball, key=view.key):
            if max_length is not None and view.length(x) > max_length:
                continue
            checked += 1
            try:
                path = gp_path(view, x, c)
            except Counterexample as exc:
                failures.append(exc.certificate)
                continue
            if any(d not in (0, -2) for _, _, d in path.steps) or view.length(path.end) != c.min_length:
                failures.append({"kind": "BAD_PATH", "path": path.to_json(view)})
            steps_hist[len(path)] = steps_hist.get(len(path), 0) + 1
    return {"checked": checked, "failures": failures, "path_lengths": dict(sorted(steps_hist.items()))}


def strong_conjugacy_witness(view, w, w2, bound: int = 6) -> list:
    """Chain of length-additive conjugations from w to w2.

    Each step is ``(x, y)`` with ``y = x w_i x^-1``, ``l(y) = l(w_i)`` and
    either ``l(x w_i) = l(x) + l(w_i)`` or ``l(w_i x^-1) = l(x) + l(w_i)``.
    Raises :class:`NotFound` when the bounded search is exhausted.
    """
    view = view if isinstance(view, GroupView) else GroupView(view)
    if view.length(w) != view.length(w2):
        raise ValueError("elements have different lengths")
    if w == w2:
        return []
    conjugators = [x for x in view.elements(bound) if x != view.identity]
    inverses = {x: view.inv(x) for x in conjugators}
    lw = view.length(w)
    parent = {w: None}
    queue = deque([w])
    while queue:
        a = queue.popleft()
        for x in conjugators:
            xi = inverses[x]
            b = view.mul(view.mul(x, a), xi)
            if b in parent or view.length(b) != lw:
                continue
            lx = view.length(x)
            if view.length(view.mul(x, a)) != lx + lw and view.length(view.mul(a, xi)) != lx + lw:
                continue
            parent[b] = (a, x)
            if b == w2:
                chain = []
                z = b
                while parent[z] is not None:
                    pa, px = parent[z]
                    chain.append((px, z))
                    z = pa
                return chain[::-1]
            queue.append(b)
    raise NotFound(f"no length-additive chain from {view.fmt(w)} to {view.fmt(w2)} with bound {bound}")


def newton_zero_classes(group, L: int, step: int = 2) -> list[AffineConjClass]:
    """Closed classes with dominant Newton point 0; checks stabilization from L to L+step."""
    counts = []
    result = None
    for radius in (L, L + step):
        table = ConjugacyTable(group, radius)
        found = [c for c in table.classes if c.closed and c.newton_zero]
        counts.append(len(found))
        if result is None:
            result = found
    if counts[0] != counts[1]:
        raise UnstableBall(f"Newton-zero class count {counts[0]} at L={L} but {counts[1]} at L={L + step}")
    return result


def fixed_free_on_roots(G: ExtendedAffineWeylGroup, w: int, J: Sequence[int]) -> bool:
    """Whether w in W_J has no nonzero fixed vector on the span of the roots in J."""
    if not J:
        return True
    from .exactscalar import QQ
    from .linalg import as_matrix, det

    m = G.W0.matrix(w)
    rows = [[int(a == b) - m[a][b] for b in J] for a in J]
    return not det(as_matrix(QQ, rows)).is_zero()


class Parametrizer:
    """Pairs (J, C) attached to classes of W~: J a set of finite simple roots and
    C an elliptic class of X ⋊ W_J whose Newton points are dominant."""

    def __init__(self, G: ExtendedAffineWeylGroup):
        self.G = G
        self._sub: dict = {}
        self._keys: dict = {}

    def subgroup(self, J: tuple) -> ExtendedAffineWeylGroup:
        sub = self._sub.get(J)
        if sub is None:
            d = self.G.datum
            datum = BasedRootDatum(
                d.rank,
                tuple(d.simple_roots[j] for j in J),
                tuple(d.simple_coroots[j] for j in J),
                f"{d.name}_J{''.join(str(j + 1) for j in J)}",
            )
            sub = self._sub[J] = ExtendedAffineWeylGroup(datum)
        return sub

    def in_parabolic(self, x: AffineElement, J: tuple) -> bool:
        return set(self.G.W0.word(x.w)) <= set(J)

    def to_sub(self, x: AffineElement, J: tuple) -> AffineElement:
        sub = self.subgroup(J)
        return AffineElement(x.lam, sub._xindex[self.G.xmats[x.w]])

    def from_sub(self, y: AffineElement, J: tuple) -> AffineElement:
        sub = self.subgroup(J)
        return AffineElement(y.lam, self.G._xindex[sub.xmats[y.w]])

    def class_key(self, J: tuple, x: AffineElement) -> tuple:
        """Canonical label of the X ⋊ W_J conjugacy class of x."""
        if not J:
            return ((), x.lam)
        cached = self._keys.get((J, x))
        if cached is not None:
            return cached
        view = GroupView(self.subgroup(J))
        y = self.to_sub(x, J)
        # descend, then collect the minimal elements reachable with slack
        while True:
            for _, z in view.neighbours(y):
                if view.length(z) < view.length(y):
                    y = z
                    break
            else:
                break
        top = view.length(y) + SLACK
        seen = {y}
        stack = [y]
        while stack:
            a = stack.pop()
            for _, b in view.neighbours(a):
                if b not in seen and view.length(b) <= top:
                    seen.add(b)
                    stack.append(b)
        lmin = min(view.length(b) for b in seen)
        mins = frozenset(self.from_sub(b, J) for b in seen if view.length(b) == lmin)
        key = (J, mins)
        self._keys[(J, x)] = key
        return key

    def is_elliptic_in(self, x: AffineElement, J: tuple) -> bool:
        return self.in_parabolic(x, J) and fixed_free_on_roots(self.G, x.w, J)

    def admissible(self, x: AffineElement, J: tuple) -> bool:
        G = self.G
        nu = G.newton_point(x)
        return self.is_elliptic_in(x, J) and G.is_dominant(nu)

    def candidate_sets(self, nu_bar) -> list[tuple]:
        r = self.G.datum.semisimple_rank
        zero = [i for i in range(r) if self.G.root_pairing(nu_bar, i) == 0]
        out = [()]
        for i in zero:
            out = out + [J + (i,) for J in out]
        return sorted((tuple(sorted(J)) for J in out), key=lambda J: (len(J), J))

    def parametrize(self, c: AffineConjClass) -> tuple:
        """(J, key of C, representative) for a closed class."""
        G = self.G
        nu_bar = c.newton
        members = sorted(c.members_in_ball, key=lambda x: (G.length(x), x))
        for J in self.candidate_sets(nu_bar):
            for x in members:
                if self.is_elliptic_in(x, J) and G.newton_point(x) == nu_bar:
                    return (J, self.class_key(J, x), x)
        raise Counterexample(
            "no elliptic parabolic pair found",
            {"kind": "PARAMETRIZATION", "class": G.format(c.representative), "newton": [str(v) for v in nu_bar]},
        )

    def equivalent(self, p1: tuple, p2: tuple) -> bool:
        """Simultaneous conjugacy of pairs: some u in W0 maps R_J onto R_J' and C into C'."""
        (J1, _, x1), (J2, key2, _) = p1, p2
        if len(J1) != len(J2):
            return False
        G = self.G
        roots1 = {G.positive_roots[p] for p in range(len(G.positive_roots)) if self._root_in(p, J1)}
        roots2 = {G.positive_roots[p] for p in range(len(G.positive_roots)) if self._root_in(p, J2)}
        full2 = roots2 | {tuple(-a for a in r) for r in roots2}
        for u in range(G.W0.order):
            if any(G.act(u, r) not in full2 for r in roots1):
                continue
            y = G.conj(G.finite(u), x1)
            if self.class_key(J2, y) == key2:
                return True
        return False

    def _root_in(self, p: int, J: tuple) -> bool:
        c = self.G.root_coords[p]
        return all(c[k] == 0 for k in range(len(c)) if k not in J)


def parametrize_class(G: ExtendedAffineWeylGroup, c: AffineConjClass, param: Parametrizer | None = None):
    param = param or Parametrizer(G)
    if not c.closed:
        raise ValueError("class is not closed in the ball")
    pair = param.parametrize(c)
    c.param_pair = pair
    return pair


def is_elliptic_affine(G: ExtendedAffineWeylGroup, c: AffineConjClass, param: Parametrizer | None = None) -> bool:
    J = c.param_pair[0] if c.param_pair else parametrize_class(G, c, param)[0]
    return len(J) == G.datum.semisimple_rank


def verify_param_bijection(G: ExtendedAffineWeylGroup, L: int) -> dict:
    """Injectivity and surjectivity of class -> (J, C) on closed classes of ball(L)."""
    table = ConjugacyTable(G, L)
    param = Parametrizer(G)
    closed = table.closed_classes()
    pairs, failures = [], []
    for c in closed:
        try:
            pairs.append((c, parametrize_class(G, c, param)))
        except Counterexample as exc:
            failures.append(exc.certificate)
    collisions = []
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if param.equivalent(pairs[i][1], pairs[j][1]):
                collisions.append((table.label(pairs[i][0]), table.label(pairs[j][0])))
    # admissible pairs seen in the ball: every one must be hit
    missed = []
    r = G.datum.semisimple_rank
    subsets = [()]
    for i in range(r):
        subsets = subsets + [J + (i,) for J in subsets]
    closed_members = {x: c for c in closed for x in c.members_in_ball}
    for J in sorted({tuple(sorted(J)) for J in subsets}, key=lambda J: (len(J), J)):
        for x in sorted(closed_members, key=lambda x: (G.length(x), x)):
            if not param.admissible(x, J):
                continue
            c = closed_members[x]
            p = (J, param.class_key(J, x), x)
            image = dict((id(cc), pp) for cc, pp in pairs).get(id(c))
            if image is None or not param.equivalent(p, image):
                missed.append({"J": list(J), "element": G.format(x)})
    return {
        "classes": len(closed),
        "pairs": [
            {"class": table.label(c), "J": [G.simple_labels[G.n_affine + j] for j in p[0]],
             "C_rep": G.format(p[2])}
            for c, p in pairs
        ],
        "collisions": collisions,
        "missed": missed,
        "failures": failures,
        "ok": not (collisions or missed or failures),
    }
