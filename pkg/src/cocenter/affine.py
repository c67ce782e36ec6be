"""Based root data and extended affine Weyl groups ``X ⋊ W0``.

An element ``t^lam w`` is stored as :class:`AffineElement` ``(lam, w)`` with
``lam`` an integer tuple in the coordinates of X and ``w`` an index into the
enumerated finite Weyl group.  It acts on ``X_R`` by ``v -> lam + w(v)``; the
fundamental alcove is ``0 < <v, a^vee> < 1`` for positive roots ``a``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .coxeter import INFINITY, CoxeterGroup, CoxeterMatrix
from .linalg import smith_normal_form


def _cartan_type_a(n):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def _simply_connected(cartan):
    """X = root lattice: simple roots are the standard basis."""
    n = len(cartan)
    roots = [[int(i == j) for i in range(n)] for j in range(n)]
    coroots = [list(cartan[i]) for i in range(n)]
    return roots, coroots


def _adjoint(cartan):
    """X = weight lattice: coroots are the standard dual basis."""
    n = len(cartan)
    roots = [[cartan[i][j] for i in range(n)] for j in range(n)]
    coroots = [[int(i == j) for i in range(n)] for j in range(n)]
    return roots, coroots


def _gl(n):
    roots = [[int(k == i) - int(k == i + 1) for k in range(n)] for i in range(n - 1)]
    return roots, [r[:] for r in roots]


def _preset_data(name):
    if name in ("SL2", "SL3"):
        return _simply_connected(_cartan_type_a(int(name[2]) - 1))
    if name in ("PGL2", "PGL3"):
        return _adjoint(_cartan_type_a(int(name[3]) - 1))
    if name in ("GL2", "GL3"):
        return _gl(int(name[2]))
    if name == "Sp4":
        # X = Z^2, roots e1 - e2 and 2 e2 (type C2)
        return [[1, -1], [0, 2]], [[1, -1], [0, 1]]
    raise ValueError(f"unknown root datum preset {name!r}")


ROOT_DATUM_PRESETS = ("SL2", "PGL2", "SL3", "PGL3", "GL2", "GL3", "Sp4")


@dataclass(frozen=True)
class BasedRootDatum:
    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        roots = tuple(tuple(int(x) for x in r) for r in self.simple_roots)
        coroots = tuple(tuple(int(x) for x in r) for r in self.simple_coroots)
        object.__setattr__(self, "simple_roots", roots)
        object.__setattr__(self, "simple_coroots", coroots)
        if len(roots) != len(coroots):
            raise ValueError("need one coroot per simple root")
        for v in roots + coroots:
            if len(v) != self.rank:
                raise ValueError("root and coroot vectors must have length rank")
        for i in range(len(roots)):
            if self.pair(roots[i], coroots[i]) != 2:
                raise ValueError(f"<alpha_{i + 1}, alpha_{i + 1}^vee> must be 2")
        a = self.cartan
        for i in range(len(a)):
            for j in range(len(a)):
                if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                    raise ValueError("pairings do not form a Cartan matrix")
                if i != j and a[i][j] * a[j][i] not in (0, 1, 2, 3):
                    raise ValueError("only finite crystallographic types are supported")

    @staticmethod
    def pair(lam, mu) -> int:
        return sum(x * y for x, y in zip(lam, mu))

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        """A[i][j] = <alpha_j, alpha_i^vee>."""
        r = self.semisimple_rank
        return tuple(
            tuple(self.pair(self.simple_roots[j], self.simple_coroots[i]) for j in range(r)) for i in range(r)
        )

    @classmethod
    def preset(cls, name: str) -> "BasedRootDatum":
        roots, coroots = _preset_data(name)
        rank = len(roots[0]) if roots else 0
        return cls(rank, tuple(map(tuple, roots)), tuple(map(tuple, coroots)), name)

    @classmethod
    def from_json(cls, data) -> "BasedRootDatum":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("preset"):
            return cls.preset(data["preset"])
        return cls(
            int(data["rank"]),
            tuple(map(tuple, data["simple_roots"])),
            tuple(map(tuple, data["simple_coroots"])),
            data.get("name", ""),
        )

    @classmethod
    def from_file(cls, path) -> "BasedRootDatum":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self):
        return {
            "rank": self.rank,
            "simple_roots": [list(r) for r in self.simple_roots],
            "simple_coroots": [list(r) for r in self.simple_coroots],
            "name": self.name,
        }


class AffineElement(NamedTuple):
    """``t^lam w``: translation part in X and index of the finite part in W0."""

    lam: tuple
    w: int


@dataclass(frozen=True)
class OmegaGroup:
    """Length-zero elements, one per Kottwitz coset (identity first)."""

    elements: tuple
    labels: tuple
    finite: bool
    moduli: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def label_of(self, x) -> tuple:
        return self.labels[self.elements.index(x)]


@dataclass
class Parahoric:
    """The subgroup W_J of W_a generated by J ⊂ S~."""

    J: tuple
    finite: bool
    group: CoxeterGroup | None = None
    elements: list | None = None  # index in ``group`` -> AffineElement

    def __len__(self):
        if not self.finite:
            raise ValueError("infinite parahoric")
        return len(self.elements)


@dataclass
class SharpGroup:
    """W_J ⋊ Omega_J with Omega_J acting on J by diagram automorphisms."""

    parahoric: Parahoric
    omega: tuple  # AffineElements, identity first
    perms: tuple  # perms[k][i] = local index of omega_k s_{J[i]} omega_k^-1
    omega_mul: tuple  # omega_mul[a][b] = index of omega_a omega_b

    @property
    def J(self):
        return self.parahoric.J

    @property
    def order(self) -> int:
        return len(self.parahoric) * len(self.omega)

    def elements(self) -> list:
        return [(w, k) for k in range(len(self.omega)) for w in range(len(self.parahoric))]


def _mat_vec(m, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def _int_mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _int_inverse(m):
    """Inverse of a unimodular integer matrix."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = [[x for x in row[n:]] for row in aug]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


class ExtendedAffineWeylGroup:
    """W~ = X ⋊ W0 = W_a ⋊ Omega for a based root datum.

    ``omega_radius`` bounds the free Kottwitz coordinates used when Omega is
    infinite (non-semisimple data such as GL_n).
    """

    def __init__(self, datum: BasedRootDatum, omega_radius: int = 1):
        if datum.semisimple_rank == 0:
            raise ValueError("degenerate root datum: R is empty")
        self.datum = d = datum
        self.n = n = d.rank
        r = d.semisimple_rank
        self.W0 = W0 = CoxeterGroup(CoxeterMatrix.from_cartan(d.cartan), cartan=d.cartan)
        gens = []
        for i in range(r):
            a, c = d.simple_roots[i], d.simple_coroots[i]
            gens.append(tuple(tuple(int(p == q) - a[p] * c[q] for q in range(n)) for p in range(n)))
        ident = tuple(tuple(int(p == q) for q in range(n)) for p in range(n))
        xmats = []
        for w in range(W0.order):
            m = ident
            for s in W0.word(w):
                m = _int_mat_mul(m, gens[s])
            xmats.append(m)
        self.xmats = xmats
        self._xindex = {m: w for w, m in enumerate(xmats)}
        self._inv = [W0.inverse(w) for w in range(W0.order)]
        self._build_roots()
        self._build_simple()
        self._build_kottwitz()
        self.omega_radius = omega_radius

    # -- roots ----------------------------------------------------------------

    def act(self, w: int, lam) -> tuple:
        return _mat_vec(self.xmats[w], lam)

    def coact(self, w: int, mu) -> tuple:
        """Action of w on X^vee (contragredient)."""
        m = self.xmats[self._inv[w]]
        return tuple(sum(m[p][q] * mu[p] for p in range(self.n)) for q in range(self.n))

    def _build_roots(self):
        d, W0 = self.datum, self.W0
        r = d.semisimple_rank
        found = {}
        for w in range(W0.order):
            mat = W0.matrix(w)
            for i in range(r):
                c = tuple(mat[k][i] for k in range(r))
                if all(x >= 0 for x in c) and c not in found:
                    root = tuple(sum(c[k] * d.simple_roots[k][p] for k in range(r)) for p in range(self.n))
                    found[c] = (root, self.coact(w, d.simple_coroots[i]))
        order = sorted(found, key=lambda c: (sum(c), tuple(-x for x in c)))
        self.root_coords = order
        self.positive_roots = [found[c][0] for c in order]
        self.positive_coroots = [found[c][1] for c in order]
        pos = {c: p for p, c in enumerate(order)}
        neg = []
        for w in range(W0.order):
            winv = W0.matrix(self._inv[w])
            bad = set()
            for c, p in pos.items():
                img = tuple(sum(winv[a][b] * c[b] for b in range(r)) for a in range(r))
                if img not in pos:
                    bad.add(p)
            neg.append(frozenset(bad))
        self._neg = neg  # roots a > 0 with w^-1 a < 0

    def _build_simple(self):
        d, W0 = self.datum, self.W0
        r = d.semisimple_rank
        comps = W0.coxeter_matrix.components()
        two_rho = [sum(a[p] for a in self.positive_roots) for p in range(self.n)]
        affine, labels = [], []
        self.components = []
        for ci, comp in enumerate(comps):
            cand = [
                p
                for p, c in enumerate(self.root_coords)
                if all(c[k] == 0 for k in range(r) if k not in comp)
            ]
            best = max(cand, key=lambda p: (d.pair(two_rho, self.positive_coroots[p]), -p))
            theta, theta_v = self.positive_roots[best], self.positive_coroots[best]
            refl = tuple(
                tuple(int(a == b) - theta[a] * theta_v[b] for b in range(self.n)) for a in range(self.n)
            )
            affine.append(AffineElement(theta, self._xindex[refl]))
            labels.append("s0" if len(comps) == 1 else f"s0_{ci + 1}")
        zero = tuple([0] * self.n)
        finite = [AffineElement(zero, W0.simple(i)) for i in range(r)]
        self.simple = affine + finite
        self.simple_labels = labels + [f"s{i + 1}" for i in range(r)]
        self.n_affine = len(affine)
        self.components = [
            sorted([ci] + [self.n_affine + k for k in comp]) for ci, comp in enumerate(comps)
        ]
        self._simple_index = {s: i for i, s in enumerate(self.simple)}

    def _build_kottwitz(self):
        d = self.datum
        r = d.semisimple_rank
        a = [[d.simple_roots[i][p] for i in range(r)] for p in range(self.n)]
        inv, u, _ = smith_normal_form(a)
        diag = inv + [0] * (self.n - len(inv))
        self._snf_u = u
        self._snf_uinv = _int_inverse(u)
        self._kpos = [k for k in range(self.n) if diag[k] != 1]
        self.kottwitz_moduli = tuple(diag[k] for k in self._kpos)

    # -- group law --------------------------------------------------------------

    @property
    def identity(self) -> AffineElement:
        return AffineElement(tuple([0] * self.n), 0)

    def translation(self, lam) -> AffineElement:
        return AffineElement(tuple(int(x) for x in lam), 0)

    def finite(self, w: int) -> AffineElement:
        return AffineElement(tuple([0] * self.n), w)

    def mul(self, x: AffineElement, y: AffineElement) -> AffineElement:
        img = self.act(x.w, y.lam)
        return AffineElement(tuple(a + b for a, b in zip(x.lam, img)), self.W0.mul(x.w, y.w))

    def inv(self, x: AffineElement) -> AffineElement:
        wi = self._inv[x.w]
        return AffineElement(tuple(-a for a in self.act(wi, x.lam)), wi)

    def conj(self, g: AffineElement, x: AffineElement) -> AffineElement:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, x: AffineElement, k: int) -> AffineElement:
        if k < 0:
            return self.power(self.inv(x), -k)
        out, base = self.identity, x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def prod(self, xs: Iterable[AffineElement]) -> AffineElement:
        out = self.identity
        for x in xs:
            out = self.mul(out, x)
        return out

    # -- length -----------------------------------------------------------------

    def length(self, x: AffineElement) -> int:
        neg = self._neg[x.w]
        total = 0
        for p, cv in enumerate(self.positive_coroots):
            m = sum(a * b for a, b in zip(x.lam, cv))
            total += abs(m - 1) if p in neg else abs(m)
        return total

    affine_length = length

    def simple_reflections(self) -> list[AffineElement]:
        return list(self.simple)

    def simple_index(self, x: AffineElement) -> int | None:
        return self._simple_index.get(x)

    def left_descent(self, x: AffineElement) -> int | None:
        lx = self.length(x)
        for i, s in enumerate(self.simple):
            if self.length(self.mul(s, x)) < lx:
                return i
        return None

    def reduced_word(self, x: AffineElement) -> tuple[tuple[int, ...], AffineElement]:
        """(word, omega) with x = s_word[0] ... s_word[-1] omega and len(word) = l(x)."""
        word = []
        while True:
            i = self.left_descent(x)
            if i is None:
                return tuple(word), x
            word.append(i)
            x = self.mul(self.simple[i], x)

    def from_word(self, word: Sequence[int], omega: AffineElement | None = None) -> AffineElement:
        x = self.prod(self.simple[i] for i in word)
        return self.mul(x, omega) if omega is not None else x

    def in_affine_weyl(self, x: AffineElement) -> bool:
        return not any(self.kottwitz(x))

    # -- Kottwitz map and Omega ---------------------------------------------------

    def kottwitz_lattice(self, lam) -> tuple:
        ul = _mat_vec(self._snf_u, lam)
        out = []
        for k, m in zip(self._kpos, self.kottwitz_moduli):
            out.append(ul[k] % m if m else ul[k])
        return tuple(out)

    def kottwitz(self, x: AffineElement) -> tuple:
        """Coset of x in W~/W_a = X/ZR, as a label in prod Z/d_k (d_k = 0 meaning Z)."""
        return self.kottwitz_lattice(x.lam)

    def kottwitz_add(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, self.kottwitz_moduli))

    def omega_for_coset(self, label: Sequence[int]) -> AffineElement:
        e = [0] * self.n
        for k, v in zip(self._kpos, label):
            e[k] = v
        x = self.translation(_mat_vec(self._snf_uinv, e))
        while True:
            i = self.left_descent(x)
            if i is None:
                return x
            x = self.mul(self.simple[i], x)

    @property
    def omega_finite(self) -> bool:
        return all(m for m in self.kottwitz_moduli)

    def omega_labels(self, radius: int | None = None) -> list[tuple]:
        radius = self.omega_radius if radius is None else radius
        ranges = [range(m) if m else range(-radius, radius + 1) for m in self.kottwitz_moduli]
        labels = [()]
        for rg in ranges:
            labels = [lab + (v,) for lab in labels for v in rg]
        labels.sort(key=lambda lab: (sum(abs(v) for v in lab), lab))
        return labels

    @cached_property
    def _omega(self) -> OmegaGroup:
        labels = self.omega_labels()
        elems = tuple(self.omega_for_coset(lab) for lab in labels)
        return OmegaGroup(elems, tuple(labels), self.omega_finite, self.kottwitz_moduli)

    def omega(self, cap: int | None = None) -> OmegaGroup:
        om = self._omega
        if cap is not None and len(om) > cap:
            raise ValueError(f"Omega has more than {cap} elements")
        return om

    omega_elements = omega

    def omega_permutation(self, om: AffineElement) -> tuple[int, ...]:
        """The permutation of S~ induced by conjugation with a length-zero element."""
        perm = []
        for s in self.simple:
            i = self._simple_index.get(self.conj(om, s))
            if i is None:
                raise ValueError("element does not normalize S~ (not of length zero?)")
            perm.append(i)
        return tuple(perm)

    def omega_component(self, x: AffineElement) -> AffineElement:
        return self.reduced_word(x)[1]

    # -- Newton points ------------------------------------------------------------

    def newton_point(self, x: AffineElement) -> tuple:
        y = self.power(x, self.W0.order)
        if y.w != 0:
            raise AssertionError("x^|W0| has a nontrivial finite part")
        return tuple(Fraction(a, self.W0.order) for a in y.lam)

    newton = newton_point

    def dominant(self, nu) -> tuple:
        nu = [Fraction(a) for a in nu]
        d = self.datum
        while True:
            for i, cv in enumerate(d.simple_coroots):
                m = sum(a * b for a, b in zip(nu, cv))
                if m < 0:
                    nu = [a - m * b for a, b in zip(nu, d.simple_roots[i])]
                    break
            else:
                return tuple(nu)

    def dominant_newton(self, x: AffineElement) -> tuple:
        return self.dominant(self.newton_point(x))

    def invariant_f(self, x: AffineElement) -> tuple:
        return (self.kottwitz(x), self.dominant_newton(x))

    def is_dominant(self, nu) -> bool:
        return all(sum(a * b for a, b in zip(nu, cv)) >= 0 for cv in self.datum.simple_coroots)

    def root_pairing(self, nu, i: int):
        """<nu, alpha_i^vee> for the i-th simple coroot."""
        return sum(a * b for a, b in zip(nu, self.datum.simple_coroots[i]))

    # -- Coxeter structure of W_a ---------------------------------------------------

    @cached_property
    def affine_coxeter_matrix(self) -> CoxeterMatrix:
        k = len(self.simple)
        rows = [[1] * k for _ in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                st = self.mul(self.simple[i], self.simple[j])
                m, y = INFINITY, st
                for e in range(1, 7):
                    if y == self.identity:
                        m = e
                        break
                    y = self.mul(y, st)
                rows[i][j] = rows[j][i] = m
        return CoxeterMatrix(tuple(map(tuple, rows)), tuple(self.simple_labels))

    def is_finite_subset(self, J: Iterable[int]) -> bool:
        """W_J is finite iff J omits a node of every affine component."""
        J = set(J)
        return not any(set(comp) <= J for comp in self.components)

    def parahoric(self, J: Iterable[int]) -> Parahoric:
        J = tuple(sorted(set(J)))
        if not self.is_finite_subset(J):
            return Parahoric(J, False)
        cm = self.affine_coxeter_matrix.submatrix(J)
        grp = CoxeterGroup(cm)
        elems = [self.from_word([J[s] for s in grp.word(w)]) for w in range(grp.order)]
        return Parahoric(J, True, grp, elems)

    def wj_sharp(self, J: Iterable[int]) -> SharpGroup:
        par = self.parahoric(J)
        if not par.finite:
            raise ValueError(f"W_J is infinite for J = {par.J}")
        oms = self.omega()
        keep, perms = [], []
        for om in oms.elements:
            perm = self.omega_permutation(om)
            if {perm[j] for j in par.J} == set(par.J):
                keep.append(om)
                perms.append(tuple(par.J.index(perm[j]) for j in par.J))
        index = {om: k for k, om in enumerate(keep)}
        table = []
        for a in keep:
            row = []
            for b in keep:
                c = self.mul(a, b)
                if c not in index:
                    raise ValueError("Omega_J is not closed; enlarge omega_radius")
                row.append(index[c])
            table.append(tuple(row))
        return SharpGroup(par, tuple(keep), tuple(perms), tuple(table))

    def _deodhar_moves(self, J: tuple) -> set:
        out = set()
        for s in range(len(self.simple)):
            if s in J:
                continue
            big = tuple(sorted(J + (s,)))
            if not self.is_finite_subset(big):
                continue
            par = self.parahoric(big)
            w0 = par.elements[par.group.longest_element]
            img = []
            for j in J:
                k = self._simple_index.get(self.conj(w0, self.simple[j]))
                if k is None:
                    raise AssertionError("longest element does not permute simple reflections")
                img.append(k)
            out.add(tuple(sorted(img)))
        return out

    def subset_class(self, J: Iterable[int]) -> frozenset:
        """All K ⊂ S~ with W_K conjugate to W_J in W~ (Omega moves and elementary W_a moves)."""
        J = tuple(sorted(set(J)))
        perms = [self.omega_permutation(om) for om in self.omega().elements]
        seen = {J}
        stack = [J]
        while stack:
            K = stack.pop()
            nxt = {tuple(sorted(p[k] for k in K)) for p in perms}
            if self.is_finite_subset(K):
                nxt |= self._deodhar_moves(K)
            for L in nxt:
                if L not in seen:
                    seen.add(L)
                    stack.append(L)
        return frozenset(seen)

    def maximal_I(self) -> list[list[tuple]]:
        """Subsets J with W_J finite and W_J^sharp maximal, grouped by W~-conjugacy."""
        k = len(self.simple)
        sharps = {}
        for size in range(k + 1):
            for J in combinations(range(k), size):
                if self.is_finite_subset(J):
                    sharps[J] = set(self.wj_sharp(J).omega)
        maximal = []
        for J, omJ in sharps.items():
            dominated = any(
                K != J and set(J) <= set(K) and omJ <= omK for K, omK in sharps.items()
            )
            if not dominated:
                maximal.append(J)
        groups: list[list[tuple]] = []
        for J in maximal:
            cls = self.subset_class(J)
            for g in groups:
                if g[0] in cls:
                    g.append(J)
                    break
            else:
                groups.append([J])
        return groups

    # -- enumeration -------------------------------------------------------------

    def ball(self, L: int, cosets: Iterable[tuple] | None = None) -> list[AffineElement]:
        """All elements of length at most L (Omega restricted to ``cosets`` if given)."""
        if cosets is None:
            starts = list(self.omega().elements)
        else:
            starts = [self.omega_for_coset(c) for c in cosets]
        seen = set(starts)
        out = list(starts)
        layer = list(starts)
        for k in range(L):
            new = []
            for x in layer:
                for s in self.simple:
                    y = self.mul(s, x)
                    if y not in seen and self.length(y) == k + 1:
                        seen.add(y)
                        new.append(y)
            out.extend(new)
            layer = new
        return out

    # -- text ----------------------------------------------------------------------

    def omega_label(self, om: AffineElement) -> str:
        oms = self.omega()
        if om == self.identity:
            return ""
        if om in oms.elements:
            return f"omega{oms.elements.index(om)}"
        return "omega(" + ",".join(map(str, self.kottwitz(om))) + ")"

    def format(self, x: AffineElement) -> str:
        word, om = self.reduced_word(x)
        parts = [self.simple_labels[i] for i in word]
        lab = self.omega_label(om)
        if lab:
            parts.append(lab)
        return " ".join(parts) or "e"

    def word_labels(self, word: Sequence[int]) -> str:
        return " ".join(self.simple_labels[i] for i in word) or "e"

    def parse(self, text: str) -> AffineElement:
        """Parse words such as ``s0 s1``, ``t(1,-1) s2`` or ``s1 omega1``."""
        x = self.identity
        oms = self.omega().elements
        for tok in text.replace("*", " ").split():
            if tok == "e":
                continue
            if tok.startswith("t(") and tok.endswith(")"):
                lam = [int(v) for v in tok[2:-1].split(",")]
                if len(lam) != self.n:
                    raise ValueError(f"translation {tok} has wrong rank")
                y = self.translation(lam)
            elif tok.startswith("omega"):
                k = int(tok[5:])
                if not 0 <= k < len(oms):
                    raise ValueError(f"unknown Omega element {tok}")
                y = oms[k]
            elif tok in self.simple_labels:
                y = self.simple[self.simple_labels.index(tok)]
            else:
                raise ValueError(f"unknown generator {tok!r}")
            x = self.mul(x, y)
        return x


def build_affine(datum: BasedRootDatum | str, omega_radius: int = 1) -> ExtendedAffineWeylGroup:
    if isinstance(datum, str):
        datum = BasedRootDatum.preset(datum)
    return ExtendedAffineWeylGroup(datum, omega_radius)
