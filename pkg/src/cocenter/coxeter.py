"""Finite Coxeter groups realized through an integer Cartan matrix.

Elements are enumerated once by breadth-first search over right
multiplication by simple reflections; afterwards every element is an integer
index into the enumeration, and :class:`GroupElement` carries the canonical
matrix, the length and one reduced word.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .exactscalar import QQ
from .linalg import as_matrix, det

INFINITY = 0  # stored value of m_st = infinity

PRESETS: dict[str, tuple[tuple[int, ...], ...]] = {
    "A1": ((1,),),
    "A2": ((1, 3), (3, 1)),
    "A1xA1": ((1, 2), (2, 1)),
    "B2": ((1, 4), (4, 1)),
    "G2": ((1, 6), (6, 1)),
    "A3": ((1, 3, 2), (3, 1, 3), (2, 3, 1)),
    "B3": ((1, 3, 2), (3, 1, 4), (2, 4, 1)),
}

# a_ij * a_ji determines m_ij for crystallographic pairs
_PRODUCT = {2: 0, 3: 1, 4: 2, 6: 3, INFINITY: 4}


class GroupTooLarge(RuntimeError):
    """Enumeration exceeded the element cap (likely an infinite group)."""


@dataclass(frozen=True)
class CoxeterMatrix:
    entries: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("Coxeter matrix must be square")
            if row[i] != 1:
                raise ValueError("diagonal entries must be 1")
            for j, m in enumerate(row):
                if m != rows[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if i != j and m != INFINITY and m < 2:
                    raise ValueError(f"invalid entry m[{i}][{j}] = {m}")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"s{i + 1}" for i in range(n)))
        elif len(self.labels) != n:
            raise ValueError("one label per generator")

    @property
    def rank(self) -> int:
        return len(self.entries)

    @classmethod
    def preset(cls, name: str) -> "CoxeterMatrix":
        try:
            return cls(PRESETS[name])
        except KeyError:
            raise ValueError(f"unknown Coxeter preset {name!r}") from None

    @classmethod
    def from_rows(cls, rows, labels=None) -> "CoxeterMatrix":
        conv = [[INFINITY if x in (None, "inf", "oo", float("inf")) else int(x) for x in r] for r in rows]
        return cls(tuple(map(tuple, conv)), tuple(labels) if labels else None)

    def m(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def submatrix(self, idx: Sequence[int]) -> "CoxeterMatrix":
        idx = list(idx)
        return CoxeterMatrix(
            tuple(tuple(self.entries[i][j] for j in idx) for i in idx),
            tuple(self.labels[i] for i in idx),
        )

    def cartan(self) -> tuple[tuple[int, ...], ...]:
        """An integer Cartan matrix A with A[i][j] A[j][i] = 4 cos^2(pi/m_ij)."""
        n = self.rank
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                m = self.entries[i][j]
                if m not in _PRODUCT:
                    raise ValueError(f"non-crystallographic entry m = {m} is not supported")
                prod = _PRODUCT[m]
                if prod == 0:
                    continue
                if prod == 4:
                    a[i][j] = a[j][i] = -2
                else:
                    a[i][j], a[j][i] = -1, -prod
        return tuple(map(tuple, a))

    def components(self) -> list[list[int]]:
        """Connected components of the Coxeter graph."""
        n = self.rank
        seen, comps = set(), []
        for start in range(n):
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if j not in seen and self.entries[i][j] != 2:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def to_json(self):
        return [[("inf" if x == INFINITY else x) for x in r] for r in self.entries]

    @classmethod
    def from_cartan(cls, a, labels=None) -> "CoxeterMatrix":
        back = {v: k for k, v in _PRODUCT.items()}
        n = len(a)
        rows = [[1 if i == j else back[a[i][j] * a[j][i]] for j in range(n)] for i in range(n)]
        return cls(tuple(map(tuple, rows)), tuple(labels) if labels else None)


@dataclass(frozen=True)
class GroupElement:
    matrix: tuple[tuple[int, ...], ...]
    length: int
    word: tuple[int, ...]
    index: int = field(compare=False, default=-1)


@dataclass(frozen=True)
class FiniteConjClass:
    elements: frozenset
    min_length: int
    min_elements: frozenset
    elliptic: bool
    representative: int = 0

    def __len__(self):
        return len(self.elements)

    def __contains__(self, w):
        return w in self.elements


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)) for i in range(n)
    )


class CoxeterGroup:
    """A fully enumerated finite Coxeter group.

    Elements are indices ``0 .. order-1`` in breadth-first order; index 0 is
    the identity.
    """

    def __init__(self, cm: CoxeterMatrix, element_cap: int = 10**6, cartan=None):
        self.coxeter_matrix = cm
        self.rank = n = cm.rank
        self.cartan = cm.cartan() if cartan is None else tuple(map(tuple, cartan))
        # s_i(alpha_j) = alpha_j - A[i][j] alpha_i ; column j = image of alpha_j
        gens = []
        for i in range(n):
            rows = [[int(r == c) for c in range(n)] for r in range(n)]
            for j in range(n):
                rows[i][j] -= self.cartan[i][j]
            gens.append(tuple(map(tuple, rows)))
        self.generator_matrices = gens
        ident = tuple(tuple(int(r == c) for c in range(n)) for r in range(n))
        mats = [ident]
        words: list[tuple[int, ...]] = [()]
        lengths = [0]
        index = {ident: 0}
        right = [[] for _ in range(n)]
        queue = deque([0])
        while queue:
            w = queue.popleft()
            for s in range(n):
                m = _mat_mul(mats[w], gens[s])
                j = index.get(m)
                if j is None:
                    if len(mats) >= element_cap:
                        raise GroupTooLarge(f"more than {element_cap} elements")
                    j = len(mats)
                    index[m] = j
                    mats.append(m)
                    words.append(words[w] + (s,))
                    lengths.append(lengths[w] + 1)
                    queue.append(j)
        for s in range(n):
            right[s] = [index[_mat_mul(m, gens[s])] for m in mats]
        left = [[index[_mat_mul(gens[s], m)] for m in mats] for s in range(n)]
        self._mats = mats
        self._index = index
        self.words = words
        self.lengths = lengths
        self.right = right
        self.left = left
        self.order = len(mats)

    # -- basic queries -------------------------------------------------------

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    @property
    def identity(self) -> int:
        return 0

    def element(self, w: int) -> GroupElement:
        return GroupElement(self._mats[w], self.lengths[w], self.words[w], w)

    def matrix(self, w: int):
        return self._mats[w]

    def index_of_matrix(self, m) -> int:
        return self._index[tuple(map(tuple, m))]

    def length(self, w: int) -> int:
        return self.lengths[w]

    def word(self, w: int) -> tuple[int, ...]:
        return self.words[w]

    def simple(self, s: int) -> int:
        return self.right[s][0]

    def from_word(self, word: Iterable[int]) -> int:
        w = 0
        for s in word:
            w = self.right[s][w]
        return w

    def mul(self, a: int, b: int) -> int:
        for s in self.words[b]:
            a = self.right[s][a]
        return a

    def inverse(self, w: int) -> int:
        return self.from_word(reversed(self.words[w]))

    def conj(self, g: int, w: int) -> int:
        """g w g^-1."""
        return self.mul(self.mul(g, w), self.inverse(g))

    def conj_simple(self, s: int, w: int) -> int:
        return self.left[s][self.right[s][w]]

    @cached_property
    def multiplication_table(self) -> list[list[int]]:
        return [[self.mul(a, b) for b in range(self.order)] for a in range(self.order)]

    @cached_property
    def longest_element(self) -> int:
        return max(range(self.order), key=lambda w: self.lengths[w])

    def right_descents(self, w: int) -> list[int]:
        return [s for s in range(self.rank) if self.lengths[self.right[s][w]] < self.lengths[w]]

    def left_descents(self, w: int) -> list[int]:
        return [s for s in range(self.rank) if self.lengths[self.left[s][w]] < self.lengths[w]]

    def support(self, w: int) -> frozenset:
        """Generators occurring in a (any) reduced word of w."""
        return frozenset(self.words[w])

    def min_coset_reps(self, k: Iterable[int]) -> list[int]:
        """Minimal length representatives of W / W_K."""
        k = list(k)
        return [w for w in range(self.order) if all(self.lengths[self.right[s][w]] > self.lengths[w] for s in k)]

    def parabolic_elements(self, k: Iterable[int]) -> list[int]:
        k = set(k)
        return [w for w in range(self.order) if set(self.words[w]) <= k]

    def apply_automorphism(self, perm: Sequence[int], w: int) -> int:
        """Image of w under the diagram automorphism s_i -> s_perm[i]."""
        return self.from_word(perm[s] for s in self.words[w])

    # -- roots ---------------------------------------------------------------

    @cached_property
    def positive_roots(self) -> list[tuple[int, ...]]:
        n = self.rank
        roots = set()
        for m in self._mats:
            for j in range(n):
                col = tuple(m[i][j] for i in range(n))
                if all(x >= 0 for x in col):
                    roots.add(col)
        return sorted(roots, key=lambda r: (sum(r), r))

    def root_length(self, w: int) -> int:
        """Number of positive roots sent to negative roots."""
        m = self._mats[w]
        n = self.rank
        count = 0
        for r in self.positive_roots:
            img = [sum(m[i][k] * r[k] for k in range(n)) for i in range(n)]
            if all(x <= 0 for x in img):
                count += 1
        return count

    def fixed_space_trivial(self, w: int) -> bool:
        """True iff det(1 - w) != 0 on the reflection representation."""
        m = self._mats[w]
        n = self.rank
        if n == 0:
            return False
        a = as_matrix(QQ, [[int(i == j) - m[i][j] for j in range(n)] for i in range(n)])
        return not det(a).is_zero()

    def parse_word(self, text: str | Sequence) -> tuple[int, ...]:
        return parse_word(text, self.coxeter_matrix.labels)

    def format_word(self, w: int) -> str:
        labels = self.coxeter_matrix.labels
        return " ".join(labels[s] for s in self.words[w]) or "e"


def parse_word(text, labels: Sequence[str]) -> tuple[int, ...]:
    """Parse 's1 s2 s1', '1 2 1' or a list of indices / labels into 0-based generator indices."""
    if isinstance(text, str):
        text = text.replace(",", " ").replace("*", " ")
        tokens = [t for t in text.split() if t not in ("e", "1_W")]
    else:
        tokens = list(text)
    out = []
    for t in tokens:
        if isinstance(t, int):
            idx = t
        elif t in labels:
            idx = labels.index(t)
        elif t.lstrip("s").isdigit():
            num = int(t.lstrip("s"))
            cand = f"s{num}"
            idx = labels.index(cand) if cand in labels else num - 1
        else:
            raise ValueError(f"unknown generator {t!r}")
        if not 0 <= idx < len(labels):
            raise ValueError(f"generator index {t!r} out of range")
        out.append(idx)
    return tuple(out)


def build_group(m: CoxeterMatrix | str, element_cap: int = 10**6) -> CoxeterGroup:
    if isinstance(m, str):
        m = CoxeterMatrix.preset(m)
    return CoxeterGroup(m, element_cap)


def length(group: CoxeterGroup, w: int) -> int:
    return group.length(w)


def conjugacy_classes(group: CoxeterGroup) -> list[FiniteConjClass]:
    """Conjugacy classes, ordered by (minimal length, first minimal element)."""
    seen: set[int] = set()
    classes = []
    for start in range(group.order):
        if start in seen:
            continue
        orbit = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for s in range(group.rank):
                v = group.conj_simple(s, w)
                if v not in orbit:
                    orbit.add(v)
                    stack.append(v)
        seen |= orbit
        lmin = min(group.lengths[w] for w in orbit)
        mins = frozenset(w for w in orbit if group.lengths[w] == lmin)
        rep = min(mins)
        classes.append(FiniteConjClass(frozenset(orbit), lmin, mins, group.fixed_space_trivial(rep), rep))
    classes.sort(key=lambda c: (c.min_length, c.representative))
    return classes


def is_elliptic(c: FiniteConjClass) -> bool:
    return c.elliptic


def class_of(classes: Sequence[FiniteConjClass], w: int) -> int:
    for i, c in enumerate(classes):
        if w in c.elements:
            return i
    raise KeyError(w)


def meets_proper_parabolic(group: CoxeterGroup, c: FiniteConjClass) -> bool:
    """Whether the class contains an element of some W_K with K a proper subset of S."""
    full = frozenset(range(group.rank))
    return any(group.support(w) != full for w in c.elements)
