"""Exact dense linear algebra over a :class:`~cocenter.exactscalar.Field`,
plus Smith normal form over the integers.

Matrices are lists of rows; vectors are lists.  Nothing here ever uses
floating point.
"""

from __future__ import annotations

from typing import Sequence

from .exactscalar import Field, FieldElem

Matrix = list  # list[list[FieldElem]]


def zeros(field: Field, n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return [[field.zero] * m for _ in range(n)]


def identity(field: Field, n: int) -> Matrix:
    out = zeros(field, n)
    for i in range(n):
        out[i][i] = field.one
    return out


def as_matrix(field: Field, rows) -> Matrix:
    return [[field(x) for x in row] for row in rows]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    zero = a[0][0] * 0 if a[0] else None
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if not x.is_zero()]
        new = []
        for col in bt:
            acc = zero
            for k, x in nz:
                y = col[k]
                if not y.is_zero():
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def matvec(a: Matrix, v: Sequence[FieldElem]) -> list:
    out = []
    for row in a:
        acc = v[0] * 0
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return out


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def trace(a: Matrix):
    acc = a[0][0] * 0
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [row[:] for row in a]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None, field: Field | None = None) -> list[list]:
    """Basis of {x : a x = 0}."""
    if not a:
        if ncols is None or field is None:
            raise ValueError("empty matrix needs ncols and field")
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(a)
    n = len(a[0])
    one, zero = a[0][0].field.one, a[0][0].field.zero
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det(a: Matrix):
    n = len(a)
    m = [row[:] for row in a]
    field = a[0][0].field
    acc = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            acc = -acc
        acc = acc * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return acc


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    field = a[0][0].field
    aug = [row[:] + idrow for row, idrow in zip(a, identity(field, n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve(a: Matrix, b: Sequence) -> list | None:
    """One solution of a x = b, or None."""
    n = len(a[0])
    aug = [row[:] + [y] for row, y in zip(a, b)]
    red, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    zero = a[0][0].field.zero
    x = [zero] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return x


class Subspace:
    """A subspace kept in fully reduced echelon form, grown one vector at a time."""

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Sequence) -> list:
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not c.is_zero():
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v: Sequence) -> bool:
        """Insert v; return True if the subspace grew."""
        r = self.reduce(v)
        p = next((i for i, x in enumerate(r) if not x.is_zero()), None)
        if p is None:
            return False
        inv = r[p].inverse()
        r = [x * inv for x in r]
        for i, row in enumerate(self.rows):
            c = row[p]
            if not c.is_zero():
                self.rows[i] = [x - c * y for x, y in zip(row, r)]
        self.rows.append(r)
        self.pivots.append(p)
        return True

    def contains(self, v: Sequence) -> bool:
        return all(x.is_zero() for x in self.reduce(v))

    def coordinates(self, v: Sequence) -> list:
        """Coefficients of v (assumed inside) on the stored basis."""
        return [v[p] for p in self.pivots]


def charpoly(a: Matrix) -> list:
    """Characteristic polynomial det(xI - a), coefficients constant term first.

    Hessenberg reduction followed by the standard recurrence; valid over any
    field.
    """
    n = len(a)
    if n == 0:
        return []
    field = a[0][0].field
    h = [row[:] for row in a]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if not h[i][j].is_zero()), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[j + 1], h[piv] = h[piv], h[j + 1]
            for row in h:
                row[j + 1], row[piv] = row[piv], row[j + 1]
        inv = h[j + 1][j].inverse()
        for i in range(j + 2, n):
            f = h[i][j] * inv
            if f.is_zero():
                continue
            h[i] = [x - f * y for x, y in zip(h[i], h[j + 1])]
            for row in h:
                row[j + 1] = row[j + 1] + f * row[i]
    # p_k(x) = char poly of the leading k x k block
    polys = [[field.one]]
    for k in range(1, n + 1):
        # (x - h[k-1][k-1]) p_{k-1}
        prev = polys[k - 1]
        new = [field.zero] + prev[:]
        for i, c in enumerate(prev):
            new[i] = new[i] - h[k - 1][k - 1] * c
        prod = field.one
        for i in range(1, k):
            prod = prod * h[k - i][k - i - 1]
            coef = prod * h[k - i - 1][k - 1]
            if coef.is_zero():
                continue
            for t, c in enumerate(polys[k - i - 1]):
                new[t] = new[t] - coef * c
        polys.append(new)
    return polys[n]


# ---------------------------------------------------------------------------
# integer matrices


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form over Z.

    Returns (invariants, U, V) with U * a * V diagonal (the invariants, in
    divisibility order, zeros last) and U, V unimodular.
    """
    m = [list(map(int, row)) for row in a]
    nr = len(m)
    nc = len(m[0]) if m else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c row_src
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in m:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(nr, nc):
        entries = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, nr):
                if m[i][t]:
                    add_row(t, i, -(m[i][t] // m[t][t]))
                    if m[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, nc):
                if m[t][j]:
                    add_col(t, j, -(m[t][j] // m[t][t]))
                    if m[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if m[i][j] % m[t][t]),
                    None,
                )
                if bad:
                    add_row(bad[0], t, 1)
                    done = False
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    inv = [m[i][i] for i in range(min(nr, nc))]
    return inv, u, v


def integer_rank(a: Sequence[Sequence[int]]) -> int:
    if not a or not a[0]:
        return 0
    inv, _, _ = smith_normal_form(a)
    return sum(1 for x in inv if x)


def cokernel(a: Sequence[Sequence[int]], nrows: int) -> tuple[int, list[int]]:
    """Free rank and torsion invariants of Z^nrows / (column span of a)."""
    if not a or not a[0]:
        return nrows, []
    inv, _, _ = smith_normal_form(a)
    nz = [x for x in inv if x]
    return nrows - len(nz), [x for x in nz if x > 1]
