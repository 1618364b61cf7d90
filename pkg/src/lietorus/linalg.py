"""Exact dense linear algebra over Q(zeta_N).

Matrices are lists of rows; scalars are ``mpq`` or cyclotomic numbers.
Elimination skips zero entries, which keeps the structured matrices that
arise from Chevalley bases cheap to reduce.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

from .field import ExactPolynomial, FieldContext, simplify

ZERO = mpq(0)
ONE = mpq(1)


def zeros(n: int) -> list:
    return [ZERO] * n


def identity(n: int) -> list[list]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def is_zero(v: Iterable) -> bool:
    return not any(v)


def nonzero(v: Sequence) -> list[tuple[int, object]]:
    return [(i, a) for i, a in enumerate(v) if a]


def add_scaled(v: list, c, w: Sequence) -> None:
    """v += c * w in place."""
    for i, b in enumerate(w):
        if b:
            v[i] = v[i] + c * b


def vec_add(v, w):
    return [a + b for a, b in zip(v, w)]


def vec_sub(v, w):
    return [a - b for a, b in zip(v, w)]


def vec_scale(c, v):
    return [c * a for a in v]


def transpose(a: list[list]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: list[list], b: list[list]) -> list[list]:
    if not a:
        return []
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [ZERO] * m
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j, y in enumerate(brow):
                    if y:
                        acc[j] = acc[j] + x * y
        out.append([simplify(t) for t in acc])
    return out


def matvec(a: list[list], v: Sequence) -> list:
    nz = nonzero(v)
    out = []
    for row in a:
        acc = ZERO
        for j, x in nz:
            y = row[j]
            if y:
                acc = acc + y * x
        out.append(simplify(acc))
    return out


def vecmat(v: Sequence, a: list[list]) -> list:
    m = len(a[0]) if a else 0
    acc = [ZERO] * m
    for i, x in enumerate(v):
        if x:
            add_scaled(acc, x, a[i])
    return [simplify(t) for t in acc]


def rref(rows: Iterable[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; zero rows are dropped, pivots are 1."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    n = len(mat[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        inv = 1 / prow[c]
        prow = [simplify(x * inv) if x else ZERO for x in prow]
        mat[r] = prow
        nz = [(j, x) for j, x in enumerate(prow) if x]
        for i in range(len(mat)):
            if i != r:
                f = mat[i][c]
                if f:
                    row = mat[i]
                    for j, x in nz:
                        row[j] = simplify(row[j] - f * x)
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(mat: list[list], ncols: int | None = None) -> list[list]:
    """Basis of {x : mat x = 0}, one vector per free column."""
    n = ncols if ncols is not None else (len(mat[0]) if mat else 0)
    red, piv = rref(mat, n)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        x = [ZERO] * n
        x[f] = ONE
        for row, p in zip(red, piv):
            if row[f]:
                x[p] = -row[f]
        basis.append(x)
    return basis


def left_nullspace(mat: list[list]) -> list[list]:
    return nullspace(transpose(mat), len(mat))


def inverse(a: list[list]) -> list[list]:
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def determinant(a: list[list]):
    n = len(a)
    mat = [list(r) for r in a]
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        p = mat[c][c]
        det = det * p
        for i in range(c + 1, n):
            f = mat[i][c]
            if f:
                f = f / p
                add_scaled(mat[i], -f, mat[c])
    return simplify(det)


def charpoly(a: list[list], ctx: FieldContext) -> ExactPolynomial:
    """Characteristic polynomial det(x I - a) via Hessenberg reduction."""
    n = len(a)
    h = [list(r) for r in a]
    for j in range(n - 2):
        i = next((i for i in range(j + 1, n) if h[i][j]), None)
        if i is None:
            continue
        if i != j + 1:
            h[i], h[j + 1] = h[j + 1], h[i]
            for row in h:
                row[i], row[j + 1] = row[j + 1], row[i]
        piv = h[j + 1][j]
        for k in range(j + 2, n):
            if h[k][j]:
                f = simplify(h[k][j] / piv)
                add_scaled(h[k], -f, h[j + 1])
                for row in h:
                    if row[k]:
                        row[j + 1] = simplify(row[j + 1] + f * row[k])
    polys = [ExactPolynomial([1], ctx)]
    x = ExactPolynomial([0, 1], ctx)
    for m in range(1, n + 1):
        p = (x - ExactPolynomial([h[m - 1][m - 1]], ctx)) * polys[m - 1]
        prod = ONE
        for i in range(m - 1, 0, -1):
            prod = prod * h[i][i - 1]
            if not prod:
                break
            c = h[i - 1][m - 1]
            if c:
                p = p - polys[i - 1].scale(c * prod)
        polys.append(p)
    return polys[n]


class Echelon:
    """Incrementally maintained reduced echelon basis of a subspace."""

    __slots__ = ("n", "rows", "pivots", "_nz")

    def __init__(self, n: int, rows: Iterable[Sequence] = ()):
        self.n = n
        self.rows: list[list] = []
        self.pivots: list[int] = []
        self._nz: list[list] = []
        for r in rows:
            self.add(r)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> list:
        v = list(v)
        for row, p, nz in zip(self.rows, self.pivots, self._nz):
            c = v[p]
            if c:
                for j, x in nz:
                    v[j] = simplify(v[j] - c * x)
        return v

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def add(self, v: Sequence) -> bool:
        r = self.reduce(v)
        p = next((i for i, x in enumerate(r) if x), None)
        if p is None:
            return False
        inv = 1 / r[p]
        r = [simplify(x * inv) if x else ZERO for x in r]
        nz = [(j, x) for j, x in enumerate(r) if x]
        for k, row in enumerate(self.rows):
            c = row[p]
            if c:
                for j, x in nz:
                    row[j] = simplify(row[j] - c * x)
                self._nz[k] = [(j, x) for j, x in enumerate(row) if x]
        self.rows.append(r)
        self.pivots.append(p)
        self._nz.append(nz)
        return True

    def coordinates(self, v: Sequence) -> list | None:
        """Coordinates of v in the stored basis, or None if v is outside."""
        coords = [v[p] for p in self.pivots]
        residual = list(v)
        for c, nz in zip(coords, self._nz):
            if c:
                for j, x in nz:
                    residual[j] = residual[j] - c * x
        if any(residual):
            return None
        return [simplify(c) for c in coords]

    def canonical(self) -> list[list]:
        order = sorted(range(len(self.rows)), key=lambda k: self.pivots[k])
        return [self.rows[k] for k in order]
