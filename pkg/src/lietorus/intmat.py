"""Integer matrix normal forms: Smith and Hermite."""

from __future__ import annotations

from typing import Sequence


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_matmul(a, b) -> list[list[int]]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def int_det(a) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return (U, D, V) with U A V = D, D diagonal, d_i | d_(i+1), d_i >= 0."""
    m = len(a)
    n = len(a[0]) if m else 0
    D = [list(map(int, r)) for r in a]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q row src
        if q:
            D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        if q:
            for M in (D, V):
                for r in M:
                    r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def invariant_factors(a) -> list[int]:
    """Nonzero diagonal of the Smith form, increasing divisibility."""
    _, D, _ = smith_normal_form(a)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form; zero rows dropped."""
    H = [list(map(int, r)) for r in rows if any(r)]
    if not H:
        return []
    n = len(H[0])
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, len(H)) if H[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[piv] = H[piv], H[r]
            clean = True
            for i in range(r + 1, len(H)):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if r < len(H) and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
            r += 1
            if r == len(H):
                break
    return [h for h in H[:r] if any(h)]
