"""Small exact linear-algebra helpers over Z and Q (row-vector convention)."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]


def primitive(v: Sequence[int]) -> Vector:
    g = reduce(gcd, (abs(int(x)) for x in v), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in enumerate(piv):
            x[c] = -red[r][f]
        basis.append(x)
    return basis


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def coordinates(gens: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coefficients of ``v`` in terms of independent ``gens``, or None if outside their span."""
    k = len(gens)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    n = len(v)
    cols = [[gens[i][j] for i in range(k)] for j in range(n)]
    # Cramer's rule on the first nonsingular k x k minor, then check the rest
    for rows in combinations(range(n), k):
        sub = [cols[j] for j in rows]
        den = det_int(sub)
        if den:
            break
    else:
        raise ValueError("generators are linearly dependent")
    nums = []
    for i in range(k):
        nums.append(det_int([r[:i] + [v[j]] + r[i + 1 :] for r, j in zip(sub, rows)]))
    for j in range(n):
        if sum(a * x for a, x in zip(cols[j], nums)) != den * v[j]:
            return None
    return [Fraction(x, den) for x in nums]


def smith_basis(gens: Sequence[Sequence[int]]) -> tuple[list[int], list[Vector]]:
    """Diagonal entries of a diagonalisation ``U G V = D`` and the first rows of ``V^-1``.

    The returned rows form a Z-basis of the saturation ``span_Q(G) & Z^t``
    and ``d_i * w_i`` is a basis of the lattice spanned by the rows of ``G``.
    """
    k = len(gens)
    if k == 0:
        return [], []
    t = len(gens[0])
    m = [list(map(int, r)) for r in gens]
    vinv = [[int(i == j) for j in range(t)] for i in range(t)]

    def col_add(dst: int, src: int, c: int):
        # column dst += c * column src   =>  row src of V^-1 -= c * row dst
        for row in m:
            row[dst] += c * row[src]
        vinv[src] = [a - c * b for a, b in zip(vinv[src], vinv[dst])]

    def col_swap(i: int, j: int):
        for row in m:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    diag = []
    for p in range(k):
        while True:
            entries = [(abs(m[i][j]), i, j) for i in range(p, k) for j in range(p, t) if m[i][j]]
            if not entries:
                raise ValueError("generators are linearly dependent")
            _, i, j = min(entries)
            m[p], m[i] = m[i], m[p]
            if j != p:
                col_swap(p, j)
            piv = m[p][p]
            done = True
            for i in range(p + 1, k):
                q = m[i][p] // piv
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[p])]
                if m[i][p]:
                    done = False
            for j in range(p + 1, t):
                q = m[p][j] // piv
                if q:
                    col_add(j, p, -q)
                if m[p][j]:
                    done = False
            if done:
                break
        diag.append(abs(m[p][p]))
    return diag, [tuple(r) for r in vinv[:k]]


def lattice_index(gens: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``gens`` in its saturation."""
    diag, _ = smith_basis(gens)
    return reduce(lambda a, b: a * b, diag, 1)


def elementary_divisors(gens: Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors (true Smith form) of an integer matrix of full row rank."""
    diag, _ = smith_basis(gens)
    # normalise the diagonal to divisibility order: d_i | d_{i+1}
    d = list(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
    return sorted(d)
