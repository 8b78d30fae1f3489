"""Brute-force counting oracles.

Sublattices of ``Z^d`` of index ``p^n`` are enumerated through their unique
upper-triangular Hermite normal form; bracket closure is decided by exact
forward substitution against the HNF rows.  Submodules of ``F_q[[t]]^2`` are
counted as t-stable subspaces of ``(F_q[t]/t^n)^2`` in reduced echelon form.
"""

from __future__ import annotations

import itertools
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Sequence

from .lie_input import LieAlgebraZ

__all__ = [
    "HnfMatrix",
    "is_hnf",
    "enumerate_sublattices",
    "count_sublattices_formula",
    "count_subalgebras",
    "count_submodules_fqt",
    "GF",
    "thread_count",
]

HnfMatrix = tuple[tuple[int, ...], ...]

# desk-scale budget: beyond these the enumeration still runs, with a warning
MAX_RANK, MAX_EXPONENT, MAX_PRIME = 3, 4, 5


def is_hnf(h: Sequence[Sequence[int]]) -> bool:
    d = len(h)
    for i in range(d):
        if h[i][i] <= 0:
            return False
        for j in range(d):
            if j < i and h[i][j] != 0:
                return False
            if j > i and not 0 <= h[i][j] < h[j][j]:
                return False
    return True


def _diagonals(d: int, n: int) -> Iterator[tuple[int, ...]]:
    """Exponent sequences ``(k_1, .., k_d)`` summing to ``n``, lexicographically."""
    if d == 0:
        if n == 0:
            yield ()
        return
    for k in range(n + 1):
        for rest in _diagonals(d - 1, n - k):
            yield (k,) + rest


def _with_diagonal(diag: Sequence[int]) -> Iterator[HnfMatrix]:
    d = len(diag)
    slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
    ranges = [range(diag[j]) for _, j in slots]
    for vals in itertools.product(*ranges):
        m = [[0] * d for _ in range(d)]
        for i in range(d):
            m[i][i] = diag[i]
        for (i, j), v in zip(slots, vals):
            m[i][j] = v
        yield tuple(tuple(r) for r in m)


def enumerate_sublattices(d: int, p: int, n: int) -> Iterator[HnfMatrix]:
    """Every index-``p^n`` sublattice of ``Z^d`` exactly once, as an HNF basis (rows)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for ks in _diagonals(d, n):
        yield from _with_diagonal([p**k for k in ks])


def count_sublattices_formula(d: int, p: int, n: int) -> int:
    """``T^n`` coefficient of ``prod_{i<d} (1 - p^i T)^-1``."""
    # the HNFs with diagonal p^k_1, .., p^k_d number prod_j p^(k_j (j-1))
    return sum(_prod(p ** (i * k) for i, k in enumerate(ks)) for ks in _diagonals(d, n))


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _in_lattice(h: HnfMatrix, v: Sequence[int]) -> bool:
    """Is ``v`` an integer combination of the rows of the triangular ``h``?"""
    v = list(v)
    for i, row in enumerate(h):
        c, r = divmod(v[i], row[i])
        if r:
            return False
        if c:
            for j in range(i + 1, len(v)):
                v[j] -= c * row[j]
    return True


def _closed(a: LieAlgebraZ, h: HnfMatrix, mode: str) -> bool:
    d = a.d
    if mode == "subalgebra":
        for i in range(d):
            for j in range(i + 1, d):
                if not _in_lattice(h, a.bracket(h[i], h[j])):
                    return False
        return True
    basis = [[int(k == j) for k in range(d)] for j in range(d)]
    for i in range(d):
        for j in range(d):
            if not _in_lattice(h, a.bracket(h[i], basis[j])):
                return False
    return True


def _count_diagonal(args) -> int:
    a, diag, mode = args
    if a.is_abelian():
        return sum(1 for _ in _with_diagonal(diag))
    return sum(1 for h in _with_diagonal(diag) if _closed(a, h, mode))


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CONE_ZETA_THREADS", "1")))
    except ValueError:
        return 1


def count_subalgebras(a: LieAlgebraZ, p: int, n: int, mode: str = "subalgebra", workers: int | None = None) -> int:
    """Number of subrings (or ideals) of index ``p^n`` in ``a``.

    Work is split by the HNF diagonal; with ``workers > 1`` the parts are
    counted in a process pool.  The total does not depend on the schedule.
    """
    if mode in ("sub", "subalgebra"):
        mode = "subalgebra"
    elif mode != "ideal":
        raise ValueError(f"unknown mode {mode!r}")
    if a.d > MAX_RANK or n > MAX_EXPONENT or p > MAX_PRIME:
        total = count_sublattices_formula(a.d, p, n)
        warnings.warn(f"enumerating {total} sublattices, beyond the tested budget", RuntimeWarning, stacklevel=2)
    workers = thread_count() if workers is None else workers
    jobs = [(a, tuple(p**k for k in ks), mode) for ks in _diagonals(a.d, n)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_count_diagonal, jobs))
    return sum(map(_count_diagonal, jobs))


# ---------------------------------------------------------------------------
# Finite fields and F_q[[t]]-submodules
# ---------------------------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(x for x in range(2, q + 1) if q % x == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


class GF:
    """The field with ``q`` elements as addition/multiplication tables on ``0..q-1``.

    For ``q = p^k`` an element is the base-``p`` digit vector of a polynomial
    modulo the lexicographically first monic irreducible of degree ``k``.
    """

    def __init__(self, q: int):
        p, k = _prime_power(q)
        self.q, self.p, self.k = q, p, k
        digits = [self._digits(x) for x in range(q)]
        self.add = [[self._encode([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q)] for x in range(q)]
        modulus = self._irreducible() if k > 1 else None
        self.mul = [[self._polymul(digits[x], digits[y], modulus) for y in range(q)] for x in range(q)]
        self.neg = [self._encode([(-a) % p for a in digits[x]]) for x in range(q)]
        self.inv = [0] + [next(y for y in range(1, q) if self.mul[x][y] == 1) for x in range(1, q)]

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _reduce(self, coeffs: list[int], modulus: Sequence[int] | None) -> list[int]:
        p, k = self.p, self.k
        coeffs = [c % p for c in coeffs]
        if modulus is not None:
            for deg in range(len(coeffs) - 1, k - 1, -1):
                c = coeffs[deg]
                if c:
                    for i, m in enumerate(modulus):
                        coeffs[deg - k + i] = (coeffs[deg - k + i] - c * m) % p
        return (coeffs + [0] * k)[:k]

    def _polymul(self, a: Sequence[int], b: Sequence[int], modulus) -> int:
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        return self._encode(self._reduce(prod, modulus))

    def _irreducible(self) -> list[int]:
        p, k = self.p, self.k
        for tail in itertools.product(range(p), repeat=k):
            poly = list(tail) + [1]
            # irreducible iff no monic factor of degree <= k/2
            if all(not self._divides(f, poly) for f in _monic_polys(p, 1, k // 2)):
                return poly
        raise ValueError("no irreducible polynomial found")

    def _divides(self, f: Sequence[int], g: Sequence[int]) -> bool:
        p = self.p
        g = list(g)
        df = len(f) - 1
        for deg in range(len(g) - 1, df - 1, -1):
            c = g[deg]
            if c:
                for i, x in enumerate(f):
                    g[deg - df + i] = (g[deg - df + i] - c * x) % p
        return not any(g[:df])


def _monic_polys(p: int, lo: int, hi: int) -> Iterator[list[int]]:
    for deg in range(lo, hi + 1):
        for tail in itertools.product(range(p), repeat=deg):
            yield list(tail) + [1]


def _rref_reduce(field: GF, rows: list[list[int]], pivots: list[int], v: list[int]) -> list[int]:
    add, mul, neg = field.add, field.mul, field.neg
    v = list(v)
    for row, c in zip(rows, pivots):
        a = v[c]
        if a:
            na = neg[a]
            v = [add[x][mul[na][y]] for x, y in zip(v, row)]
    return v


def count_submodules_fqt(q: int, n: int) -> int:
    """Number of ``F_q[[t]]``-submodules of index ``q^n`` in ``F_q[[t]]^2``.

    Such a submodule contains ``t^n F_q[[t]]^2``, so it is an ``n``-dimensional
    t-stable subspace of ``V = (F_q[t]/t^n)^2`` with basis
    ``e_1, t e_1, .., t^(n-1) e_1, e_2, .., t^(n-1) e_2``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    field = GF(q)
    dim = 2 * n

    def shift(v: Sequence[int]) -> list[int]:
        out = [0] * dim
        for block in (0, n):
            for i in range(n - 1):
                out[block + i + 1] = v[block + i]
        return out

    count = 0
    for pivots in itertools.combinations(range(dim), n):
        piv_set = set(pivots)
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, dim) if c not in piv_set]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * dim for _ in range(n)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            if all(not any(_rref_reduce(field, rows, list(pivots), shift(row))) for row in rows):
                count += 1
    return count
