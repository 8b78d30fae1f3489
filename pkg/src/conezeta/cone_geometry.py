"""Rational polyhedral cones cut out by monomial order conditions.

A :class:`ConeSpec` is the closed cone ``{x >= 0 : nf_i . x <= ng_i . x}``.
:func:`decompose` splits it into open simplicial pieces whose lattice points
are exactly the positive integer combinations of the piece's primitive
generators.  Edge and coordinate indices are 1-based throughout, matching
the piece tables printed by the CLI.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._linalg import Vector, coordinates, dot, lattice_index, primitive, rank, smith_basis

__all__ = [
    "ConeSpec",
    "Piece",
    "Decomposition",
    "extreme_rays",
    "decompose",
    "lattice_membership",
]


@dataclass(frozen=True)
class ConeSpec:
    t: int
    inequalities: tuple[tuple[Vector, Vector], ...] = ()

    def __post_init__(self):
        ineqs = []
        for nf, ng in self.inequalities:
            nf, ng = tuple(int(x) for x in nf), tuple(int(x) for x in ng)
            if len(nf) != self.t or len(ng) != self.t:
                raise ValueError(f"inequality vectors must have length {self.t}")
            if min(nf + ng, default=0) < 0:
                raise ValueError("exponent entries must be non-negative")
            ineqs.append((nf, ng))
        object.__setattr__(self, "inequalities", tuple(ineqs))

    def constraints(self) -> list[Vector]:
        """All half-spaces ``h . x >= 0``, nonnegativity first."""
        out = [tuple(int(i == j) for j in range(self.t)) for i in range(self.t)]
        for nf, ng in self.inequalities:
            h = tuple(b - a for a, b in zip(nf, ng))
            if any(h):
                out.append(h)
        return out

    def contains(self, x: Sequence) -> bool:
        return all(dot(h, x) >= 0 for h in self.constraints())

    def to_json(self) -> dict:
        return {"t": self.t, "inequalities": [{"f": list(f), "g": list(g)} for f, g in self.inequalities]}

    @classmethod
    def from_json(cls, data: dict) -> "ConeSpec":
        return cls(int(data["t"]), tuple((tuple(q["f"]), tuple(q["g"])) for q in data.get("inequalities", [])))


@dataclass(frozen=True)
class Piece:
    """Open simplicial piece: positive span of the edges in ``M``."""

    M: tuple[int, ...]
    I: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.M)


@dataclass(frozen=True)
class Decomposition:
    t: int
    edges: tuple[Vector, ...]
    pieces: tuple[Piece, ...]

    def edge(self, j: int) -> Vector:
        return self.edges[j - 1]

    def generators(self, k: int) -> list[Vector]:
        return [self.edge(j) for j in self.pieces[k].M]

    def label(self, k: int) -> str:
        p = self.pieces[k]
        return "0" if not p.M else "".join(f"R{j}" for j in p.M)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "edges": [list(e) for e in self.edges],
            "pieces": [{"M": list(p.M), "I": list(p.I)} for p in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Decomposition":
        return cls(
            int(data["t"]),
            tuple(tuple(e) for e in data["edges"]),
            tuple(Piece(tuple(p["M"]), tuple(p["I"])) for p in data["pieces"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# Extreme rays: double description
# ---------------------------------------------------------------------------


def extreme_rays(c: ConeSpec) -> list[Vector]:
    """Primitive generators of the extreme rays of ``c``, lexicographically sorted.

    Double description starting from the coordinate rays of the orthant and
    cutting by one inequality at a time; adjacency is decided
    combinatorially from tight-constraint sets.
    """
    t = c.t
    cons = c.constraints()
    processed = cons[:t]
    rays: list[Vector] = [tuple(int(i == j) for j in range(t)) for i in range(t)]
    for h in cons[t:]:
        vals = [dot(h, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        tight = {r: frozenset(i for i, g in enumerate(processed) if dot(g, r) == 0) for r in rays}
        new = list(pos) + list(zero)
        for p in pos:
            for n in neg:
                common = tight[p] & tight[n]
                if any(common <= tight[r] for r in rays if r != p and r != n):
                    continue
                hp, hn = dot(h, p), dot(h, n)
                combo = tuple(hp * x - hn * y for x, y in zip(n, p))
                new.append(primitive(combo))
        processed = processed + [h]
        rays = sorted(set(new))
    return sorted(set(rays))


# ---------------------------------------------------------------------------
# Triangulation and unimodular refinement
# ---------------------------------------------------------------------------


def _placing(rays: Sequence[Vector]) -> list[tuple[int, ...]]:
    """Placing triangulation of cone(rays), as tuples of indices into ``rays``."""
    if not rays:
        return []
    simplices: list[tuple[int, ...]] = [(0,)]
    span_rank = 1
    for r_idx in range(1, len(rays)):
        r = rays[r_idx]
        gens_all = [rays[i] for i in range(r_idx)]
        if rank(gens_all + [r]) > span_rank:
            simplices = [s + (r_idx,) for s in simplices]
            span_rank += 1
            continue
        facet_count: dict[frozenset, int] = {}
        for s in simplices:
            for v in s:
                f = frozenset(s) - {v}
                facet_count[f] = facet_count.get(f, 0) + 1
        new = []
        for s in simplices:
            lam = coordinates([rays[i] for i in s], r)
            for pos, v in enumerate(s):
                f = frozenset(s) - {v}
                if facet_count[f] == 1 and lam[pos] < 0:
                    new.append(tuple(sorted(f)) + (r_idx,))
        simplices.extend(new)
    return [tuple(sorted(s)) for s in simplices]


def _parallelepiped_points(gens: Sequence[Vector]) -> list[Vector]:
    """Nonzero lattice points of the half-open parallelepiped of ``gens``."""
    diag, basis = smith_basis(gens)
    pts = set()
    for coeffs in itertools.product(*(range(d) for d in diag)):
        if not any(coeffs):
            continue
        x = [sum(c * w[j] for c, w in zip(coeffs, basis)) for j in range(len(gens[0]))]
        lam = coordinates(gens, x)
        frac = [l - (l.numerator // l.denominator) for l in lam]
        y = [sum(f * g[j] for f, g in zip(frac, gens)) for j in range(len(x))]
        if any(y):
            pts.add(tuple(int(v) for v in y))
    return sorted(pts)


def _witness(gens: Sequence[Vector]) -> Vector:
    pts = _parallelepiped_points(gens)
    return min(pts, key=lambda p: (sum(p), p))


def _refine_unimodular(rays: list[Vector], simplices: list[tuple[int, ...]]) -> tuple[list[Vector], list[tuple[int, ...]]]:
    rays = list(rays)
    simplices = [tuple(s) for s in simplices]
    while True:
        bad = None
        for s in sorted(simplices, key=lambda s: sorted(rays[i] for i in s)):
            if lattice_index([rays[i] for i in s]) != 1:
                bad = s
                break
        if bad is None:
            return rays, simplices
        w = _witness([rays[i] for i in bad])
        w_idx = len(rays)
        rays.append(w)
        out = []
        for s in simplices:
            lam = coordinates([rays[i] for i in s], w)
            if lam is None or any(x < 0 for x in lam):
                out.append(s)
                continue
            for pos, g in enumerate(s):
                if lam[pos] > 0:
                    out.append(tuple(sorted(set(s) - {g})) + (w_idx,))
        simplices = [tuple(sorted(s)) for s in out]


def decompose(c: ConeSpec, seed: int | None = None) -> Decomposition:
    """Decompose ``c`` into open unimodular simplicial pieces.

    Pieces come in the order: origin, the one-dimensional edges, then higher
    pieces by dimension.  ``seed`` permutes the placing order of the rays,
    which yields a different (equally valid) decomposition.
    """
    rays = extreme_rays(c)
    order = list(rays)
    if seed is not None:
        random.Random(seed).shuffle(order)
    simplices = _placing(order)
    all_rays, simplices = _refine_unimodular(order, simplices)
    edges = sorted(set(all_rays))
    index = {r: i + 1 for i, r in enumerate(edges)}
    faces: set[tuple[int, ...]] = set()
    for s in simplices:
        members = sorted(index[all_rays[i]] for i in s)
        for k in range(1, len(members) + 1):
            faces.update(itertools.combinations(members, k))
    pieces = [Piece((), ())]
    for M in sorted(faces, key=lambda m: (len(m), m)):
        support = sorted({j + 1 for e in M for j, x in enumerate(edges[e - 1]) if x})
        pieces.append(Piece(tuple(M), tuple(support)))
    return Decomposition(c.t, tuple(edges), tuple(pieces))


def lattice_membership(d: Decomposition, point: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Index of the piece containing ``point`` and its (positive integer) edge coefficients."""
    point = tuple(int(x) for x in point)
    if len(point) != d.t:
        raise ValueError(f"point must have length {d.t}")
    if any(x < 0 for x in point):
        raise ValueError("point has a negative coordinate")
    support = tuple(j + 1 for j, x in enumerate(point) if x)
    for k, piece in enumerate(d.pieces):
        if piece.I != support:
            continue
        lam = coordinates(d.generators(k), point)
        if lam is None or any(x <= 0 for x in lam):
            continue
        if any(x.denominator != 1 for x in lam):
            raise ArithmeticError(f"piece {d.label(k)} is not lattice-exact at {point}")
        return k, tuple(int(x) for x in lam)
    raise ValueError(f"point {point} lies outside the cone")


def dimension_counts(d: Decomposition) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in d.pieces:
        out[p.dim] = out.get(p.dim, 0) + 1
    return out


def lattice_points(c: ConeSpec, bound: int) -> Iterable[Vector]:
    """Lattice points of ``c`` with all coordinates ``<= bound``."""
    for x in itertools.product(range(bound + 1), repeat=c.t):
        if c.contains(x):
            yield x
