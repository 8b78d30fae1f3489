"""Lie rings on Z^d and the order conditions describing their subalgebras.

A lattice spanned by the rows ``m_1 .. m_d`` of a matrix ``M`` over a
valuation ring is closed under the bracket iff every coordinate of
``[m_i, m_j]`` with respect to those rows is integral, i.e. iff
``ord det M <= ord g_ijk`` where ``g_ijk`` is the k-th entry of
``[m_i, m_j] * adj(M)``.  Ideals replace ``m_j`` by the basis vector ``e_j``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .cone_integral import ConeIntegralData

__all__ = [
    "Poly",
    "LieAlgebraZ",
    "ConditionSet",
    "ReducedCondition",
    "MonomialityReport",
    "gen_conditions",
    "monomiality_report",
    "load_lie",
    "triangular_cone_data",
    "adjugate",
]


# ---------------------------------------------------------------------------
# Sparse integer polynomials in named variables
# ---------------------------------------------------------------------------

Exp = tuple[int, ...]


class Poly:
    """Integer polynomial, a dict from exponent tuples to nonzero coefficients."""

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Exp, int] | None = None):
        self.names = tuple(names)
        self.terms = {e: int(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, names, c: int) -> "Poly":
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def var(cls, names, name: str) -> "Poly":
        e = [0] * len(names)
        e[names.index(name)] = 1
        return cls(names, {tuple(e): 1})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("polynomials over different variables")
            return other
        return Poly.const(self.names, int(other))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[Exp, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.names, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.names, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> set[str]:
        return {self.names[i] for e in self.terms for i, x in enumerate(e) if x}

    def content(self) -> int:
        return reduce(gcd, (abs(c) for c in self.terms.values()), 0)

    def monomial_content(self) -> Exp:
        """Exponent of the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * len(self.names)
        return tuple(min(col) for col in zip(*self.terms))

    def div_monomial(self, e: Exp, c: int = 1) -> "Poly":
        out = {}
        for t, v in self.terms.items():
            q = tuple(a - b for a, b in zip(t, e))
            if min(q, default=0) < 0 or v % c:
                raise ArithmeticError("monomial does not divide")
            out[q] = v // c
        return Poly(self.names, out)

    def leading(self) -> tuple[Exp, int]:
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division (lexicographic leading terms)."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading()
        rem, quot = self, {}
        while not rem.is_zero():
            e, c = rem.leading()
            q = tuple(a - b for a, b in zip(e, le))
            if min(q, default=0) < 0 or c % lc:
                raise ArithmeticError("division is not exact")
            quot[q] = c // lc
            rem = rem - Poly(self.names, {q: c // lc}) * other
        return Poly(self.names, quot)

    def monomial_exponents(self) -> dict[str, int]:
        """The exponent dict of a monomial (coefficient ignored)."""
        if not self.is_monomial:
            raise ValueError("not a monomial")
        (e,) = self.terms
        return {self.names[i]: x for i, x in enumerate(e) if x}

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if x == 1 else f"{n}^{x}" for n, x in zip(self.names, e) if x
            )
            mag = abs(c)
            body = mono if mono and mag == 1 else (f"{mag}*{mono}" if mono else str(mag))
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    __repr__ = __str__


def _det(mat: list[list[Poly]], one: Poly) -> Poly:
    """Determinant: cofactor expansion for small sizes, Bareiss above."""
    n = len(mat)
    if n == 0:
        return one
    if n <= 4:
        if n == 1:
            return mat[0][0]
        total = one * 0
        for j in range(n):
            if mat[0][j].is_zero():
                continue
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            term = mat[0][j] * _det(minor, one)
            total = total + (term if j % 2 == 0 else -term)
        return total
    a = [list(r) for r in mat]
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return one * 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def adjugate(mat: list[list[Poly]], one: Poly) -> list[list[Poly]]:
    """``adj(M)`` with ``M * adj(M) = det(M) * I``."""
    n = len(mat)
    adj = [[one * 0 for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(mat) if k != i]
            cof = _det(minor, one)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


# ---------------------------------------------------------------------------
# Lie rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LieAlgebraZ:
    """Lie ring on ``Z^d`` given by ``c[(i, j)][k] = c_ij^k`` for ``i < j`` (1-based)."""

    d: int
    c: Mapping[tuple[int, int], Mapping[int, int]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        norm: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j), row in self.c.items():
            if not (1 <= i <= self.d and 1 <= j <= self.d) or i == j:
                raise ValueError(f"bad bracket index pair ({i}, {j})")
            sign = 1
            if i > j:
                # antisymmetry: [e_j, e_i] = -[e_i, e_j]
                i, j, sign = j, i, -1
            target = norm.setdefault((i, j), {})
            for k, v in row.items():
                if not 1 <= int(k) <= self.d:
                    raise ValueError(f"bad bracket target {k}")
                target[int(k)] = target.get(int(k), 0) + sign * int(v)
        clean = {key: {k: v for k, v in row.items() if v} for key, row in norm.items()}
        object.__setattr__(self, "c", {k: v for k, v in sorted(clean.items()) if v})

    def const(self, i: int, j: int, k: int) -> int:
        if i == j:
            return 0
        if i < j:
            return self.c.get((i, j), {}).get(k, 0)
        return -self.c.get((j, i), {}).get(k, 0)

    def bracket(self, u: Sequence, v: Sequence) -> list:
        """Bracket of coordinate vectors (entries may be ints or polynomials)."""
        zero = u[0] * 0 if u else 0
        out = [zero for _ in range(self.d)]
        for (i, j), row in self.c.items():
            coef = u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1]
            if coef == 0:
                continue
            for k, val in row.items():
                out[k - 1] = out[k - 1] + coef * val
        return out

    def structure_matrix(self, j: int) -> list[list[int]]:
        """``C_j`` with ``v * C_j = [v, e_j]``."""
        return [[self.const(r, j, k) for k in range(1, self.d + 1)] for r in range(1, self.d + 1)]

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        basis = [[int(i == j) for j in range(self.d)] for i in range(self.d)]
        bad = []
        for i, j, k in itertools.combinations(range(self.d), 3):
            x, y, z = basis[i], basis[j], basis[k]
            s = [
                a + b + c
                for a, b, c in zip(
                    self.bracket(self.bracket(x, y), z),
                    self.bracket(self.bracket(y, z), x),
                    self.bracket(self.bracket(z, x), y),
                )
            ]
            if any(s):
                bad.append((i + 1, j + 1, k + 1))
        return bad

    def check_jacobi(self) -> None:
        bad = self.jacobi_violations()
        if bad:
            raise ValueError(f"Jacobi identity fails for basis triples {bad}")

    def is_abelian(self) -> bool:
        return not self.c

    def reversed_basis(self) -> "LieAlgebraZ":
        """The same ring with basis order ``e_d, .., e_1``."""
        r = lambda i: self.d + 1 - i
        return LieAlgebraZ(
            self.d,
            {(r(i), r(j)): {r(k): v for k, v in row.items()} for (i, j), row in self.c.items()},
            self.name,
        )

    def to_json(self) -> dict:
        out: dict = {
            "dim": self.d,
            "brackets": {f"{i},{j}": {str(k): v for k, v in row.items()} for (i, j), row in self.c.items()},
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebraZ":
        try:
            d = int(data["dim"])
            brackets = {}
            for key, row in data.get("brackets", {}).items():
                i, j = (int(x) for x in key.split(","))
                brackets[(i, j)] = {int(k): int(v) for k, v in row.items()}
        except (KeyError, ValueError, AttributeError) as exc:
            raise ValueError(f"malformed Lie algebra JSON: {exc}") from None
        return cls(d, brackets, data.get("name", ""))

    @classmethod
    def abelian(cls, d: int) -> "LieAlgebraZ":
        return cls(d, {}, f"abelian_{d}")


def load_lie(source) -> LieAlgebraZ:
    data = source if isinstance(source, dict) else json.loads(Path(source).read_text())
    return LieAlgebraZ.from_json(data)


# ---------------------------------------------------------------------------
# Condition polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionSet:
    """Conditions ``ord det_poly <= ord g`` for each ``g`` in ``conds``."""

    variables: tuple[str, ...]
    det_poly: Poly
    conds: tuple[tuple[tuple[int, int, int], Poly], ...]
    mode: str
    shape: str
    d: int

    def nonzero(self) -> list[tuple[tuple[int, int, int], Poly]]:
        return [(lab, g) for lab, g in self.conds if not g.is_zero()]


def _var_name(d: int, r: int, s: int) -> str:
    return f"m{r}{s}" if d < 10 else f"m{r}_{s}"


def matrix_variables(d: int, shape: str) -> tuple[str, ...]:
    if shape == "full":
        return tuple(_var_name(d, r, s) for r in range(1, d + 1) for s in range(1, d + 1))
    if shape == "triangular":
        return tuple(_var_name(d, r, s) for r in range(1, d + 1) for s in range(r, d + 1))
    raise ValueError(f"unknown shape {shape!r} (expected full or triangular)")


def gen_conditions(a: LieAlgebraZ, mode: str = "subalgebra", shape: str = "triangular") -> ConditionSet:
    """Raw condition polynomials of the subalgebra (or ideal) cone integral."""
    if mode in ("sub", "subalgebra"):
        mode = "subalgebra"
    elif mode != "ideal":
        raise ValueError(f"unknown mode {mode!r} (expected subalgebra or ideal)")
    a.check_jacobi()
    d = a.d
    names = matrix_variables(d, shape)
    one = Poly.const(names, 1)
    zero = one * 0
    M = [
        [Poly.var(names, _var_name(d, r, s)) if _var_name(d, r, s) in names else zero for s in range(1, d + 1)]
        for r in range(1, d + 1)
    ]
    if shape == "triangular":
        det = reduce(lambda x, y: x * y, (M[i][i] for i in range(d)), one)
        adj = adjugate(M, one)
    else:
        det = _det(M, one)
        adj = adjugate(M, one)
    conds = []
    if mode == "subalgebra":
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        vecs = {(i, j): a.bracket(M[i], M[j]) for i, j in pairs}
    else:
        basis = [[one if k == j else zero for k in range(d)] for j in range(d)]
        pairs = [(i, j) for i in range(d) for j in range(d)]
        vecs = {(i, j): a.bracket(M[i], basis[j]) for i, j in pairs}
    for i, j in pairs:
        v = vecs[(i, j)]
        for k in range(d):
            g = zero
            for r in range(d):
                if not v[r].is_zero() and not adj[r][k].is_zero():
                    g = g + v[r] * adj[r][k]
            conds.append(((i + 1, j + 1, k + 1), g))
    return ConditionSet(names, det, tuple(conds), mode, shape, d)


@dataclass(frozen=True)
class ReducedCondition:
    """``ord lhs <= ord rhs`` after cancelling a shared monomial and the integer content."""

    lhs: Poly
    rhs: Poly
    content: int
    sources: tuple[tuple[int, int, int], ...]

    @property
    def monomial(self) -> bool:
        return self.lhs.is_monomial and self.rhs.is_monomial

    def __str__(self):
        scale = f"{self.content}*" if self.content != 1 else ""
        rhs = f"{scale}({self.rhs})" if scale and not self.rhs.is_monomial else f"{scale}{self.rhs}"
        return f"v({self.lhs}) <= v({rhs})"


@dataclass(frozen=True)
class MonomialityReport:
    monomial_reducible: bool
    conditions: tuple[ReducedCondition, ...]
    dropped: int

    def to_json(self) -> dict:
        return {
            "monomial_reducible": self.monomial_reducible,
            "conditions": [
                {"condition": str(c), "monomial": c.monomial, "content": c.content, "sources": [list(s) for s in c.sources]}
                for c in self.conditions
            ],
            "dropped": self.dropped,
        }


def _sign_normal(p: Poly) -> Poly:
    return -p if p.leading()[1] < 0 else p


def monomiality_report(cs: ConditionSet) -> MonomialityReport:
    """Reduce and classify the nonzero conditions of ``cs``.

    Each condition loses the monomial factor it shares with ``det_poly`` and
    its integer content (a unit away from the primes dividing it).  Trivially
    satisfied conditions are dropped and duplicates merged.
    """
    det_mono = cs.det_poly.monomial_content()
    merged: dict[tuple[Poly, Poly, int], list] = {}
    dropped = 0
    for label, g in cs.nonzero():
        shared = tuple(min(a, b) for a, b in zip(det_mono, g.monomial_content()))
        lhs = cs.det_poly.div_monomial(shared)
        cont = g.content()
        rhs = _sign_normal(g.div_monomial(shared, cont))
        lhs = _sign_normal(lhs.div_monomial((0,) * len(shared), lhs.content()))
        if lhs == 1:
            dropped += 1
            continue
        if lhs.is_monomial and rhs.is_monomial:
            (le,), (re,) = lhs.terms, rhs.terms
            if all(x <= y for x, y in zip(le, re)):
                dropped += 1
                continue
        merged.setdefault((lhs, rhs, cont), []).append(label)
    conds = tuple(
        ReducedCondition(lhs, rhs, cont, tuple(labels))
        for (lhs, rhs, cont), labels in sorted(merged.items(), key=lambda kv: kv[1][0])
    )
    return MonomialityReport(all(c.monomial for c in conds), conds, dropped)


def triangular_cone_data(a: LieAlgebraZ, report: MonomialityReport | None = None) -> ConeIntegralData:
    """Monomial cone integral data of the triangular subalgebra integral.

    The integrand is ``|det|^s`` times the weight ``prod m_ii^(d-i)``; only
    diagonal entries and variables that occur in the reduced conditions are
    kept (the others integrate to one).
    """
    cs = gen_conditions(a, "subalgebra", "triangular")
    report = report or monomiality_report(cs)
    if not report.monomial_reducible:
        raise ValueError("condition set is not monomial-reducible; supply resolution data")
    if any(c.content != 1 for c in report.conditions):
        raise ValueError("conditions carry integer content; the monomial data would depend on p")
    d = a.d
    diag = [_var_name(d, i, i) for i in range(1, d + 1)]
    extra = sorted({v for c in report.conditions for v in c.lhs.support() | c.rhs.support()} - set(diag))
    variables = tuple(diag + extra)
    f0 = {v: 1 for v in diag}
    g0 = {v: d - i for i, v in enumerate(diag, start=1) if d - i}
    conds = tuple((c.lhs.monomial_exponents(), c.rhs.monomial_exponents()) for c in report.conditions)
    return ConeIntegralData(variables, f0, g0, conds, "derived from the triangular condition polynomials")
