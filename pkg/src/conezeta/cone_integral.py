"""Cone integral data, resolution data and the explicit formula.

The motivic cone integral of a resolution with divisors ``E_1 .. E_t`` is

    sum_k (L-1)^|I_k| L^-m [E°_{I_k}] prod_{j in M_k} T^A_j L^-B_j / (1 - T^A_j L^-B_j)

over the open pieces ``R_k`` of a unimodular decomposition of the cone
``{x >= 0 : Nf_i . x <= Ng_i . x}``, with ``T = L^-s``.  A resolution may be
given as several charts covering disjoint parts of the domain; their
contributions simply add.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from .cone_geometry import ConeSpec, Decomposition, decompose
from .exact_algebra import L, LaurentPoly, MotivicRational, MotivicTerm, PieceMeta, geometric

__all__ = [
    "ConeIntegralData",
    "Stratum",
    "ResolutionData",
    "EdgeConstants",
    "monomial_resolution",
    "cone_of",
    "edge_constants",
    "assemble_geom",
    "explicit_formula",
    "cone_zeta_geom",
    "triangular_prefactor",
    "lie_zeta_geom",
    "zeta_from_geom",
    "direct_eval",
    "direct_eval_bound",
    "load_resolution",
]


# ---------------------------------------------------------------------------
# Cone integral data
# ---------------------------------------------------------------------------


def _is_monomial(rec) -> bool:
    return isinstance(rec, Mapping)


@dataclass(frozen=True)
class ConeIntegralData:
    """Polynomials ``f0, g0`` and condition pairs ``ord f_i <= ord g_i``.

    Monomials are ``{variable: exponent}`` dicts.  Any other polynomial is
    kept as its source string and only serves as documentation; such data
    needs user-supplied resolution data.
    """

    variables: tuple[str, ...]
    f0: object
    g0: object
    conditions: tuple[tuple[object, object], ...] = ()
    notes: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "conditions", tuple((f, g) for f, g in self.conditions))
        known = set(self.variables)
        for rec in self._records():
            if _is_monomial(rec):
                bad = set(rec) - known
                if bad:
                    raise ValueError(f"unknown variables {sorted(bad)}")
                if any(int(e) < 0 for e in rec.values()):
                    raise ValueError("monomial exponents must be non-negative")

    def _records(self) -> Iterator[object]:
        yield self.f0
        yield self.g0
        for f, g in self.conditions:
            yield f
            yield g

    @property
    def m(self) -> int:
        return len(self.variables)

    @property
    def monomial(self) -> bool:
        return all(_is_monomial(r) for r in self._records())

    def exponents(self, rec) -> tuple[int, ...]:
        if not _is_monomial(rec):
            raise ValueError(f"not a monomial: {rec!r}")
        return tuple(int(rec.get(v, 0)) for v in self.variables)

    def to_json(self) -> dict:
        def enc(rec):
            return {v: int(e) for v, e in rec.items() if e} if _is_monomial(rec) else rec

        out = {
            "variables": list(self.variables),
            "f0": enc(self.f0),
            "g0": enc(self.g0),
            "conditions": [{"f": enc(f), "g": enc(g)} for f, g in self.conditions],
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConeIntegralData":
        return cls(
            tuple(data["variables"]),
            data["f0"],
            data["g0"],
            tuple((c["f"], c["g"]) for c in data.get("conditions", [])),
            data.get("notes", ""),
        )


# ---------------------------------------------------------------------------
# Resolution data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    """Class of ``E°_I``: ``cls`` times an optional symbolic class ``symbol``."""

    cls: LaurentPoly
    euler: int | None = None
    symbol: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "cls", LaurentPoly.coerce(self.cls))
        if self.symbol is None:
            ev = self.cls(1)
            if self.euler is None:
                object.__setattr__(self, "euler", int(ev))
            elif ev != self.euler:
                raise ValueError(f"euler number {self.euler} differs from class at L=1 ({ev})")

    def label(self) -> str:
        """Class as text, powers of ``L - 1`` kept factored."""
        k = self.cls.order_at_one() if not self.cls.is_zero() else -1
        if k >= 0 and self.cls == (L - 1) ** k:
            base = "1" if k == 0 else ("L - 1" if k == 1 else f"(L - 1)^{k}")
        else:
            base = str(self.cls)
        if self.symbol is None:
            return base
        return f"[{self.symbol}]" if base == "1" else f"({base})*[{self.symbol}]"

    def to_json(self) -> dict:
        out: dict = {"class": str(self.cls)}
        if self.symbol is not None:
            out["symbol"] = self.symbol
        if self.euler is not None:
            out["euler"] = self.euler
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Stratum":
        return cls(LaurentPoly.parse(str(data.get("class", "1"))), data.get("euler"), data.get("symbol"))


class _CoCardinalityStrata(Mapping):
    """Strata of the coordinate hyperplane arrangement in ``A^m``: ``(L-1)^(m-|I|)``."""

    def __init__(self, m: int):
        self.m = m

    def __getitem__(self, key):
        key = tuple(key)
        if not all(1 <= i <= self.m for i in key) or len(set(key)) != len(key):
            raise KeyError(key)
        k = len(key)
        return Stratum((L - 1) ** (self.m - k), int(k == self.m))

    def __iter__(self):
        for k in range(self.m + 1):
            yield from itertools.combinations(range(1, self.m + 1), k)

    def __len__(self):
        return 2**self.m


@dataclass(frozen=True)
class ResolutionData:
    """Numerical data of one chart of an embedded resolution.

    ``Nf[j][i]`` and ``Ng[j][i]`` are the multiplicities of ``f_i``, ``g_i``
    along divisor ``j`` (``i = 0`` is the integrand pair), ``nu[j]`` the
    discrepancy plus one, and ``strata`` maps sorted 1-based divisor index
    tuples to :class:`Stratum`.
    """

    ambient_dim: int
    Nf: tuple[tuple[int, ...], ...]
    Ng: tuple[tuple[int, ...], ...]
    nu: tuple[int, ...]
    strata: Mapping
    divisors: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        Nf = tuple(tuple(int(x) for x in row) for row in self.Nf)
        Ng = tuple(tuple(int(x) for x in row) for row in self.Ng)
        nu = tuple(int(x) for x in self.nu)
        if not (len(Nf) == len(Ng) == len(nu)):
            raise ValueError("Nf, Ng and nu must have one entry per divisor")
        widths = {len(r) for r in Nf + Ng}
        if len(widths) > 1:
            raise ValueError("every divisor needs multiplicities for the same list of polynomials")
        if any(x < 0 for r in Nf + Ng for x in r) or any(v < 1 for v in nu):
            raise ValueError("multiplicities must be non-negative and nu positive")
        object.__setattr__(self, "Nf", Nf)
        object.__setattr__(self, "Ng", Ng)
        object.__setattr__(self, "nu", nu)
        if not isinstance(self.strata, _CoCardinalityStrata):
            object.__setattr__(self, "strata", {tuple(sorted(k)): v for k, v in self.strata.items()})
        if () not in self.strata:
            raise ValueError("strata must include the empty index set")

    @property
    def t(self) -> int:
        return len(self.nu)

    @property
    def n_conditions(self) -> int:
        return (len(self.Nf[0]) - 1) if self.Nf else 0

    def stratum(self, I: Sequence[int]) -> Stratum:
        key = tuple(sorted(I))
        try:
            return self.strata[key]
        except KeyError:
            raise KeyError(f"no stratum class for I = {list(key)}") from None

    def to_json(self) -> dict:
        out = {
            "ambient_dim": self.ambient_dim,
            "Nf": [list(r) for r in self.Nf],
            "Ng": [list(r) for r in self.Ng],
            "nu": list(self.nu),
            "strata": [{"I": list(k), **s.to_json()} for k, s in self.strata.items()],
        }
        if self.divisors:
            out["divisors"] = list(self.divisors)
        return out

    @classmethod
    def from_json(cls, data: dict, ambient_dim: int | None = None) -> "ResolutionData":
        strata = {tuple(sorted(s["I"])): Stratum.from_json(s) for s in data["strata"]}
        return cls(
            int(data.get("ambient_dim", ambient_dim)),
            tuple(map(tuple, data["Nf"])),
            tuple(map(tuple, data["Ng"])),
            tuple(data["nu"]),
            strata,
            tuple(data.get("divisors", ())),
        )


def load_resolution(source) -> list[ResolutionData]:
    """Read resolution data (a single chart or ``{"charts": [...]}``) from a path or dict."""
    data = source if isinstance(source, dict) else json.loads(Path(source).read_text())
    if "charts" in data:
        m = data.get("ambient_dim")
        return [ResolutionData.from_json(c, m) for c in data["charts"]]
    return [ResolutionData.from_json(data)]


@dataclass(frozen=True)
class EdgeConstants:
    A: tuple[int, ...]
    B: tuple[int, ...]

    def pair(self, j: int) -> tuple[int, int]:
        """Constants of edge ``j`` (1-based)."""
        return self.A[j - 1], self.B[j - 1]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.A, self.B))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def monomial_resolution(d: ConeIntegralData) -> ResolutionData:
    """The coordinate hyperplanes already resolve monomial data."""
    if not d.monomial:
        raise ValueError("monomial_resolution needs monomial cone integral data")
    polys = [d.f0] + [f for f, _ in d.conditions]
    gpolys = [d.g0] + [g for _, g in d.conditions]
    fe = [d.exponents(p) for p in polys]
    ge = [d.exponents(p) for p in gpolys]
    Nf = tuple(tuple(e[j] for e in fe) for j in range(d.m))
    Ng = tuple(tuple(e[j] for e in ge) for j in range(d.m))
    return ResolutionData(d.m, Nf, Ng, (1,) * d.m, _CoCardinalityStrata(d.m), d.variables)


def cone_of(r: ResolutionData) -> ConeSpec:
    ineqs = []
    for i in range(1, r.n_conditions + 1):
        ineqs.append((tuple(row[i] for row in r.Nf), tuple(row[i] for row in r.Ng)))
    return ConeSpec(r.t, tuple(ineqs))


def edge_constants(r: ResolutionData, d: Decomposition) -> EdgeConstants:
    if d.t != r.t:
        raise ValueError(f"decomposition lives in dimension {d.t}, resolution has {r.t} divisors")
    A, B = [], []
    for q in d.edges:
        A.append(sum(x * r.Nf[j][0] for j, x in enumerate(q)))
        B.append(sum(x * (r.Ng[j][0] + r.nu[j]) for j, x in enumerate(q)))
    return EdgeConstants(tuple(A), tuple(B))


def assemble_geom(r: ResolutionData, d: Decomposition, e: EdgeConstants) -> MotivicRational:
    """Sum of the explicit-formula terms, one per open piece."""
    terms = []
    for k, piece in enumerate(d.pieces):
        nI, nM = len(piece.I), len(piece.M)
        if nI < nM:
            raise ValueError(f"piece {d.label(k)} has |I| = {nI} < |M| = {nM}")
        st = r.stratum(piece.I)
        coeff = (L - 1) ** nI * st.cls
        coeff = coeff.shift(-r.ambient_dim)
        meta = PieceMeta(nI, nM, st.label(), st.euler)
        factors = tuple(e.pair(j) for j in piece.M)
        terms.append(MotivicTerm(coeff, factors, symbol=st.symbol, meta=meta))
    return MotivicRational(terms)


@dataclass(frozen=True)
class ChartResult:
    resolution: ResolutionData
    decomposition: Decomposition
    constants: EdgeConstants
    value: MotivicRational


def explicit_formula(r: ResolutionData, seed: int | None = None) -> ChartResult:
    """Decompose the cone of ``r`` and assemble its motivic cone integral."""
    d = decompose(cone_of(r), seed=seed)
    e = edge_constants(r, d)
    return ChartResult(r, d, e, assemble_geom(r, d, e))


def cone_zeta_geom(charts: Sequence[ResolutionData], seed: int | None = None) -> MotivicRational:
    return sum((explicit_formula(r, seed).value for r in charts), MotivicRational())


def triangular_prefactor(d: int) -> LaurentPoly:
    """``prod_{i=1..d} (1 - L^-i) / (1 - L^-1)^d`` as a Laurent polynomial."""
    out = LaurentPoly.const(1)
    for i in range(1, d + 1):
        out = out * LaurentPoly({-k: 1 for k in range(i)})
    return out


def lie_zeta_geom(cone_value: MotivicRational, d: int) -> MotivicRational:
    """Turn the triangular cone integral of a rank-``d`` algebra into ``Z_geom``."""
    return cone_value * MotivicRational.const(triangular_prefactor(d))


def zeta_from_geom(z: MotivicRational, d: int) -> MotivicRational:
    """``P(T) = prod_{i=1..d} (1 - L^-i)^-1 * Z_geom(s - d)``."""
    out = z.shift_s(-d)
    for i in range(1, d + 1):
        out = out * geometric(0, i)
    return out


# ---------------------------------------------------------------------------
# Direct lattice sum
# ---------------------------------------------------------------------------


def direct_eval(d: ConeIntegralData, p, cap: int, order: int | None = None) -> list[Fraction]:
    """Truncated lattice sum of the p-adic cone integral, coefficients of ``T^0 .. T^order``.

    Sums ``(1-1/p)^m p^(-|a| - g0.a) T^(f0.a)`` over cone points with every
    ``a_i <= cap``.  See :func:`direct_eval_bound` for the truncation error.
    """
    if not d.monomial:
        raise ValueError("direct_eval needs monomial data")
    order = cap if order is None else order
    p = Fraction(p)
    f0 = d.exponents(d.f0)
    w = [1 + g for g in d.exponents(d.g0)]
    conds = [(d.exponents(f), d.exponents(g)) for f, g in d.conditions]
    m = d.m
    out = [Fraction(0)] * (order + 1)
    inv = 1 / p
    a = [0] * m

    def rec(i: int, fdeg: int, weight: Fraction):
        if i == m:
            for nf, ng in conds:
                if sum(x * y for x, y in zip(nf, a)) > sum(x * y for x, y in zip(ng, a)):
                    return
            out[fdeg] += weight
            return
        step = inv ** w[i]
        wt = weight
        for v in range(cap + 1):
            deg = fdeg + f0[i] * v
            if deg > order:
                break
            a[i] = v
            rec(i + 1, deg, wt)
            wt *= step
        a[i] = 0

    rec(0, 0, Fraction(1))
    scale = (1 - inv) ** m
    return [c * scale for c in out]


def direct_eval_bound(d: ConeIntegralData, p, cap: int, order: int | None = None) -> Fraction:
    """Upper bound for ``|exact - direct_eval|`` on each coefficient up to ``order``.

    Variables with positive ``f0`` exponent are never truncated while
    ``order <= cap``; each of the others loses at most ``p^-(cap+1)``.
    """
    order = cap if order is None else order
    f0 = d.exponents(d.f0)
    if order > cap and any(f0):
        raise ValueError("bound only holds for order <= cap")
    free = sum(1 for x in f0 if x == 0)
    return Fraction(free) / Fraction(p) ** (cap + 1)
