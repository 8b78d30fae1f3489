"""Built-in example algebras, their shipped data and the closed forms they must reproduce."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from typing import Callable

from .cone_integral import (
    ConeIntegralData,
    ResolutionData,
    load_resolution,
    monomial_resolution,
)
from .exact_algebra import LaurentPoly, MotivicRational, RationalFunctionS, binomial, geometric
from .lie_input import LieAlgebraZ

__all__ = ["Example", "EXAMPLE_NAMES", "get_example", "data_path", "read_data", "UnknownExample"]


class UnknownExample(KeyError):
    pass


def data_path(*parts: str):
    path = resources.files("conezeta").joinpath("data")
    for part in parts:
        path = path.joinpath(part)
    return path


def read_data(*parts: str) -> dict:
    return json.loads(data_path(*parts).read_text())


def _prod(xs, start):
    return reduce(lambda a, b: a * b, xs, start)


def _lm(k: int) -> LaurentPoly:
    return LaurentPoly.mono(-k)


def _one_minus(k: int) -> LaurentPoly:
    """``1 - L^-k``."""
    return 1 - _lm(k)


@dataclass(frozen=True)
class Example:
    """A rank-``d`` algebra with its triangular cone data and printed closed forms.

    ``zgeom`` is the algebra-level ``Z_geom`` (triangular prefactor included),
    ``ztop`` the topological zeta function of the cone integral.
    """

    name: str
    d: int
    lie: LieAlgebraZ
    cone: ConeIntegralData
    charts: tuple[ResolutionData, ...]
    zgeom: MotivicRational
    P: MotivicRational
    ztop: RationalFunctionS
    zgeom_den: tuple[tuple[int, int], ...]
    P_den: tuple[tuple[int, int], ...]
    oracle_primes: tuple[int, ...]
    table: tuple[tuple[int, int, LaurentPoly, frozenset], ...] = ()
    edge_targets: frozenset = frozenset()
    notes: str = field(default="", compare=False)

    @property
    def slug(self) -> str:
        return self.name


def _abelian(d: int) -> Example:
    cone = ConeIntegralData.from_json(read_data("cone", f"abelian_{d}.json"))
    num = _prod((_one_minus(i) for i in range(1, d + 1)), LaurentPoly.const(1))
    zgeom = _prod((geometric(1, i) for i in range(1, d + 1)), MotivicRational.const(num))
    P = _prod((geometric(1, -i) for i in range(d)), MotivicRational.const(1))
    ztop = RationalFunctionS.reciprocal_product([(1, i) for i in range(1, d + 1)])
    return Example(
        f"abelian_{d}",
        d,
        LieAlgebraZ.from_json(read_data("lie", f"abelian_{d}.json")),
        cone,
        (monomial_resolution(cone),),
        zgeom,
        P,
        ztop,
        tuple((1, i) for i in range(1, d + 1)),
        tuple((1, -i) for i in range(d)),
        (2, 3),
    )


# rows of the printed table: (|I|, |M|, class, edge vectors of the piece)
_R1, _R2, _R3, _R4 = (1, 0, 1), (1, 0, 0), (0, 1, 1), (0, 1, 0)
_HEIS_TABLE = (
    (0, 0, "(L-1)^3", ()),
    (2, 1, "L-1", (_R1,)),
    (1, 1, "(L-1)^2", (_R2,)),
    (2, 1, "L-1", (_R3,)),
    (1, 1, "(L-1)^2", (_R4,)),
    (2, 2, "L-1", (_R1, _R2)),
    (3, 2, "1", (_R1, _R3)),
    (3, 2, "1", (_R2, _R3)),
    (2, 2, "L-1", (_R2, _R4)),
    (2, 2, "L-1", (_R3, _R4)),
    (3, 3, "1", (_R1, _R2, _R3)),
    (3, 3, "1", (_R2, _R3, _R4)),
)


def _heisenberg() -> Example:
    cone = ConeIntegralData.from_json(read_data("cone", "heisenberg.json"))
    num = _one_minus(1) * _one_minus(2) * _one_minus(3)
    den = ((1, 3), (1, 2), (2, 4), (2, 3))
    zgeom = _prod((geometric(*f) for f in den), MotivicRational.const(num) * binomial(3, 6))
    P_den = ((1, 0), (1, -1), (2, -2), (2, -3))
    P = _prod((geometric(*f) for f in P_den), binomial(3, -3))
    ztop = RationalFunctionS.reciprocal_product([(1, 3), (1, 2), (2, 3)], Fraction(3, 2))
    table = tuple(
        (i, m, LaurentPoly.parse(c), frozenset(rays)) for i, m, c, rays in _HEIS_TABLE
    )
    return Example(
        "heisenberg",
        3,
        LieAlgebraZ.from_json(read_data("lie", "heisenberg.json")),
        cone,
        (monomial_resolution(cone),),
        zgeom,
        P,
        ztop,
        den,
        P_den,
        (2, 3),
        table,
        frozenset({(2, 4), (1, 3), (2, 3), (1, 2)}),
        notes="the printed ray list gives R3 = (1,0,1), a duplicate of R1; its B3 = 3 and the ray enumeration both give (0,1,1)",
    )


def _sl2() -> Example:
    cone = ConeIntegralData.from_json(read_data("cone", "sl2.json"))
    charts = tuple(load_resolution(read_data("resolution", "sl2.json")))
    num = _one_minus(1) * _one_minus(2) * _one_minus(3)
    den = ((1, 3), (1, 2), (2, 4), (2, 5))
    zgeom = _prod((geometric(*f) for f in den), MotivicRational.const(num) * binomial(3, 8))
    P_den = ((1, 0), (1, -1), (2, -2), (2, -1))
    P = _prod((geometric(*f) for f in P_den), binomial(3, -1))
    ztop = RationalFunctionS((8, 3), [(1, 3), (1, 2), (1, 2), (2, 5)], Fraction(1, 2))
    return Example(
        "sl2",
        3,
        LieAlgebraZ.from_json(read_data("lie", "sl2.json")),
        cone,
        charts,
        zgeom,
        P,
        ztop,
        den,
        P_den,
        # the closed form only holds for odd p
        (3, 5),
        notes="closed forms hold for odd p",
    )


_BUILDERS: dict[str, Callable[[], Example]] = {
    "abelian_1": lambda: _abelian(1),
    "abelian_2": lambda: _abelian(2),
    "abelian_3": lambda: _abelian(3),
    "heisenberg": _heisenberg,
    "sl2": _sl2,
}
EXAMPLE_NAMES = ("abelian", "heisenberg", "sl2")


def get_example(name: str, rank: int | None = None) -> Example:
    """Look up a built-in example; ``abelian`` takes its rank from ``rank`` (default 2)."""
    key = name.lower().replace("-", "_")
    if key == "abelian":
        key = f"abelian_{rank if rank is not None else 2}"
    if key not in _BUILDERS:
        raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}")
    ex = _BUILDERS[key]()
    if rank is not None and rank != ex.d:
        raise ValueError(f"example {ex.name} has rank {ex.d}, not {rank}")
    return ex
