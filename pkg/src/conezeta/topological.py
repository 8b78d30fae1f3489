"""Topological zeta functions, the L -> 1 shadow of the explicit formula."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cone_geometry import Decomposition
from .cone_integral import EdgeConstants, ResolutionData, explicit_formula
from .exact_algebra import L, MotivicRational, RationalFunctionS

__all__ = ["TopZeta", "ZERO", "top_zeta_direct", "top_zeta_limit", "top_zeta_of_charts"]


@dataclass(frozen=True)
class TopZeta:
    value: RationalFunctionS

    def __add__(self, other: "TopZeta") -> "TopZeta":
        return TopZeta(self.value + other.value)

    def __call__(self, s):
        return self.value(s)

    def __str__(self):
        return str(self.value)


ZERO = TopZeta(RationalFunctionS((0,)))
_L_MINUS_1 = L - 1


def top_zeta_direct(r: ResolutionData, d: Decomposition, e: EdgeConstants) -> TopZeta:
    """Sum over pieces with ``|I_k| = |M_k|`` of ``chi(E°_I) / prod(A_j s + B_j)``."""
    total = RationalFunctionS((0,))
    for piece in d.pieces:
        if len(piece.I) != len(piece.M):
            continue
        st = r.stratum(piece.I)
        if st.euler is None:
            raise ValueError(f"euler number required for stratum I = {list(piece.I)}")
        if st.euler:
            total = total + RationalFunctionS.reciprocal_product((e.pair(j) for j in piece.M), st.euler)
    return TopZeta(total)


def top_zeta_limit(z: MotivicRational) -> TopZeta:
    """Structural ``L -> 1`` limit of an assembled explicit formula.

    A term ``c(L) * prod T^A L^-B / (1 - T^A L^-B)`` with ``n`` factors tends
    to ``(c / (L-1)^n)(1) * prod 1/(A s + B)`` when ``c`` vanishes to order
    exactly ``n`` at ``L = 1`` and to zero when the order is higher.
    """
    total = RationalFunctionS((0,))
    for term in z.terms:
        meta = term.meta
        if meta is None:
            raise ValueError("term carries no piece metadata; pass the output of assemble_geom")
        if meta.size_I < meta.size_M:
            raise ValueError(f"corrupted term: |I| = {meta.size_I} < |M| = {meta.size_M}")
        n = len(term.factors)
        k = term.coeff.order_at_one()
        if k > n:
            continue
        if k < n:
            raise ValueError(f"term has a pole at L = 1 (order {k} < {n} factors)")
        lead_val = (term.coeff.exact_div(_L_MINUS_1**n))(1)
        if term.symbol is not None:
            # an opaque class only contributes its euler number
            if meta.euler is None:
                raise ValueError(f"euler number required for symbolic stratum {meta.stratum}")
            lead_val *= meta.euler
        if lead_val:
            total = total + RationalFunctionS.reciprocal_product(term.factors, lead_val)
    return TopZeta(total)


def top_zeta_of_charts(charts: Sequence[ResolutionData]) -> TopZeta:
    """``Z_top`` of a (possibly multi-chart) resolution."""
    total = ZERO
    for r in charts:
        res = explicit_formula(r)
        total = total + top_zeta_direct(r, res.decomposition, res.constants)
    return total

