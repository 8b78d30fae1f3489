"""Motivic, p-adic and topological zeta functions of cone integrals and Lie rings."""

from .cone_geometry import ConeSpec, Decomposition, decompose, extreme_rays, lattice_membership
from .cone_integral import (
    ConeIntegralData,
    ResolutionData,
    assemble_geom,
    cone_of,
    direct_eval,
    edge_constants,
    monomial_resolution,
    zeta_from_geom,
)
from .exact_algebra import L, LaurentPoly, MotivicRational, RationalFunctionS, mr_equal, mr_series, mr_specialize
from .lie_input import LieAlgebraZ, gen_conditions, monomiality_report
from .oracle import count_subalgebras, count_submodules_fqt, enumerate_sublattices
from .topological import top_zeta_direct, top_zeta_limit

__version__ = "0.1.0"
