import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conezeta._linalg import coordinates, elementary_divisors, nullspace, primitive, rank
from conezeta.cone_geometry import (
    ConeSpec,
    Decomposition,
    decompose,
    dimension_counts,
    extreme_rays,
    lattice_membership,
    lattice_points,
)

HEIS = ConeSpec(3, [((0, 0, 1), (1, 1, 0))])


def brute_force_rays(c: ConeSpec) -> list:
    """Extreme rays as cone points where t-1 independent constraints are tight."""
    hs = c.constraints()
    found = set()
    for rows in itertools.combinations(hs, c.t - 1):
        if rank(rows) != c.t - 1:
            continue
        (v,) = nullspace(rows, c.t) if c.t > 1 else ([Fraction(1)],)
        for sign in (1, -1):
            den = 1
            for x in v:
                den = den * x.denominator
            w = primitive([int(sign * x * den) for x in v])
            if any(w) and c.contains(w):
                found.add(w)
    return sorted(found)


def pieces_containing(d: Decomposition, x) -> list:
    """Every piece whose open simplicial cone contains ``x``, with coefficients."""
    # nonnegative generators: an open piece only holds points of support I
    support = tuple(i + 1 for i, v in enumerate(x) if v)
    hits = []
    for k, p in enumerate(d.pieces):
        if p.I != support:
            continue
        if not p.M:
            if not any(x):
                hits.append((k, ()))
            continue
        lam = coordinates(d.generators(k), x)
        if lam is not None and all(c > 0 for c in lam):
            hits.append((k, tuple(lam)))
    return hits


def check_partition(c: ConeSpec, d: Decomposition, bound: int) -> None:
    for x in lattice_points(c, bound):
        hits = pieces_containing(d, x)
        assert len(hits) == 1, (x, hits)
        k, lam = hits[0]
        assert all(v.denominator == 1 for v in lam)
        recon = [sum(int(l) * e[i] for l, e in zip(lam, d.generators(k))) for i in range(c.t)]
        assert tuple(recon) == tuple(x)
        assert lattice_membership(d, x) == (k, tuple(int(v) for v in lam))


def check_invariants(c: ConeSpec, d: Decomposition) -> None:
    assert d.pieces[0].M == () and d.pieces[0].I == ()
    for e in d.edges:
        assert any(e) and primitive(e) == tuple(e)
        assert c.contains(e)
    for k, p in enumerate(d.pieces):
        gens = d.generators(k)
        if not gens:
            continue
        assert rank(gens) == len(gens)
        assert p.I == tuple(sorted({i + 1 for g in gens for i, x in enumerate(g) if x}))
        assert elementary_divisors(gens) == [1] * len(gens)
    dims = [p.dim for p in d.pieces]
    assert dims == sorted(dims)


# -- examples ---------------------------------------------------------------


def test_rays_full_quadrant():
    assert extreme_rays(ConeSpec(3)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_rays_heisenberg():
    assert set(extreme_rays(HEIS)) == {(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)}
    assert extreme_rays(HEIS) == sorted(extreme_rays(HEIS))


def test_rays_half_quadrant():
    assert extreme_rays(ConeSpec(2, [((1, 0), (0, 1))])) == [(0, 1), (1, 1)]


def test_decompose_full_quadrant():
    d = decompose(ConeSpec(3))
    assert len(d.pieces) == 8
    assert dimension_counts(d) == {0: 1, 1: 3, 2: 3, 3: 1}


def test_decompose_ray():
    d = decompose(ConeSpec(1))
    assert len(d.pieces) == 2 and d.edges == ((1,),)


def test_decompose_heisenberg_matches_table_shape():
    d = decompose(HEIS)
    assert len(d.pieces) == 12
    shape = sorted((len(p.I), len(p.M)) for p in d.pieces)
    expected = [(0, 0), (1, 1), (1, 1), (2, 1), (2, 1), (2, 2), (2, 2), (2, 2), (3, 2), (3, 2), (3, 3), (3, 3)]
    assert shape == expected
    rays = {frozenset(d.generators(k)) for k in range(len(d.pieces)) if len(d.pieces[k].M) == 3}
    assert rays == {
        frozenset({(1, 0, 1), (1, 0, 0), (0, 1, 1)}),
        frozenset({(1, 0, 0), (0, 1, 1), (0, 1, 0)}),
    }


def test_membership_examples():
    d = decompose(HEIS)
    assert lattice_membership(d, (0, 0, 0)) == (0, ())
    k, lam = lattice_membership(d, (1, 1, 1))
    assert dict(zip(d.generators(k), lam)) == {(1, 0, 0): 1, (0, 1, 1): 1}
    k, lam = lattice_membership(d, (2, 0, 1))
    assert dict(zip(d.generators(k), lam)) == {(1, 0, 0): 1, (1, 0, 1): 1}


def test_membership_rejects_outside_points():
    d = decompose(HEIS)
    with pytest.raises(ValueError):
        lattice_membership(d, (0, 0, 1))
    with pytest.raises(ValueError):
        lattice_membership(d, (1, -1, 0))


def test_spec_rejects_negative_exponents():
    with pytest.raises(ValueError):
        ConeSpec(2, [((-1, 0), (0, 1))])


@pytest.mark.parametrize(
    "cone",
    [ConeSpec(1), ConeSpec(2), ConeSpec(3), HEIS, ConeSpec(2, [((1, 0), (0, 1))])],
)
def test_partition_up_to_six(cone):
    d = decompose(cone)
    check_invariants(cone, d)
    check_partition(cone, d, 6)


def test_non_unimodular_cone_is_subdivided():
    # rays (1,2) and (2,1) span a cone of index 3
    cone = ConeSpec(2, [((0, 1), (2, 0)), ((1, 0), (0, 2))])
    assert extreme_rays(cone) == [(1, 2), (2, 1)]
    d = decompose(cone)
    assert (1, 1) in d.edges
    check_invariants(cone, d)
    check_partition(cone, d, 6)


def test_rays_equal_one_dimensional_pieces_without_subdivision():
    for cone in (ConeSpec(3), HEIS, ConeSpec(2, [((1, 0), (0, 1))])):
        d = decompose(cone)
        assert sorted(d.generators(k)[0] for k, p in enumerate(d.pieces) if p.dim == 1) == extreme_rays(cone)


def test_decompose_is_deterministic():
    cone = ConeSpec(4, [((0, 0, 1, 1), (1, 1, 0, 0)), ((1, 0, 0, 0), (0, 2, 0, 1))])
    assert decompose(cone).dumps() == decompose(cone).dumps()
    assert decompose(cone, seed=3).dumps() == decompose(cone, seed=3).dumps()


def test_json_roundtrip():
    d = decompose(HEIS)
    assert Decomposition.from_json(d.to_json()) == d
    assert ConeSpec.from_json(HEIS.to_json()) == HEIS


# -- random monomial cones --------------------------------------------------


@st.composite
def cone_specs(draw):
    t = draw(st.integers(1, 4))
    vec = st.lists(st.integers(0, 3), min_size=t, max_size=t)
    ineqs = draw(st.lists(st.tuples(vec, vec), max_size=2))
    return ConeSpec(t, ineqs)


@given(cone_specs())
def test_rays_agree_with_vertex_enumeration(cone):
    assert extreme_rays(cone) == brute_force_rays(cone)


@given(cone_specs(), st.integers(0, 5))
def test_random_cones_partition_and_unimodularity(cone, seed):
    d = decompose(cone, seed=seed)
    check_invariants(cone, d)
    check_partition(cone, d, 4)
    original = set(extreme_rays(cone))
    one_dim = {d.generators(k)[0] for k, p in enumerate(d.pieces) if p.dim == 1}
    assert original <= one_dim
