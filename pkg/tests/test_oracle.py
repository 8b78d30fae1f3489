import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conezeta.examples import get_example
from conezeta.lie_input import LieAlgebraZ
from conezeta.oracle import (
    GF,
    count_subalgebras,
    count_sublattices_formula,
    count_submodules_fqt,
    enumerate_sublattices,
    is_hnf,
    thread_count,
)

HEIS = LieAlgebraZ(3, {(1, 2): {3: 1}})
SL2 = LieAlgebraZ(3, {(1, 2): {3: 1}, (1, 3): {1: -2}, (2, 3): {2: 2}})

# brute-force counts, frozen after cross-checking against the closed forms
FROZEN = {
    ("heisenberg", 2, "subalgebra"): [1, 3, 19, 43, 203],
    ("heisenberg", 3, "subalgebra"): [1, 4, 49, 157],
    ("heisenberg", 3, "ideal"): [1, 4, 13, 49],
    ("sl2", 3, "subalgebra"): [1, 4, 25, 85],
    ("sl2", 5, "subalgebra"): [1, 6, 61, 331],
    ("abelian_3", 2, "subalgebra"): [1, 7, 35, 155],
    ("abelian_3", 3, "subalgebra"): [1, 13, 130, 1210],
}
ALGEBRAS = {"heisenberg": HEIS, "sl2": SL2, "abelian_3": LieAlgebraZ.abelian(3)}


def sublattice_series(d, p, n):
    """T^n coefficient of prod_{i<d} 1/(1 - p^i T) by repeated convolution."""
    coeffs = [1] + [0] * n
    for i in range(d):
        geo = [p ** (i * k) for k in range(n + 1)]
        coeffs = [sum(coeffs[j] * geo[m - j] for j in range(m + 1)) for m in range(n + 1)]
    return coeffs[n]


def test_index_two_sublattices_of_the_plane():
    got = list(enumerate_sublattices(2, 2, 1))
    assert got == [((1, 0), (0, 2)), ((1, 1), (0, 2)), ((2, 0), (0, 1))]


def test_rank_one_has_a_single_sublattice():
    for p, n in [(2, 0), (3, 4), (5, 2)]:
        assert len(list(enumerate_sublattices(1, p, n))) == 1


def test_rank_three_index_four():
    # 1 + p + 2p^2 + p^3 + p^4 at p = 2
    assert len(list(enumerate_sublattices(3, 2, 2))) == 35 == sublattice_series(3, 2, 2)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_enumeration_matches_series(d, p):
    for n in range(5):
        mats = list(enumerate_sublattices(d, p, n))
        assert len(mats) == sublattice_series(d, p, n) == count_sublattices_formula(d, p, n)
        if p ** n <= 27:
            assert len(set(mats)) == len(mats)
            assert all(is_hnf(m) for m in mats)


def test_enumeration_is_lattice_canonical():
    # distinct HNFs span distinct lattices: compare sets of points in a box
    def span(m):
        pts = set()
        for c in itertools.product(range(-4, 5), repeat=3):
            v = tuple(sum(c[i] * m[i][j] for i in range(3)) for j in range(3))
            if all(0 <= x < 4 for x in v):
                pts.add(v)
        return frozenset(pts)

    mats = list(enumerate_sublattices(3, 2, 2))
    assert len({span(m) for m in mats}) == len(mats)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_counts(key):
    name, p, mode = key
    a = ALGEBRAS[name]
    assert [count_subalgebras(a, p, n, mode) for n in range(len(FROZEN[key]))] == FROZEN[key]


def test_spot_values():
    assert count_subalgebras(LieAlgebraZ.abelian(2), 3, 2) == 13
    assert count_subalgebras(HEIS, 2, 1) == 3
    assert count_subalgebras(HEIS, 2, 2) == 19


@pytest.mark.parametrize("d", [1, 2, 3])
def test_abelian_counts_every_sublattice_in_both_modes(d):
    a = LieAlgebraZ.abelian(d)
    for p in (2, 3):
        for n in range(3):
            total = count_sublattices_formula(d, p, n)
            assert count_subalgebras(a, p, n, "subalgebra") == total
            assert count_subalgebras(a, p, n, "ideal") == total


@given(st.sampled_from(["heisenberg", "sl2"]), st.sampled_from([2, 3, 5]), st.integers(0, 2))
def test_ideals_never_outnumber_subalgebras(name, p, n):
    a = ALGEBRAS[name]
    assert count_subalgebras(a, p, n, "ideal") <= count_subalgebras(a, p, n, "subalgebra")


def test_counts_match_closed_forms(heisenberg, sl2):
    from conezeta.exact_algebra import mr_specialize

    for ex, primes in ((heisenberg, (2, 3)), (sl2, (3, 5))):
        for p in primes:
            series = mr_specialize(ex.P, p).series(3)
            assert [count_subalgebras(ex.lie, p, n) for n in range(4)] == series


def test_parallel_count_is_schedule_independent():
    assert count_subalgebras(HEIS, 3, 3, workers=3) == count_subalgebras(HEIS, 3, 3, workers=1) == 157


def test_thread_count_from_environment(monkeypatch):
    monkeypatch.setenv("CONE_ZETA_THREADS", "4")
    assert thread_count() == 4
    monkeypatch.setenv("CONE_ZETA_THREADS", "lots")
    assert thread_count() == 1
    monkeypatch.delenv("CONE_ZETA_THREADS")
    assert thread_count() == 1


def test_large_request_warns():
    with pytest.warns(RuntimeWarning):
        count_subalgebras(LieAlgebraZ.abelian(1), 7, 1)


def test_unknown_mode():
    with pytest.raises(ValueError):
        count_subalgebras(HEIS, 2, 1, "normaliser")


# -- finite fields and F_q[[t]] ---------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_field_axioms(q):
    F = GF(q)
    els = range(q)
    for x in els:
        assert F.add[x][0] == x and F.mul[x][1] == x
        assert F.add[x][F.neg[x]] == 0
        if x:
            assert F.mul[x][F.inv[x]] == 1
    for x, y, z in itertools.product(els, repeat=3):
        assert F.mul[x][F.mul[y][z]] == F.mul[F.mul[x][y]][z]
        assert F.mul[x][F.add[y][z]] == F.add[F.mul[x][y]][F.mul[x][z]]
        assert F.add[x][F.add[y][z]] == F.add[F.add[x][y]][z]


def test_field_rejects_non_prime_powers():
    for q in (1, 6, 12):
        with pytest.raises(ValueError):
            GF(q)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_submodule_counts(q):
    assert [count_submodules_fqt(q, n) for n in range(4)] == [sum(q**i for i in range(n + 1)) for n in range(4)]


def test_submodule_examples():
    assert count_submodules_fqt(2, 1) == 3
    assert count_submodules_fqt(3, 2) == 13
    assert count_submodules_fqt(7, 0) == 1
