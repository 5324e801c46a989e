import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from oistab.errors import ResourceCapError
from oistab.oi_cat import OIMorphism, markings
from oistab.ovi_cat import (FiniteMatrixGroup, GroupConstructionError, OviMorphism, build_group,
                            count_hom_ovi, enumerate_hom_ovi, factor_unique, induction_dims,
                            mat_compose, standard_morphism, unitriangular_index)
from oistab.ring_core import UnsupportedVariantError, builtin

F2, F3, F4 = builtin("F2"), builtin("F3"), builtin("F4")


def test_hom_count_goldens():
    assert count_hom_ovi(F2, 1, 3) == 7
    assert count_hom_ovi(F2, 2, 3) == 14
    assert len(enumerate_hom_ovi(F2, 2, 3)) == 14


@pytest.mark.parametrize("R", [F2, F3, F4, builtin("Z/4")])
@pytest.mark.parametrize("d,n", [(0, 2), (1, 1), (1, 3), (2, 3), (3, 3)])
def test_enumeration_matches_formula(R, d, n):
    mats = enumerate_hom_ovi(R, d, n)
    assert len(mats) == count_hom_ovi(R, d, n) == len(set(m.rows for m in mats))


def test_infinite_ring_refused():
    with pytest.raises(UnsupportedVariantError):
        count_hom_ovi(builtin("Z"), 1, 2)


def test_pivot_validation():
    assert OviMorphism(F2, 2, 1, [[1], [0]]).alpha == (1,)
    with pytest.raises(ValueError):
        OviMorphism(F3, 2, 1, [[0], [2]])  # pivot is not 1
    with pytest.raises(ValueError):
        OviMorphism(F2, 2, 2, [[0, 1], [1, 0]])  # pivots not increasing


@pytest.mark.parametrize("R", [F2, F3])
@pytest.mark.parametrize("d,n", [(1, 2), (1, 3), (2, 3)])
def test_composition_closed_and_associative(R, d, n):
    A = enumerate_hom_ovi(R, d, n)
    B = enumerate_hom_ovi(R, n, n + 1)[:20]
    C = enumerate_hom_ovi(R, n + 1, n + 1)[:10]
    for f in A[:15]:
        for g in B:
            gf = f.compose_after(g)
            assert gf.alpha == tuple(g.alpha[a - 1] for a in f.alpha)
            for h in C:
                assert gf.compose_after(h) == f.compose_after(g.compose_after(h))


@pytest.mark.parametrize("R", [F2, F3])
@pytest.mark.parametrize("d,n", [(1, 2), (1, 3), (2, 3), (2, 4)])
def test_factorization(R, d, n):
    for phi in enumerate_hom_ovi(R, d, n):
        psi, f = factor_unique(phi)
        assert f.is_standard() and f.alpha == phi.alpha
        assert mat_compose(R, psi, f.rows) == phi.rows
        assert all(psi[i][i] == R.one and all(psi[i][j] == R.zero for j in range(i))
                   for i in range(n))


def test_factor_golden():
    psi, f = factor_unique(OviMorphism(F2, 2, 1, [[1], [1]]))
    assert psi == ((1, 1), (0, 1))
    assert f == standard_morphism(F2, OIMorphism(1, 2, (2,)))


@pytest.mark.parametrize("R,n,order", [(F2, 2, 2), (F2, 3, 8), (F3, 3, 27), (F2, 4, 64)])
def test_unitriangular_orders(R, n, order):
    assert build_group(R, "U", n).order == order


def test_group_goldens():
    assert build_group(F2, "U_marked", 2, marks=(2,)).order == 1
    assert build_group(F3, "B", 2).order == 12
    assert build_group(F3, "B", 3).order == 216
    assert len(build_group(F2, "U", 4).commutator_subgroup()) == 8
    assert build_group(F3, "B_C", 2, C=[1]).order == 6


@pytest.mark.parametrize("R", [F2, F3, F4])
def test_u2_is_additive_group(R):
    G = build_group(R, "U", 2)
    elts = R.enumerate()
    to_g = {x: G.index[((R.one, x), (R.zero, R.one))] for x in elts}
    for x, y in itertools.product(elts, repeat=2):
        assert G.mul(to_g[x], to_g[y]) == to_g[R.add(x, y)]


@pytest.mark.parametrize("R,n", [(F2, 3), (F3, 3), (F2, 4)])
def test_marked_subgroup_index(R, n):
    G = build_group(R, "U", n)
    for lam in markings(n, 1) + markings(n, 2):
        H = build_group(R, "U_marked", n, marks=lam)
        assert G.order // H.order == unitriangular_index(R.size, lam)
        # U_{n,lam} fixes e_{lam_j}: column lam_j is the standard basis vector
        for e in H.elements:
            for a in lam:
                assert all(e[i][a - 1] == (R.one if i == a - 1 else R.zero) for i in range(n))


def test_induction_dims_counts_homs():
    for R in (F2, F3):
        for d in (1, 2):
            for n in range(d, 5):
                assert (induction_dims(R, d, n, {al: 1 for al in markings(n, d)})
                        == count_hom_ovi(R, d, n))
    with pytest.raises(KeyError):
        induction_dims(2, 1, 2, {(1,): 1})


def test_inverse_and_json():
    G = build_group(F3, "B", 2)
    for a in range(G.order):
        assert G.mul(a, G.inverse(a)) == G.identity
    back = FiniteMatrixGroup.from_json(json.loads(G.dumps()))
    assert back.elements == G.elements and back.table() == G.table()


def test_caps_and_errors():
    with pytest.raises(ResourceCapError):
        build_group(F2, "U", 6)
    with pytest.raises(ResourceCapError):
        build_group(builtin("F5"), "U", 2)
    with pytest.raises(GroupConstructionError):
        build_group(F3, "B_C", 2, C=[2])
    with pytest.raises(GroupConstructionError):
        FiniteMatrixGroup(F2, 2, [((1, 1), (0, 1))])
    with pytest.raises(ValueError):
        build_group(F2, "GL", 2)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_group_axioms_sampled(data):
    G = build_group(F2, "U", 4)
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
