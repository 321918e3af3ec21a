import numpy as np
import pytest
from hypothesis import given, strategies as st

from mackeyro.group import C4, GroupSpec
from mackeyro.mackey import (INTEGERS, CoefficientSystem, FreeMackeyModule, box, free_module, inclusion,
                             structure_maps, tensor_permutation, bottom_action)

groups = st.sampled_from([GroupSpec(2, 1), C4, GroupSpec(2, 3), GroupSpec(3, 1), GroupSpec(3, 2)])


@st.composite
def modules(draw):
    g = draw(groups)
    levels = draw(st.lists(st.integers(0, g.exponent), min_size=1, max_size=4))
    return free_module(g, *levels)


@given(modules())
def test_level_ranks(m):
    g = m.group
    assert m.level_rank(0) == m.bottom_rank
    assert m.level_rank(g.exponent) == len(m)
    for h in g.levels:
        P = inclusion(m, h)
        assert P.shape == (m.bottom_rank, m.level_rank(h))
        assert set(np.unique(P)) <= {0, 1}
        assert (P.sum(axis=1) == 1).all()  # orbit sums partition the bottom basis


@given(modules())
def test_transfer_after_restriction_is_index(m):
    maps = structure_maps(m)
    p = m.group.prime
    for h in range(1, m.group.exponent + 1):
        tr_res = maps.tr[h] @ maps.res[h]
        assert (tr_res == p * np.eye(m.level_rank(h), dtype=np.int64)).all()


@given(modules())
def test_restriction_after_transfer_is_norm(m):
    # double coset formula for a chain of subgroups: res tr = sum of Weyl conjugates
    maps = structure_maps(m)
    g = m.group
    for h in range(1, g.exponent + 1):
        w = maps.weyl[h - 1]
        step = g.prime ** (g.exponent - h)
        gamma = np.linalg.matrix_power(w, step)
        norm = sum(np.linalg.matrix_power(gamma, j) for j in range(g.prime))
        assert (maps.res[h] @ maps.tr[h] == norm).all()


@given(modules())
def test_weyl_action_has_the_right_order(m):
    maps = structure_maps(m)
    g = m.group
    for h in g.levels:
        w = maps.weyl[h]
        n = g.orbit_size(h)
        assert (np.linalg.matrix_power(w, n) == np.eye(len(w), dtype=np.int64)).all()


@given(modules(), st.data())
def test_structure_maps_commute_with_weyl(m, data):
    maps = structure_maps(m)
    for h in range(1, m.group.exponent + 1):
        assert (maps.res[h] @ maps.weyl[h] == maps.weyl[h - 1] @ maps.res[h]).all()
        assert (maps.tr[h] @ maps.weyl[h - 1] == maps.weyl[h] @ maps.tr[h]).all()


@given(modules(), st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_box_product_is_the_tensor_permutation_module(m1, levels):
    levels = [min(l, m1.group.exponent) for l in levels]
    m2 = free_module(m1.group, *levels)
    bp = box(m1, m2)
    assert bp.module.bottom_rank == m1.bottom_rank * m2.bottom_rank
    assert sorted(bp.index.reshape(-1)) == list(range(bp.module.bottom_rank))
    # the identification intertwines the diagonal action
    P = tensor_permutation(bp)
    kron = np.kron(bottom_action(m1), bottom_action(m2))
    assert (P @ kron == bottom_action(bp.module) @ P).all()


def test_c4_box_of_free_orbits():
    g = C4
    bp = box(free_module(g, 0), free_module(g, 0))
    assert [l for l, _ in bp.module.basis] == [0] * 4
    bp = box(free_module(g, 1), free_module(g, 1))
    assert [l for l, _ in bp.module.basis] == [1, 1]


def test_coefficients():
    assert CoefficientSystem.parse("Z") == INTEGERS
    assert CoefficientSystem.parse("Z/4").modulus == 4
    with pytest.raises(ValueError):
        CoefficientSystem.parse("Q")
    with pytest.raises(ValueError):
        CoefficientSystem(1)


def test_bad_orbit_level():
    with pytest.raises(ValueError):
        FreeMackeyModule(C4, ((3, "x"),))
