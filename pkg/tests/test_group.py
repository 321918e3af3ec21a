import pytest
from hypothesis import given, strategies as st

from mackeyro.group import (C4, LAMBDA, SIGMA, GroupSpec, Irrep, RepSyntaxError, VirtualRep,
                            enumerate_orbits, format_virtual, orbit_product, parse_virtual, split_virtual)

groups = st.sampled_from([GroupSpec(2, 1), C4, GroupSpec(2, 3), GroupSpec(3, 1), GroupSpec(3, 2), GroupSpec(5, 1)])


@st.composite
def virtual_reps(draw, group=None):
    g = draw(groups) if group is None else group
    mult = tuple((i, draw(st.integers(-4, 4))) for i in g.irreducibles())
    return g, VirtualRep(draw(st.integers(-3, 3)), mult)


def test_c4_irreducibles_in_kernel_order():
    assert C4.irreducibles() == [SIGMA, LAMBDA]
    assert SIGMA.kernel_level(C4) == 1 and LAMBDA.kernel_level(C4) == 0


def test_odd_primes_have_no_sign_rep():
    g = GroupSpec(3, 2)
    assert [i.name for i in g.irreducibles()] == ["lambda1", "lambda"]
    assert not SIGMA.valid_for(g)


def test_bad_group():
    with pytest.raises(ValueError):
        GroupSpec(4, 1)


@given(virtual_reps())
def test_format_parse_round_trip(gv):
    _, v = gv
    assert parse_virtual(format_virtual(v)) == v


@given(virtual_reps())
def test_split_is_disjoint(gv):
    _, v = gv
    plus, minus = split_virtual(v)
    assert plus.is_actual() and minus.is_actual()
    assert plus - minus == v
    assert not ({i for i, _ in plus.mult} & {i for i, _ in minus.mult})


@given(virtual_reps())
def test_fixed_dims_are_monotone(gv):
    g, v = gv
    v = split_virtual(v)[0]
    dims = [v.fixed_dim(g, h) for h in g.levels]
    assert dims[0] == v.dim
    assert all(a >= b for a, b in zip(dims, dims[1:]))


@pytest.mark.parametrize("text,expected", [
    ("0", VirtualRep()),
    ("1+2sigma", VirtualRep.of(1, sigma=2)),
    ("3*sigma-2*lambda", VirtualRep.of(sigma=3, lambda_=-2)),
    ("lambda-lambda", VirtualRep()),
    ("-lambda3", VirtualRep(0, ((Irrep("lambda", 3), -1),))),
])
def test_parse_examples(text, expected):
    assert parse_virtual(text) == expected


@pytest.mark.parametrize("text,pos", [("", 0), ("2*", 1), ("sigma lambda", 5), ("x", 0), ("sigma+", 6)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(RepSyntaxError) as err:
        parse_virtual(text)
    assert err.value.pos == pos


@given(st.integers(0, 3), st.integers(0, 3))
def test_orbit_product_counts(h, k):
    g = GroupSpec(2, 3)
    lvl, copies = orbit_product(h, k, g)
    assert copies * g.orbit_size(lvl) == g.orbit_size(h) * g.orbit_size(k)
    orbits = enumerate_orbits((g.orbit_size(h), g.orbit_size(k)))
    assert len(orbits) == copies
    assert all(len(o) == g.orbit_size(lvl) for o in orbits)
