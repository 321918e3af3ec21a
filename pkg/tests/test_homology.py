import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mackeyro.catalog import CATALOG, CATALOG_NAMES, diagram, direct_sum, identify, identify_diagram, sharp
from mackeyro.chains import sphere_complex
from mackeyro.green import presentation
from mackeyro.group import C4, GroupSpec, VirtualRep, parse_virtual
from mackeyro.homology import compute_homology
from mackeyro.mackey import CoefficientSystem

sys.path.insert(0, str(Path(__file__).parent))
from reference_tables import PATTERNS, grading_text, table  # noqa: E402


def name_of(text, k, coeffs=None):
    v = parse_virtual(text)
    pres = presentation(v, k, C4, coeffs or CoefficientSystem(0))
    return "0" if pres.is_zero() else identify(pres).name


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_entries_identify_as_themselves(name):
    assert identify_diagram(CATALOG[name]).name == name


@pytest.mark.parametrize("a,b", [("L", "<Z/2>"), ("Z-", "<Z/2>"), ("<Z/2>", "bar<Z/2>"), ("L-", "bar<Z/2>")])
def test_two_term_sums(a, b):
    assert identify_diagram(direct_sum([CATALOG[a], CATALOG[b]])).name == f"{a}+{b}"
    assert identify_diagram(diagram(f"{b}+{a}")).name == f"{a}+{b}"


def test_catalog_is_mackey():
    for name, d in CATALOG.items():
        for h in (1, 2):
            if d.orders[h] and d.orders[h - 1]:
                rt = d.res[h] @ d.tr[h]
                w = d.weyl[h - 1]
                step = 2 ** (2 - h)
                norm = sum(np.linalg.matrix_power(np.linalg.matrix_power(w, step), j) for j in range(2))
                mod = [o or None for o in d.orders[h - 1]]
                diff = rt - norm
                for i, m in enumerate(mod):
                    assert (diff[i] % m == 0).all() if m else not diff[i].any(), name


def test_sharp_and_flat_relate_catalog_entries():
    assert identify_diagram(sharp(CATALOG["Q"])).name == "Q#"
    assert identify_diagram(sharp(CATALOG["L"])).name == "L#"


def test_unknown_names():
    with pytest.raises(KeyError):
        diagram("Y")


@pytest.mark.parametrize("text,k,name", [
    ("0", 0, "Z"),
    ("2*sigma+lambda", 2, "<Z/4>"),
    ("sigma-2*lambda", -3, "L-"),
    ("sigma", 1, "Z-"),
    ("-2*lambda", -3, "<Z/4>"),
    ("sigma-lambda", -1, "Z-b"),
    ("-lambda", -2, "L"),
])
def test_spot_values(text, k, name):
    assert name_of(text, k) == name


@pytest.mark.parametrize("pattern", PATTERNS)
@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 2), (2, 3), (3, 2)])
def test_tables_small(pattern, n, m):
    text = grading_text(pattern, n, m)
    expected = table(pattern, n, m)
    for k in range(-n - 2 * m - 1, n + 2 * m + 2):
        assert name_of(text, k) == expected.get(k, "0"), (text, k)


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_trivial_shift(n, m):
    v = VirtualRep.of(sigma=n, lambda_=m)
    for k in range(-2 * abs(m) - abs(n), abs(n) + 2 * abs(m) + 1):
        a = presentation(v, k, C4)
        b = compute_homology(sphere_complex(VirtualRep.of(1, sigma=n, lambda_=m), C4), k + 1)
        for h in C4.levels:
            assert a.orders(h) == b.orders(h)


@given(st.integers(0, 3), st.integers(0, 2))
def test_mod_two_euler_characteristic(n, m):
    # with field coefficients the bottom level of S^V has Betti numbers of a sphere
    v = VirtualRep.of(sigma=n, lambda_=m)
    f2 = CoefficientSystem(2)
    tot = sum(len(presentation(v, k, C4, f2).orders(0)) for k in range(0, v.dim + 1))
    assert tot == 1


def test_other_groups_run():
    g = GroupSpec(3, 2)
    v = parse_virtual("lambda1+lambda")
    ranks = [presentation(v, k, g).orders(2) for k in range(0, 5)]
    assert ranks[4] == [0]
