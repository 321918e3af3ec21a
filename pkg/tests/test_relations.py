import pytest

from mackeyro.relations import RELATIONS, Relation, check, check_all, instances, substitute


def test_substitution():
    assert substitute("u_{2s}^{i-1} * a_l^{2i+j}", {"i": 2, "j": 1}) == "u_{2s}^1 * a_l^5"


def test_minimums_filter_instances():
    rel = Relation("t", "a_s^{i}", "0", "ij", (("i", 2),))
    assert all(env["i"] >= 2 for env in instances(rel, 3))
    assert len(list(instances(rel, 3))) == 8


@pytest.mark.parametrize("rel", RELATIONS, ids=[r.label for r in RELATIONS])
def test_relation_holds(rel):
    for env in instances(rel, 2):
        c = check(rel, env)
        assert c.status == "holds", (c.lhs, c.rhs, c.detail)


def test_a_wrong_relation_fails():
    c = check(Relation("bad", "a_s^2 * u_l", "u_{2s} * a_l"), {})
    assert c.status == "fails"


def test_zero_right_side():
    assert check(Relation("z", "u_l * (a_s^3 / a_l)", "0"), {}).status == "holds"
    assert check(Relation("z", "a_s", "0"), {}).status == "fails"


def test_check_all_counts():
    res = check_all(1)
    assert len(res) == sum(len(list(instances(r, 1))) for r in RELATIONS)
