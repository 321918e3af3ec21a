import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from mackeyro.factorize import (Box, ExpressionSyntaxError, Int, Named, Power, Product, Quotient, evaluate,
                                factorize, matches, parse_expression, render)
from mackeyro.green import generators, named, unit
from mackeyro.group import VirtualRep

sys.path.insert(0, str(Path(__file__).parent))
from reference_tables import s3_family  # noqa: E402


@pytest.fixture(scope="module")
def small():
    return factorize(Box(2, 3))


def test_s3_family_is_unreachable(small):
    # a small box also cuts some paths short; equality holds from Box(4, 4) on
    got = {(g.grading, g.degree) for g in small.unreachable if g.level == 2}
    assert s3_family(Box(2, 3)) <= got


def test_every_other_generator_is_named(small):
    box = Box(2, 3)
    total = sum(len(generators(v, d, lvl)) for v in box.gradings() for d in box.degrees(v) for lvl in (0, 1, 2))
    assert len(small.expressions) + len(small.unreachable) == total
    for gen, e in small.expressions.items():
        assert matches(e, gen), render(e)


def test_seeding_s3_reaches_everything():
    fac = factorize(Box(1, 2), seed_s3=True)
    assert fac.unreachable == []


@pytest.mark.parametrize("text", [
    "a_s", "u_{2s} * a_l", "2 * u_{2s} / u_l", "a_s^3 / a_l", "Tr_2^4(2 * u_s / bar(u_l)^2)",
    "x_{1,1}", "w_3", "s_3 / (u_{2s}^2 * u_l)", "bar(u_l)^-1", "Res_2(a_l)",
    "Tr_2^4(2 * u_s^4 / bar(u_l)^2) + a_s^4 / a_l^2", "-a_l",
])
def test_render_parse_round_trip(text):
    e = parse_expression(text)
    again = parse_expression(render(e))
    assert render(again) == render(e)
    assert evaluate(again) == evaluate(e)


@pytest.mark.parametrize("text,pos", [("a_s *", 5), ("(a_s", 4), ("a_q", 0), ("2 ** 3", 3)])
def test_syntax_errors(text, pos):
    with pytest.raises(ExpressionSyntaxError):
        parse_expression(text)


def test_ast_evaluation():
    e = Product((Named("a_s"), Named("a_s"), Named("u_l")))
    assert e.evaluate() == named("a_s") * named("a_s") * named("u_l")
    assert Quotient(Int(2), Named("u_2s")).evaluate() is not None
    assert Quotient(Int(1), Named("u_2s")).evaluate() is None
    assert Power(Named("a_l"), 2).evaluate() == named("a_l") * named("a_l")


def test_integers_match_units():
    assert matches(Int(1), unit(2))
    assert matches(parse_expression("2"), 2 * unit(1))


@given(st.integers(1, 4), st.integers(0, 3))
def test_w_and_x_classes_are_transfers(n, m):
    w = evaluate(f"w_{n}")
    assert w.level == 2 and w.degree == -n
    if m:
        x = evaluate(f"x_{{{n},{m}}}")
        assert x.grading == VirtualRep.of(sigma=-n, lambda_=-m)
