"""Product relations among the C_4 generators, checked by direct evaluation.

Each relation is a template in exponents ``i, j, k``.  A right-hand side of
``0``, or one whose substituted form has a negative exponent, asserts that
the product vanishes.  ``4 u_{2s}^N / u_l^2`` is not a well-defined quotient
(its target is ``L+<Z/2>``, where multiplication by ``u_l^2`` kills the
torsion), so it is written as the transfer it equals.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Tuple

from .factorize import evaluate
from .mackey import INTEGERS, CoefficientSystem


@dataclass(frozen=True)
class Relation:
    label: str
    lhs: str
    rhs: str
    variables: str = ""
    minimum: Tuple[Tuple[str, int], ...] = ()
    kind: str = "equal"  # or "differ": both sides must not agree

    def admissible(self, env: Dict[str, int]) -> bool:
        return all(env[v] >= m for v, m in self.minimum)


RELATIONS: Tuple[Relation, ...] = (
    Relation("gold", "a_s^2 * u_l", "2 * u_{2s} * a_l"),
    Relation("x/a_s^2", "x_{1,1} / a_s^2", "w_3 / a_l"),
    Relation("x/a_l", "x_{1,1} / a_l", "2 * s_3 / a_s"),
    Relation("x/u_l", "x_{1,1} / u_l", "a_s * s_3 / u_{2s}"),
    Relation("a_s.s", "a_s * (s_3 / (u_{2s}^{i} * u_l^{j}))", "x_{1,1} / (u_{2s}^{i-1} * u_l^{j+1})",
             "ij", (("i", 1),)),
    Relation("a_s.s/a", "a_s * (s_3 / (u_{2s}^{i} * a_l^{j} * u_l^{k}))",
             "2 * s_3 / (a_s * u_{2s}^{i-1} * a_l^{j-1} * u_l^{k+1})", "ijk", (("i", 1), ("j", 1))),
    Relation("a_s.x", "a_s * (x_{1,1} / (u_{2s}^{i} * a_l^{j}))", "2 * s_3 / (u_{2s}^{i} * a_l^{j-1})", "ij"),
    Relation("a_s.u/u", "a_s * (u_l^{i} / u_{2s}^{j})", "2 * a_l * u_l^{i-1} / (a_s * u_{2s}^{j-1})",
             "ij", (("i", 1), ("j", 1))),
    Relation("a_s.2u/u", "a_s * (2 * u_{2s}^{i} / u_l)", "a_s^3 * u_{2s}^{i-1} / a_l", "i", (("i", 1),)),
    Relation("u_2s.2s", "u_{2s} * (2 * s_3 / (a_s * a_l^{i} * u_l^{j}))", "a_s * s_3 / (a_l^{i+1} * u_l^{j-1})", "ij"),
    Relation("u_2s.2a/a", "u_{2s} * (2 * a_l^{i} / a_s)", "a_s * a_l^{i-1} * u_l", "i", (("i", 1),)),
    Relation("a_l.2s", "a_l * (2 * s_3 / (a_s * u_{2s}^{i} * u_l^{j}))", "x_{1,1} / (u_{2s}^{i} * u_l^{j})", "ij"),
    Relation("a_l.2u/u", "a_l * (2 * u_{2s}^{i} / u_l)", "a_s^2 * u_{2s}^{i-1}", "i", (("i", 1),)),
    Relation("u_l.2s", "u_l * (2 * s_3 / (a_s * u_{2s}^{i} * a_l^{j}))", "0", "ij"),
    Relation("u_l.w", "u_l * (w_3 / (a_s^{i} * u_{2s}^{j}))", "0", "ij"),
    Relation("u_l.a/a", "u_l * (a_s^{i} / a_l^{j})", "0", "ij", (("i", 3), ("j", 1))),
    Relation("s.2a/a", "(s_3 / (u_{2s}^{i} * u_l^{j})) * (2 * a_l / a_s)", "x_{1,1} / (u_{2s}^{i} * u_l^{j})", "ij"),
    Relation("2s/a.2a/a", "(2 * s_3 / (a_s * u_{2s}^{i} * a_l^{j})) * (2 * a_l / a_s)", "0", "ij"),
    Relation("2s/au.2a/a", "(2 * s_3 / (a_s * u_{2s}^{i} * a_l^{j} * u_l^{k})) * (2 * a_l / a_s)",
             "2 * (s_3 / (u_{2s}^{i+1} * a_l^{j} * u_l^{k-1}))", "ijk", (("k", 1),)),
    Relation("x/a.2u/u", "(x_{1,1} / (a_s * u_{2s}^{i} * a_l^{j})) * (2 * u_{2s} / u_l)",
             "2 * (s_3 / (u_{2s}^{i} * a_l^{j}))", "ij"),
    Relation("x/a^i.2u/u", "(x_{1,1} / (a_s^{i} * u_{2s}^{j} * a_l^{k})) * (2 * u_{2s} / u_l)",
             "x_{1,1} / (a_s^{i-2} * u_{2s}^{j} * a_l^{k+1})", "ijk", (("i", 2),)),
    Relation("w.a/a", "(w_3 / (a_s^{i} * u_{2s}^{j})) * (a_s^3 / a_l^{k})",
             "x_{1,1} / (a_s^{i-1} * u_{2s}^{j} * a_l^{k-1})", "ijk", (("i", 1), ("k", 1))),
    Relation("w.2u/u", "(w_3 / (a_s^{i} * u_{2s}^{j})) * (2 * u_{2s} / u_l)", "x_{1,1} / (a_s^{i} * u_{2s}^{j})", "ij"),
    Relation("u/u.a/a", "(u_l / u_{2s}) * (a_s^3 / a_l)", "0"),
    Relation("2a/a.2a/a", "(2 * a_l / a_s) * (2 * a_l / a_s)", "2 * (a_l * u_l / u_{2s})"),
    Relation("2a/a.a/a", "(2 * a_l / a_s) * (a_s^3 / a_l)", "0"),
    Relation("2a/a.2u/u", "(2 * a_l^{i} / a_s) * (2 * u_{2s}^{j} / u_l)", "0", "ij", (("i", 1), ("j", 1))),
    Relation("2u/u.2u/u", "(2 * u_{2s}^{i} / u_l) * (2 * u_{2s}^{j} / u_l)",
             "Tr_2^4(2 * u_s^{2i+2j} / bar(u_l)^2) + a_s^4 * u_{2s}^{i+j-2} / a_l^2", "ij", (("i", 1), ("j", 1))),
    Relation("a/a.2u/u", "(a_s^{i} / a_l^{k}) * (2 * u_{2s}^{j} / u_l)", "a_s^{i+2} * u_{2s}^{j-1} / a_l^{k+1}",
             "ijk", (("i", 3), ("j", 1), ("k", 1))),
    Relation("exchange", "s_3 * (2 * u_{2s} / u_l)", "2 * u_{2s} * (s_3 / u_l)"),
    Relation("w(a/a)", "w_3 * (a_s^3 / a_l^2)", "(w_3 * a_s^3) / a_l^2", kind="differ"),
    Relation("u(s/a)", "u_{2s}^{i} * (s_3 / (a_l^{j} * u_l^{k}))", "(u_{2s}^{i} * s_3) / (a_l^{j} * u_l^{k})",
             "ijk", (("i", 1), ("k", 1)), kind="differ"),
)

_SLOT = re.compile(r"\^\{([^}]*)\}")
_TERM = re.compile(r"([+-]?)(\d*)([ijk]?)")


def _linear(text: str, env: Dict[str, int]) -> int:
    total, pos = 0, 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad exponent {text!r}")
        sign, num, var = m.groups()
        c = int(num) if num else 1
        v = env[var] if var else 1
        if not num and not var:
            raise ValueError(f"bad exponent {text!r}")
        total += (-1 if sign == "-" else 1) * c * v
        pos = m.end()
    return total


def substitute(template: str, env: Dict[str, int]) -> str:
    return _SLOT.sub(lambda m: "^" + str(_linear(m.group(1).replace(" ", ""), env)), template)


def _negative_exponent(text: str) -> bool:
    return re.search(r"\^-\d", text) is not None


@dataclass
class RelationCheck:
    relation: Relation
    env: Dict[str, int]
    lhs: str
    rhs: str
    status: str  # "holds", "fails", "undefined"
    detail: str = ""


def instances(rel: Relation, bound: int) -> Iterator[Dict[str, int]]:
    for vals in product(range(bound + 1), repeat=len(rel.variables)):
        env = dict(zip(rel.variables, vals))
        if rel.admissible(env):
            yield env


def _is_zero(v) -> bool:
    return v == 0 if isinstance(v, int) else v.is_zero()


def check(rel: Relation, env: Dict[str, int], coefficients: CoefficientSystem = INTEGERS) -> RelationCheck:
    lhs, rhs = substitute(rel.lhs, env), substitute(rel.rhs, env)
    lv = evaluate(lhs, coefficients)
    if lv is None:
        return RelationCheck(rel, env, lhs, rhs, "undefined", "left side does not exist")
    if rel.kind == "differ":
        rv = evaluate(rhs, coefficients)
        ok = rv is None or rv != lv
        return RelationCheck(rel, env, lhs, rhs, "holds" if ok else "fails", f"{lv} vs {rv}")
    if rhs.strip() == "0" or _negative_exponent(rhs):
        ok = _is_zero(lv)
        return RelationCheck(rel, env, lhs, "0", "holds" if ok else "fails", "" if ok else f"got {lv}")
    rv = evaluate(rhs, coefficients)
    if rv is None:
        return RelationCheck(rel, env, lhs, rhs, "undefined", "right side does not exist")
    ok = lv == rv
    return RelationCheck(rel, env, lhs, rhs, "holds" if ok else "fails", "" if ok else f"{lv} vs {rv}")


def check_all(bound: int = 3, coefficients: CoefficientSystem = INTEGERS,
              relations: Tuple[Relation, ...] = RELATIONS) -> List[RelationCheck]:
    return [check(rel, env, coefficients) for rel in relations for env in instances(rel, bound)]
