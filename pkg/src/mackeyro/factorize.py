"""Class expressions in Euler and orientation classes, and a search that names generators.

Expressions are small trees (named class, power, product, quotient, sum,
scalar, transfer, restriction).  Evaluation is exact: products restrict the
higher factor, quotients use :func:`divide` and may fail, in which case the
whole expression evaluates to ``None``.

Text syntax, as produced by :func:`render` and read by :func:`parse_expression`::

    u_{2s}^2 * s_3 / (a_l * u_l)      Tr_2^4(u_s^-3)      bar(u_l)^-1
    (2*u_{2s}/u_l)^2 - 4*u_{2s}

Symbols: ``a_s a_l u_{2s} u_s u_l s_3 w_n x_{n,m}`` and the integer literals.
``bar(x)`` restricts one level; ``Tr_a^b`` and ``Res_a^b`` take subgroup orders.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from itertools import count
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .group import C4, VirtualRep
from .green import (HomologyElement, divide, generators, invert, multiplication_matrix,
                    multiply, named, power, res, tr, unit, w_class, x_class)
from .mackey import INTEGERS, CoefficientSystem

Value = Union[int, HomologyElement, None]

SYMBOL_ORDER = ("a_s", "u_2s", "u_s", "a_l", "u_l", "s_3", "w", "x")
_DISPLAY = {"a_s": "a_s", "a_l": "a_l", "u_2s": "u_{2s}", "u_s": "u_s", "u_l": "u_l", "s_3": "s_3"}


class ExpressionSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.text, self.pos = text, pos


# -- tree -----------------------------------------------------------------------------


class Expr:
    def evaluate(self, coefficients: CoefficientSystem = INTEGERS) -> Value:
        raise NotImplementedError

    def divisions(self) -> int:
        return sum(c.divisions() for c in self.children())

    def weight(self) -> int:
        return sum(c.weight() for c in self.children())

    def symbols(self) -> Tuple[int, ...]:
        return tuple(s for c in self.children() for s in c.symbols())

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def key(self) -> Tuple:
        """Tie-breaking order: divisions, exponent weight, symbols."""
        return (self.divisions(), self.weight(), self.symbols(), render(self))

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Int(Expr):
    value: int

    def evaluate(self, coefficients=INTEGERS):
        return self.value


@dataclass(frozen=True)
class Named(Expr):
    symbol: str
    index: Tuple[int, ...] = ()

    def evaluate(self, coefficients=INTEGERS):
        if self.symbol == "w":
            return w_class(self.index[0], coefficients)
        if self.symbol == "x":
            return x_class(self.index[0], self.index[1], coefficients)
        return named(self.symbol, coefficients)

    def weight(self):
        return 1

    def symbols(self):
        return (SYMBOL_ORDER.index(self.symbol),)


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int

    def children(self):
        return (self.base,)

    def evaluate(self, coefficients=INTEGERS):
        b = self.base.evaluate(coefficients)
        if b is None:
            return None
        if isinstance(b, int):
            if self.exponent < 0:
                return None
            return b ** self.exponent
        if self.exponent < 0 and invert(b) is None:
            return None
        return power(b, self.exponent)

    def weight(self):
        return abs(self.exponent) * self.base.weight()

    def divisions(self):
        return self.base.divisions() + (1 if self.exponent < 0 else 0)

    def symbols(self):
        return self.base.symbols() * abs(self.exponent)


@dataclass(frozen=True)
class Product(Expr):
    factors: Tuple[Expr, ...]

    def children(self):
        return self.factors

    def evaluate(self, coefficients=INTEGERS):
        out: Value = 1
        for f in self.factors:
            v = f.evaluate(coefficients)
            if v is None:
                return None
            out = _mul(out, v)
        return out


@dataclass(frozen=True)
class Quotient(Expr):
    numerator: Expr
    denominator: Expr

    def children(self):
        return (self.numerator, self.denominator)

    def evaluate(self, coefficients=INTEGERS):
        y = self.numerator.evaluate(coefficients)
        x = self.denominator.evaluate(coefficients)
        if y is None or x is None:
            return None
        if isinstance(x, int):
            return None
        if isinstance(y, int):
            y = y * unit(x.level, x.group, x.coefficients)
        lvl = min(x.level, y.level)
        return divide(res(y, lvl), res(x, lvl))

    def divisions(self):
        return 1 + super().divisions()


@dataclass(frozen=True)
class Sum(Expr):
    terms: Tuple[Expr, ...]
    signs: Tuple[int, ...]

    def children(self):
        return self.terms

    def evaluate(self, coefficients=INTEGERS):
        vals = [t.evaluate(coefficients) for t in self.terms]
        if any(v is None for v in vals):
            return None
        out: Value = 0
        for s, v in zip(self.signs, vals):
            out = _add(out, _mul(s, v))
        return out


@dataclass(frozen=True)
class Transfer(Expr):
    body: Expr
    level: int
    source: Optional[int] = None

    def children(self):
        return (self.body,)

    def evaluate(self, coefficients=INTEGERS):
        v = self.body.evaluate(coefficients)
        if v is None or isinstance(v, int):
            return None
        if self.source is not None and v.level != self.source:
            v = res(v, self.source)
        if v.level > self.level:
            return None
        return tr(v, self.level)


@dataclass(frozen=True)
class Restriction(Expr):
    body: Expr
    level: Optional[int] = None  # None: one step down

    def children(self):
        return (self.body,)

    def evaluate(self, coefficients=INTEGERS):
        v = self.body.evaluate(coefficients)
        if v is None or isinstance(v, int):
            return v
        target = v.level - 1 if self.level is None else self.level
        if target < 0 or target > v.level:
            return None
        return res(v, target)


def _mul(a: Value, b: Value) -> Value:
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    if isinstance(a, int):
        return a * b
    if isinstance(b, int):
        return b * a
    return multiply(a, b)


def _add(a: Value, b: Value) -> Value:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if isinstance(a, int):
        a, b = b, a
    if isinstance(b, int):
        if b == 0:
            return a
        b = b * unit(a.level, a.group, a.coefficients)
    lvl = min(a.level, b.level)
    return res(a, lvl) + res(b, lvl)


# -- rendering ----------------------------------------------------------------------


def _order(level: int) -> int:
    return 2 ** level


def render(e: Expr) -> str:
    return _render(e, 0)


def _render(e: Expr, ctx: int) -> str:
    # ctx: 0 top, 1 factor of a product, 2 base of a power or denominator
    if isinstance(e, Int):
        s = str(e.value)
        return f"({s})" if e.value < 0 and ctx else s
    if isinstance(e, Named):
        if e.symbol == "w":
            return f"w_{e.index[0]}"
        if e.symbol == "x":
            return f"x_{{{e.index[0]},{e.index[1]}}}"
        return _DISPLAY[e.symbol]
    if isinstance(e, Power):
        return f"{_render(e.base, 2)}^{e.exponent}"
    if isinstance(e, Product):
        s = " * ".join(_render(f, 1) for f in e.factors)
        return f"({s})" if ctx >= 2 and len(e.factors) > 1 else s
    if isinstance(e, Quotient):
        s = f"{_render(e.numerator, 1)} / {_render(e.denominator, 2)}"
        return f"({s})" if ctx else s
    if isinstance(e, Sum):
        parts = []
        for i, (sg, t) in enumerate(zip(e.signs, e.terms)):
            body = _render(t, 1)
            parts.append((("- " if i else "-") if sg < 0 else ("+ " if i else "")) + body)
        s = " ".join(parts)
        return f"({s})" if ctx else s
    if isinstance(e, Transfer):
        src = e.source if e.source is not None else e.level - 1
        return f"Tr_{_order(src)}^{_order(e.level)}({_render(e.body, 0)})"
    if isinstance(e, Restriction):
        if e.level is None:
            return f"bar({_render(e.body, 0)})"
        return f"Res_{_order(e.level)}({_render(e.body, 0)})"
    raise TypeError(type(e))


# -- parsing ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>u_\{2s\}|u_2s|a_s|a_l|u_s|u_l|s_3|w_\{?\d+\}?|"
                    r"x_\{\d+,\d+\}|Tr_\d+\^\d+|Res_\d+\^\d+|Res_\d+|bar)|(?P<op>[-+*/^()]))")


def _level_of(order: int, text: str, pos: int) -> int:
    lvl = order.bit_length() - 1
    if order <= 0 or 2 ** lvl != order or lvl > C4.exponent:
        raise ExpressionSyntaxError(text, pos, f"bad subgroup order {order}")
    return lvl


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise ExpressionSyntaxError(text, pos, "unexpected character")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ExpressionSyntaxError(self.text, tok[2], f"expected {value or 'a token'!r}")
        self.i += 1
        return tok

    def parse(self) -> Expr:
        e = self.sum()
        if self.peek()[0] is not None:
            raise ExpressionSyntaxError(self.text, self.peek()[2], "trailing input")
        return e

    def sum(self) -> Expr:
        terms, signs = [], []
        sign = 1
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term())
        signs.append(sign)
        while self.peek()[1] in ("+", "-"):
            signs.append(-1 if self.take()[1] == "-" else 1)
            terms.append(self.term())
        if len(terms) == 1 and signs[0] == 1:
            return terms[0]
        return Sum(tuple(terms), tuple(signs))

    def term(self) -> Expr:
        e = self.product()
        while self.peek()[1] == "/":
            self.take()
            e = Quotient(e, self.power())
        return e

    def product(self) -> Expr:
        factors = [self.power()]
        while True:
            tok = self.peek()
            if tok[1] == "*":
                self.take()
                factors.append(self.power())
            elif tok[0] in ("num", "name") or tok[1] == "(":
                factors.append(self.power())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "num":
                raise ExpressionSyntaxError(self.text, pos, "expected an exponent")
            return Power(base, sign * int(val))
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Int(int(val))
        if val == "(":
            e = self.sum()
            self.take(")")
            return e
        if kind == "name":
            if val in ("bar",) or val.startswith(("Tr_", "Res_")):
                self.take("(")
                body = self.sum()
                self.take(")")
                if val == "bar":
                    return Restriction(body)
                nums = [int(x) for x in re.findall(r"\d+", val)]
                if val.startswith("Tr_"):
                    return Transfer(body, _level_of(nums[1], self.text, pos), _level_of(nums[0], self.text, pos))
                return Restriction(body, _level_of(nums[0], self.text, pos))
            if val.startswith("w_"):
                return Named("w", (int(re.findall(r"\d+", val)[0]),))
            if val.startswith("x_"):
                a, b = (int(x) for x in re.findall(r"\d+", val))
                return Named("x", (a, b))
            return Named("u_2s" if val in ("u_{2s}", "u_2s") else val)
        raise ExpressionSyntaxError(self.text, pos, "expected a value")


def parse_expression(text: str) -> Expr:
    return _Parser(text).parse()


def evaluate(text_or_expr: Union[str, Expr], coefficients: CoefficientSystem = INTEGERS) -> Value:
    e = parse_expression(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return e.evaluate(coefficients)


# -- search ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Gradings ``a*sigma + b*lambda`` with ``|a| <= sigma`` and ``|b| <= lam``."""

    sigma: int = 4
    lam: int = 4

    def contains(self, v: VirtualRep) -> bool:
        from .group import LAMBDA, SIGMA
        if v.trivial or any(i not in (SIGMA, LAMBDA) for i, _ in v.mult):
            return False
        return abs(v[SIGMA]) <= self.sigma and abs(v[LAMBDA]) <= self.lam

    def gradings(self) -> List[VirtualRep]:
        return [VirtualRep.of(sigma=a, lambda_=b)
                for a in range(-self.sigma, self.sigma + 1) for b in range(-self.lam, self.lam + 1)]

    def degrees(self, v: VirtualRep) -> range:
        from .group import LAMBDA, SIGMA
        lo = -abs(v[SIGMA]) - 2 * abs(v[LAMBDA]) - 1
        return range(lo, -lo + 1)


@dataclass
class Factorization:
    expressions: Dict[HomologyElement, Expr]
    unreachable: List[HomologyElement]
    reached: Dict[HomologyElement, Expr]


def _multipliers(seed_s3: bool, coefficients) -> List[Tuple[Expr, HomologyElement]]:
    top = [Named("a_s"), Named("u_2s"), Named("a_l"), Named("u_l")]
    if seed_s3:
        top.append(Named("s_3"))
    out = []
    for e in top:
        v = e.evaluate(coefficients)
        out.append((e, v))
        out.append((Restriction(e), res(v)))
        out.append((Restriction(Restriction(e)), res(v, 0)))
    us = Named("u_s")
    v = us.evaluate(coefficients)
    out.append((us, v))
    out.append((Restriction(us), res(v)))
    return out


def _unit_like(e: HomologyElement) -> bool:
    return any(o == 0 for o in e.orders)


def _small(e: HomologyElement, bound: int) -> bool:
    return all(abs(c) <= bound for c, o in zip(e.coords, e.orders) if o == 0)


def factorize(box: Box = Box(), seed_s3: bool = False, coefficients: CoefficientSystem = INTEGERS,
              scalar_bound: int = 4) -> Factorization:
    """Name every generator in ``box`` by a shortest reachable expression.

    Nodes are homology elements; edges multiply or divide by a named class
    (or one of its restrictions), double, restrict or transfer.  Costs are
    compared by :meth:`Expr.key`.
    """
    mults = _multipliers(seed_s3, coefficients)
    best: Dict[HomologyElement, Expr] = {}
    heap: List = []
    tick = count()

    def push(e: Expr, v: Optional[HomologyElement]):
        if v is None or v.is_zero() or not box.contains(v.grading) or not _small(v, scalar_bound):
            return
        k = e.key()
        old = best.get(v)
        if old is not None and old.key() <= k:
            return
        best[v] = e
        heapq.heappush(heap, (k, next(tick), v))

    for lvl in range(C4.exponent + 1):
        push(Int(1), unit(lvl, C4, coefficients))
    for e, v in mults:
        push(e, v)

    while heap:
        k, _, v = heapq.heappop(heap)
        e = best[v]
        if e.key() != k:
            continue
        for me, mv in mults:
            if mv.level != v.level:
                continue
            g = v.grading + mv.grading
            if box.contains(g):
                mat = multiplication_matrix(mv, v.grading, v.degree)
                coords = [int(c) for c in mat @ np.array(v.coords, dtype=np.int64)] if v.coords else []
                if coords:
                    prod = HomologyElement(g, v.degree + mv.degree, v.level, tuple(coords), v.group, v.coefficients)
                    push(_times(e, me), prod)
            g = v.grading - mv.grading
            if box.contains(g):
                push(Quotient(e, me), divide(v, mv))
        push(_times(Int(2), e), 2 * v)
        if v.level > 0:
            push(Restriction(e), res(v))
        if v.level < C4.exponent:
            push(Transfer(e, v.level + 1, v.level), tr(v))

    expressions: Dict[HomologyElement, Expr] = {}
    unreachable: List[HomologyElement] = []
    for g in box.gradings():
        for d in box.degrees(g):
            for lvl in range(C4.exponent + 1):
                for gen in generators(g, d, lvl, C4, coefficients):
                    e = _name(gen, best)
                    if e is None:
                        unreachable.append(gen)
                    else:
                        expressions[gen] = simplify(e, gen)
    return Factorization(expressions, unreachable, best)


def matches(e: Expr, target: HomologyElement) -> bool:
    """Whether ``e`` evaluates exactly to ``target`` (integers read as multiples of the unit)."""
    v = e.evaluate(target.coefficients)
    if v is None:
        return False
    if isinstance(v, int):
        if target.grading != VirtualRep() or target.degree != 0:
            return False
        v = v * unit(target.level, target.group, target.coefficients)
    if v.level != target.level:
        return False
    return v == target


def _times(a: Expr, b: Expr) -> Expr:
    fa = a.factors if isinstance(a, Product) else (a,)
    fb = b.factors if isinstance(b, Product) else (b,)
    fs = tuple(f for f in fa + fb if f != Int(1))
    if not fs:
        return Int(1)
    return fs[0] if len(fs) == 1 else Product(fs)


def _atom_key(e: Expr) -> Tuple:
    depth = 0
    while isinstance(e, Restriction) and e.level is None:
        e, depth = e.body, depth + 1
    if isinstance(e, Named):
        return (0, SYMBOL_ORDER.index(e.symbol), e.index, depth, "")
    return (1, 0, (), depth, render(e))


def _is_atom(e: Expr) -> bool:
    while isinstance(e, Restriction) and e.level is None:
        e = e.body
    return isinstance(e, Named)


def _bar(e: Expr) -> Expr:
    return Restriction(e)


def _monomial(e: Expr):
    """``(scalar, numerator atoms, denominator atoms)``; transfers count as atoms."""
    if isinstance(e, Int):
        return e.value, [], []
    if _is_atom(e):
        return 1, [e], []
    if isinstance(e, Transfer):
        return 1, [Transfer(_flatten(e.body), e.level, e.source)], []
    if isinstance(e, Restriction) and e.level is None:
        m = _monomial(e.body)
        if m is None:
            return None
        return m[0], [_bar(a) for a in m[1]], [_bar(a) for a in m[2]]
    if isinstance(e, Power) and e.exponent >= 0:
        m = _monomial(e.base)
        if m is None:
            return None
        return m[0] ** e.exponent, m[1] * e.exponent, m[2] * e.exponent
    if isinstance(e, Product):
        c, num, den = 1, [], []
        for f in e.factors:
            m = _monomial(f)
            if m is None:
                return None
            c, num, den = c * m[0], num + m[1], den + m[2]
        return c, num, den
    if isinstance(e, Quotient):
        a, b = _monomial(e.numerator), _monomial(e.denominator)
        if a is None or b is None or b[2] or b[0] != 1:
            return None
        return a[0], a[1] + b[2], a[2] + b[1]
    return None


def _grouped(atoms: List[Expr]) -> List[Expr]:
    out = []
    for a in sorted(set(atoms), key=_atom_key):
        k = atoms.count(a)
        out.append(a if k == 1 else Power(a, k))
    return out


def _join(c: int, atoms: List[Expr]) -> Expr:
    fs = ([Int(c)] if c != 1 or not atoms else []) + _grouped(atoms)
    return fs[0] if len(fs) == 1 else Product(tuple(fs))


def _flatten(e: Expr) -> Expr:
    m = _monomial(e)
    if m is None:
        return e
    c, num, den = m
    return _join(c, num) if not den else Quotient(_join(c, num), _join(1, den))


def simplify(e: Expr, target: HomologyElement) -> Expr:
    """Rewrite into ``scalar * N / D`` (one division) when that still evaluates to ``target``.

    Transfers are flattened inside too.  Rewrites are kept only when verified.
    """
    if isinstance(e, Sum) and len(e.terms) == 1 and e.signs == (-1,):
        return Sum((simplify(e.terms[0], -target),), (-1,))
    flat = _flatten(e)
    if flat != e and matches(flat, target):
        return flat
    return e


def _name(gen: HomologyElement, best: Dict[HomologyElement, Expr]) -> Optional[Expr]:
    """An expression for ``gen``: a reached class, its negative, or a signed sum of two."""
    if gen in best:
        return best[gen]
    if -gen in best:
        return Sum((best[-gen],), (-1,))
    spot = [(v, e) for v, e in best.items()
            if (v.grading, v.degree, v.level) == (gen.grading, gen.degree, gen.level)]
    spot.sort(key=lambda t: t[1].key())
    for i, (v1, e1) in enumerate(spot):
        for v2, e2 in spot[i + 1:]:
            for s in (1, -1):
                if v1 + s * v2 == gen:
                    return Sum((e1, e2), (1, s))
                if -(v1 + s * v2) == gen:
                    return Sum((e1, e2), (-1, -s))
    return None
