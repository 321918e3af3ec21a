"""Command-line front end: range computations, fixture verification and a result cache.

    mackeyro --box "n<=2,m<=2" --tasks additive,names --format table
    mackeyro --sphere "sigma-2*lambda"
    mackeyro --fixtures fixtures/c4_additive.txt

Exit status is 0 on success, 1 when a fixture fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .group import C4, GroupSpec, Irrep, RepSyntaxError, VirtualRep, format_virtual, parse_virtual
from .mackey import INTEGERS, CoefficientSystem

TASKS = ("additive", "names", "products", "relations", "massey")
CACHE_ENV = "MACKEYRO_CACHE"
BASIC = ("a_s", "u_2s", "a_l", "u_l")


class QueryError(ValueError):
    """A malformed query; ``pos`` is the offending column when known."""

    def __init__(self, msg: str, text: str = "", pos: Optional[int] = None):
        where = f" at position {pos}: {text!r}" if pos is not None else ""
        super().__init__(msg + where)
        self.pos = pos


# -- queries ------------------------------------------------------------------------------


def parse_group(text: str) -> GroupSpec:
    m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", text)
    if not m:
        raise QueryError("expected 'p,n'", text, 0)
    try:
        return GroupSpec(int(m.group(1)), int(m.group(2)))
    except ValueError as e:
        raise QueryError(str(e), text, 0) from None


def _irrep_key(key: str, group: GroupSpec) -> Irrep:
    irr = group.irreducibles()
    letters = "nmopqrstuv"
    if len(key) == 1 and key in letters:
        i = letters.index(key)
        if i >= len(irr):
            raise KeyError(key)
        return irr[i]
    for i in irr:
        if key in (i.name, i.label(group)):
            return i
    raise KeyError(key)


def parse_box(text: str, group: GroupSpec) -> Tuple[Tuple[Irrep, int], ...]:
    """``"n<=2,m<=3"``: bounds on the absolute multiplicity of each irreducible.

    Letters ``n, m, ...`` name the irreducibles in their standard order;
    ``sigma<=2`` style keys are accepted too.  Unlisted irreducibles get 0.
    """
    bounds: Dict[Irrep, int] = {}
    pos = 0
    for part in text.split(","):
        m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9]*)\s*<=\s*(\d+)\s*", part)
        if not m:
            raise QueryError("expected 'name<=bound'", text, pos)
        try:
            irr = _irrep_key(m.group(1), group)
        except KeyError:
            raise QueryError(f"unknown irreducible {m.group(1)!r} for {group}", text, pos + m.start(1)) from None
        if irr in bounds:
            raise QueryError(f"{m.group(1)!r} bounded twice", text, pos + m.start(1))
        bounds[irr] = int(m.group(2))
        pos += len(part) + 1
    return tuple((i, bounds.get(i, 0)) for i in group.irreducibles())


@dataclass(frozen=True)
class RangeQuery:
    group: GroupSpec = C4
    coefficients: CoefficientSystem = INTEGERS
    bounds: Tuple[Tuple[Irrep, int], ...] = ()
    sphere: Optional[VirtualRep] = None
    tasks: Tuple[str, ...] = ("additive",)
    triples: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.tasks:
            raise QueryError("no tasks requested")
        bad = [t for t in self.tasks if t not in TASKS]
        if bad:
            raise QueryError(f"unknown task {bad[0]!r}; choose from {', '.join(TASKS)}")
        if self.sphere is not None and self.bounds:
            raise QueryError("give a sphere or a box, not both")
        ranged = {"additive", "names", "products"} & set(self.tasks)
        if ranged and self.sphere is None and not self.bounds:
            raise QueryError(f"task {sorted(ranged)[0]!r} needs a sphere or a box")
        c4_only = {"names", "products", "relations", "massey"} & set(self.tasks)
        if c4_only and self.group != C4:
            raise QueryError(f"task {sorted(c4_only)[0]!r} needs the group C_4")
        if "massey" in self.tasks and not self.triples:
            raise QueryError("task 'massey' needs at least one --triple")

    def gradings(self) -> List[VirtualRep]:
        if self.sphere is not None:
            return [self.sphere]
        if not {"additive", "names", "products"} & set(self.tasks):
            return []
        irr = [i for i, _ in self.bounds]
        ranges = [range(-b, b + 1) for _, b in self.bounds]
        out = [VirtualRep(0, tuple(zip(irr, ks))) for ks in product(*ranges)]
        return sorted(out, key=lambda v: _sortable(v, self.group))

    def as_dict(self) -> dict:
        return {
            "group": [self.group.prime, self.group.exponent],
            "coefficients": str(self.coefficients),
            "box": {i.name: b for i, b in self.bounds} if self.bounds else None,
            "sphere": None if self.sphere is None else format_virtual(self.sphere),
            "tasks": list(self.tasks),
            "triples": list(self.triples),
        }


def _sortable(v: VirtualRep, group: GroupSpec) -> Tuple:
    return (v.trivial,) + tuple(v[i] for i in group.irreducibles())


# -- computation ---------------------------------------------------------------------------


def _degree_range(v: VirtualRep) -> range:
    plus = sum(max(k, 0) * i.dim for i, k in v.mult) + max(v.trivial, 0)
    minus = sum(max(-k, 0) * i.dim for i, k in v.mult) + max(-v.trivial, 0)
    return range(-minus - 1, plus + 2)


def additive_records(group: GroupSpec, coefficients: CoefficientSystem, grading: VirtualRep) -> List[dict]:
    """Nonzero degrees of ``H_*(S^grading)``: catalog name and level groups."""
    from .catalog import identify
    from .green import presentation, normalize_grading

    out = []
    for k in _degree_range(grading):
        g, d = normalize_grading(grading, k)
        pres = presentation(g, d, group, coefficients)
        if pres.is_zero():
            continue
        name = None
        if group == C4:
            entry = identify(pres)
            name = entry.name if entry.known else None
        out.append({"grading": format_virtual(grading), "degree": k, "name": name,
                    "groups": pres.level_names()})
    return out


def _cache_path(cache: str, group: GroupSpec, coefficients: CoefficientSystem, grading: VirtualRep) -> str:
    key = f"{__version__}|{group.prime},{group.exponent}|{coefficients}|{format_virtual(grading)}"
    return os.path.join(cache, hashlib.sha256(key.encode()).hexdigest()[:32] + ".json")


def _cached_additive(args) -> List[dict]:
    group, coefficients, grading, cache = args
    path = _cache_path(cache, group, coefficients, grading) if cache else None
    if path and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    recs = additive_records(group, coefficients, grading)
    if path:
        os.makedirs(cache, exist_ok=True)
        tmp = f"{path}.{os.getpid()}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(recs, fh, sort_keys=True)
        os.replace(tmp, path)
    return recs


def _provenance(query: RangeQuery, *key) -> str:
    blob = json.dumps([__version__, query.as_dict(), list(key)], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _element_json(e) -> dict:
    return {"grading": format_virtual(e.grading), "degree": e.degree, "level": e.level,
            "coords": list(e.coords)}


def _names(query: RangeQuery, records: List[dict]) -> None:
    from .factorize import Box, factorize, render
    from .green import generators
    from .group import LAMBDA, SIGMA

    bounds = dict(query.bounds)
    box = Box(bounds.get(SIGMA, 0), bounds.get(LAMBDA, 0))
    if query.sphere is not None:
        v = query.sphere.nontrivial()
        box = Box(abs(v[SIGMA]), abs(v[LAMBDA]))
    fac = factorize(box, coefficients=query.coefficients)
    for rec in records:
        names = {}
        for lvl in sorted(query.group.levels, reverse=True):
            gens = generators(parse_virtual(rec["grading"]), rec["degree"], lvl, query.group, query.coefficients)
            names[str(lvl)] = [render(fac.expressions[g]) if g in fac.expressions else None for g in gens]
        rec["generators"] = names


def _products(query: RangeQuery, records: List[dict]) -> None:
    from .green import generators, named

    top = query.group.exponent
    basic = [(s, named(s, query.coefficients)) for s in BASIC]
    for rec in records:
        gens = generators(parse_virtual(rec["grading"]), rec["degree"], top, query.group, query.coefficients)
        rec["products"] = {s: [list((c * g).coords) for g in gens] for s, c in basic}


def _relations(query: RangeQuery) -> List[dict]:
    from .relations import check_all

    bound = max([b for _, b in query.bounds] or [2])
    return [{"label": c.relation.label, "kind": c.relation.kind, "lhs": c.lhs, "rhs": c.rhs,
             "status": c.status, "provenance": _provenance(query, "relation", c.lhs)}
            for c in check_all(min(bound, 4), query.coefficients)]


def _massey(query: RangeQuery) -> List[dict]:
    from .factorize import evaluate
    from .green import unit
    from .massey import massey3

    out = []
    for text in query.triples:
        parts = [p.strip() for p in text.split(";")]
        if len(parts) != 3:
            raise QueryError("a triple is 'x;y;z'", text, 0)
        vals = []
        for p in parts:
            v = evaluate(p, query.coefficients)
            if v is None:
                raise QueryError(f"{p!r} is not defined", text, text.index(p))
            if isinstance(v, int):
                v = v * unit(query.group.exponent, query.group, query.coefficients)
            vals.append(v)
        r = massey3(*vals)
        out.append({"triple": parts, "defined": r.defined,
                    "representative": _element_json(r.representative),
                    "indeterminacy": [list(e.coords) for e in r.indeterminacy],
                    "provenance": _provenance(query, "massey", text)})
    return out


def run(query: RangeQuery, cache: Optional[str] = None, jobs: int = 1) -> dict:
    """All requested results for ``query`` as a JSON-ready dict in canonical order."""
    gradings = query.gradings()
    work = [(query.group, query.coefficients, v, cache) for v in gradings]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_cached_additive, work))
    else:
        chunks = [_cached_additive(w) for w in work]
    records = [dict(r) for chunk in chunks for r in chunk]
    if "names" in query.tasks:
        _names(query, records)
    if "products" in query.tasks:
        _products(query, records)
    for r in records:
        r["provenance"] = _provenance(query, r["grading"], r["degree"])
    out = {"engine": __version__, "query": query.as_dict(), "records": records}
    if "relations" in query.tasks:
        out["relations"] = _relations(query)
    if "massey" in query.tasks:
        out["massey"] = _massey(query)
    return out


# -- output -------------------------------------------------------------------------------


def to_json(result: dict) -> str:
    return json.dumps(result, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _expr_field(rec: dict, top: int) -> str:
    gens = rec.get("generators", {}).get(str(top))
    if not gens:
        return ""
    return ", ".join(g if g is not None else "?" for g in gens)


def to_table(result: dict) -> str:
    """Fixture-format lines ``grading | degree | name | top;middle;bottom | expr``."""
    top = result["query"]["group"][1]
    lines = [f"# engine {result['engine']}, {result['query']['coefficients']} coefficients"]
    for r in result["records"]:
        lines.append(" | ".join([r["grading"], str(r["degree"]), r["name"] or "?",
                                 ";".join(r["groups"]), _expr_field(r, top)]).rstrip(" |"))
    for r in result.get("relations", []):
        op = "ne" if r["kind"] == "differ" else "eq"
        lines.append(f"{op} | {r['lhs']} | {r['rhs']}" + ("" if r["status"] == "holds" else f"  # {r['status']}"))
    for r in result.get("massey", []):
        rep = r["representative"]
        lines.append(f"# massey <{', '.join(r['triple'])}>: "
                     + (f"{rep['coords']} in H_{rep['degree']}(S^{rep['grading']}), "
                        f"indeterminacy {r['indeterminacy']}" if r["defined"] else "undefined"))
    return "\n".join(lines) + "\n"


# -- fixtures -----------------------------------------------------------------------------


@dataclass
class FixtureRow:
    line: int
    fields: Tuple[str, ...]


def read_fixtures(path: str) -> List[FixtureRow]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, 1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            fields = tuple(f.strip() for f in text.split("|"))
            if len(fields) == 3 and fields[0] in ("eq", "ne"):
                rows.append(FixtureRow(n, fields))
            elif 2 <= len(fields) <= 5:
                rows.append(FixtureRow(n, fields + ("",) * (5 - len(fields))))
            else:
                raise QueryError(f"{path}:{n}: expected 5 '|'-separated fields or 'eq|ne | lhs | rhs'")
    return rows


def _check_additive(row: FixtureRow, group, coefficients) -> List[str]:
    from .catalog import identify
    from .green import normalize_grading, presentation

    grading_text, degree_text, name, groups, expr = row.fields
    try:
        v = parse_virtual(grading_text)
        k = int(degree_text)
    except (RepSyntaxError, ValueError) as e:
        raise QueryError(f"line {row.line}: {e}") from None
    g, d = normalize_grading(v, k)
    pres = presentation(g, d, group, coefficients)
    diffs = []
    if name and name != "*":
        got = "0" if pres.is_zero() else (identify(pres).name if group == C4 else "?")
        if got != name:
            diffs.append(f"name: expected {name}, got {got}")
    if groups and groups != "*":
        got = ";".join(pres.level_names())
        if got != groups.replace(" ", ""):
            diffs.append(f"groups: expected {groups}, got {got}")
    if expr and expr != "*":
        for e in _split_top(expr):
            msg = _check_expression(e, g, d, group, coefficients)
            if msg:
                diffs.append(msg)
    return diffs


def _split_top(text: str) -> List[str]:
    """Split on commas outside brackets (``x_{1,1}`` stays whole)."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch in "({[" and 1 or ch in ")}]" and -1 or 0
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    return [p for p in parts if p]


def _check_expression(text: str, grading, degree, group, coefficients) -> Optional[str]:
    from .factorize import ExpressionSyntaxError, evaluate
    from .green import generators, unit

    try:
        v = evaluate(text, coefficients)
    except ExpressionSyntaxError as e:
        return f"expression {text!r}: {e}"
    if isinstance(v, int):
        # integer literals live in the top level of H_0(S^0)
        v = v * unit(group.exponent, group, coefficients) if v else None
    if v is None:
        return f"expression {text!r} does not name a class here"
    if (v.grading, v.degree) != (grading, degree):
        return f"expression {text!r} lives in H_{v.degree}(S^{v.grading})"
    gens = generators(grading, degree, v.level, group, coefficients)
    if any(v == g or v == -g for g in gens):
        return None
    return f"expression {text!r} is {list(v.coords)}, not a generator at level {v.level}"


def _check_relation(row: FixtureRow, coefficients) -> List[str]:
    from .relations import Relation, check

    op, lhs, rhs = row.fields
    rel = Relation(f"line {row.line}", lhs, rhs, kind="differ" if op == "ne" else "equal")
    c = check(rel, {}, coefficients)
    return [] if c.status == "holds" else [f"{c.status}: {c.detail}".rstrip(": ")]


def verify(path: str, group: GroupSpec = C4, coefficients: CoefficientSystem = INTEGERS,
           out=None) -> int:
    """Compare every fixture row with a fresh computation; return the number of failures."""
    out = out or sys.stdout
    rows = read_fixtures(path)
    failures = 0
    for row in rows:
        if row.fields[0] in ("eq", "ne") and len(row.fields) == 3:
            diffs = _check_relation(row, coefficients)
        else:
            diffs = _check_additive(row, group, coefficients)
        label = " | ".join(f for f in row.fields if f)
        if diffs:
            failures += 1
            out.write(f"FAIL line {row.line}: {label}\n")
            for d in diffs:
                out.write(f"    {d}\n")
        else:
            out.write(f"ok   line {row.line}: {label}\n")
    out.write(f"{len(rows) - failures} passed, {failures} failed\n")
    return failures


# -- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mackeyro", description="RO(G)-graded homology of representation spheres "
                                "for cyclic p-groups, as Mackey functors.")
    p.add_argument("--group", default="2,2", help="p,n for the cyclic group of order p^n (default 2,2)")
    p.add_argument("--coefficients", default="Z", help="Z or Z/q")
    where = p.add_mutually_exclusive_group()
    where.add_argument("--sphere", help="a single virtual representation, e.g. 'sigma-2*lambda'")
    where.add_argument("--box", help="multiplicity bounds, e.g. 'n<=2,m<=2'")
    p.add_argument("--tasks", default="additive", help=f"comma-separated subset of {','.join(TASKS)}")
    p.add_argument("--triple", action="append", default=[], help="Massey triple 'x;y;z' (repeatable)")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--fixtures", help="verify a fixture file instead of computing a range")
    p.add_argument("--cache", help=f"result cache directory (default: ${CACHE_ENV})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the range")
    p.add_argument("--version", action="version", version=f"mackeyro {__version__}")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        group = parse_group(args.group)
        coefficients = CoefficientSystem.parse(args.coefficients)
        if args.jobs < 1:
            raise QueryError("--jobs must be at least 1")
        if args.fixtures:
            try:
                return 1 if verify(args.fixtures, group, coefficients) else 0
            except OSError as e:
                print(f"mackeyro: cannot read fixtures: {e}", file=sys.stderr)
                return 2
        sphere = None
        bounds: Tuple = ()
        if args.sphere is not None:
            sphere = parse_virtual(args.sphere)
            for i, _ in sphere.mult:
                if not i.valid_for(group):
                    raise QueryError(f"{i.name} is not an irreducible of {group}", args.sphere)
        elif args.box is not None:
            bounds = parse_box(args.box, group)
        tasks = tuple(t.strip() for t in args.tasks.split(",") if t.strip())
        query = RangeQuery(group, coefficients, bounds, sphere, tasks, tuple(args.triple))
    except (QueryError, RepSyntaxError, ValueError) as e:
        print(f"mackeyro: {e}", file=sys.stderr)
        return 2
    cache = args.cache or os.environ.get(CACHE_ENV) or None
    try:
        result = run(query, cache=cache, jobs=args.jobs)
    except QueryError as e:
        print(f"mackeyro: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"mackeyro: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(to_json(result) if args.format == "json" else to_table(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
