"""Recognition of C_4 Mackey functors against a fixed list of Lewis diagrams.

A diagram is stored level by level (2 = top, 1 = middle, 0 = bottom) as
cyclic orders (0 for Z) with restriction, transfer and Weyl matrices in the
given generators.  Matching finds level-wise isomorphisms that conjugate one
diagram onto another, by exhaustive search over small automorphism sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .zlinalg import invariant_factors

LEVELS = (2, 1, 0)


@dataclass
class LewisDiagram:
    orders: Dict[int, List[int]]
    res: Dict[int, np.ndarray]
    tr: Dict[int, np.ndarray]
    weyl: Dict[int, np.ndarray]

    def rank(self, h: int) -> int:
        return len(self.orders[h])

    def level_names(self) -> List[str]:
        out = []
        for h in LEVELS:
            o = self.orders[h]
            out.append("+".join("Z" if x == 0 else f"Z/{x}" for x in o) or "0")
        return out


def _m(rows, r, c) -> np.ndarray:
    return np.array(rows, dtype=np.int64).reshape(r, c)


def _diagram(orders: Tuple[Sequence[int], Sequence[int], Sequence[int]],
             res21=None, tr12=None, res10=None, tr01=None, w1=1, w0=1) -> LewisDiagram:
    o = {2: list(orders[0]), 1: list(orders[1]), 0: list(orders[2])}
    r = {h: len(o[h]) for h in o}

    def cell(val, rows, cols):
        if rows == 0 or cols == 0:
            return np.zeros((rows, cols), dtype=np.int64)
        return _m([val], rows, cols)

    return LewisDiagram(
        orders=o,
        res={2: cell(res21, r[1], r[2]), 1: cell(res10, r[0], r[1])},
        tr={2: cell(tr12, r[2], r[1]), 1: cell(tr01, r[1], r[0])},
        weyl={2: cell(1, r[2], r[2]), 1: cell(w1, r[1], r[1]), 0: cell(w0, r[0], r[0])},
    )


# Order matters: it fixes how direct sums are spelled.
CATALOG: Dict[str, LewisDiagram] = {
    "Z": _diagram(([0], [0], [0]), 1, 2, 1, 2),
    "Z-": _diagram(([], [0], [0]), None, None, 1, 2, -1, -1),
    "<Z/4>": _diagram(([4], [2], []), 1, 2),
    "L": _diagram(([0], [0], [0]), 2, 1, 2, 1),
    "p*L": _diagram(([0], [0], [0]), 2, 1, 1, 2),
    "L-": _diagram(([2], [0], [0]), 0, 1, 2, 1, -1, -1),
    "p*L-": _diagram(([2], [0], [0]), 0, 1, 1, 2, -1, -1),
    "Q": _diagram(([2], [2], []), 0, 1),
    "Q#": _diagram(([2], [2], []), 1, 0),
    "L#": _diagram(([0], [0], [0]), 1, 2, 2, 1),
    "Z-b": _diagram(([], [0], [0]), None, None, 2, 1, -1, -1),
    "<Z/2>": _diagram(([2], [], [])),
    "bar<Z/2>": _diagram(([], [2], [])),
}

CATALOG_NAMES = tuple(CATALOG)


def direct_sum(parts: Sequence[LewisDiagram]) -> LewisDiagram:
    orders = {h: [o for p in parts for o in p.orders[h]] for h in LEVELS}

    def block(mats):
        rows = sum(m.shape[0] for m in mats)
        cols = sum(m.shape[1] for m in mats)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for m in mats:
            out[r:r + m.shape[0], c:c + m.shape[1]] = m
            r += m.shape[0]
            c += m.shape[1]
        return out

    return LewisDiagram(
        orders=orders,
        res={h: block([p.res[h] for p in parts]) for h in (2, 1)},
        tr={h: block([p.tr[h] for p in parts]) for h in (2, 1)},
        weyl={h: block([p.weyl[h] for p in parts]) for h in LEVELS},
    )


def diagram(name: str) -> LewisDiagram:
    """The Lewis diagram of a catalog name or a ``+``-separated sum."""
    if name == "0":
        return direct_sum([])
    parts = []
    for piece in _split_name(name):
        if piece not in CATALOG:
            raise KeyError(f"unknown Mackey functor {piece!r}")
        parts.append(CATALOG[piece])
    return direct_sum(parts)


def _split_name(name: str) -> List[str]:
    # "Z-+<Z/2>" must split after "Z-", so scan for known names greedily.
    out, i = [], 0
    names = sorted(CATALOG_NAMES, key=len, reverse=True)
    while i < len(name):
        for n in names:
            if name.startswith(n, i):
                out.append(n)
                i += len(n)
                break
        else:
            raise KeyError(f"cannot parse Mackey functor name {name!r}")
        if i < len(name):
            if name[i] != "+":
                raise KeyError(f"cannot parse Mackey functor name {name!r}")
            i += 1
    return out


@dataclass
class CatalogEntry:
    """A recognised functor.  ``witness[h]`` maps presentation coordinates to catalog ones."""

    name: str
    terms: Tuple[str, ...]
    witness: Dict[int, np.ndarray] = field(default_factory=dict)
    known: bool = True
    raw: Optional[LewisDiagram] = None

    def __str__(self):
        return self.name


def _signature(d: LewisDiagram) -> Tuple:
    return tuple(tuple(sorted(d.orders[h])) for h in LEVELS)


_SUMS: Dict[Tuple, List[Tuple[str, ...]]] = {}


def _sums_by_signature() -> Dict[Tuple, List[Tuple[str, ...]]]:
    if not _SUMS:
        for k in (1, 2, 3):
            for combo in combinations_with_replacement(CATALOG_NAMES, k):
                sig = _signature(direct_sum([CATALOG[c] for c in combo]))
                _SUMS.setdefault(sig, []).append(combo)
    return _SUMS


def _candidate_maps(src: List[int], dst: List[int]):
    """All homomorphisms between the given cyclic decompositions, as matrices."""
    choices = []
    free_rank = sum(1 for o in dst if o == 0)
    for o_dst in dst:
        row = []
        for o_src in src:
            if o_dst == 0:
                if o_src != 0:
                    row.append((0,))
                elif free_rank == 1 and sum(1 for s in src if s == 0) == 1:
                    row.append((1, -1))
                else:
                    row.append((-1, 0, 1))
            else:
                # need o_src * x == 0 mod o_dst
                row.append(tuple(x for x in range(o_dst) if o_src == 0 or (o_src * x) % o_dst == 0))
        choices.append(row)
    rows, cols = len(dst), len(src)
    flat = [c for row in choices for c in row]
    for vals in product(*flat):
        yield np.array(vals, dtype=np.int64).reshape(rows, cols)


def _is_iso(phi: np.ndarray, dst: List[int]) -> bool:
    rows = phi.shape[0]
    if rows == 0:
        return True
    rel = np.diag(np.array(dst, dtype=np.int64))
    full = np.concatenate([phi, rel], axis=1)
    f = invariant_factors(full)
    return len(f) == rows and all(x == 1 for x in f)


def _eq(a: np.ndarray, b: np.ndarray, orders: List[int]) -> bool:
    if a.size == 0:
        return True
    diff = a - b
    for i, o in enumerate(orders):
        row = diff[i]
        if o:
            row = row % o
        if np.any(row):
            return False
    return True


def find_isomorphism(src: LewisDiagram, dst: LewisDiagram) -> Optional[Dict[int, np.ndarray]]:
    """Level-wise isomorphisms ``phi`` with ``phi`` commuting with res, tr and weyl."""
    if _signature(src) != _signature(dst):
        return None
    cands = {}
    for h in LEVELS:
        lst = []
        for phi in _candidate_maps(src.orders[h], dst.orders[h]):
            if not _is_iso(phi, dst.orders[h]):
                continue
            if not _eq(phi @ src.weyl[h], dst.weyl[h] @ phi, dst.orders[h]):
                continue
            lst.append(phi)
        if not lst:
            return None
        cands[h] = lst
    for p2 in cands[2]:
        for p1 in cands[1]:
            if not _eq(p1 @ src.res[2], dst.res[2] @ p2, dst.orders[1]):
                continue
            if not _eq(p2 @ src.tr[2], dst.tr[2] @ p1, dst.orders[2]):
                continue
            for p0 in cands[0]:
                if not _eq(p0 @ src.res[1], dst.res[1] @ p1, dst.orders[0]):
                    continue
                if not _eq(p1 @ src.tr[1], dst.tr[1] @ p0, dst.orders[1]):
                    continue
                return {2: p2, 1: p1, 0: p0}
    return None


def identify_diagram(d: LewisDiagram) -> CatalogEntry:
    if all(not d.orders[h] for h in LEVELS):
        return CatalogEntry("0", (), {h: np.zeros((0, 0), dtype=np.int64) for h in LEVELS})
    for combo in _sums_by_signature().get(_signature(d), []):
        w = find_isomorphism(d, direct_sum([CATALOG[c] for c in combo]))
        if w is not None:
            return CatalogEntry("+".join(combo), combo, w)
    return CatalogEntry("?", (), {}, known=False, raw=d)


def diagram_of(pres) -> LewisDiagram:
    """Convert a computed presentation of a C_4 functor."""
    if set(pres.groups) != set(LEVELS):
        raise ValueError("catalog matching is only available for C_4")
    return LewisDiagram(
        orders={h: pres.orders(h) for h in LEVELS},
        res={h: np.asarray(pres.res[h], dtype=np.int64) for h in (2, 1)},
        tr={h: np.asarray(pres.tr[h], dtype=np.int64) for h in (2, 1)},
        weyl={h: np.asarray(pres.weyl[h], dtype=np.int64) for h in LEVELS},
    )


def identify(pres) -> CatalogEntry:
    """Catalog name (possibly a direct sum) of a C_4 homology presentation."""
    return identify_diagram(diagram_of(pres))


def sharp(d: LewisDiagram) -> LewisDiagram:
    """Exchange the top restriction and transfer (only meaningful on rank-one levels)."""
    return LewisDiagram(d.orders, {2: d.tr[2].T.copy(), 1: d.res[1]}, {2: d.res[2].T.copy(), 1: d.tr[1]}, d.weyl)


def flat(d: LewisDiagram) -> LewisDiagram:
    """Exchange the bottom restriction and transfer."""
    return LewisDiagram(d.orders, {2: d.res[2], 1: d.tr[1].T.copy()}, {2: d.tr[2], 1: d.res[1].T.copy()}, d.weyl)
