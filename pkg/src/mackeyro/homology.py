"""Homology Mackey functors of free chain complexes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .chains import ChainComplex
from .group import GroupSpec, VirtualRep
from .mackey import inclusion, orbit_sum_sizes, restriction, to_level, transfer, weyl
from .zlinalg import HomologyGroup, homology


def level_differential(c: ChainComplex, k: int, h: int) -> np.ndarray:
    """``d_k`` restricted to ``h``-levels, in orbit-sum bases."""
    key = ("dlevel", k, h)
    if key not in c.cache:
        if k not in c.modules or k - 1 not in c.modules:
            m = np.zeros((c.module(k - 1).level_rank(h), c.module(k).level_rank(h)), dtype=np.int64)
        elif h == 0:
            m = c.d(k)
        else:
            m = to_level(c.d(k), c.module(k), c.module(k - 1), h)
        c.cache[key] = m
    return c.cache[key]


def level_homology(c: ChainComplex, k: int, h: int) -> HomologyGroup:
    """``H_k`` at level ``h`` with sign-normalized generators."""
    key = ("hlevel", k, h)
    if key not in c.cache:
        q = c.coefficients.modulus
        hg = homology(level_differential(c, k + 1, h), level_differential(c, k, h), modulus=q)
        if k in c.modules:
            P = inclusion(c.module(k), h)
            for i, (gen, order) in enumerate(zip(hg.generators, hg.orders)):
                if order == 2:
                    continue
                bottom = P @ np.array(gen, dtype=object)
                nz = np.nonzero(bottom)[0]
                if len(nz) and bottom[nz[0]] < 0:
                    hg.negate(i)
        c.cache[key] = hg
    return c.cache[key]


def _express_all(hg: HomologyGroup, vectors: np.ndarray) -> np.ndarray:
    cols = [hg.express([int(x) for x in vectors[:, j]]) for j in range(vectors.shape[1])]
    return np.array(cols, dtype=np.int64).T.reshape(hg.rank, vectors.shape[1])


@dataclass
class MackeyPresentation:
    """Homology Mackey functor in one degree.

    ``res[h]`` maps level ``h`` coordinates to level ``h-1`` coordinates,
    ``tr[h]`` goes back up, ``weyl[h]`` is the action of ``g`` at level ``h``.
    """

    group: GroupSpec
    degree: int
    groups: Dict[int, HomologyGroup]
    res: Dict[int, np.ndarray] = field(default_factory=dict)
    tr: Dict[int, np.ndarray] = field(default_factory=dict)
    weyl: Dict[int, np.ndarray] = field(default_factory=dict)
    grading: Optional[VirtualRep] = None
    complex: Optional[ChainComplex] = field(default=None, repr=False)

    def orders(self, h: int) -> List[int]:
        return list(self.groups[h].orders)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.groups.values())

    def level_names(self) -> List[str]:
        """Groups from the top level down."""
        return [str(self.groups[h]) for h in sorted(self.groups, reverse=True)]

    def reduce(self, h: int, coords: Sequence[int]) -> List[int]:
        return self.groups[h].reduce(coords)

    def apply_res(self, h: int, coords: Sequence[int]) -> List[int]:
        return self.reduce(h - 1, list(self.res[h] @ np.array(coords, dtype=np.int64)))

    def apply_tr(self, h: int, coords: Sequence[int]) -> List[int]:
        return self.reduce(h, list(self.tr[h] @ np.array(coords, dtype=np.int64)))

    def apply_weyl(self, h: int, coords: Sequence[int]) -> List[int]:
        return self.reduce(h, list(self.weyl[h] @ np.array(coords, dtype=np.int64)))

    def lift(self, h: int, coords: Sequence[int]) -> np.ndarray:
        """A level-``h`` cycle representing the class."""
        return np.array(self.groups[h].lift(coords), dtype=np.int64)

    def bottom_cycle(self, h: int, coords: Sequence[int]) -> np.ndarray:
        """The class's cycle pushed to bottom-level chains (restriction is injective there)."""
        cyc = self.lift(h, coords)
        if self.complex is None or self.degree not in self.complex.modules:
            return cyc
        return inclusion(self.complex.module(self.degree), h) @ cyc

    def express(self, h: int, cycle: Sequence[int]) -> List[int]:
        return self.groups[h].express([int(x) for x in cycle])

    def express_bottom(self, h: int, bottom: np.ndarray) -> List[int]:
        """Coordinates of a bottom-level cycle that is fixed by the level-``h`` subgroup."""
        m = self.complex.module(self.degree)
        P = inclusion(m, h)
        sizes = orbit_sum_sizes(m, h)
        num = P.T @ bottom
        if np.any(num % sizes):
            raise ValueError("cycle is not fixed at this level")
        return self.express(h, num // sizes)


def compute_homology(c: ChainComplex, k: int, grading: Optional[VirtualRep] = None) -> MackeyPresentation:
    """Homology Mackey functor of ``c`` in degree ``k``."""
    key = ("mackey", k)
    if key in c.cache:
        pres = c.cache[key]
        if grading is not None and pres.grading is None:
            pres.grading = grading
        return pres
    group = c.group
    groups = {h: level_homology(c, k, h) for h in group.levels}
    pres = MackeyPresentation(group, k, groups, grading=grading, complex=c)
    m = c.module(k)
    for h in group.levels:
        hg = groups[h]
        gens = np.array(hg.generators, dtype=np.int64).T.reshape(m.level_rank(h), hg.rank)
        pres.weyl[h] = _express_all(hg, weyl(m, h) @ gens) if hg.rank else np.zeros((0, 0), dtype=np.int64)
        if h > 0:
            lo = groups[h - 1]
            lo_gens = np.array(lo.generators, dtype=np.int64).T.reshape(m.level_rank(h - 1), lo.rank)
            pres.res[h] = _express_all(lo, restriction(m, h) @ gens) if hg.rank else np.zeros((lo.rank, 0), dtype=np.int64)
            pres.tr[h] = _express_all(hg, transfer(m, h) @ lo_gens) if lo.rank else np.zeros((hg.rank, 0), dtype=np.int64)
    c.cache[key] = pres
    return pres
