"""Equivariant cellular chains of representation spheres.

``positive_chains(V)`` has one orbit of cells per degree.  Degree 0 is the
basepoint cell ``1``.  Each irreducible summand adds cells on top of the
sphere built so far: a junction cell whose boundary is the fundamental cycle
below, and for a rotation a second cell with boundary ``a - eps * g a``.
The orbit types shrink with degree, so for every subgroup ``K`` the cells
fixed by ``K`` form a bottom segment, which is the complex of ``S^(V^K)``.

Negative spheres use the dual cochains, regraded to non-positive degrees.
Virtual spheres are box products of the two.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from .group import GroupSpec, VirtualRep, split_virtual
from .mackey import INTEGERS, CoefficientSystem, FreeMackeyModule, box, bottom_shift
from .zlinalg import smith


@dataclass
class ChainComplex:
    """Free Mackey chain complex with bottom-level differentials.

    ``diffs[k]`` maps degree ``k`` to ``k - 1`` as an int64 matrix.
    ``blocks`` is set for box products: for each degree, a list of
    ``(k1, k2, offset, index)`` with ``index[i1, i2]`` the position of
    ``e_i1 ⊗ f_i2`` relative to ``offset``.
    """

    group: GroupSpec
    modules: Dict[int, FreeMackeyModule]
    diffs: Dict[int, np.ndarray]
    coefficients: CoefficientSystem = INTEGERS
    name: str = ""
    factors: Optional[Tuple["ChainComplex", "ChainComplex"]] = None
    blocks: Dict[int, List[Tuple[int, int, int, np.ndarray]]] = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def lo(self) -> int:
        return min(self.modules) if self.modules else 0

    @property
    def hi(self) -> int:
        return max(self.modules) if self.modules else -1

    def module(self, k: int) -> FreeMackeyModule:
        m = self.modules.get(k)
        return m if m is not None else FreeMackeyModule(self.group, ())

    def rank(self, k: int) -> int:
        return self.module(k).bottom_rank

    def d(self, k: int) -> np.ndarray:
        """Bottom differential ``C_k -> C_{k-1}`` (zero matrix outside the range)."""
        m = self.diffs.get(k)
        if m is not None:
            return m
        return np.zeros((self.rank(k - 1), self.rank(k)), dtype=np.int64)

    def check(self) -> bool:
        """``d o d == 0`` (mod the coefficient modulus)."""
        q = self.coefficients.modulus
        for k in range(self.lo + 2, self.hi + 1):
            prod = self.d(k - 1) @ self.d(k)
            if q:
                prod = prod % q
            if np.any(prod):
                return False
        return True

    def with_coefficients(self, coeffs: CoefficientSystem) -> "ChainComplex":
        return ChainComplex(self.group, self.modules, self.diffs, coeffs, self.name,
                            self.factors, self.blocks)

    def shifted(self, t: int) -> "ChainComplex":
        if t == 0:
            return self
        return ChainComplex(
            self.group,
            {k + t: m for k, m in self.modules.items()},
            {k + t: d for k, d in self.diffs.items()},
            self.coefficients,
            self.name,
            self.factors,
            {k + t: b for k, b in self.blocks.items()},
        )


def _kernel_generator(d: np.ndarray) -> np.ndarray:
    """Primitive generator of a rank-one kernel, first nonzero entry positive."""
    res = smith(d.astype(object))
    r = res.rank
    n = d.shape[1]
    if n - r != 1:
        raise ArithmeticError(f"expected a rank-one kernel, found rank {n - r}")
    z = np.array([int(res.V[i, r]) for i in range(n)], dtype=np.int64)
    first = z[np.nonzero(z)[0][0]]
    return z if first > 0 else -z


def _equivariant_columns(rep: np.ndarray, target: FreeMackeyModule, count: int) -> np.ndarray:
    """Columns ``g^j rep`` for ``j < count``."""
    out = np.zeros((target.bottom_rank, count), dtype=np.int64)
    for j in range(count):
        out[bottom_shift(target, j), j] = rep
    return out


@lru_cache(maxsize=None)
def _positive(group: GroupSpec, rep: VirtualRep) -> ChainComplex:
    levels: List[int] = [group.exponent]
    labels: List[str] = ["1"]
    diffs: Dict[int, np.ndarray] = {}
    modules: Dict[int, FreeMackeyModule] = {0: FreeMackeyModule(group, ((group.exponent, "1"),))}

    def add_cell(level: int, label: str, rep_boundary: np.ndarray):
        k = len(levels)
        levels.append(level)
        labels.append(label)
        m = FreeMackeyModule(group, ((level, label),))
        modules[k] = m
        diffs[k] = _equivariant_columns(rep_boundary, modules[k - 1], m.bottom_rank)

    def top_cycle() -> np.ndarray:
        k = len(levels) - 1
        if k == 0:
            return np.array([1], dtype=np.int64)
        return _kernel_generator(diffs[k])

    for irr, mult in rep.mult:
        if mult < 0:
            raise ValueError("positive chains need an actual representation")
        if not irr.valid_for(group):
            raise ValueError(f"{irr} is not an irreducible of {group}")
        lvl = irr.kernel_level(group)
        for _ in range(mult):
            z = top_cycle()
            k = len(levels)
            add_cell(lvl, f"{irr.name}:e{k}", z)
            if irr.dim == 2:
                below = modules[k - 1]
                gz = np.zeros_like(z)
                gz[bottom_shift(below, 1)] = z
                eps = 1 if np.array_equal(gz, z) else -1
                if eps == -1 and not np.array_equal(gz, -z):
                    raise ArithmeticError("fundamental cycle is not g-semi-invariant")
                a = modules[k]
                bvec = np.zeros(a.bottom_rank, dtype=np.int64)
                bvec[0] += 1
                bvec[bottom_shift(a, 1)[0]] -= eps
                add_cell(lvl, f"{irr.name}:e{k + 1}", bvec)
    return ChainComplex(group, modules, diffs, name=f"C({rep})")


def positive_chains(v: VirtualRep, group: GroupSpec) -> ChainComplex:
    """Cellular chains of ``S^V`` for an actual ``V``."""
    if not v.is_actual():
        raise ValueError(f"{v} has a negative multiplicity")
    return _positive(group, v.nontrivial()).shifted(v.trivial)


@lru_cache(maxsize=None)
def _negative(group: GroupSpec, rep: VirtualRep) -> ChainComplex:
    pos = _positive(group, rep)
    modules = {}
    diffs = {}
    for j, m in pos.modules.items():
        modules[-j] = FreeMackeyModule(group, tuple((l, lab + "^") for l, lab in m.basis))
    for j in range(0, pos.hi):
        sign = -1 if (j + 1) % 2 else 1
        diffs[-j] = sign * pos.d(j + 1).T
    return ChainComplex(group, modules, diffs, name=f"C^({rep})")


def negative_cochains(v: VirtualRep, group: GroupSpec) -> ChainComplex:
    """Dual cochains of ``S^V`` in degrees ``[-dim V, 0]``: a model for ``S^(-V)``."""
    if not v.is_actual():
        raise ValueError(f"{v} has a negative multiplicity")
    return _negative(group, v.nontrivial()).shifted(-v.trivial)


def box_complex(c1: ChainComplex, c2: ChainComplex) -> ChainComplex:
    """Tensor product with differential ``d x 1 + (-1)^deg 1 x d``."""
    if c1.group != c2.group:
        raise ValueError("complexes over different groups")
    group = c1.group
    blocks: Dict[int, List[Tuple[int, int, int, np.ndarray]]] = {}
    parts: Dict[int, list] = {}
    where: Dict[Tuple[int, int], Tuple[int, int, np.ndarray]] = {}
    for k in range(c1.lo + c2.lo, c1.hi + c2.hi + 1):
        mods, off, blist = [], 0, []
        for k1 in range(c1.lo, c1.hi + 1):
            k2 = k - k1
            if k2 not in c2.modules:
                continue
            bp = box(c1.module(k1), c2.module(k2))
            mods.append(bp.module)
            blist.append((k1, k2, off, bp.index))
            where[(k1, k2)] = (k, off, bp.index)
            off += bp.module.bottom_rank
        if mods:
            parts[k] = mods
            blocks[k] = blist
    modules = {k: FreeMackeyModule(group, tuple(b for m in mods for b in m.basis))
               for k, mods in parts.items()}
    diffs = {}
    for k, blist in blocks.items():
        if k - 1 not in modules:
            continue
        d = np.zeros((modules[k - 1].bottom_rank, modules[k].bottom_rank), dtype=np.int64)
        for k1, k2, off, idx in blist:
            cols = off + idx  # (r1, r2)
            if (k1 - 1, k2) in where:
                _, toff, tidx = where[(k1 - 1, k2)]
                d1 = c1.d(k1)
                # e_i1 ⊗ f_i2  ->  sum_a d1[a, i1] e_a ⊗ f_i2
                for i1 in range(d1.shape[1]):
                    nz = np.nonzero(d1[:, i1])[0]
                    for a in nz:
                        d[toff + tidx[a, :], cols[i1, :]] += d1[a, i1]
            if (k1, k2 - 1) in where:
                _, toff, tidx = where[(k1, k2 - 1)]
                d2 = c2.d(k2)
                sign = -1 if k1 % 2 else 1
                for i2 in range(d2.shape[1]):
                    nz = np.nonzero(d2[:, i2])[0]
                    for b in nz:
                        d[toff + tidx[:, b], cols[:, i2]] += sign * d2[b, i2]
        diffs[k] = d
    name = f"{c1.name}⊠{c2.name}" if c1.name and c2.name else ""
    coeffs = c1.coefficients if c1.coefficients.modulus else c2.coefficients
    return ChainComplex(group, modules, diffs, coeffs, name, (c1, c2), blocks)


@lru_cache(maxsize=None)
def _sphere_pair(group: GroupSpec, plus: VirtualRep, minus: VirtualRep) -> ChainComplex:
    c = box_complex(_positive(group, plus), _negative(group, minus))
    c.name = f"S^({plus})-({minus})" if minus.mult else f"S^({plus})"
    return c


def sphere_pair_complex(plus: VirtualRep, minus: VirtualRep, group: GroupSpec,
                        coefficients: CoefficientSystem = INTEGERS) -> ChainComplex:
    """``C(plus) ⊠ C^(minus)`` without cancelling common summands."""
    if not (plus.is_actual() and minus.is_actual()):
        raise ValueError("both parts must be actual representations")
    c = _sphere_pair(group, plus.nontrivial(), minus.nontrivial()).shifted(plus.trivial - minus.trivial)
    return c if coefficients == INTEGERS else c.with_coefficients(coefficients)


def sphere_complex(v: VirtualRep, group: GroupSpec,
                   coefficients: CoefficientSystem = INTEGERS) -> ChainComplex:
    """Chains of ``S^v`` as ``C(v+) ⊠ C^(v-)``."""
    plus, minus = split_virtual(v)
    return sphere_pair_complex(plus, minus, group, coefficients)


def dump(c: ChainComplex) -> str:
    """Plain-text listing: one section per degree with basis and differential."""
    lines = [f"complex {c.name or '?'} over {c.group} coefficients {c.coefficients}",
             f"degrees {c.lo}..{c.hi}"]
    for k in range(c.hi, c.lo - 1, -1):
        m = c.module(k)
        lines.append(f"degree {k}: {m.bottom_rank} cells")
        for lvl, lab in m.basis:
            lines.append(f"  orbit level {lvl}: {lab}")
        if k - 1 >= c.lo:
            d = c.d(k)
            lines.append(f"  d_{k}: {d.shape[0]}x{d.shape[1]}")
            for row in d:
                lines.append("    " + " ".join(f"{int(x):3d}" for x in row))
    return "\n".join(lines) + "\n"
