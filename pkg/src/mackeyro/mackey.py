"""Free Mackey functors over constant coefficients, as integer matrices.

A free module is a finite list of orbit generators ``G/H_l``.  Its bottom
level is the permutation module on the disjoint union of the orbits, with
``g^j x_b`` at offset ``offset[b] + j``.  The ``h``-level is the submodule of
``H_h``-fixed vectors, with basis the ``H_h``-orbit sums.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .group import GroupSpec, enumerate_orbits


@dataclass(frozen=True)
class CoefficientSystem:
    """Constant coefficients ``Z`` (modulus 0) or ``Z/q``."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError("modulus must be 0 or at least 2")

    @property
    def kind(self) -> str:
        return "Z" if self.modulus == 0 else "Z/q"

    @classmethod
    def parse(cls, text: str) -> "CoefficientSystem":
        t = text.strip()
        if t == "Z":
            return cls(0)
        m = re.fullmatch(r"Z/(\d+)", t)
        if not m:
            raise ValueError(f"unknown coefficients {text!r}; expected Z or Z/q")
        return cls(int(m.group(1)))

    def reduce(self, a):
        return a % self.modulus if self.modulus else a

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}"


INTEGERS = CoefficientSystem(0)


@dataclass(frozen=True)
class FreeMackeyModule:
    group: GroupSpec
    basis: Tuple[Tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple((int(l), str(s)) for l, s in self.basis))
        for lvl, _ in self.basis:
            if not 0 <= lvl <= self.group.exponent:
                raise ValueError(f"orbit level {lvl} out of range")

    @property
    def orbit_sizes(self) -> Tuple[int, ...]:
        return tuple(self.group.orbit_size(l) for l, _ in self.basis)

    @property
    def offsets(self) -> Tuple[int, ...]:
        out, acc = [], 0
        for s in self.orbit_sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    @property
    def bottom_rank(self) -> int:
        return sum(self.orbit_sizes)

    def level_rank(self, h: int) -> int:
        p, n = self.group.prime, self.group.exponent
        return sum(p ** (n - max(h, l)) for l, _ in self.basis)

    def bottom_labels(self) -> List[str]:
        out = []
        for (lvl, lab), size in zip(self.basis, self.orbit_sizes):
            for j in range(size):
                out.append(lab if j == 0 else f"g^{j}{lab}")
        return out

    def __len__(self):
        return len(self.basis)


def level_basis(m: FreeMackeyModule, h: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """The ``h``-level basis as ``(basis index, bottom indices summed)`` pairs.

    Ordered by basis index, then by the power of ``g`` of the coset
    representative.
    """
    return list(_level_basis(m, h))


@lru_cache(maxsize=4096)
def _level_basis(m: FreeMackeyModule, h: int):
    p, n = m.group.prime, m.group.exponent
    if not 0 <= h <= n:
        raise ValueError(f"level {h} out of range")
    out = []
    for b, ((lvl, _), off) in enumerate(zip(m.basis, m.offsets)):
        size = p ** (n - lvl)
        if h <= lvl:
            for j in range(size):
                out.append((b, (off + j,)))
        else:
            step = p ** (n - h)
            for j in range(step):
                out.append((b, tuple(off + j + t * step for t in range(size // step))))
    return tuple(out)


@lru_cache(maxsize=4096)
def inclusion(m: FreeMackeyModule, h: int) -> np.ndarray:
    """0/1 matrix of the ``h``-level basis in bottom coordinates."""
    lb = _level_basis(m, h)
    out = np.zeros((m.bottom_rank, len(lb)), dtype=np.int64)
    for c, (_, idx) in enumerate(lb):
        out[list(idx), c] = 1
    return out


@lru_cache(maxsize=4096)
def orbit_sum_sizes(m: FreeMackeyModule, h: int) -> np.ndarray:
    return np.array([len(idx) for _, idx in _level_basis(m, h)], dtype=np.int64)


@lru_cache(maxsize=4096)
def bottom_action(m: FreeMackeyModule) -> np.ndarray:
    """Permutation matrix of ``g`` on the bottom level."""
    r = m.bottom_rank
    out = np.zeros((r, r), dtype=np.int64)
    for off, size in zip(m.offsets, m.orbit_sizes):
        for j in range(size):
            out[off + (j + 1) % size, off + j] = 1
    return out


def bottom_shift(m: FreeMackeyModule, power: int = 1) -> np.ndarray:
    """Index array ``s`` with ``g^power`` sending bottom element ``i`` to ``s[i]``."""
    out = np.empty(m.bottom_rank, dtype=np.int64)
    for off, size in zip(m.offsets, m.orbit_sizes):
        for j in range(size):
            out[off + j] = off + (j + power) % size
    return out


def to_level(mat: np.ndarray, src: FreeMackeyModule, dst: FreeMackeyModule, h: int) -> np.ndarray:
    """Restrict an equivariant bottom-level map ``src -> dst`` to ``h``-levels.

    Exact: the image of an orbit sum is fixed, hence a combination of orbit
    sums, recovered by dividing the coordinate sums by the orbit sizes.
    """
    P_src = inclusion(src, h)
    P_dst = inclusion(dst, h)
    sizes = orbit_sum_sizes(dst, h)
    num = P_dst.T @ (mat @ P_src)
    if np.any(num % sizes[:, None]):
        raise ValueError("map is not equivariant")
    return num // sizes[:, None]


@dataclass
class LevelMaps:
    """``res[h]``: level h -> h-1; ``tr[h]``: level h-1 -> h; ``weyl[h]``: action of g."""

    res: Dict[int, np.ndarray] = field(default_factory=dict)
    tr: Dict[int, np.ndarray] = field(default_factory=dict)
    weyl: Dict[int, np.ndarray] = field(default_factory=dict)


def restriction(m: FreeMackeyModule, h: int) -> np.ndarray:
    """Fixed-point inclusion from level ``h`` to level ``h - 1``."""
    P_hi = inclusion(m, h)
    P_lo = inclusion(m, h - 1)
    sizes = orbit_sum_sizes(m, h - 1)
    return (P_lo.T @ P_hi) // sizes[:, None]


def transfer(m: FreeMackeyModule, h: int) -> np.ndarray:
    """Relative norm from level ``h - 1`` to level ``h``."""
    p, n = m.group.prime, m.group.exponent
    step = p ** (n - h)
    perm = bottom_action(m)
    gamma = np.linalg.matrix_power(perm, step) if m.bottom_rank else perm
    norm = np.zeros_like(perm)
    acc = np.eye(m.bottom_rank, dtype=np.int64)
    for _ in range(p):
        norm += acc
        acc = gamma @ acc
    return _transfer_exact(m, norm, h)


def _transfer_exact(m: FreeMackeyModule, norm: np.ndarray, h: int) -> np.ndarray:
    P_lo = inclusion(m, h - 1)
    P_hi = inclusion(m, h)
    sizes = orbit_sum_sizes(m, h)
    num = P_hi.T @ (norm @ P_lo)
    return num // sizes[:, None]


def weyl(m: FreeMackeyModule, h: int) -> np.ndarray:
    return to_level(bottom_action(m), m, m, h)


def structure_maps(m: FreeMackeyModule) -> LevelMaps:
    out = LevelMaps()
    for h in m.group.levels:
        out.weyl[h] = weyl(m, h)
        if h > 0:
            out.res[h] = restriction(m, h)
            out.tr[h] = transfer(m, h)
    return out


# -- box products ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _pair_orbits(s1: int, s2: int):
    return tuple(tuple(o) for o in enumerate_orbits((s1, s2)))


@dataclass(frozen=True)
class BoxProduct:
    """``m1 ⊠ m2`` with the bottom identification ``index[i1, i2]``."""

    module: FreeMackeyModule
    index: np.ndarray  # shape (bottom_rank(m1), bottom_rank(m2))


def box(m1: FreeMackeyModule, m2: FreeMackeyModule) -> BoxProduct:
    if m1.group != m2.group:
        raise ValueError("modules over different groups")
    g = m1.group
    basis = []
    index = np.empty((m1.bottom_rank, m2.bottom_rank), dtype=np.int64)
    pos = 0
    for (l1, lab1), off1, s1 in zip(m1.basis, m1.offsets, m1.orbit_sizes):
        for (l2, lab2), off2, s2 in zip(m2.basis, m2.offsets, m2.orbit_sizes):
            lvl = min(l1, l2)
            for k, orbit in enumerate(_pair_orbits(s1, s2)):
                basis.append((lvl, f"{lab1}*{lab2}" + (f"#{k}" if k else "")))
                for j, (a, b) in enumerate(orbit):
                    index[off1 + a, off2 + b] = pos + j
                pos += len(orbit)
    return BoxProduct(FreeMackeyModule(g, tuple(basis)), index)


def tensor_permutation(bp: BoxProduct) -> np.ndarray:
    """Permutation matrix from the Kronecker basis of the tensor product to the box basis."""
    r = bp.module.bottom_rank
    out = np.zeros((r, r), dtype=np.int64)
    out[bp.index.reshape(-1), np.arange(r)] = 1
    return out


def free_module(group: GroupSpec, *levels: int) -> FreeMackeyModule:
    """Convenience constructor: one generator per listed orbit level."""
    return FreeMackeyModule(group, tuple((l, f"x{i}") for i, l in enumerate(levels)))


def module_sum(mods: Sequence[FreeMackeyModule]) -> FreeMackeyModule:
    if not mods:
        raise ValueError("empty sum")
    return FreeMackeyModule(mods[0].group, tuple(b for m in mods for b in m.basis))
