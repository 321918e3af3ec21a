"""Equivariant comparison maps between tensor models of the same sphere.

Both ends are tensor products of positive sphere complexes, so every cell
has a stabilizer and the cells fixed by a subgroup ``K`` form the complex of
the fixed sphere, which is acyclic below its top degree.  A chain map is
built one orbit representative at a time by solving ``d F(e) = F(d e)``
inside the ``K``-fixed part of the target, then corrected so that it has
degree ``+1`` on every fixed sphere, measured against the normalized
fundamental cycles.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .chains import _kernel_generator, _positive, box_complex
from .group import GroupSpec, VirtualRep
from .mackey import bottom_shift
from .zlinalg import LinearSolver


class TensorModel:
    """``C(V_1) ⊗ ... ⊗ C(V_r)`` (r = 1 or 2) with cell data for lifting.

    ``total`` indexing concatenates the bottom cells of all degrees in
    increasing degree order.
    """

    def __init__(self, group: GroupSpec, reps: Tuple[VirtualRep, ...]):
        self.group = group
        self.reps = reps
        self.factors = [_positive(group, r) for r in reps]
        if len(reps) == 1:
            self.complex = self.factors[0]
        else:
            self.complex = box_complex(self.factors[0], self.factors[1])
        c = self.complex
        self.degrees = list(range(c.lo, c.hi + 1))
        self.offset: Dict[int, int] = {}
        acc = 0
        for k in self.degrees:
            self.offset[k] = acc
            acc += c.rank(k)
        self.size = acc
        # per-degree cell stabilizer levels and orbit layout
        self.stab: Dict[int, np.ndarray] = {}
        self.orbits: Dict[int, List[Tuple[int, int, int]]] = {}  # (level, start, size)
        for k in self.degrees:
            m = c.module(k)
            st = np.empty(m.bottom_rank, dtype=np.int64)
            orb = []
            for (lvl, _), off, size in zip(m.basis, m.offsets, m.orbit_sizes):
                st[off:off + size] = lvl
                orb.append((lvl, off, size))
            self.stab[k] = st
            self.orbits[k] = orb
        self._solvers: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray, LinearSolver]] = {}

    def degree_of_total(self) -> np.ndarray:
        out = np.empty(self.size, dtype=np.int64)
        for k in self.degrees:
            out[self.offset[k]:self.offset[k] + self.complex.rank(k)] = k
        return out

    def top(self, level: int) -> int:
        return sum(r.fixed_dim(self.group, level) for r in self.reps)

    def fundamental_cycle(self, level: int) -> np.ndarray:
        """Normalized fundamental cycle of the fixed sphere at ``level`` (degree ``top``)."""
        cycles = []
        for f, r in zip(self.factors, self.reps):
            t = r.fixed_dim(self.group, level)
            cycles.append((t, np.array([1], dtype=np.int64) if t == 0 else _kernel_generator(f.d(t))))
        if len(cycles) == 1:
            return cycles[0][1]
        (t1, z1), (t2, z2) = cycles
        k = t1 + t2
        out = np.zeros(self.complex.rank(k), dtype=np.int64)
        for k1, k2, off, idx in self.complex.blocks[k]:
            if k1 == t1:
                out[off + idx] = np.outer(z1, z2)
        return out

    def solver(self, k: int, level: int):
        """Solver for ``d`` on cells of degree ``k`` fixed by ``level`` (into degree ``k-1``)."""
        key = (k, level)
        if key not in self._solvers:
            cols = np.nonzero(self.stab[k] >= level)[0]
            rows = np.nonzero(self.stab[k - 1] >= level)[0] if k - 1 in self.stab else np.zeros(0, dtype=np.int64)
            d = self.complex.d(k)[np.ix_(rows, cols)]
            self._solvers[key] = (rows, cols, LinearSolver(d.astype(object)))
        return self._solvers[key]


def _shift_vec(model: TensorModel, k: int, vec: np.ndarray, power: int) -> np.ndarray:
    out = np.zeros_like(vec)
    out[bottom_shift(model.complex.module(k), power)] = vec
    return out


def lift_map(src: TensorModel, dst: TensorModel) -> Dict[int, np.ndarray]:
    """Equivariant chain map ``src -> dst`` of degree +1 on every fixed sphere."""
    group = src.group
    if src.top(0) != dst.top(0):
        raise ValueError("models of different spheres")
    F: Dict[int, np.ndarray] = {}
    for k in src.degrees:
        rk = dst.complex.rank(k)
        Fk = np.zeros((rk, src.complex.rank(k)), dtype=np.int64)
        dsrc = src.complex.d(k)
        for lvl, start, size in src.orbits[k]:
            if k == src.degrees[0]:
                # degree-0 basepoint: send 1 to 1
                target = np.zeros(rk, dtype=np.int64)
                target[0] = 1
            else:
                w = F[k - 1] @ dsrc[:, start]
                rows, cols, solver = dst.solver(k, lvl)
                mask = np.ones(len(w), dtype=bool)
                mask[rows] = False
                if np.any(w[mask]):
                    raise ArithmeticError("boundary left the fixed subcomplex")
                y = solver.solve([int(v) for v in w[rows]])
                if y is None:
                    raise ArithmeticError(f"cannot lift cell in degree {k}")
                target = np.zeros(rk, dtype=np.int64)
                target[cols] = np.array(y, dtype=np.int64)
            for j in range(size):
                Fk[:, start + j] = _shift_vec(dst, k, target, j) if j else target
        F[k] = Fk
    # degree normalization, largest subgroup first
    for lvl in range(group.exponent, -1, -1):
        t = src.top(lvl)
        if t == 0:
            continue
        zs = src.fundamental_cycle(lvl)
        zt = dst.fundamental_cycle(lvl)
        img = F[t] @ zs
        c = _ratio(img, zt)
        if c == 1:
            continue
        cands = [(st, size) for l, st, size in src.orbits[t] if l == lvl and zs[st] != 0]
        if not cands:
            raise ArithmeticError(f"cannot normalize degree at level {lvl}: fixed degree is {c}")
        start, size = cands[0]
        # adding s*zt at the representative changes the degree by s * zs[start] * size
        step = int(zs[start]) * size
        if (1 - c) % step:
            raise ArithmeticError(f"degree {c} at level {lvl} cannot be corrected to 1")
        s = (1 - c) // step
        for j in range(size):
            F[t][:, start + j] += s * (_shift_vec(dst, t, zt, j) if j else zt)
        if _ratio(F[t] @ zs, zt) != 1:
            raise ArithmeticError("degree normalization failed")
    return F


def _ratio(img: np.ndarray, z: np.ndarray) -> int:
    i = int(np.nonzero(z)[0][0])
    c, r = divmod(int(img[i]), int(z[i]))
    if r or np.any(img != c * z):
        raise ArithmeticError("image of the fundamental cycle is not a multiple of the target cycle")
    return c


def to_total(model: TensorModel, F: Dict[int, np.ndarray], other: TensorModel) -> np.ndarray:
    """Assemble per-degree blocks of a degree-0 map ``other -> model`` into one matrix."""
    out = np.zeros((model.size, other.size), dtype=np.int64)
    for k, blk in F.items():
        out[model.offset[k]:model.offset[k] + blk.shape[0],
            other.offset[k]:other.offset[k] + blk.shape[1]] = blk
    return out


@lru_cache(maxsize=None)
def tensor_model(group: GroupSpec, reps: Tuple[VirtualRep, ...]) -> TensorModel:
    return TensorModel(group, reps)


@lru_cache(maxsize=256)
def comparison(group: GroupSpec, src: Tuple[VirtualRep, ...], dst: Tuple[VirtualRep, ...]) -> np.ndarray:
    """Total matrix of the normalized comparison map between two tensor models."""
    s = tensor_model(group, src)
    d = tensor_model(group, dst)
    return to_total(d, lift_map(s, d), s)
