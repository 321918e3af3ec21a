"""Triple Massey products from chain-level bounding chains.

Classes are represented by equivariant maps ``C(B) -> C(A)`` of positive
sphere complexes.  Products of maps are formed in the external tensor model
``Hom(C(B_1)⊗C(B_2)⊗..., C(A_1)⊗C(A_2)⊗...)``, where the product is strictly
associative, so the usual defining system works verbatim:

    D s = x⊗y,   D t = y⊗z,   <x, y, z> ∋ [s⊗z + (-1)^(|x|+1) x⊗t].

The resulting cycle is moved to the reduced model with comparison maps.
Equivariance at level ``h`` is imposed by parametrizing maps by their values
on orbit representatives of pairs of cells.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .chains import sphere_complex
from .comparison import comparison, tensor_model
from .green import (HomologyElement, _pair_index, class_of_pair_map, generators, hom_matrix, res,
                    zero)
from .group import GroupSpec, VirtualRep, split_virtual
from .mackey import bottom_shift
from .zlinalg import LinearSolver, kernel_basis


class MasseyError(ArithmeticError):
    """A bounding equation that should be solvable was not."""


# -- tensor models as explicit matrices -------------------------------------------------


@dataclass(frozen=True)
class _Space:
    """Bottom-level ``C(V_1) ⊗ ... ⊗ C(V_r)`` in Kronecker indexing."""

    d: np.ndarray  # total differential, lowers degree by one
    deg: np.ndarray
    g: np.ndarray  # g sends cell i to cell g[i]

    @property
    def size(self) -> int:
        return len(self.deg)

    def power(self, k: int) -> np.ndarray:
        out = np.arange(self.size)
        for _ in range(k):
            out = self.g[out]
        return out


@lru_cache(maxsize=None)
def _factor(group: GroupSpec, rep: VirtualRep) -> _Space:
    model = tensor_model(group, (rep,))
    c = model.complex
    d = np.zeros((model.size, model.size), dtype=np.int64)
    g = np.empty(model.size, dtype=np.int64)
    for k in model.degrees:
        o = model.offset[k]
        n = c.rank(k)
        g[o:o + n] = o + bottom_shift(c.module(k), 1)
        if k - 1 in model.offset:
            p = model.offset[k - 1]
            d[p:p + c.rank(k - 1), o:o + n] = c.d(k)
    return _Space(d, model.degree_of_total(), g)


def _tensor(a: _Space, b: _Space) -> _Space:
    sign = np.where(a.deg % 2 == 0, 1, -1)
    d = np.kron(a.d, np.eye(b.size, dtype=np.int64)) + np.kron(np.diag(sign), b.d)
    deg = (a.deg[:, None] + b.deg[None, :]).reshape(-1)
    g = (a.g[:, None] * b.size + b.g[None, :]).reshape(-1)
    return _Space(d, deg, g)


@lru_cache(maxsize=None)
def _space(group: GroupSpec, reps: Tuple[VirtualRep, ...]) -> _Space:
    out = _factor(group, reps[0])
    for r in reps[1:]:
        out = _tensor(out, _factor(group, r))
    return out


def tensor_maps(f: np.ndarray, f_degree: int, src_deg: np.ndarray, g: np.ndarray, g_degree: int) -> np.ndarray:
    """``f ⊗ g`` with the Koszul sign ``(f⊗g)(b⊗d) = (-1)^(|g||b|) f(b)⊗g(d)``."""
    sign = np.where((src_deg * g_degree) % 2 == 0, 1, -1)
    return np.kron(f * sign[None, :], g)


class _HomComplex:
    """Level-``h`` equivariant maps ``U -> W``, one degree at a time."""

    def __init__(self, src: _Space, dst: _Space, group: GroupSpec, level: int, modulus: int = 0):
        self.src, self.dst = src, dst
        self.modulus = modulus
        step = group.prime ** (group.exponent - level)
        self.gu, self.gw = src.power(step), dst.power(step)
        self._orbits: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._diff: Dict[int, np.ndarray] = {}
        self._solvers: Dict[int, LinearSolver] = {}

    def orbits(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """``(label, reps)``: orbit label per flat pair (-1 off degree) and representatives."""
        if k not in self._orbits:
            nu = self.src.size
            mask = (self.dst.deg[:, None] - self.src.deg[None, :]) == k
            label = np.full(mask.size, -1, dtype=np.int64)
            reps = []
            for p in np.flatnonzero(mask.reshape(-1)):
                if label[p] >= 0:
                    continue
                w, u = divmod(int(p), nu)
                while label[w * nu + u] < 0:
                    label[w * nu + u] = len(reps)
                    w, u = self.gw[w], self.gu[u]
                reps.append(p)
            self._orbits[k] = (label, np.array(reps, dtype=np.int64))
        return self._orbits[k]

    def dimension(self, k: int) -> int:
        return len(self.orbits(k)[1])

    def expand(self, k: int, params: Sequence[int]) -> np.ndarray:
        label, _ = self.orbits(k)
        vals = np.concatenate([np.asarray(params, dtype=np.int64), [0]])
        return vals[label].reshape(self.dst.size, self.src.size)

    def params(self, k: int, f: np.ndarray) -> np.ndarray:
        label, reps = self.orbits(k)
        flat = f.reshape(-1)
        vals = flat[reps]
        back = np.concatenate([vals, [0]])[label]
        if np.any(self._reduce(back - flat)):
            raise ValueError(f"map is not a level-equivariant map of degree {k}")
        return vals

    def _reduce(self, a):
        return a % self.modulus if self.modulus else a

    def boundary(self, f: np.ndarray, k: int) -> np.ndarray:
        """``D f = d f - (-1)^k f d`` for ``f`` of degree ``k``."""
        sign = -1 if k % 2 else 1
        return self._reduce(self.dst.d @ f - sign * (f @ self.src.d))

    def differential(self, k: int) -> np.ndarray:
        """Matrix of ``D`` from degree ``k`` parameters to degree ``k-1`` parameters."""
        if k not in self._diff:
            n, m = self.dimension(k), self.dimension(k - 1)
            _, reps = self.orbits(k - 1)
            out = np.zeros((m, n), dtype=np.int64)
            for j in range(n):
                e = np.zeros(n, dtype=np.int64)
                e[j] = 1
                out[:, j] = self.boundary(self.expand(k, e), k).reshape(-1)[reps]
            self._diff[k] = out
        return self._diff[k]

    def _solver(self, k: int) -> LinearSolver:
        if k not in self._solvers:
            a = self.differential(k)
            if self.modulus:
                a = np.hstack([a, self.modulus * np.eye(a.shape[0], dtype=np.int64)])
            self._solvers[k] = LinearSolver(a.astype(object))
        return self._solvers[k]

    def bound(self, target: np.ndarray, k: int) -> Optional[np.ndarray]:
        """Some ``s`` of degree ``k`` with ``D s = target``, or ``None``."""
        t = self.params(k - 1, target)
        sol = self._solver(k).solve([int(v) for v in t])
        if sol is None:
            return None
        return self.expand(k, sol[:self.dimension(k)])

    def cycles(self, k: int) -> List[np.ndarray]:
        """A spanning set of degree ``k`` cycles (over Z; mod q adds q-multiples)."""
        a = self.differential(k)
        if self.modulus:
            a = np.hstack([a, self.modulus * np.eye(a.shape[0], dtype=np.int64)])
        n = self.dimension(k)
        return [self.expand(k, v[:n]) for v in kernel_basis(a.astype(object)) if any(v[:n])]


# -- Massey products ---------------------------------------------------------------------


@dataclass(frozen=True)
class MasseyResult:
    representative: HomologyElement
    indeterminacy: Tuple[HomologyElement, ...]
    defined: bool

    def contains(self, c: HomologyElement) -> bool:
        """Whether ``c`` lies in the coset ``representative + indeterminacy``."""
        return self.defined and in_subgroup(c - self.representative, self.indeterminacy)


def in_subgroup(c: HomologyElement, gens: Sequence[HomologyElement]) -> bool:
    """Membership of ``c`` in the subgroup generated by ``gens``."""
    if c.is_zero():
        return True
    orders = c.orders
    cols = [list(g.coords) for g in gens]
    for i, o in enumerate(orders):
        if o:
            e = [0] * len(orders)
            e[i] = o
            cols.append(e)
    if not cols:
        return False
    a = np.array(cols, dtype=object).T
    return LinearSolver(a).solve(list(c.coords)) is not None


def _common(*xs: HomologyElement) -> List[HomologyElement]:
    first = xs[0]
    for x in xs[1:]:
        if (x.group, x.coefficients) != (first.group, first.coefficients):
            raise ValueError("Massey product of elements from different rings")
    lvl = min(x.level for x in xs)
    return [res(x, lvl) if x.level > lvl else x for x in xs]


class _System:
    """Chain data for one triple: representatives and the two Hom complexes to bound in."""

    def __init__(self, x: HomologyElement, y: HomologyElement, z: HomologyElement):
        self.x, self.y, self.z = x, y, z
        group, level = x.group, x.level
        self.modulus = x.coefficients.modulus
        self.tops, self.bottoms = zip(*(split_virtual(e.grading) for e in (x, y, z)))
        self.X, self.Y, self.Z = (hom_matrix(e) for e in (x, y, z))
        self.deg_b = [_factor(group, b).deg for b in self.bottoms]
        self.xy = tensor_maps(self.X, x.degree, self.deg_b[0], self.Y, y.degree)
        self.yz = tensor_maps(self.Y, y.degree, self.deg_b[1], self.Z, z.degree)
        sp = lambda reps: _space(group, tuple(reps))
        self.hom_xy = _HomComplex(sp(self.bottoms[:2]), sp(self.tops[:2]), group, level, self.modulus)
        self.hom_yz = _HomComplex(sp(self.bottoms[1:]), sp(self.tops[1:]), group, level, self.modulus)
        self.hom_xyz = _HomComplex(sp(self.bottoms), sp(self.tops), group, level, self.modulus)
        self.k_s = x.degree + y.degree + 1
        self.k_t = y.degree + z.degree + 1
        self.degree = x.degree + y.degree + z.degree + 1

    def cycle(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        x, z = self.x, self.z
        eps = 1 if x.degree % 2 else -1
        db01 = (self.deg_b[0][:, None] + self.deg_b[1][None, :]).reshape(-1)
        m = (tensor_maps(s, self.k_s, db01, self.Z, z.degree)
             + eps * tensor_maps(self.X, x.degree, self.deg_b[0], t, self.k_t))
        if np.any(self.hom_xyz.boundary(m, self.degree)):
            raise MasseyError("defining system does not give a cycle")
        return m

    def class_of(self, m: np.ndarray) -> HomologyElement:
        return class_of_triple(m, self.tops, self.bottoms, self.degree, self.x.level,
                               self.x.group, self.x.coefficients)


def class_of_triple(m: np.ndarray, tops: Sequence[VirtualRep], bottoms: Sequence[VirtualRep],
                    degree: int, level: int, group: GroupSpec, coefficients) -> HomologyElement:
    """Class of an equivariant cycle ``⊗C(B_i) -> ⊗C(A_i)`` (three factors, Kronecker indexing)."""
    a1, a2, a3 = tops
    b1, b2, b3 = bottoms
    phi = comparison(group, (a1, a2), (a1 + a2,))[:, _pair_index(group, (a1, a2)).reshape(-1)]
    psi = comparison(group, (b1 + b2,), (b1, b2))[_pair_index(group, (b1, b2)).reshape(-1), :]
    n3 = tensor_model(group, (a3,)).size
    m3 = tensor_model(group, (b3,)).size
    left = np.kron(phi, np.eye(n3, dtype=np.int64))
    right = np.kron(psi, np.eye(m3, dtype=np.int64))
    f = left @ m @ right
    return class_of_pair_map(f, (a1 + a2, a3), (b1 + b2, b3), degree, level, group, coefficients)


def _indeterminacy(x, y, z) -> Tuple[HomologyElement, ...]:
    lvl, group, coeffs = x.level, x.group, x.coefficients
    left = generators(y.grading + z.grading, y.degree + z.degree + 1, lvl, group, coeffs)
    right = generators(x.grading + y.grading, x.degree + y.degree + 1, lvl, group, coeffs)
    out = [x * g for g in left] + [g * z for g in right]
    return tuple(e for e in out if not e.is_zero())


def massey3(x: HomologyElement, y: HomologyElement, z: HomologyElement,
            rng: Optional[np.random.Generator] = None) -> MasseyResult:
    """``<x, y, z>`` as a coset.  With ``rng`` the bounding chains are perturbed by random cycles."""
    x, y, z = _common(x, y, z)
    grading = x.grading + y.grading + z.grading
    degree = x.degree + y.degree + z.degree + 1
    if not ((x * y).is_zero() and (y * z).is_zero()):
        return MasseyResult(zero(grading, degree, x.level, x.group, x.coefficients), (), False)
    ind = _indeterminacy(x, y, z)
    if x.is_zero() or y.is_zero() or z.is_zero():
        return MasseyResult(zero(grading, degree, x.level, x.group, x.coefficients), ind, True)
    sys = _System(x, y, z)
    s = sys.hom_xy.bound(sys.xy, sys.k_s)
    t = sys.hom_yz.bound(sys.yz, sys.k_t)
    if s is None or t is None:
        raise MasseyError("a vanishing product has no chain-level bounding chain")
    if rng is not None:
        for hom, k, name in ((sys.hom_xy, sys.k_s, "s"), (sys.hom_yz, sys.k_t, "t")):
            extra = sum((int(rng.integers(-2, 3)) * c for c in hom.cycles(k)), np.zeros_like(s if name == "s" else t))
            if name == "s":
                s = s + extra
            else:
                t = t + extra
    return MasseyResult(sys.class_of(sys.cycle(s, t)), ind, True)


def _solutions(hom: _HomComplex, target: np.ndarray, k: int, bound: int, limit: int) -> Iterator[np.ndarray]:
    n = hom.dimension(k)
    if (2 * bound + 1) ** n > limit:
        raise ValueError(f"{(2 * bound + 1) ** n} candidate chains exceed the limit {limit}")
    t = hom.params(k - 1, target)
    dmat = hom.differential(k)
    for vals in product(range(-bound, bound + 1), repeat=n):
        r = dmat @ np.array(vals, dtype=np.int64) - t
        if not np.any(hom._reduce(r)):
            yield hom.expand(k, vals)


def massey_values(x: HomologyElement, y: HomologyElement, z: HomologyElement,
                  bound: int = 1, limit: int = 3 ** 10) -> List[HomologyElement]:
    """Every value reached by bounding chains with parameters in ``[-bound, bound]``.

    Brute force: intended for cross-checking ``massey3`` on small complexes.
    """
    x, y, z = _common(x, y, z)
    sys = _System(x, y, z)
    ss = list(_solutions(sys.hom_xy, sys.xy, sys.k_s, bound, limit))
    ts = list(_solutions(sys.hom_yz, sys.yz, sys.k_t, bound, limit))
    seen, out = set(), []
    for s in ss:
        for t in ts:
            c = sys.class_of(sys.cycle(s, t))
            if c.coords not in seen:
                seen.add(c.coords)
                out.append(c)
    return out


def bottom_cells(*xs: HomologyElement) -> int:
    """Largest bottom-level cell count among the sphere complexes of the inputs."""
    out = 0
    for x in xs:
        c = sphere_complex(x.grading, x.group)
        out = max(out, sum(c.rank(k) for k in range(c.lo, c.hi + 1)))
    return out
