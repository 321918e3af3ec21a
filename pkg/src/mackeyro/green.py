"""Green functor structure: products, restriction, transfer and division.

A class of grading ``A - B`` and degree ``k`` at level ``h`` is an
``H_h``-equivariant chain map ``C(B) -> C(A)`` of degree ``k``, which is
exactly a level-``h`` cycle of ``C(A) ⊠ C^(B)``.  Two such maps are tensored
(with the Koszul sign), transported along normalized comparison maps so that
the common summand ``M`` of numerator and denominator appears as a tensor
factor on both sides, and ``M`` is then traced out.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .chains import sphere_pair_complex
from .comparison import comparison, tensor_model
from .group import C4, GroupSpec, VirtualRep, parse_virtual, split_virtual
from .homology import MackeyPresentation, compute_homology
from .mackey import INTEGERS, CoefficientSystem
from .zlinalg import kernel_basis, solve


class LevelError(ValueError):
    pass


def normalize_grading(grading: VirtualRep, degree: int) -> Tuple[VirtualRep, int]:
    """Absorb trivial summands into the degree: ``H_k(S^(V+t)) = H_(k-t)(S^V)``."""
    return grading.nontrivial(), degree - grading.trivial


def presentation(grading: VirtualRep, degree: int, group: GroupSpec = C4,
                 coefficients: CoefficientSystem = INTEGERS) -> MackeyPresentation:
    grading, degree = normalize_grading(grading, degree)
    plus, minus = split_virtual(grading)
    c = sphere_pair_complex(plus, minus, group, coefficients)
    return compute_homology(c, degree, grading)


@dataclass(frozen=True)
class HomologyElement:
    grading: VirtualRep
    degree: int
    level: int
    coords: Tuple[int, ...]
    group: GroupSpec = C4
    coefficients: CoefficientSystem = INTEGERS

    def __post_init__(self):
        g, d = normalize_grading(self.grading, self.degree)
        object.__setattr__(self, "grading", g)
        object.__setattr__(self, "degree", d)
        pres = self.presentation()
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != pres.groups[self.level].rank:
            raise ValueError(
                f"expected {pres.groups[self.level].rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", tuple(pres.reduce(self.level, coords)))

    def presentation(self) -> MackeyPresentation:
        return presentation(self.grading, self.degree, self.group, self.coefficients)

    @property
    def orders(self) -> List[int]:
        return self.presentation().orders(self.level)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        """Additive order, 0 for infinite."""
        o = 1
        for c, m in zip(self.coords, self.orders):
            if c == 0:
                continue
            if m == 0:
                return 0
            k = m // gcd(m, c)
            o = o * k // gcd(o, k)
        return o

    def _like(self, coords) -> "HomologyElement":
        return HomologyElement(self.grading, self.degree, self.level, tuple(coords),
                               self.group, self.coefficients)

    def __add__(self, other: "HomologyElement") -> "HomologyElement":
        _same_place(self, other)
        return self._like(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "HomologyElement":
        return self._like(-a for a in self.coords)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "HomologyElement":
        if not isinstance(k, int):
            return NotImplemented
        return self._like(k * a for a in self.coords)

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return multiply(self, other)

    def bottom_cycle(self) -> np.ndarray:
        return self.presentation().bottom_cycle(self.level, self.coords)

    def __str__(self):
        return f"{list(self.coords)} in H_{self.degree}(S^{self.grading}) level {self.level}"


def _same_place(x: HomologyElement, y: HomologyElement):
    if (x.grading, x.degree, x.level, x.group, x.coefficients) != \
            (y.grading, y.degree, y.level, y.group, y.coefficients):
        raise ValueError("elements live in different groups")


def element(grading, degree: int, level: int, coords: Sequence[int], group: GroupSpec = C4,
            coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    if isinstance(grading, str):
        grading = parse_virtual(grading)
    return HomologyElement(grading, degree, level, tuple(coords), group, coefficients)


def zero(grading, degree: int, level: int, group: GroupSpec = C4,
         coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    if isinstance(grading, str):
        grading = parse_virtual(grading)
    pres = presentation(grading, degree, group, coefficients)
    g, d = normalize_grading(grading, degree)
    return HomologyElement(g, d, level, (0,) * pres.groups[level].rank, group, coefficients)


def generator(grading, degree: int, level: int, index: int = 0, group: GroupSpec = C4,
              coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    z = zero(grading, degree, level, group, coefficients)
    coords = [0] * len(z.coords)
    coords[index] = 1
    return z._like(coords)


def generators(grading, degree: int, level: int, group: GroupSpec = C4,
               coefficients: CoefficientSystem = INTEGERS) -> List[HomologyElement]:
    z = zero(grading, degree, level, group, coefficients)
    return [generator(z.grading, z.degree, level, i, group, coefficients) for i in range(len(z.coords))]


def unit(level: int, group: GroupSpec = C4, coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    return generator(VirtualRep(), 0, level, 0, group, coefficients)


def res(x: HomologyElement, to_level: Optional[int] = None) -> HomologyElement:
    """Restriction to ``to_level`` (default: one step down)."""
    target = x.level - 1 if to_level is None else to_level
    if target > x.level or target < 0:
        raise LevelError(f"cannot restrict from level {x.level} to {target}")
    pres = x.presentation()
    coords = list(x.coords)
    for h in range(x.level, target, -1):
        coords = pres.apply_res(h, coords)
    return HomologyElement(x.grading, x.degree, target, tuple(coords), x.group, x.coefficients)


def tr(x: HomologyElement, to_level: Optional[int] = None) -> HomologyElement:
    """Transfer to ``to_level`` (default: one step up)."""
    target = x.level + 1 if to_level is None else to_level
    if target < x.level or target > x.group.exponent:
        raise LevelError(f"cannot transfer from level {x.level} to {target}")
    pres = x.presentation()
    coords = list(x.coords)
    for h in range(x.level + 1, target + 1):
        coords = pres.apply_tr(h, coords)
    return HomologyElement(x.grading, x.degree, target, tuple(coords), x.group, x.coefficients)


def weyl_action(x: HomologyElement) -> HomologyElement:
    pres = x.presentation()
    return x._like(pres.apply_weyl(x.level, x.coords))


# -- chain maps ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pair_index(group: GroupSpec, reps: Tuple[VirtualRep, VirtualRep]) -> np.ndarray:
    """``idx[a, c]``: total index of ``a ⊗ c`` in the tensor model."""
    model = tensor_model(group, reps)
    fa = tensor_model(group, (reps[0],))
    fc = tensor_model(group, (reps[1],))
    out = np.empty((fa.size, fc.size), dtype=np.int64)
    for k, blist in model.complex.blocks.items():
        for k1, k2, off, idx in blist:
            r1 = fa.offset[k1]
            r2 = fc.offset[k2]
            out[r1:r1 + idx.shape[0], r2:r2 + idx.shape[1]] = model.offset[k] + off + idx
    return out


def hom_matrix(x: HomologyElement) -> np.ndarray:
    """The class as a total matrix ``C(B) -> C(A)``."""
    plus, minus = split_virtual(x.grading)
    fa = tensor_model(x.group, (plus,))
    fb = tensor_model(x.group, (minus,))
    pres = x.presentation()
    vec = x.bottom_cycle()
    out = np.zeros((fa.size, fb.size), dtype=np.int64)
    c = pres.complex
    for k1, k2, off, idx in c.blocks.get(x.degree, []):
        j = -k2
        r1, r2 = fa.offset[k1], fb.offset[j]
        out[r1:r1 + idx.shape[0], r2:r2 + idx.shape[1]] = vec[off + idx]
    return out


def from_hom_matrix(g: np.ndarray, grading: VirtualRep, degree: int, level: int,
                    group: GroupSpec, coefficients: CoefficientSystem) -> HomologyElement:
    plus, minus = split_virtual(grading)
    fa = tensor_model(group, (plus,))
    fb = tensor_model(group, (minus,))
    pres = presentation(grading, degree, group, coefficients)
    c = pres.complex
    q = coefficients.modulus
    vec = np.zeros(c.rank(degree), dtype=np.int64)
    used = np.zeros(g.shape, dtype=bool)
    for k1, k2, off, idx in c.blocks.get(degree, []):
        j = -k2
        r1, r2 = fa.offset[k1], fb.offset[j]
        blk = g[r1:r1 + idx.shape[0], r2:r2 + idx.shape[1]]
        vec[off + idx] = blk
        used[r1:r1 + idx.shape[0], r2:r2 + idx.shape[1]] = True
    rest = g[~used]
    if q:
        rest = rest % q
        vec = vec % q
    if np.any(rest):
        raise ArithmeticError("product is not homogeneous")
    coords = pres.express_bottom(level, vec) if c.rank(degree) else []
    return HomologyElement(grading, degree, level, tuple(coords), group, coefficients)


def _min_rep(a: VirtualRep, b: VirtualRep) -> VirtualRep:
    irr = {i for i, _ in a.mult} | {i for i, _ in b.mult}
    return VirtualRep(0, tuple((i, min(a[i], b[i])) for i in irr))


_LIMIT = 2 ** 62


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    bound = (int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * max(a.shape[-1], 1))
    if bound >= _LIMIT:
        return (a.astype(object) @ b.astype(object))
    return a @ b


def multiply(x: HomologyElement, y: HomologyElement) -> HomologyElement:
    """The product ``x * y``; a higher-level factor is restricted first."""
    if x.group != y.group:
        raise ValueError("elements over different groups")
    if x.coefficients != y.coefficients:
        raise ValueError("elements with different coefficients")
    if x.level != y.level:
        lvl = min(x.level, y.level)
        x = res(x, lvl) if x.level > lvl else x
        y = res(y, lvl) if y.level > lvl else y
    group, coeffs, level = x.group, x.coefficients, x.level
    grading = x.grading + y.grading
    degree = x.degree + y.degree
    if x.is_zero() or y.is_zero():
        return zero(grading, degree, level, group, coeffs)
    A, B = split_virtual(x.grading)
    C, D = split_virtual(y.grading)
    M = _min_rep(A + C, B + D)
    P, N = A + C - M, B + D - M
    X = hom_matrix(x)
    Y = hom_matrix(y)
    R = comparison(group, (N, M), (B, D))
    idx_bd = _pair_index(group, (B, D))
    idx_ac = _pair_index(group, (A, C))
    deg_b = tensor_model(group, (B,)).degree_of_total()
    sgn = np.where((deg_b * y.degree) % 2 == 0, 1, -1)
    R3 = R[idx_bd]  # (|B|, |D|, |N⊗M|)
    T1 = np.tensordot(X * sgn[None, :], R3, axes=(1, 0))  # (|A|, |D|, r)
    Z3 = np.einsum("cd,adr->acr", Y, T1)  # (|A|, |C|, r)
    Z = np.zeros((tensor_model(group, (A, C)).size, R.shape[1]), dtype=Z3.dtype)
    Z[idx_ac.reshape(-1)] = Z3.reshape(-1, R.shape[1])
    return _finish(Z, (A, C), (P, M, N), grading, degree, level, group, coeffs)


def _finish(Z, top, reduced, grading, degree, level, group, coeffs) -> HomologyElement:
    # Z: rows in the model of ``top``, columns already pulled back to (N, M)
    P, M, N = reduced
    L = comparison(group, top, (P, M))
    idx_pm = _pair_index(group, (P, M))
    idx_nm = _pair_index(group, (N, M))
    deg_m = tensor_model(group, (M,)).degree_of_total()
    f = _dot(L, Z)
    if coeffs.modulus:
        f = f % coeffs.modulus
    chi = -1 if M.dim % 2 else 1
    g = np.zeros((idx_pm.shape[0], idx_nm.shape[0]), dtype=f.dtype)
    for m in range(idx_pm.shape[1]):
        s = -1 if deg_m[m] % 2 else 1
        g += s * f[np.ix_(idx_pm[:, m], idx_nm[:, m])]
    g = chi * g
    if g.dtype == object:
        if np.abs(g).max() >= _LIMIT:
            raise OverflowError("product entries too large")
        g = g.astype(np.int64)
    return from_hom_matrix(g, grading, degree, level, group, coeffs)


def class_of_pair_map(F: np.ndarray, top: Tuple[VirtualRep, VirtualRep], bottom: Tuple[VirtualRep, VirtualRep],
                      degree: int, level: int, group: GroupSpec = C4,
                      coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    """Class of an equivariant cycle ``C(B)⊗C(D) -> C(A)⊗C(C)`` given in Kronecker indexing.

    ``top = (A, C)`` and ``bottom = (B, D)`` are actual representations; rows
    are indexed ``a * |C| + c`` over single-factor totals, columns likewise.
    """
    A, C = top
    B, D = bottom
    M = _min_rep(A + C, B + D)
    P, N = A + C - M, B + D - M
    R = comparison(group, (N, M), (B, D))
    Z = _dot(F, R[_pair_index(group, (B, D)).reshape(-1)])
    Zt = np.zeros((tensor_model(group, (A, C)).size, R.shape[1]), dtype=Z.dtype)
    Zt[_pair_index(group, (A, C)).reshape(-1)] = Z
    return _finish(Zt, (A, C), (P, M, N), P - N, degree, level, group, coefficients)


# -- named classes -----------------------------------------------------------------


def euler_class(v, group: GroupSpec = C4, level: Optional[int] = None,
                coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    """``a_V``: the class of the basepoint cell in ``H_0(S^V)``."""
    if isinstance(v, str):
        v = parse_virtual(v)
    lvl = group.exponent if level is None else level
    pres = presentation(v, 0, group, coefficients)
    vec = np.zeros(pres.complex.rank(0), dtype=np.int64)
    vec[0] = 1
    coords = pres.express_bottom(lvl, vec)
    return HomologyElement(v, 0, lvl, tuple(coords), group, coefficients)


def orientation_generator(v, level: int, group: GroupSpec = C4,
                          coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    """The normalized generator of ``H_dim(S^V)`` at ``level``."""
    if isinstance(v, str):
        v = parse_virtual(v)
    return generator(v, v.dim, level, 0, group, coefficients)


SYMBOLS = ("a_s", "u_2s", "u_s", "a_l", "u_l", "s_3", "w", "x")


@lru_cache(maxsize=None)
def _u2s(coeff: CoefficientSystem) -> HomologyElement:
    u2 = orientation_generator("2sigma", 2, C4, coeff)
    us = orientation_generator("sigma", 1, C4, coeff)
    if res(u2) != multiply(us, us):
        u2 = -u2
        if res(u2) != multiply(us, us):
            raise ArithmeticError("orientation classes are not coherent")
    return u2


@lru_cache(maxsize=None)
def named(symbol: str, coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    """Named C_4 classes: a_s, u_2s, u_s, a_l, u_l, s_3 (s = sigma, l = lambda)."""
    if symbol == "a_s":
        return euler_class("sigma", C4, 2, coefficients)
    if symbol == "a_l":
        return euler_class("lambda", C4, 2, coefficients)
    if symbol == "u_s":
        return orientation_generator("sigma", 1, C4, coefficients)
    if symbol == "u_l":
        return orientation_generator("lambda", 2, C4, coefficients)
    if symbol == "u_2s":
        return _u2s(coefficients)
    if symbol == "s_3":
        return generator("-2lambda", -3, 2, 0, C4, coefficients)
    raise KeyError(f"unknown named class {symbol!r}")


def power(x: HomologyElement, k: int) -> HomologyElement:
    if k < 0:
        inv = invert(x)
        if inv is None:
            raise ArithmeticError("class is not invertible")
        return power(inv, -k)
    out = unit(x.level, x.group, x.coefficients)
    for _ in range(k):
        out = multiply(out, x)
    return out


def w_class(n: int, coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    """``w_n = Tr(u_sigma^-n)`` from the middle level."""
    return tr(power(named("u_s", coefficients), -n), 2)


def x_class(n: int, m: int, coefficients: CoefficientSystem = INTEGERS) -> HomologyElement:
    """``x_{n,m}``: transfer from the bottom of ``u_sigma^-n u_lambda^-m``."""
    us = res(named("u_s", coefficients), 0)
    ul = res(named("u_l", coefficients), 0)
    return tr(multiply(power(us, -n), power(ul, -m)), 2)


# -- division --------------------------------------------------------------------


@lru_cache(maxsize=None)
def multiplication_matrix(x: HomologyElement, grading: VirtualRep, degree: int) -> np.ndarray:
    """Columns: ``x * e_i`` for the generators ``e_i`` at (grading, degree, x.level).

    Cached; treat the result as read-only.
    """
    gens = generators(grading, degree, x.level, x.group, x.coefficients)
    target = zero(x.grading + grading, x.degree + degree, x.level, x.group, x.coefficients)
    cols = [list(multiply(x, e).coords) for e in gens]
    return np.array(cols, dtype=np.int64).T.reshape(len(target.coords), len(gens))


def divide(y: HomologyElement, x: HomologyElement) -> Optional[HomologyElement]:
    """``y / x``: the unique ``c`` in the unique cyclic subgroup mapped isomorphically onto ``<y>``."""
    if y.level != x.level:
        raise LevelError("division needs both classes at the same level")
    grading = y.grading - x.grading
    degree = y.degree - x.degree
    src = zero(grading, degree, x.level, x.group, x.coefficients)
    if y.is_zero():
        return src
    if not src.coords:
        return None
    mu = multiplication_matrix(x, grading, degree)
    o_src = src.orders
    o_dst = y.orders
    o = y.order()
    if o == 0:
        # infinite order: need a preimage and an injective multiplication
        rel = np.diag([d for d in o_dst]).astype(np.int64)
        full = np.concatenate([mu, rel], axis=1)
        sol = solve(full, list(y.coords))
        if sol is None:
            return None
        ker_full = np.concatenate([mu, rel], axis=1)
        for v in kernel_basis(ker_full):
            c = v[: len(o_src)]
            for ci, oi in zip(c, o_src):
                if (oi == 0 and ci != 0) or (oi and ci % oi):
                    return None
        return src._like(int(v) for v in sol[: len(o_src)])
    # finite order: enumerate the o-torsion of the source
    ranges = []
    for oi in o_src:
        if oi == 0:
            ranges.append((0,))
        else:
            g = gcd(oi, o)
            step = oi // g
            ranges.append(tuple(t * step for t in range(g)))
    found = []
    for c in iproduct(*ranges):
        img = [int(v) for v in mu @ np.array(c, dtype=np.int64)] if c else []
        img = y.presentation().reduce(y.level, img)
        if tuple(img) != y.coords:
            continue
        cand = src._like(c)
        if cand.order() != o:
            continue
        found.append(cand)
    if not found:
        return None
    first = _cyclic_subgroup(found[0])
    for c in found[1:]:
        if _cyclic_subgroup(c) != first:
            return None
    return found[0]


def _cyclic_subgroup(c: HomologyElement) -> frozenset:
    o = c.order()
    return frozenset(tuple((k * v) % m if m else k * v for v, m in zip(c.coords, c.orders))
                     for k in range(o))


def invert(x: HomologyElement) -> Optional[HomologyElement]:
    return divide(unit(x.level, x.group, x.coefficients), x)
