"""Exact integer linear algebra: Smith normal form, solving, homology.

Matrices are numpy ``object`` arrays of Python ints so entries never
overflow.  Internally the elimination works on lists of lists, which is
considerably faster than element access on object arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import List, Optional, Sequence

import numpy as np


def as_int_matrix(a, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    """Coerce ``a`` to a 2-d object array of Python ints."""
    arr = np.asarray(a, dtype=object)
    if arr.ndim == 1 and rows is not None:
        arr = arr.reshape(rows, cols)
    if arr.size == 0:
        r = arr.shape[0] if arr.ndim == 2 else (rows or 0)
        c = arr.shape[1] if arr.ndim == 2 else (cols or 0)
        return np.zeros((r, c), dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = int(v)
    return out


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def _to_lists(a) -> List[List[int]]:
    return [[int(x) for x in row] for row in np.asarray(a, dtype=object)]


def _ident_lists(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


@dataclass
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    ``Uinv`` and ``Vinv`` are the exact inverses.
    """

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray

    @property
    def diagonal(self) -> List[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _Snf:
    """Smith normal form by elimination, tracking transforms as requested."""

    def __init__(self, a: List[List[int]], m: int, n: int, track_u=True, track_v=True):
        self.a = a
        self.m, self.n = m, n
        self.U = _ident_lists(m) if track_u else None
        self.Ui = _ident_lists(m) if track_u else None
        self.V = _ident_lists(n) if track_v else None
        self.Vi = _ident_lists(n) if track_v else None

    # row i += c * row j
    def row_add(self, i, j, c):
        if c == 0:
            return
        ai, aj = self.a[i], self.a[j]
        for k in range(self.n):
            if aj[k]:
                ai[k] += c * aj[k]
        if self.U is not None:
            ui, uj = self.U[i], self.U[j]
            for k in range(self.m):
                if uj[k]:
                    ui[k] += c * uj[k]
            for row in self.Ui:
                if row[i]:
                    row[j] -= c * row[i]

    def row_swap(self, i, j):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        if self.U is not None:
            self.U[i], self.U[j] = self.U[j], self.U[i]
            for row in self.Ui:
                row[i], row[j] = row[j], row[i]

    def row_neg(self, i):
        self.a[i] = [-x for x in self.a[i]]
        if self.U is not None:
            self.U[i] = [-x for x in self.U[i]]
            for row in self.Ui:
                row[i] = -row[i]

    # col i += c * col j
    def col_add(self, i, j, c):
        if c == 0:
            return
        for row in self.a:
            if row[j]:
                row[i] += c * row[j]
        if self.V is not None:
            for row in self.V:
                if row[j]:
                    row[i] += c * row[j]
            vi, vj = self.Vi[i], self.Vi[j]
            for k in range(self.n):
                if vi[k]:
                    vj[k] -= c * vi[k]

    def col_swap(self, i, j):
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        if self.V is not None:
            for row in self.V:
                row[i], row[j] = row[j], row[i]
            self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]

    def run(self):
        a, m, n = self.a, self.m, self.n
        t = 0
        while t < min(m, n):
            # pivot: smallest nonzero absolute value in the trailing block
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            self.row_swap(t, pi)
            self.col_swap(t, pj)
            while True:
                p = a[t][t]
                done = True
                for i in range(t + 1, m):
                    if a[i][t]:
                        q = a[i][t] // p
                        self.row_add(i, t, -q)
                        if a[i][t]:
                            done = False
                for j in range(t + 1, n):
                    if a[t][j]:
                        q = a[t][j] // p
                        self.col_add(j, t, -q)
                        if a[t][j]:
                            done = False
                if not done:
                    # move the smallest remainder in row/column t onto the pivot
                    best = (abs(a[t][t]), t, t)
                    for i in range(t + 1, m):
                        if a[i][t] and abs(a[i][t]) < best[0]:
                            best = (abs(a[i][t]), i, t)
                    for j in range(t + 1, n):
                        if a[t][j] and abs(a[t][j]) < best[0]:
                            best = (abs(a[t][j]), t, j)
                    self.row_swap(t, best[1])
                    self.col_swap(t, best[2])
                    continue
                # divisibility of the trailing block
                bad = None
                for i in range(t + 1, m):
                    row = a[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self.row_add(t, bad, 1)
            if a[t][t] < 0:
                self.row_neg(t)
            t += 1


def smith(a) -> SnfResult:
    """Smith normal form of an integer matrix with unimodular witnesses."""
    arr = as_int_matrix(a)
    m, n = arr.shape
    s = _Snf(_to_lists(arr), m, n)
    s.run()
    return SnfResult(
        U=as_int_matrix(s.U, m, m) if m else zeros(0, 0),
        D=as_int_matrix(s.a, m, n) if m and n else zeros(m, n),
        V=as_int_matrix(s.V, n, n) if n else zeros(0, 0),
        Uinv=as_int_matrix(s.Ui, m, m) if m else zeros(0, 0),
        Vinv=as_int_matrix(s.Vi, n, n) if n else zeros(0, 0),
    )


def invariant_factors(a) -> List[int]:
    arr = as_int_matrix(a)
    m, n = arr.shape
    s = _Snf(_to_lists(arr), m, n, track_u=False, track_v=False)
    s.run()
    return [s.a[i][i] for i in range(min(m, n)) if s.a[i][i]]


def _matvec(rows: List[List[int]], v: Sequence[int]) -> List[int]:
    return [sum(r[k] * v[k] for k in range(len(v)) if r[k] and v[k]) for r in rows]


class LinearSolver:
    """Reusable integer solver for ``A x = b`` (one factorisation, many ``b``)."""

    def __init__(self, a):
        arr = as_int_matrix(a)
        self.m, self.n = arr.shape
        s = _Snf(_to_lists(arr), self.m, self.n)
        s.run()
        self.diag = [s.a[i][i] for i in range(min(self.m, self.n))]
        self.U = s.U
        self.V = s.V

    def solve(self, b: Sequence[int]) -> Optional[List[int]]:
        b = [int(x) for x in b]
        if len(b) != self.m:
            raise ValueError(f"right-hand side has length {len(b)}, expected {self.m}")
        c = _matvec(self.U, b) if self.m else []
        y = [0] * self.n
        for i, ci in enumerate(c):
            d = self.diag[i] if i < len(self.diag) else 0
            if d == 0:
                if ci:
                    return None
            else:
                if ci % d:
                    return None
                y[i] = ci // d
        return _matvec(self.V, y) if self.n else []


def solve(a, b: Sequence[int]) -> Optional[np.ndarray]:
    """An integer ``x`` with ``a @ x == b``, or ``None`` when none exists."""
    arr = as_int_matrix(a)
    if len(b) != arr.shape[0]:
        raise ValueError(f"dimension mismatch: matrix has {arr.shape[0]} rows, vector {len(b)}")
    x = LinearSolver(arr).solve(b)
    return None if x is None else np.array(x, dtype=object)


# -- homology ------------------------------------------------------------------


@dataclass
class HomologyGroup:
    """``ker(d_out) / im(d_in)`` with chosen generators.

    ``orders[i]`` is 0 for a free generator and the invariant factor for a
    torsion one; free generators come first.
    """

    ambient: int
    generators: List[List[int]]
    orders: List[int]
    _coord_rows: List[List[int]] = field(repr=False, default_factory=list)
    _quot_rows: List[List[int]] = field(repr=False, default_factory=list)
    _boundary_check: Optional[object] = field(repr=False, default=None)

    @property
    def free_rank(self) -> int:
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self) -> List[int]:
        return [o for o in self.orders if o]

    @property
    def rank(self) -> int:
        return len(self.orders)

    def is_zero(self) -> bool:
        return not self.orders

    def express(self, x: Sequence[int]) -> List[int]:
        """Coordinates of the cycle ``x`` in the generators, reduced mod orders."""
        x = [int(v) for v in x]
        if len(x) != self.ambient:
            raise ValueError("vector has the wrong length")
        c = []
        for row, scale in self._coord_rows:
            y = sum(r * v for r, v in zip(row, x) if r and v)
            if scale == 0:
                if y:
                    raise ValueError("vector is not a cycle")
                continue
            if y % scale:
                raise ValueError("vector is not a cycle")
            c.append(y // scale)
        out = []
        for row, order in zip(self._quot_rows, self.orders):
            v = sum(r * ci for r, ci in zip(row, c) if r and ci)
            out.append(v % order if order else v)
        return out

    def negate(self, i: int) -> None:
        """Replace generator ``i`` by its negative."""
        self.generators[i] = [-v for v in self.generators[i]]
        self._quot_rows[i] = [-v for v in self._quot_rows[i]]

    def reduce(self, coords: Sequence[int]) -> List[int]:
        return [c % o if o else int(c) for c, o in zip(coords, self.orders)]

    def lift(self, coords: Sequence[int]) -> List[int]:
        """A cycle representing the class with the given coordinates."""
        out = [0] * self.ambient
        for c, g in zip(coords, self.generators):
            if c:
                for i, gi in enumerate(g):
                    if gi:
                        out[i] += c * gi
        return out

    def __str__(self):
        return group_name(self.orders)


def group_name(orders: Sequence[int]) -> str:
    if not orders:
        return "0"
    parts = ["Z" if o == 0 else f"Z/{o}" for o in orders]
    return "+".join(parts)


def homology(d_in, d_out, modulus: int = 0) -> HomologyGroup:
    """Homology at the middle of ``C_{k+1} --d_in--> C_k --d_out--> C_{k-1}``.

    With ``modulus = q > 0`` the complex is taken with ``Z/q`` coefficients:
    cycles are vectors whose boundary vanishes mod ``q``, and ``q C_k`` is
    added to the boundaries.
    """
    d_in = as_int_matrix(d_in)
    d_out = as_int_matrix(d_out)
    n = d_in.shape[0] if d_in.ndim == 2 else 0
    if d_out.shape[1] != n:
        raise ValueError(f"incompatible shapes {d_out.shape} and {d_in.shape}")
    if d_in.size and d_out.size:
        prod = d_out.dot(d_in)
        if any(int(v) % modulus if modulus else int(v) for v in prod.flat):
            raise ValueError("d_out @ d_in != 0")
    m = d_out.shape[0]
    q = modulus
    s = _Snf(_to_lists(d_out), m, n, track_u=False)
    s.run()
    diag = [s.a[i][i] for i in range(min(m, n))]
    V, Vi = s.V, s.Vi
    coord_rows = []
    cycle_cols = []
    for i in range(n):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            scale = 1
        elif q:
            scale = q // gcd(q, d)
        else:
            scale = 0
        coord_rows.append((Vi[i], scale))
        if scale:
            cycle_cols.append([V[r][i] * scale for r in range(n)])
    kept = [(row, sc) for row, sc in coord_rows if sc]
    z = len(kept)
    # boundaries in cycle coordinates
    bcols = []
    d_in_l = _to_lists(d_in)
    cols = [[d_in_l[r][j] for r in range(n)] for j in range(d_in.shape[1])]
    if q:
        for j in range(n):
            e = [0] * n
            e[j] = q
            cols.append(e)
    for col in cols:
        if not any(col):
            continue
        coords = []
        for row, sc in kept:
            y = sum(a * b for a, b in zip(row, col) if a and b)
            if y % sc:
                raise ValueError("boundary is not a cycle")
            coords.append(y // sc)
        bcols.append(coords)
    bmat = [[bcols[j][i] for j in range(len(bcols))] for i in range(z)]
    s2 = _Snf(bmat, z, len(bcols), track_v=False)
    s2.run()
    diag2 = [s2.a[i][i] if i < len(bcols) else 0 for i in range(z)]
    # new cycle basis = Z @ U2^{-1}; generator j is column j
    Ui = s2.Ui
    gens_free, gens_tors = [], []
    for j in range(z):
        e = diag2[j]
        if e == 1:
            continue
        vec = [0] * n
        for k in range(z):
            c = Ui[k][j]
            if c:
                col = cycle_cols[k]
                for r in range(n):
                    if col[r]:
                        vec[r] += c * col[r]
        entry = (vec, e, s2.U[j])
        (gens_free if e == 0 else gens_tors).append(entry)
    entries = gens_free + gens_tors
    return HomologyGroup(
        ambient=n,
        generators=[e[0] for e in entries],
        orders=[e[1] for e in entries],
        _coord_rows=coord_rows,
        _quot_rows=[e[2] for e in entries],
    )



def kernel_basis(a) -> List[List[int]]:
    """A Z-basis of the integer kernel of ``a``, as a list of vectors."""
    arr = as_int_matrix(a)
    m, n = arr.shape
    s = _Snf(_to_lists(arr), m, n, track_u=False)
    s.run()
    r = sum(1 for i in range(min(m, n)) if s.a[i][i])
    return [[s.V[row][j] for row in range(n)] for j in range(r, n)]
