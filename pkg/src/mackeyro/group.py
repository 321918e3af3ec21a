"""Cyclic p-groups, their irreducible real representations and the RO(G) lattice.

Subgroups of ``C_{p^n}`` form a chain, so a subgroup is just the exponent
``level`` of its order ``p^level``.  The generator ``g`` of the group is fixed
once and for all; the orbit ``G/H`` is identified with ``Z/p^(n-level)`` with
``g`` acting by ``+1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Dict, Iterable, List, Tuple


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GroupSpec:
    """The cyclic group of order ``prime**exponent``."""

    prime: int
    exponent: int

    def __post_init__(self):
        if not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")

    @property
    def order(self) -> int:
        return self.prime ** self.exponent

    @property
    def levels(self) -> range:
        return range(self.exponent + 1)

    def subgroup_order(self, level: int) -> int:
        return self.prime ** level

    def orbit_size(self, level: int) -> int:
        """Cardinality of ``G/H`` for ``H`` of the given level."""
        return self.prime ** (self.exponent - level)

    def irreducibles(self) -> List["Irrep"]:
        """Non-trivial irreducibles, ordered by decreasing kernel."""
        out = []
        if self.prime == 2 and self.exponent >= 1:
            out.append(Irrep("sigma"))
        first = 2 if self.prime == 2 else 1
        for k in range(first, self.exponent + 1):
            out.append(Irrep("lambda", k))
        return out

    def __str__(self):
        return f"C_{self.order}"


C4 = GroupSpec(2, 2)


@total_ordering
@dataclass(frozen=True)
class Irrep:
    """A non-trivial irreducible real representation.

    ``sigma`` is the sign representation (p = 2 only).  ``lambda`` with index
    ``k`` is rotation by ``2*pi/p^k``; for p = 2 the index starts at 2.
    """

    kind: str
    index: int = 0

    @property
    def dim(self) -> int:
        return 1 if self.kind == "sigma" else 2

    def kernel_level(self, group: GroupSpec) -> int:
        if self.kind == "sigma":
            return group.exponent - 1
        return group.exponent - self.index

    def valid_for(self, group: GroupSpec) -> bool:
        if self.kind == "sigma":
            return group.prime == 2 and group.exponent >= 1
        lo = 2 if group.prime == 2 else 1
        return lo <= self.index <= group.exponent

    @property
    def name(self) -> str:
        if self.kind == "sigma":
            return "sigma"
        return "lambda" if self.index == 2 else f"lambda{self.index}"

    def label(self, group: GroupSpec) -> str:
        if self.kind == "sigma":
            return "sigma"
        if group.prime == 2 and group.exponent == 2:
            return "lambda"
        return f"lambda{self.index}"

    def sort_key(self) -> Tuple[int, int]:
        # decreasing kernel: sigma first, then rotations by increasing index
        return (0 if self.kind == "sigma" else 1, self.index)

    def __lt__(self, other: "Irrep") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return self.name


SIGMA = Irrep("sigma")
LAMBDA = Irrep("lambda", 2)


@dataclass(frozen=True)
class VirtualRep:
    """An element of RO(G): a trivial multiplicity plus irreducible multiplicities."""

    trivial: int = 0
    mult: Tuple[Tuple[Irrep, int], ...] = field(default=())

    def __post_init__(self):
        merged: Dict[Irrep, int] = {}
        for irr, k in self.mult:
            merged[irr] = merged.get(irr, 0) + k
        clean = tuple(sorted((i, k) for i, k in merged.items() if k != 0))
        object.__setattr__(self, "mult", clean)

    @classmethod
    def of(cls, trivial: int = 0, **kinds: int) -> "VirtualRep":
        """``VirtualRep.of(sigma=2, lambda_=-1)``; ``lambdaK=`` for other indices."""
        pairs = []
        for key, k in kinds.items():
            if key == "sigma":
                pairs.append((SIGMA, k))
            elif key in ("lambda_", "lam"):
                pairs.append((LAMBDA, k))
            elif key.startswith("lambda"):
                pairs.append((Irrep("lambda", int(key[6:])), k))
            else:
                raise ValueError(f"unknown irreducible {key!r}")
        return cls(trivial, tuple(pairs))

    def __getitem__(self, irr: Irrep) -> int:
        for i, k in self.mult:
            if i == irr:
                return k
        return 0

    @property
    def dim(self) -> int:
        return self.trivial + sum(i.dim * k for i, k in self.mult)

    def nontrivial(self) -> "VirtualRep":
        return VirtualRep(0, self.mult)

    def is_actual(self) -> bool:
        return self.trivial >= 0 and all(k >= 0 for _, k in self.mult)

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        return VirtualRep(self.trivial + other.trivial, self.mult + other.mult)

    def __neg__(self) -> "VirtualRep":
        return VirtualRep(-self.trivial, tuple((i, -k) for i, k in self.mult))

    def __sub__(self, other: "VirtualRep") -> "VirtualRep":
        return self + (-other)

    def scale(self, c: int) -> "VirtualRep":
        return VirtualRep(c * self.trivial, tuple((i, c * k) for i, k in self.mult))

    def fixed_dim(self, group: GroupSpec, level: int) -> int:
        """Dimension of the fixed points under the subgroup of the given level."""
        d = self.trivial
        for i, k in self.mult:
            if level <= i.kernel_level(group):
                d += i.dim * k
        return d

    def __str__(self):
        return format_virtual(self)

    def __repr__(self):
        return f"VirtualRep({format_virtual(self)!r})"


ZERO = VirtualRep()


def split_virtual(v: VirtualRep) -> Tuple[VirtualRep, VirtualRep]:
    """Return actual ``(plus, minus)`` with disjoint support and ``v = plus - minus``."""
    plus = VirtualRep(max(v.trivial, 0), tuple((i, k) for i, k in v.mult if k > 0))
    minus = VirtualRep(max(-v.trivial, 0), tuple((i, -k) for i, k in v.mult if k < 0))
    return plus, minus


def orbit_product(h: int, k: int, group: GroupSpec) -> Tuple[int, int]:
    """Decompose ``G/H x G/K`` into ``copies`` orbits of type ``G/(H meet K)``."""
    for lvl in (h, k):
        if not 0 <= lvl <= group.exponent:
            raise ValueError(f"level {lvl} out of range for {group}")
    return min(h, k), group.prime ** (group.exponent - max(h, k))


# -- text syntax ---------------------------------------------------------------

class RepSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def parse_virtual(text: str) -> VirtualRep:
    """Parse ``"3*sigma-2*lambda"``, ``"1+2sigma"``, ``"-lambda3"``, ``"0"``.

    ``lambda`` alone means the index-2 rotation (the C_4 ``lambda``);
    ``lambdaK`` names rotation by ``2*pi/p^K``.
    """
    s = text.replace(" ", "").replace("\t", "")
    if not s:
        raise RepSyntaxError(text, 0, "empty representation")
    pos = 0
    trivial = 0
    pairs: List[Tuple[Irrep, int]] = []
    term_re = re.compile(r"([+-]?)(\d*)(\*?)(sigma|lambda\d*|s|l)?")
    while pos < len(s):
        m = term_re.match(s, pos)
        if m is None or m.end() == pos:
            raise RepSyntaxError(text, pos, "unexpected character")
        sign, digits, star, name = m.groups()
        if pos > 0 and not sign:
            raise RepSyntaxError(text, pos, "expected '+' or '-'")
        if not digits and not name:
            raise RepSyntaxError(text, m.end(), "expected a term")
        if star and (not digits or not name):
            raise RepSyntaxError(text, m.start(3), "misplaced '*'")
        coeff = int(digits) if digits else 1
        if sign == "-":
            coeff = -coeff
        if name is None:
            trivial += coeff
        elif name in ("sigma", "s"):
            pairs.append((SIGMA, coeff))
        elif name in ("lambda", "l"):
            pairs.append((LAMBDA, coeff))
        else:
            pairs.append((Irrep("lambda", int(name[6:])), coeff))
        pos = m.end()
    return VirtualRep(trivial, tuple(pairs))


def format_virtual(v: VirtualRep) -> str:
    parts = []
    if v.trivial:
        parts.append(str(v.trivial))
    for irr, k in v.mult:
        if k == 1:
            term = irr.name
        elif k == -1:
            term = "-" + irr.name
        else:
            term = f"{k}*{irr.name}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def enumerate_orbits(sizes: Iterable[int]) -> List[List[Tuple[int, ...]]]:
    """Brute-force the ``g``-orbits on a product of cyclic orbits ``Z/s_i``.

    Orbits are listed in order of their lexicographically smallest element,
    each one as ``[rep, g.rep, g^2.rep, ...]``.
    """
    sizes = tuple(sizes)
    seen = set()
    orbits = []

    def rec(prefix):
        if len(prefix) == len(sizes):
            yield tuple(prefix)
            return
        for a in range(sizes[len(prefix)]):
            yield from rec(prefix + [a])

    for elt in rec([]):
        if elt in seen:
            continue
        orbit = []
        cur = elt
        while cur not in seen:
            seen.add(cur)
            orbit.append(cur)
            cur = tuple((c + 1) % s for c, s in zip(cur, sizes))
        orbits.append(orbit)
    return orbits
