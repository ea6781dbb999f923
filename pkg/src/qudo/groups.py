"""Finite groups used by the code: dihedral D_m, cyclic Z_k and two-factor products.

Dihedral elements are ``r^a s^j`` with ``0 <= a < m`` and ``j in {0, 1}``,
multiplied by ``r^a s^j . r^b s^k = r^(a + (-1)^j b) s^(j + k)``.  Elements are
enumerated with ``a`` ascending and then ``j``, so the index of ``r^a s^j`` is
``2a + j``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .phases import CyclotomicInteger, Phase


@dataclass(frozen=True)
class GroupElement:
    group: "FiniteGroup"
    coords: tuple[int, ...]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def __pow__(self, k: int) -> "GroupElement":
        out = self.group.identity
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def index(self) -> int:
        return self.group.index(self)

    def __str__(self) -> str:
        return self.group.format(self.coords)

    def __repr__(self) -> str:
        return f"<{self.group.name}: {self}>"


class FiniteGroup:
    """Common machinery; subclasses provide coordinates and the product rule."""

    name: str

    def _coords(self) -> list[tuple[int, ...]]:
        raise NotImplementedError

    def _mul(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        raise NotImplementedError

    def format(self, coords: tuple[int, ...]) -> str:
        raise NotImplementedError

    def parse_element(self, text: str) -> GroupElement:
        raise NotImplementedError

    @cached_property
    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(GroupElement(self, c) for c in self._coords())

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {e.coords: i for i, e in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def index(self, g: GroupElement) -> int:
        return self._index[g.coords]

    def element(self, i: int) -> GroupElement:
        return self.elements[i]

    @cached_property
    def identity(self) -> GroupElement:
        return self.elements[0]

    @cached_property
    def mul_table(self) -> np.ndarray:
        n = self.order
        t = np.empty((n, n), dtype=np.int64)
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                t[i, j] = self._index[self._mul(g.coords, h.coords)]
        t.setflags(write=False)
        return t

    @cached_property
    def inv_table(self) -> np.ndarray:
        t = np.argmin(self.mul_table, axis=1)  # identity has index 0
        assert np.all(self.mul_table[np.arange(self.order), t] == 0)
        t.setflags(write=False)
        return t


@dataclass(frozen=True, eq=True)
class DihedralGroup(FiniteGroup):
    """D_m of order 2m, generated by r (order m) and s (order 2)."""

    m: int

    @property
    def name(self) -> str:
        return f"D{self.m}"

    def _coords(self):
        return [(a, j) for a in range(self.m) for j in range(2)]

    def _mul(self, x, y):
        a, j = x
        b, k = y
        return ((a + (1 - 2 * j) * b) % self.m, (j + k) % 2)

    def el(self, a: int, j: int = 0) -> GroupElement:
        return GroupElement(self, (a % self.m, j % 2))

    @property
    def r(self) -> GroupElement:
        return self.el(1, 0)

    @property
    def s(self) -> GroupElement:
        return self.el(0, 1)

    def format(self, coords):
        a, j = coords
        if a == 0:
            return "s" if j else "id"
        rot = "r" if a == 1 else f"r^{a}"
        return rot + ("s" if j else "")

    def parse_element(self, text: str) -> GroupElement:
        t = text.replace(" ", "")
        if t in ("id", "1", "e"):
            return self.identity
        mt = re.fullmatch(r"(?:r(?:\^(-?\d+))?)?(s)?", t)
        if not mt or t == "":
            raise ValueError(f"cannot parse dihedral element {text!r}")
        has_r = t.startswith("r")
        a = int(mt.group(1)) if mt.group(1) else (1 if has_r else 0)
        return self.el(a, 1 if mt.group(2) else 0)


@dataclass(frozen=True, eq=True)
class CyclicGroup(FiniteGroup):
    k: int
    gen: str = "g"

    @property
    def name(self) -> str:
        return f"Z{self.k}"

    def _coords(self):
        return [(a,) for a in range(self.k)]

    def _mul(self, x, y):
        return ((x[0] + y[0]) % self.k,)

    def el(self, a: int) -> GroupElement:
        return GroupElement(self, (a % self.k,))

    def format(self, coords):
        a = coords[0]
        if a == 0:
            return "id"
        return self.gen if a == 1 else f"{self.gen}^{a}"

    def parse_element(self, text: str) -> GroupElement:
        t = text.replace(" ", "")
        if t in ("id", "1", "e"):
            return self.identity
        mt = re.fullmatch(re.escape(self.gen) + r"(?:\^(-?\d+))?", t)
        if not mt:
            raise ValueError(f"cannot parse {text!r} in {self.name}")
        return self.el(int(mt.group(1)) if mt.group(1) else 1)


@dataclass(frozen=True, eq=True)
class DirectProduct(FiniteGroup):
    left: FiniteGroup
    right: FiniteGroup

    @property
    def name(self) -> str:
        return f"{self.left.name}x{self.right.name}"

    @property
    def _split(self) -> int:
        return len(self.left.identity.coords)

    def _coords(self):
        return [x.coords + y.coords for x in self.left.elements for y in self.right.elements]

    def _mul(self, x, y):
        k = self._split
        return self.left._mul(x[:k], y[:k]) + self.right._mul(x[k:], y[k:])

    def project(self, g: GroupElement) -> tuple[GroupElement, GroupElement]:
        k = self._split
        return GroupElement(self.left, g.coords[:k]), GroupElement(self.right, g.coords[k:])

    def pair(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return GroupElement(self, x.coords + y.coords)

    def format(self, coords):
        k = self._split
        return f"({self.left.format(coords[:k])}, {self.right.format(coords[k:])})"

    def parse_element(self, text: str) -> GroupElement:
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")) or "," not in t:
            raise ValueError(f"cannot parse {text!r} in {self.name}")
        a, b = t[1:-1].split(",", 1)
        return self.pair(self.left.parse_element(a), self.right.parse_element(b))


def dihedral(N: int) -> DihedralGroup:
    """D_{4N}, the group of order 8N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return DihedralGroup(4 * N)


def parse_group(text: str) -> FiniteGroup:
    """Parse ``D4N:N=<int>``, ``Z:<k>`` or ``Z2xZ2``."""
    s = text.replace(" ", "")
    if m := re.fullmatch(r"D4N:N=(\d+)", s):
        return dihedral(int(m.group(1)))
    if m := re.fullmatch(r"Z:(\d+)", s):
        return CyclicGroup(int(m.group(1)))
    if s == "Z2xZ2":
        return DirectProduct(CyclicGroup(2, "a"), CyclicGroup(2, "b"))
    raise ValueError(f"unsupported group {text!r}")


def _check_same(g: GroupElement, h: GroupElement) -> None:
    if g.group != h.group:
        raise ValueError(f"elements of different groups: {g.group.name} vs {h.group.name}")


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    _check_same(g, h)
    return GroupElement(g.group, g.group._mul(g.coords, h.coords))


def inverse(g: GroupElement) -> GroupElement:
    G = g.group
    return G.elements[int(G.inv_table[G.index(g)])]


def conjugacy_class(g: GroupElement) -> list[GroupElement]:
    G = g.group
    orbit = {G.index(k * g * k.inverse()) for k in G.elements}
    return [G.elements[i] for i in sorted(orbit)]


def conjugacy_classes(G: FiniteGroup) -> list[list[GroupElement]]:
    seen: set[int] = set()
    out = []
    for g in G.elements:
        if G.index(g) in seen:
            continue
        cls = conjugacy_class(g)
        seen.update(G.index(x) for x in cls)
        out.append(cls)
    return out


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[GroupElement, ...]
    generators: tuple[GroupElement, ...]

    def __contains__(self, g: GroupElement) -> bool:
        return g in self._set

    @cached_property
    def _set(self) -> frozenset[GroupElement]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def indices(self) -> tuple[int, ...]:
        return tuple(self.parent.index(g) for g in self.elements)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        common = [g for g in self.elements if g in other]
        return Subgroup(self.parent, tuple(common), tuple(g for g in common if g != self.parent.identity))

    def label(self) -> str:
        if self.order == self.parent.order and self.order > 1:
            return self.parent.name
        if not self.generators:
            return "<id>"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __str__(self) -> str:
        return self.label()


def subgroup_generated(gens: Sequence[GroupElement]) -> Subgroup:
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    G = gens[0].group
    for g in gens:
        _check_same(g, gens[0])
    seen = {G.index(G.identity)}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if G.index(y) not in seen:
                    seen.add(G.index(y))
                    nxt.append(y)
        frontier = nxt
    gens = tuple(g for g in gens if g != G.identity)
    return Subgroup(G, tuple(G.elements[i] for i in sorted(seen)), gens)


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, G.elements, ())


def centralizer(g: GroupElement) -> Subgroup:
    G = g.group
    els = tuple(h for h in G.elements if h * g == g * h)
    return Subgroup(G, els, ())


# --- representations ----------------------------------------------------------

PhaseMatrix = tuple[tuple[Phase | None, ...], ...]  # None marks a zero entry


@dataclass(frozen=True)
class Irrep:
    """Irreducible unitary representation with root-of-unity (or zero) entries."""

    name: str
    dim: int
    domain: "FiniteGroup | Subgroup"
    root_order: int
    fn: Callable[[GroupElement], PhaseMatrix]

    def phase_matrix(self, g: GroupElement) -> PhaseMatrix:
        return self.fn(g)

    def matrix(self, g: GroupElement) -> np.ndarray:
        pm = self.fn(g)
        return np.array([[0 if x is None else complex(x) for x in row] for row in pm], dtype=complex)

    def __repr__(self) -> str:
        return f"Irrep({self.name}, dim={self.dim})"


def _scalar(p: Phase) -> PhaseMatrix:
    return ((p,),)


def _dihedral_irreps(G: DihedralGroup) -> list[Irrep]:
    m = G.m
    if m % 2:
        raise ValueError("only dihedral groups with even m are supported")
    half = Phase.root(1, 2)

    def one_dim(name, r_sign, s_sign):
        def fn(g):
            a, j = g.coords
            return _scalar(half ** (r_sign * a + s_sign * j))
        return Irrep(name, 1, G, 2, fn)

    out = [
        one_dim("1", 0, 0),
        one_dim("1_r", 0, 1),  # r -> +1, s -> -1
        one_dim("1_s", 1, 0),  # r -> -1, s -> +1
        one_dim("1_rs", 1, 1),
    ]
    for ell in range(1, m // 2):
        def fn(g, ell=ell):
            a, j = g.coords
            z = Phase.root(ell * a, m)
            if j == 0:
                return ((z, None), (None, z.inverse()))
            return ((None, z), (z.inverse(), None))
        out.append(Irrep(f"E{ell}", 2, G, m, fn))
    return out


def _cyclic_irreps(G: CyclicGroup) -> list[Irrep]:
    k = G.k
    return [Irrep("1" if b == 0 else f"z^{b}", 1, G, k, lambda g, b=b: _scalar(Phase.root(b * g.coords[0], k)))
            for b in range(k)]


def _tensor(R1: Irrep, R2: Irrep, G: DirectProduct) -> Irrep:
    def fn(g):
        x, y = G.project(g)
        A, B = R1.fn(x), R2.fn(y)
        rows = []
        for i1 in range(R1.dim):
            for i2 in range(R2.dim):
                row = []
                for j1 in range(R1.dim):
                    for j2 in range(R2.dim):
                        u, v = A[i1][j1], B[i2][j2]
                        row.append(None if (u is None or v is None) else u * v)
                rows.append(tuple(row))
        return tuple(rows)
    name = _product_irrep_name(G, R1, R2)
    return Irrep(name, R1.dim * R2.dim, G, math.lcm(R1.root_order, R2.root_order), fn)


def _product_irrep_name(G: DirectProduct, R1: Irrep, R2: Irrep) -> str:
    if isinstance(G.left, CyclicGroup) and isinstance(G.right, CyclicGroup) and G.left.k == G.right.k == 2:
        sign = {"1": "+", "z^1": "-"}
        return sign[R1.name] + sign[R2.name]
    return f"{R1.name}x{R2.name}"


def irreps(G: FiniteGroup) -> list[Irrep]:
    if isinstance(G, DihedralGroup):
        return _dihedral_irreps(G)
    if isinstance(G, CyclicGroup):
        return _cyclic_irreps(G)
    if isinstance(G, DirectProduct):
        return [_tensor(a, b, G) for a in irreps(G.left) for b in irreps(G.right)]
    raise ValueError(f"unsupported group kind {type(G).__name__}")


def irrep_by_name(G: FiniteGroup, name: str) -> Irrep:
    for R in irreps(G):
        if R.name == name:
            return R
    raise KeyError(name)


def character(R: Irrep, g: GroupElement) -> CyclotomicInteger:
    pm = R.fn(g)
    out = CyclotomicInteger(R.root_order)
    for i in range(R.dim):
        if pm[i][i] is not None:
            out = out + CyclotomicInteger.from_phase(pm[i][i], R.root_order)
    return out

