"""Group 2-cocycles and 1-cochains with exact phase values.

Values are stored as integer numerators modulo a common ``modulus`` so that
``value = exp(2*pi*i*num/modulus)``; tables are indexed by element index in the
parent group.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .groups import (
    DihedralGroup,
    FiniteGroup,
    GroupElement,
    Subgroup,
    dihedral,
    subgroup_generated,
    whole_group,
)
from .phases import Phase


class UndecidedError(RuntimeError):
    """The trivialisation search ran past its budget without a verdict."""


def _as_subgroup(dom: FiniteGroup | Subgroup) -> Subgroup:
    return dom if isinstance(dom, Subgroup) else whole_group(dom)


@dataclass(frozen=True, eq=False)
class Cochain1:
    domain: Subgroup
    modulus: int
    table: np.ndarray  # shape (|G|,), entries outside the domain are unused

    def __call__(self, g: GroupElement) -> Phase:
        if g not in self.domain:
            raise KeyError(f"{g} outside the domain {self.domain}")
        return Phase.root(int(self.table[g.index]), self.modulus)

    @property
    def group(self) -> FiniteGroup:
        return self.domain.parent

    def rescaled(self, modulus: int) -> "Cochain1":
        if modulus % self.modulus:
            raise ValueError("modulus must be a multiple of the current one")
        return Cochain1(self.domain, modulus, self.table * (modulus // self.modulus) % modulus)

    def __mul__(self, other: "Cochain1") -> "Cochain1":
        m = math.lcm(self.modulus, other.modulus)
        a, b = self.rescaled(m), other.rescaled(m)
        return Cochain1(self.domain, m, (a.table + b.table) % m)

    def inverse(self) -> "Cochain1":
        return Cochain1(self.domain, self.modulus, (-self.table) % self.modulus)

    def equals(self, other: "Cochain1") -> bool:
        m = math.lcm(self.modulus, other.modulus)
        idx = list(self.domain.indices)
        return bool(np.all(self.rescaled(m).table[idx] == other.rescaled(m).table[idx]))

    def as_dict(self) -> dict[str, str]:
        return {str(g): self(g).pi_string() for g in self.domain.elements}


@dataclass(frozen=True, eq=False)
class Cocycle2:
    domain: Subgroup
    modulus: int
    table: np.ndarray  # shape (|G|, |G|)

    def __call__(self, g: GroupElement, h: GroupElement) -> Phase:
        if g not in self.domain or h not in self.domain:
            raise KeyError("argument outside the domain")
        return Phase.root(int(self.table[g.index, h.index]), self.modulus)

    @property
    def group(self) -> FiniteGroup:
        return self.domain.parent

    def rescaled(self, modulus: int) -> "Cocycle2":
        if modulus % self.modulus:
            raise ValueError("modulus must be a multiple of the current one")
        return Cocycle2(self.domain, modulus, self.table * (modulus // self.modulus) % modulus)

    def __mul__(self, other: "Cocycle2") -> "Cocycle2":
        m = math.lcm(self.modulus, other.modulus)
        return Cocycle2(self.domain, m, (self.rescaled(m).table + other.rescaled(m).table) % m)

    def local_table(self) -> np.ndarray:
        idx = np.array(self.domain.indices)
        return self.table[np.ix_(idx, idx)]

    def equals(self, other: "Cocycle2") -> bool:
        m = math.lcm(self.modulus, other.modulus)
        a = self.rescaled(m).local_table()
        b = Cocycle2(self.domain, other.modulus, other.table).rescaled(m).local_table()
        return bool(np.all(a == b))

    def is_trivial(self) -> bool:
        return not np.any(self.local_table() % self.modulus)


def cochain_from_function(dom: FiniteGroup | Subgroup, modulus: int,
                          fn: Callable[[GroupElement], Phase]) -> Cochain1:
    K = _as_subgroup(dom)
    t = np.zeros(K.parent.order, dtype=np.int64)
    for g in K.elements:
        t[g.index] = fn(g).numerator_mod(modulus)
    return Cochain1(K, modulus, t)


def cocycle_from_function(dom: FiniteGroup | Subgroup, modulus: int,
                          fn: Callable[[GroupElement, GroupElement], Phase]) -> Cocycle2:
    K = _as_subgroup(dom)
    n = K.parent.order
    t = np.zeros((n, n), dtype=np.int64)
    for g in K.elements:
        for h in K.elements:
            t[g.index, h.index] = fn(g, h).numerator_mod(modulus)
    return Cocycle2(K, modulus, t)


def trivial_cocycle(dom: FiniteGroup | Subgroup) -> Cocycle2:
    K = _as_subgroup(dom)
    n = K.parent.order
    return Cocycle2(K, 1, np.zeros((n, n), dtype=np.int64))


def trivial_cochain(dom: FiniteGroup | Subgroup) -> Cochain1:
    K = _as_subgroup(dom)
    return Cochain1(K, 1, np.zeros(K.parent.order, dtype=np.int64))


# --- the dihedral construction ------------------------------------------------

def alpha_prime(N: int) -> Cocycle2:
    """The sign cocycle from lifting D_{4N} into D_{8N} with r^a s^j -> r^a s^j."""
    G = dihedral(N)
    n = G.order
    t = np.zeros((n, n), dtype=np.int64)
    for g in G.elements:
        a, j = g.coords
        for h in G.elements:
            b, _ = h.coords
            if (a + (1 - 2 * j) * b) % (8 * N) >= 4 * N:
                t[g.index, h.index] = 1
    return Cocycle2(whole_group(G), 2, t)


def kappa(N: int) -> Cochain1:
    G = dihedral(N)

    def val(g):
        a, j = g.coords
        if j == 0 and a == 2 * N:
            return Phase.root(3, 4)  # -i
        if j == 0 and a > 2 * N:
            return Phase.root(1, 2)
        return Phase(0)

    return cochain_from_function(G, 4, val)


def coboundary(beta: Cochain1) -> Cocycle2:
    """(delta beta)(g, h) = beta(g) beta(h) / beta(gh), on the domain of beta."""
    K = beta.domain
    G = K.parent
    n = G.order
    idx = np.array(K.indices)
    b = beta.table
    t = np.zeros((n, n), dtype=np.int64)
    gh = G.mul_table[np.ix_(idx, idx)]
    t[np.ix_(idx, idx)] = (b[idx][:, None] + b[idx][None, :] - b[gh]) % beta.modulus
    return Cocycle2(K, beta.modulus, t)


def alpha(N: int) -> Cocycle2:
    return alpha_prime(N) * coboundary(kappa(N))


def restrict(a: Cocycle2, K: Subgroup) -> Cocycle2:
    for g in K.elements:
        if g not in a.domain:
            raise ValueError("subgroup is not inside the cocycle's domain")
    n = K.parent.order
    t = np.zeros((n, n), dtype=np.int64)
    idx = np.array(K.indices)
    t[np.ix_(idx, idx)] = a.table[np.ix_(idx, idx)]
    return Cocycle2(K, a.modulus, t)


def restrict_cochain(b: Cochain1, K: Subgroup) -> Cochain1:
    return Cochain1(K, b.modulus, b.table.copy())


def beta_closed_form(N: int) -> Cochain1:
    """Trivialisation of alpha(N) on <r>: e^{i pi a/4N}, 1 at a = 2N, and a sign flip above."""
    G = dihedral(N)
    K = subgroup_generated([G.r])
    m = 8 * N

    def val(g):
        a = g.coords[0]
        if a < 2 * N:
            return Phase.root(a, m)
        if a == 2 * N:
            return Phase(0)
        return Phase.root(a + 4 * N, m)

    return cochain_from_function(K, m, val)


# --- checks -------------------------------------------------------------------

@dataclass
class CocycleCheck:
    ok: bool
    witness: tuple[GroupElement, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_cocycle(a: Cocycle2) -> CocycleCheck:
    """alpha(g,h) alpha(gh,k) = alpha(g,hk) alpha(h,k) on every triple of the domain."""
    K = a.domain
    G = K.parent
    idx = np.array(K.indices)
    mt = G.mul_table
    t = a.table
    g, h, k = np.meshgrid(idx, idx, idx, indexing="ij")
    gh = mt[g, h]
    hk = mt[h, k]
    lhs = t[g, h] + t[gh, k]
    rhs = t[g, hk] + t[h, k]
    bad = np.nonzero((lhs - rhs) % a.modulus)
    if bad[0].size == 0:
        return CocycleCheck(True)
    i = (bad[0][0], bad[1][0], bad[2][0])
    return CocycleCheck(False, tuple(G.elements[int(x)] for x in (g[i], h[i], k[i])))


@dataclass
class NormalizationReport:
    unit_modulus: bool
    identity: bool
    inverse_pair: bool
    reversal: bool
    witness: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.unit_modulus and self.identity and self.inverse_pair and self.reversal


def check_normalization(a: Cocycle2) -> NormalizationReport:
    """|alpha| = 1, alpha(id,g) = alpha(g,id) = 1, alpha(g,g^-1) = 1, alpha(h^-1,g^-1) = alpha(g,h)^-1."""
    G = a.group
    els = a.domain.elements
    e = G.identity
    rep = NormalizationReport(True, True, True, True)  # unit modulus holds by construction
    for g in els:
        if not (a(e, g).is_one() and a(g, e).is_one()):
            rep.identity = False
            rep.witness.setdefault("identity", str(g))
        if not a(g, g.inverse()).is_one():
            rep.inverse_pair = False
            rep.witness.setdefault("inverse_pair", str(g))
        for h in els:
            if a(h.inverse(), g.inverse()) != a(g, h).inverse():
                rep.reversal = False
                rep.witness.setdefault("reversal", f"{g},{h}")
    return rep


def commutator_invariant(a: Cocycle2, g: GroupElement, h: GroupElement) -> Phase:
    """alpha(g,h)/alpha(h,g) for commuting g, h; unchanged by coboundaries."""
    if g * h != h * g:
        raise ValueError("elements must commute")
    return a(g, h) / a(h, g)


def nontriviality_witness(a: Cocycle2) -> tuple[GroupElement, GroupElement] | None:
    """A commuting pair with a non-trivial invariant, which proves the class is non-trivial."""
    els = a.domain.elements
    for g in els:
        for h in els:
            if g.index < h.index and g * h == h * g and not commutator_invariant(a, g, h).is_one():
                return g, h
    return None


def sign_cochain_search(a: Cocycle2, limit: int = 1 << 20) -> Cochain1 | None:
    """Exhaustive search for beta: G -> {+1,-1} with delta beta = alpha."""
    K = a.domain
    G = K.parent
    idx = np.array(K.indices)
    free = [i for i in idx if i != G.index(G.identity)]
    if 2 ** len(free) > limit:
        raise UndecidedError(f"sign search needs 2^{len(free)} assignments")
    target = a.rescaled(math.lcm(a.modulus, 2))
    m = target.modulus
    loc = target.local_table()
    mt = G.mul_table[np.ix_(idx, idx)]
    pos = {int(i): p for p, i in enumerate(idx)}
    mt_loc = np.vectorize(lambda x: pos[int(x)])(mt)
    bits = ((np.arange(2 ** len(free))[:, None] >> np.arange(len(free))[None, :]) & 1)
    chunk = 4096
    for start in range(0, bits.shape[0], chunk):
        b = np.zeros((min(chunk, bits.shape[0] - start), len(idx)), dtype=np.int64)
        for col, i in enumerate(free):
            b[:, pos[int(i)]] = bits[start:start + b.shape[0], col] * (m // 2)
        d = (b[:, :, None] + b[:, None, :] - b[:, mt_loc]) % m
        hit = np.nonzero(np.all((d == loc[None]).reshape(b.shape[0], -1), axis=1))[0]
        if hit.size:
            t = np.zeros(G.order, dtype=np.int64)
            t[idx] = b[hit[0]]
            return Cochain1(K, m, t)
    return None


def _element_order(g: GroupElement) -> int:
    k, x = 1, g
    while x != g.group.identity:
        x = x * g
        k += 1
    return k


def _generating_set(K: Subgroup) -> list[GroupElement]:
    for g in K.elements:
        if _element_order(g) == K.order:
            return [g]
    gens: list[GroupElement] = []
    span = {K.parent.identity}
    for g in K.elements:
        if g not in span:
            gens.append(g)
            span = set(subgroup_generated(gens).elements)
    return gens


def trivialize(aK: Cocycle2, budget: int = 10**6) -> Cochain1 | None:
    """Search beta on K with delta beta = aK and beta(id) = 1.

    Generator values range over the roots of unity of order ``modulus * exp(K)``.
    Returns None when no such beta exists in that value group, which for cyclic K
    is exhaustive.  Raises UndecidedError if the search would exceed ``budget``.
    """
    K = aK.domain
    G = K.parent
    if K.order == 1:
        return trivial_cochain(K)
    exponent = math.lcm(*(_element_order(g) for g in K.elements))
    m = aK.modulus * exponent
    a = aK.rescaled(m).table
    gens = _generating_set(K)
    if m ** len(gens) > budget:
        raise UndecidedError(f"undecided with current value group: {m}^{len(gens)} candidates")
    mt = G.mul_table
    e = G.index(G.identity)
    gi = [G.index(g) for g in gens]
    for vals in itertools.product(range(m), repeat=len(gens)):
        gval = dict(zip(gi, vals))
        beta = {e: 0}
        frontier = [e]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g in gi:
                    y = int(mt[x, g])
                    val = (beta[x] + gval[g] - a[x, g]) % m
                    if y in beta:
                        if beta[y] != val:
                            ok = False
                            break
                    else:
                        beta[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        if any(beta[g] != v for g, v in gval.items()):
            continue
        t = np.zeros(G.order, dtype=np.int64)
        for i, v in beta.items():
            t[i] = v
        cand = Cochain1(K, m, t)
        if coboundary(cand).equals(aK):
            return cand
    return None


def character_offset(b1: Cochain1, b2: Cochain1, gen: GroupElement) -> Phase:
    """Value at ``gen`` of the ratio b1/b2, which is a character when both trivialise the same cocycle."""
    return b1(gen) / b2(gen)
