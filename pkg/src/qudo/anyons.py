"""Anyons of D(D_4N), the three boundary algebras, the SPT permutation and the code-switch maps.

Centralizer irreps are named relative to the canonical class representative
(the element of smallest index in the class):

* classes with centralizer D_4N (``id`` and ``r^2N``): ``1, 1_r, 1_s, 1_rs, E_l``
* rotation classes ``[r^a]`` with centralizer <r>: ``z^b`` sending ``r`` to
  ``exp(2 pi i b / 4N)``; ``z^0`` is left implicit and ``z^2N`` prints as ``_{-1}``
* reflection classes ``[s]``, ``[rs]`` with centralizer {id, g, r^2N, g r^2N}:
  ``(e1, e2)`` with ``e1`` the sign on the representative and ``e2`` the sign on ``r^2N``
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .groups import DihedralGroup, GroupElement, centralizer, character, conjugacy_class, conjugacy_classes, dihedral
from .phases import Phase

D_IRREPS = ("1", "1_r", "1_s", "1_rs")


@dataclass(frozen=True, order=True)
class AnyonLabel:
    N: int
    rep: int  # index of the canonical class representative in D_4N
    irrep: str  # "1", "1_r", "1_s", "1_rs", "E<l>", "z^<b>", "++", "+-", "-+", "--"

    @property
    def group(self) -> DihedralGroup:
        return dihedral(self.N)

    @property
    def representative(self) -> GroupElement:
        return self.group.element(self.rep)

    @property
    def kind(self) -> str:
        a, j = self.representative.coords
        if j:
            return "reflection"
        if a == 0 or a == 2 * self.N:
            return "central"
        return "rotation"

    @property
    def class_size(self) -> int:
        return len(conjugacy_class(self.representative))

    @property
    def irrep_dim(self) -> int:
        return 2 if self.irrep.startswith("E") else 1

    @property
    def qdim(self) -> int:
        return self.class_size * self.irrep_dim

    def character(self, h: GroupElement) -> complex:
        return complex(centralizer_character(self, h))

    def __str__(self) -> str:
        g = self.representative
        kind = self.kind
        if kind == "central":
            irr = f"E_{self.irrep[1:]}" if self.irrep.startswith("E") else self.irrep
            if g.index == 0:
                return irr
            return f"[{g}]" if irr == "1" else f"[{g}]{irr}"
        if kind == "rotation":
            b = int(self.irrep[2:])
            if b == 0:
                return f"[{g}]"
            return f"[{g}]_{{-1}}" if b == 2 * self.N else f"[{g}]_{{z^{b}}}"
        return f"[{g}]_{{{self.irrep}}}"


def _canonical_rep(g: GroupElement) -> GroupElement:
    return min(conjugacy_class(g), key=lambda x: x.index)


def centralizer_character(x: AnyonLabel, h: GroupElement):
    """Character of the centralizer irrep of ``x`` at ``h``; a Phase, or a CyclotomicInteger for E_l."""
    G = x.group
    g = x.representative
    if h not in centralizer(g):
        raise ValueError(f"{h} does not commute with {g}")
    kind = x.kind
    if kind == "central":
        from .groups import irrep_by_name
        if x.irrep.startswith("E"):
            return character(irrep_by_name(G, x.irrep), h)
        return irrep_by_name(G, x.irrep).phase_matrix(h)[0][0]
    if kind == "rotation":
        b = int(x.irrep[2:])
        return Phase.root(b * h.coords[0], G.m)
    e1, e2 = (0 if c == "+" else 1 for c in x.irrep)
    half = 2 * x.N
    on_rep = h.coords[1]
    on_centre = int(h.coords[0] != g.coords[0] if on_rep else h.coords[0] == half)
    return Phase.root(e1 * on_rep + e2 * on_centre, 2)


@lru_cache(maxsize=None)
def enumerate_anyons(N: int) -> tuple[AnyonLabel, ...]:
    G = dihedral(N)
    out = []
    for cls in conjugacy_classes(G):
        g = min(cls, key=lambda x: x.index)
        a, j = g.coords
        if j:
            names = ["".join(p) for p in product("+-", repeat=2)]
        elif a in (0, 2 * N):
            names = list(D_IRREPS) + [f"E{ell}" for ell in range(1, 2 * N)]
        else:
            names = [f"z^{b}" for b in range(4 * N)]
        out.extend(AnyonLabel(N, g.index, n) for n in names)
    return tuple(sorted(out))


def vacuum(N: int) -> AnyonLabel:
    return AnyonLabel(N, 0, "1")


_LABEL = re.compile(r"^(?:\[(?P<cls>[^\]]+)\])?(?P<rest>.*)$")


def parse_anyon(text: str, N: int) -> AnyonLabel:
    """Inverse of ``str``; also accepts ``1_{rs}``, ``E`` (when N = 1), ``[r]_{z^b}`` and ``[r]_{+1}``."""
    G = dihedral(N)
    t = text.strip().replace(" ", "")
    m = _LABEL.match(t)
    cls, rest = m.group("cls"), m.group("rest")
    g = _canonical_rep(G.parse_element(cls)) if cls else G.identity
    rest = rest.replace("{", "").replace("}", "")
    probe = AnyonLabel(N, g.index, "1")
    kind = probe.kind
    if kind == "central":
        if rest in ("", "1"):
            irr = "1"
        elif rest in D_IRREPS:
            irr = rest
        elif rest == "E" and N == 1:
            irr = "E1"
        elif re.fullmatch(r"E_?\d+", rest):
            irr = "E" + rest.lstrip("E_")
        else:
            raise ValueError(f"unknown irrep {rest!r} for class {cls}")
    elif kind == "rotation":
        rest = rest.lstrip("_")
        if rest in ("", "+1", "1", "z^0"):
            irr = "z^0"
        elif rest == "-1":
            irr = f"z^{2 * N}"
        elif re.fullmatch(r"z\^\d+", rest):
            irr = f"z^{int(rest[2:]) % (4 * N)}"
        else:
            raise ValueError(f"unknown irrep {rest!r} for class {cls}")
    else:
        rest = rest.lstrip("_")
        if not re.fullmatch(r"[+-]{2}", rest):
            raise ValueError(f"reflection classes need a sign pair, got {rest!r}")
        irr = rest
    label = AnyonLabel(N, g.index, irr)
    if label not in enumerate_anyons(N):
        raise ValueError(f"{text!r} is not an anyon of D(D_{4 * N})")
    return label


# ---------------------------------------------------------------- algebras

@dataclass
class LagrangianAlgebra:
    subgroup: str
    terms: Counter = field(default_factory=Counter)  # AnyonLabel -> multiplicity

    @property
    def dimension(self) -> int:
        return sum(n * a.qdim for a, n in self.terms.items())

    def __str__(self) -> str:
        parts = []
        for a, n in sorted(self.terms.items()):
            parts.append(f"{n}*{a}" if n > 1 else str(a))
        return " + ".join(parts)


def _rot(N: int, a: int) -> GroupElement:
    return dihedral(N).el(a, 0)


def lagrangians(N: int) -> tuple[LagrangianAlgebra, LagrangianAlgebra, LagrangianAlgebra]:
    """Boundary algebras for K = <rs>, <s>, <r>, in that order."""
    G = dihedral(N)
    A = lambda g, irr: AnyonLabel(N, _canonical_rep(g).index, irr)
    Es = {A(G.identity, f"E{ell}"): 1 for ell in range(1, 2 * N)}
    rs = G.r * G.s
    L1 = Counter({A(G.identity, "1"): 1, A(G.identity, "1_rs"): 1, **Es, A(rs, "++"): 1, A(rs, "+-"): 1})
    L2 = Counter({A(G.identity, "1"): 1, A(G.identity, "1_s"): 1, **Es, A(G.s, "++"): 1, A(G.s, "+-"): 1})
    L3 = Counter({A(G.identity, "1"): 1, A(G.identity, "1_r"): 1})
    for a in range(1, 2 * N):
        L3[A(_rot(N, a), "z^0")] += 2
    L3[A(_rot(N, 2 * N), "1")] += 1
    L3[A(_rot(N, 2 * N), "1_r")] += 1
    return LagrangianAlgebra("<rs>", L1), LagrangianAlgebra("<s>", L2), LagrangianAlgebra("<r>", L3)


# ---------------------------------------------------------------- SPT permutation

@dataclass(frozen=True)
class AnyonPermutation:
    N: int
    mapping: dict

    def __call__(self, a: AnyonLabel) -> AnyonLabel:
        return self.mapping.get(a, a)

    def is_bijection(self) -> bool:
        anyons = enumerate_anyons(self.N)
        return sorted(self(a) for a in anyons) == sorted(anyons)

    def is_involution(self) -> bool:
        return all(self(self(a)) == a for a in enumerate_anyons(self.N))

    def apply(self, L: LagrangianAlgebra) -> LagrangianAlgebra:
        out = Counter()
        for a, n in L.terms.items():
            out[self(a)] += n
        return LagrangianAlgebra(L.subgroup, out)

    def moved(self) -> list[tuple[AnyonLabel, AnyonLabel]]:
        return [(a, b) for a, b in sorted(self.mapping.items()) if a < b]


def spt_permutation(N: int) -> AnyonPermutation:
    G = dihedral(N)
    c = _rot(N, 2 * N).index
    pairs = [(AnyonLabel(N, c, "1"), AnyonLabel(N, c, "1_r")),
             (AnyonLabel(N, c, "1_s"), AnyonLabel(N, c, "1_rs"))]
    for g in (G.s, G.r * G.s):
        i = _canonical_rep(g).index
        for e1 in "+-":
            pairs.append((AnyonLabel(N, i, e1 + "+"), AnyonLabel(N, i, e1 + "-")))
    mapping = {}
    for a, b in pairs:
        mapping[a], mapping[b] = b, a
    return AnyonPermutation(N, mapping)


# ---------------------------------------------------------------- targets

Z2Z2_NAMES = ("m1", "m2", "e1", "e2")
Z2_NAMES = ("e", "m")


def target_name(bits: tuple[int, ...], names: tuple[str, ...]) -> str:
    s = "".join(n for n, b in zip(names, bits) if b)
    return s or "1"


def parse_target(text: str, names: tuple[str, ...]) -> tuple[int, ...]:
    t = text.replace(" ", "")
    if t == "1":
        return (0,) * len(names)
    bits = [0] * len(names)
    pat = "|".join(sorted(names, key=len, reverse=True))
    pieces = re.findall(pat, t)
    if "".join(pieces) != t:
        raise ValueError(f"cannot parse target anyon {text!r}")
    for p in pieces:
        bits[names.index(p)] ^= 1
    return tuple(bits)


def canonical_target(text: str, names: tuple[str, ...]) -> str:
    return target_name(parse_target(text, names), names)


def expand_product(formula: str, names: tuple[str, ...]) -> Counter:
    """Expand ``k(1+x)(1+y)...`` (``+`` or ``⊕``) into a multiset of canonical target names."""
    f = formula.replace("⊕", "+").replace(" ", "")
    m = re.fullmatch(r"(\d*)((?:\([^()]*\))*)", f)
    if not m or not m.group(2):
        raise ValueError(f"cannot parse product formula {formula!r}")
    k = int(m.group(1) or 1)
    acc = Counter({(0,) * len(names): k})
    for factor in re.findall(r"\(([^()]*)\)", m.group(2)):
        terms = [parse_target(t, names) for t in factor.split("+")]
        nxt = Counter()
        for x, n in acc.items():
            for t in terms:
                nxt[tuple(a ^ b for a, b in zip(x, t))] += n
        acc = nxt
    return Counter({target_name(b, names): n for b, n in acc.items()})


# ---------------------------------------------------------------- condensation maps

@dataclass(frozen=True)
class CondensationRow:
    bundle: tuple[AnyonLabel, ...]
    target: str
    branch: int = 0  # 1 or 2 when the same bundle is listed with two targets

    def describe(self) -> str:
        return " + ".join(str(a) for a in self.bundle)


@dataclass
class CondensationMap:
    N: int
    name: str
    target_names: tuple[str, ...]
    rows: list[CondensationRow]

    def covered(self) -> set[AnyonLabel]:
        return {a for r in self.rows for a in r.bundle}

    def confined(self) -> list[AnyonLabel]:
        cov = self.covered()
        return [a for a in enumerate_anyons(self.N) if a not in cov]

    def image(self, a: AnyonLabel) -> Counter:
        """Target anyons that ``a`` can become on crossing the interface (empty if confined)."""
        return Counter(r.target for r in self.rows if a in r.bundle)

    def split_bundles(self) -> list[tuple[str, list[str]]]:
        seen: dict[tuple, list[str]] = {}
        for r in self.rows:
            seen.setdefault(r.bundle, []).append(r.target)
        return [(" + ".join(map(str, b)), t) for b, t in seen.items() if len(t) > 1]

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "map": self.name,
            "rows": [{"bundle": r.describe(), "target": r.target, "branch": r.branch} for r in self.rows],
            "confined": [str(a) for a in self.confined()],
            "split_images": [{"bundle": b, "targets": t} for b, t in self.split_bundles()],
        }


def _even_bundle(N: int, central_irrep: str) -> tuple[AnyonLabel, ...]:
    # id and r^2N carry the D_4N irrep; the middle classes carry its restriction to <r>
    b = 0 if central_irrep in ("1", "1_r") else 2 * N
    out = [AnyonLabel(N, 0, central_irrep)]
    out += [AnyonLabel(N, _rot(N, 2 * a).index, f"z^{b}") for a in range(1, N)]
    out.append(AnyonLabel(N, _rot(N, 2 * N).index, central_irrep))
    return tuple(out)


def _odd_bundle(N: int, b: int) -> tuple[AnyonLabel, ...]:
    return tuple(AnyonLabel(N, _rot(N, 2 * a - 1).index, f"z^{b}") for a in range(1, N + 1))


def _refl(N: int, g: GroupElement, eps: str) -> AnyonLabel:
    return AnyonLabel(N, _canonical_rep(g).index, eps)


def _rows(N: int, listing, names) -> list[CondensationRow]:
    count = Counter(b for b, _ in listing)
    seen = Counter()
    rows = []
    for bundle, tgt in listing:
        seen[bundle] += 1
        branch = seen[bundle] if count[bundle] > 1 else 0
        rows.append(CondensationRow(bundle, canonical_target(tgt, names), branch))
    return rows


def codeswitch_z2z2(N: int) -> CondensationMap:
    """Interface condensing the Z_2N generated by r^2; targets in D(Z2 x Z2)."""
    G = dihedral(N)
    s, rs = G.s, G.r * G.s
    odd0, odd1 = _odd_bundle(N, 0), _odd_bundle(N, 2 * N)
    listing = [
        (_even_bundle(N, "1"), "1"),
        (_even_bundle(N, "1_s"), "e1"),
        (_even_bundle(N, "1_r"), "e2"),
        (_even_bundle(N, "1_rs"), "e1e2"),
        (odd0, "m1"), (odd0, "m1e2"),
        (odd1, "m1e1"), (odd1, "m1e1e2"),
        ((_refl(N, s, "++"),), "m2"), ((_refl(N, s, "++"),), "m2e1"),
        ((_refl(N, s, "-+"),), "m2e2"), ((_refl(N, s, "-+"),), "m2e1e2"),
        ((_refl(N, rs, "++"),), "m1m2"), ((_refl(N, rs, "++"),), "m1m2e1e2"),
        ((_refl(N, rs, "-+"),), "m1m2e1"), ((_refl(N, rs, "-+"),), "m1m2e2"),
    ]
    return CondensationMap(N, "z2z2", Z2Z2_NAMES, _rows(N, listing, Z2Z2_NAMES))


def codeswitch_z2(N: int) -> CondensationMap:
    """Interface additionally condensing [s]_{++}; targets in D(Z2)."""
    G = dihedral(N)
    s, rs = G.s, G.r * G.s
    listing = [
        (_even_bundle(N, "1") + (_refl(N, s, "++"),), "1"),
        (_even_bundle(N, "1_s") + (_refl(N, s, "++"),), "e"),
        (_odd_bundle(N, 0) + (_refl(N, rs, "++"),), "m"),
        (_odd_bundle(N, 2 * N) + (_refl(N, rs, "-+"),), "em"),
    ]
    return CondensationMap(N, "z2", Z2_NAMES, _rows(N, listing, Z2_NAMES))


@dataclass
class TargetAlgebra:
    terms: Counter
    confined: Counter  # dropped source anyons with multiplicity

    @property
    def confined_count(self) -> int:
        return sum(self.confined.values())

    def __str__(self) -> str:
        return " + ".join(f"{n}*{t}" if n > 1 else t for t, n in sorted(self.terms.items())) or "0"


def map_lagrangian(L: LagrangianAlgebra, cmap: CondensationMap) -> TargetAlgebra:
    out, dropped = Counter(), Counter()
    for a, n in L.terms.items():
        img = cmap.image(a)
        if not img:
            dropped[a] += n
        for t, k in img.items():
            out[t] += n * k
    return TargetAlgebra(out, dropped)


def anyon_table(N: int) -> list[dict]:
    return [{"label": str(a), "class_size": a.class_size, "irrep_dim": a.irrep_dim, "quantum_dim": a.qdim}
            for a in enumerate_anyons(N)]
