"""Quantum-double surface code on a rectangular patch.

Geometry: ``W x H`` plaquettes, vertices ``(x, y)`` with ``0 <= x <= W`` and
``0 <= y <= H``.  Horizontal edge ``h(x, y)`` runs right from ``(x, y)``,
vertical edge ``v(x, y)`` runs up from ``(x, y)``.  Edge ids list all
horizontal edges first (row by row), then all vertical edges.

Plaquette ``p(x, y)`` has lower-left corner ``(x, y)`` and edges
``g1 = v(x, y)`` (left), ``g2 = h(x, y+1)`` (top), ``g3 = v(x+1, y)`` (right),
``g4 = h(x, y)`` (bottom); its flux is ``g1 g2 g3^-1 g4^-1``.

The vertex operator ``A_v^g`` right-multiplies the inbound edges (left and
below) by ``g^-1`` and left-multiplies the outbound edges (right and above) by
``g``, so it conjugates the flux of the plaquette north-east of ``v``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .groups import (
    DihedralGroup,
    FiniteGroup,
    GroupElement,
    Subgroup,
    dihedral,
    irrep_by_name,
    subgroup_generated,
    whole_group,
)
from .monomial import DiagonalPhase, EdgeMap, MonomialOperator
from .phases import Phase

SIDES = ("left", "top", "right", "bottom")
DEFAULT_TERM_CAP = 10_000_000
PRUNE_TOL = 1e-12
AMP_TOL = 1e-9


class TermCapExceeded(RuntimeError):
    pass


class NotAnEigenstate(ValueError):
    pass


def term_cap() -> int:
    return int(float(os.environ.get("QUDO_TERM_CAP", DEFAULT_TERM_CAP)))


@dataclass(frozen=True)
class PatchGeometry:
    width: int = 4
    height: int = 4
    junction: str = "nw"  # plaquette at which the three flux ribbons meet, relative to the centre vertex

    def __post_init__(self):
        if self.width < 2 or self.height < 2 or self.width % 2 or self.height % 2:
            raise ValueError("width and height must be even and at least 2")
        if self.junction not in ("nw", "ne"):
            raise ValueError("junction must be 'nw' or 'ne'")

    # edges
    @property
    def n_horizontal(self) -> int:
        return self.width * (self.height + 1)

    @property
    def n_edges(self) -> int:
        return self.n_horizontal + (self.width + 1) * self.height

    def h(self, x: int, y: int) -> int:
        assert 0 <= x < self.width and 0 <= y <= self.height, (x, y)
        return y * self.width + x

    def v(self, x: int, y: int) -> int:
        assert 0 <= x <= self.width and 0 <= y < self.height, (x, y)
        return self.n_horizontal + y * (self.width + 1) + x

    def edge_name(self, e: int) -> str:
        if e < self.n_horizontal:
            y, x = divmod(e, self.width)
            return f"h({x},{y})"
        y, x = divmod(e - self.n_horizontal, self.width + 1)
        return f"v({x},{y})"

    def edge_side(self, e: int) -> str | None:
        if e < self.n_horizontal:
            y = e // self.width
            return "bottom" if y == 0 else "top" if y == self.height else None
        x = (e - self.n_horizontal) % (self.width + 1)
        return "left" if x == 0 else "right" if x == self.width else None

    def boundary_edges(self, side: str) -> list[int]:
        return [e for e in range(self.n_edges) if self.edge_side(e) == side]

    # vertices and plaquettes
    @property
    def vertices(self) -> list[tuple[int, int]]:
        return [(x, y) for y in range(self.height + 1) for x in range(self.width + 1)]

    @property
    def plaquettes(self) -> list[tuple[int, int]]:
        return [(x, y) for y in range(self.height) for x in range(self.width)]

    def vertex_sides(self, v: tuple[int, int]) -> tuple[str, ...]:
        x, y = v
        out = []
        if x == 0:
            out.append("left")
        if y == self.height:
            out.append("top")
        if x == self.width:
            out.append("right")
        if y == 0:
            out.append("bottom")
        return tuple(out)

    def star(self, v: tuple[int, int]) -> list[tuple[int, str]]:
        """Edges at v with 'in' (ends at v) or 'out' (starts at v)."""
        x, y = v
        out = []
        if x > 0:
            out.append((self.h(x - 1, y), "in"))
        if y > 0:
            out.append((self.v(x, y - 1), "in"))
        if x < self.width:
            out.append((self.h(x, y), "out"))
        if y < self.height:
            out.append((self.v(x, y), "out"))
        return out

    def plaquette_edges(self, p: tuple[int, int]) -> tuple[int, int, int, int]:
        x, y = p
        return (self.v(x, y), self.h(x, y + 1), self.v(x + 1, y), self.h(x, y))

    def neighbours(self, v: tuple[int, int]) -> dict[str, tuple[int, int]]:
        """The up-to-four plaquettes around v, keyed by compass direction."""
        x, y = v
        cand = {"NE": (x, y), "NW": (x - 1, y), "SE": (x, y - 1), "SW": (x - 1, y - 1)}
        return {k: p for k, p in cand.items() if 0 <= p[0] < self.width and 0 <= p[1] < self.height}

    # logical strings
    @property
    def centre(self) -> tuple[int, int]:
        return self.width // 2, self.height // 2

    def ribbons(self) -> dict[str, list[int]]:
        """Edges crossed by the three dual-lattice flux ribbons, each from its boundary to the junction."""
        cx, cy = self.centre
        jx = cx - 1 if self.junction == "nw" else cx
        return {
            "xi1": [self.v(x, cy) for x in range(0, jx + 1)],              # from the left boundary
            "xi2": [self.h(jx, y) for y in range(cy + 1, self.height + 1)],  # from the top boundary
            "xi3": [self.h(jx, y) for y in range(0, cy + 1)],              # down to the bottom boundary
        }

    def junction_plaquette(self) -> tuple[int, int]:
        cx, cy = self.centre
        return (cx - 1 if self.junction == "nw" else cx, cy)

    def electric_paths(self) -> dict[str, list[int]]:
        """Direct-lattice paths from the left, top and right boundaries to the centre vertex."""
        cx, cy = self.centre
        return {
            "left": [self.h(x, cy) for x in range(0, cx)],
            "top": [self.v(cx, y) for y in range(cy, self.height)],
            "right": [self.h(x, cy) for x in range(cx, self.width)],
        }


@dataclass(frozen=True)
class SurfaceCode:
    """A patch of D(G) with a subgroup K on each side."""

    group: FiniteGroup
    geometry: PatchGeometry
    boundaries: dict[str, Subgroup] = field(hash=False)
    labels: dict[str, str] = field(default_factory=dict, hash=False)  # side -> boundary name

    @property
    def n_edges(self) -> int:
        return self.geometry.n_edges

    def edge_subgroup(self, e: int) -> Subgroup | None:
        side = self.geometry.edge_side(e)
        return None if side is None else self.boundaries[side]

    def vertex_subgroup(self, v: tuple[int, int]) -> Subgroup:
        sides = self.geometry.vertex_sides(v)
        if not sides:
            return whole_group(self.group)
        K = self.boundaries[sides[0]]
        for side in sides[1:]:
            K = K.intersection(self.boundaries[side])
        return K

    # single-edge and vertex operators
    def apply_left(self, e: int, g: GroupElement) -> MonomialOperator:
        return MonomialOperator((EdgeMap(e, self.group.mul_table[g.index, :].copy()),), f"L^{g}_{e}")

    def apply_right(self, e: int, g: GroupElement) -> MonomialOperator:
        gi = int(self.group.inv_table[g.index])
        return MonomialOperator((EdgeMap(e, self.group.mul_table[:, gi].copy()),), f"R^{g}_{e}")

    def vertex_op(self, v: tuple[int, int], g: GroupElement) -> MonomialOperator:
        K = self.vertex_subgroup(v)
        if g not in K:
            raise ValueError(f"{g} is not admissible at boundary vertex {v} (allowed {K})")
        fs = []
        for e, d in self.geometry.star(v):
            op = self.apply_right(e, g) if d == "in" else self.apply_left(e, g)
            fs.extend(op.factors)
        return MonomialOperator(fs, f"A^{g}_{v}")

    # flux
    def flux_indices(self, configs: np.ndarray, p: tuple[int, int]) -> np.ndarray:
        mt, inv = self.group.mul_table, self.group.inv_table
        e1, e2, e3, e4 = self.geometry.plaquette_edges(p)
        c = np.atleast_2d(configs)
        return mt[mt[c[:, e1], c[:, e2]], inv[mt[c[:, e4], c[:, e3]]]]

    def flux(self, config: Sequence[int], p: tuple[int, int]) -> GroupElement:
        return self.group.elements[int(self.flux_indices(np.asarray(config)[None, :], p)[0])]

    def flat_mask(self, configs: np.ndarray) -> np.ndarray:
        c = np.atleast_2d(configs)
        ok = np.ones(c.shape[0], dtype=bool)
        for p in self.geometry.plaquettes:
            ok &= self.flux_indices(c, p) == 0
        return ok

    def boundary_mask(self, configs: np.ndarray) -> np.ndarray:
        c = np.atleast_2d(configs)
        ok = np.ones(c.shape[0], dtype=bool)
        for side in SIDES:
            allowed = np.zeros(self.group.order, dtype=bool)
            allowed[list(self.boundaries[side].indices)] = True
            for e in self.geometry.boundary_edges(side):
                ok &= allowed[c[:, e]]
        return ok

    def plaquette_projector(self, p: tuple[int, int], g: GroupElement) -> "Projector":
        return Projector(self, p, g.index)

    # configurations
    def identity_config(self) -> np.ndarray:
        return np.zeros(self.n_edges, dtype=np.int64)

    def config_string(self, config: Sequence[int]) -> str:
        return " ".join(str(self.group.elements[int(x)]) for x in config)

    def parse_config(self, text: str) -> np.ndarray:
        return np.array([self.group.parse_element(t).index for t in text.split()], dtype=np.int64)

    def to_json(self) -> str:
        g = self.geometry
        return json.dumps({
            "group": self.group.name,
            "width": g.width,
            "height": g.height,
            "junction": g.junction,
            "edges": [{"id": e, "name": g.edge_name(e), "boundary": g.edge_side(e)} for e in range(g.n_edges)],
            "boundaries": {s: {"label": self.labels.get(s, s), "subgroup": [str(x) for x in self.boundaries[s].elements]}
                           for s in SIDES},
            "ribbons": {k: [g.edge_name(e) for e in v] for k, v in g.ribbons().items()},
            "electric_paths": {k: [g.edge_name(e) for e in v] for k, v in g.electric_paths().items()},
        }, indent=2)


@dataclass(frozen=True)
class Projector:
    code: SurfaceCode
    p: tuple[int, int]
    g: int

    def mask(self, configs: np.ndarray) -> np.ndarray:
        return self.code.flux_indices(configs, self.p) == self.g

    def apply(self, state: "SparseState") -> "SparseState":
        m = self.mask(state.configs)
        return SparseState(state.configs[m], state.amps[m], state.cap)


def dihedral_code(N: int, width: int = 4, height: int = 4, junction: str = "nw") -> SurfaceCode:
    """D(D_{4N}) with <rs> on the left, <s> on top and <r> on the right and bottom."""
    G = dihedral(N)
    r, s = G.r, G.s
    K1 = subgroup_generated([r * s])
    K2 = subgroup_generated([s])
    K3 = subgroup_generated([r])
    return SurfaceCode(G, PatchGeometry(width, height, junction),
                       {"left": K1, "top": K2, "right": K3, "bottom": K3},
                       {"left": "B1", "top": "B2", "right": "B3", "bottom": "B3"})


# --- sparse states ------------------------------------------------------------

class SparseState:
    """Superposition of edge configurations; rows of ``configs`` are unique."""

    def __init__(self, configs: np.ndarray, amps: np.ndarray, cap: int | None = None,
                 prune: float = PRUNE_TOL, merge: bool = True):
        self.cap = term_cap() if cap is None else cap
        configs = np.atleast_2d(np.asarray(configs, dtype=np.int64))
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if merge and configs.shape[0]:
            uniq, inv = np.unique(configs, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            re = np.bincount(inv, weights=amps.real, minlength=uniq.shape[0])
            im = np.bincount(inv, weights=amps.imag, minlength=uniq.shape[0])
            configs, amps = uniq, re + 1j * im
        keep = np.abs(amps) >= prune
        self.configs = configs[keep]
        self.amps = amps[keep]
        if len(self) > self.cap:
            raise TermCapExceeded(f"state has {len(self)} terms, cap is {self.cap}")

    @classmethod
    def basis(cls, config: Sequence[int], cap: int | None = None) -> "SparseState":
        return cls(np.asarray(config)[None, :], np.ones(1), cap)

    def __len__(self) -> int:
        return self.configs.shape[0]

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def apply(self, op: MonomialOperator) -> "SparseState":
        c, ph = op.apply(self.configs)
        amps = self.amps * np.exp(2j * np.pi * ph / op.modulus)
        return SparseState(c, amps, self.cap)

    def __add__(self, other: "SparseState") -> "SparseState":
        return SparseState(np.vstack([self.configs, other.configs]),
                           np.concatenate([self.amps, other.amps]), self.cap)

    def scaled(self, z: complex) -> "SparseState":
        return SparseState(self.configs, self.amps * z, self.cap, merge=False)

    def as_dict(self) -> dict[tuple[int, ...], complex]:
        return {tuple(int(x) for x in c): complex(a) for c, a in zip(self.configs, self.amps)}

    def allclose(self, other: "SparseState", tol: float = AMP_TOL) -> bool:
        a, b = self.as_dict(), other.as_dict()
        return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in set(a) | set(b))

    def to_csv(self, code: SurfaceCode) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["config", "re", "im"])
        for c, a in zip(self.configs, self.amps):
            w.writerow([code.config_string(c), repr(float(a.real)), repr(float(a.imag))])
        return buf.getvalue()


def vertex_average(code: SurfaceCode, v: tuple[int, int], state: SparseState) -> SparseState:
    K = code.vertex_subgroup(v)
    out = None
    for g in K.elements:
        t = state.apply(code.vertex_op(v, g))
        out = t if out is None else out + t
    return out.scaled(1 / K.order)


def orbit_size_estimate(code: SurfaceCode, n_terms: int = 1) -> int:
    return n_terms * math.prod(code.vertex_subgroup(v).order for v in code.geometry.vertices)


def symmetrize(code: SurfaceCode, state: SparseState) -> SparseState:
    """Apply the product over vertices of the averaged vertex operators."""
    est = orbit_size_estimate(code, len(state))
    if est > state.cap:
        raise TermCapExceeded(f"estimated orbit size {est} exceeds term cap {state.cap}")
    for v in code.geometry.vertices:
        if code.vertex_subgroup(v).order > 1:
            state = vertex_average(code, v, state)
    return state


def logical_representative(code: SurfaceCode, m: int) -> np.ndarray:
    """Seed configuration of a logical basis state (before vertex averaging).

    m = 0 is the all-identity configuration.  m = 1 applies left multiplication
    by rs, s and r along the three ribbons, which end on the <rs>, <s> and <r>
    boundaries respectively and fuse at the junction plaquette.
    """
    if m not in (0, 1):
        raise ValueError("m must be 0 or 1")
    c = code.identity_config()
    if m == 0:
        return c
    G = code.group
    if not isinstance(G, DihedralGroup):
        raise ValueError("the flux ribbons are defined for dihedral codes")
    labels = {"xi1": G.r * G.s, "xi2": G.s, "xi3": G.r}
    for name, edges in code.geometry.ribbons().items():
        g = labels[name]
        for e in edges:
            c[e] = G.mul_table[g.index, c[e]]
    return c


def logical_state(code: SurfaceCode, m: int, materialize: bool = False) -> SparseState | np.ndarray:
    rep = logical_representative(code, m)
    if not materialize:
        return rep
    return symmetrize(code, SparseState.basis(rep))


def ribbon_config(code: SurfaceCode, edges: Iterable[int], g: GroupElement,
                  base: np.ndarray | None = None) -> np.ndarray:
    c = code.identity_config() if base is None else np.array(base, copy=True)
    for e in edges:
        c[e] = code.group.mul_table[g.index, c[e]]
    return c


def character_table(G: FiniteGroup, name: str) -> np.ndarray:
    """Numerators mod 2 of a real one-dimensional character."""
    R = irrep_by_name(G, name)
    if R.dim != 1:
        raise ValueError("expected a one-dimensional irrep")
    return np.array([R.phase_matrix(g)[0][0].numerator_mod(2) for g in G.elements], dtype=np.int64)


def electric_operator(code: SurfaceCode) -> MonomialOperator:
    """The logical Z: characters 1_rs, 1_s, 1_r along the left, top and right paths."""
    G = code.group
    chars = {"left": "1_rs", "top": "1_s", "right": "1_r"}
    fs = []
    for side, edges in code.geometry.electric_paths().items():
        t = character_table(G, chars[side])
        for e in edges:
            fs.append(DiagonalPhase((e,), 2, lambda c, t=t: t[c[:, 0]]))
    return MonomialOperator(fs, "Zbar")


def electric_triangle(code: SurfaceCode, state: SparseState | np.ndarray) -> complex:
    """Common eigenvalue of the logical Z on every term of the state."""
    op = electric_operator(code)
    configs = state.configs if isinstance(state, SparseState) else np.atleast_2d(state)
    _, ph = op.apply(configs)
    if np.any(ph != ph[0]):
        i = int(np.nonzero(ph != ph[0])[0][0])
        raise NotAnEigenstate(f"conflicting eigenvalues on {code.config_string(configs[0])!r} "
                              f"and {code.config_string(configs[i])!r}")
    return complex(Phase.root(int(ph[0]), op.modulus))


def random_gauge_transform(code: SurfaceCode, config: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Apply an independent random admissible vertex operator at every vertex."""
    c = np.array(config, copy=True)[None, :]
    for v in code.geometry.vertices:
        K = code.vertex_subgroup(v)
        if K.order == 1:
            continue
        g = K.elements[int(rng.integers(K.order))]
        c, _ = code.vertex_op(v, g).apply(c)
    return c[0]


def orbit(code: SurfaceCode, config: np.ndarray, limit: int = 1_000_000) -> np.ndarray:
    """All configurations reachable by single vertex moves (breadth first)."""
    moves = [code.vertex_op(v, g) for v in code.geometry.vertices
             for g in code.vertex_subgroup(v).elements if g != code.group.identity]
    seen = {tuple(int(x) for x in config)}
    frontier = np.asarray(config)[None, :]
    while frontier.shape[0]:
        new = []
        for op in moves:
            c, _ = op.apply(frontier)
            for row in c:
                t = tuple(int(x) for x in row)
                if t not in seen:
                    seen.add(t)
                    new.append(row)
            if len(seen) > limit:
                raise TermCapExceeded(f"orbit larger than {limit}")
        frontier = np.array(new) if new else np.zeros((0, frontier.shape[1]), dtype=np.int64)
    return np.array(sorted(seen), dtype=np.int64)
