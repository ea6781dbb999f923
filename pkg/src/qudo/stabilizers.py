"""Invertible stabilizers of the D(D_{4N}) code and syndrome extraction.

For a plaquette with flux ``r^alpha s^beta`` the diagonal operators ``S_r`` and
``S_s`` have eigenvalues ``zeta^alpha`` and ``zeta^beta`` with
``zeta = exp(2*pi*i/4N)``.  Together with ``A_v^r`` and ``A_v^s`` they generate
the (non-Abelian) stabilizer group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import DihedralGroup, GroupElement
from .lattice import SIDES, SparseState, SurfaceCode, dihedral_code, vertex_average
from .monomial import (
    DiagonalPhase,
    MonomialOperator,
    commutator,
    enumerate_configs,
    identity_operator,
    operators_equal,
    sample_configs,
)

DEFAULT_SEED = 0xD4D4


def _dihedral(code: SurfaceCode) -> DihedralGroup:
    if not isinstance(code.group, DihedralGroup):
        raise ValueError("stabilizers are defined for dihedral codes")
    return code.group


def _flux_fn(code: SurfaceCode):
    mt, inv = code.group.mul_table, code.group.inv_table

    def flux(c):
        return mt[mt[c[:, 0], c[:, 1]], inv[mt[c[:, 3], c[:, 2]]]]
    return flux


def S_r(code: SurfaceCode, p: tuple[int, int]) -> MonomialOperator:
    m = _dihedral(code).m
    flux = _flux_fn(code)
    return MonomialOperator((DiagonalPhase(code.geometry.plaquette_edges(p), m,
                                           lambda c: flux(c) // 2),), f"S^r_{p}")


def S_s(code: SurfaceCode, p: tuple[int, int]) -> MonomialOperator:
    m = _dihedral(code).m
    flux = _flux_fn(code)
    return MonomialOperator((DiagonalPhase(code.geometry.plaquette_edges(p), m,
                                           lambda c: flux(c) % 2),), f"S^s_{p}")


def S_r_dressed(code: SurfaceCode, p: tuple[int, int]) -> MonomialOperator:
    """S_r written edge by edge: Zc_1 Zc_2^{Z_1} Zc_3^{-Z_1 Z_2 Z_3} Zc_4^{-Z_1 Z_2 Z_3 Z_4}.

    Here ``Zc`` multiplies by ``zeta^a`` on ``r^a s^j`` and ``Z`` reads the
    reflection bit.  No group product is evaluated.
    """
    m = _dihedral(code).m

    def fn(c):
        a, j = c // 2, c % 2
        sgn = lambda bits: 1 - 2 * (bits % 2)
        return (a[:, 0] + sgn(j[:, 0]) * a[:, 1]
                - sgn(j[:, 0] + j[:, 1] + j[:, 2]) * a[:, 2]
                - sgn(j[:, 0] + j[:, 1] + j[:, 2] + j[:, 3]) * a[:, 3])
    return MonomialOperator((DiagonalPhase(code.geometry.plaquette_edges(p), m, fn),), f"S^r'_{p}")


def S_s_dressed(code: SurfaceCode, p: tuple[int, int]) -> MonomialOperator:
    """zeta^{(1 - Z_1 Z_2 Z_3 Z_4)/2}: only the reflection bits enter."""
    m = _dihedral(code).m
    return MonomialOperator((DiagonalPhase(code.geometry.plaquette_edges(p), m,
                                           lambda c: (c % 2).sum(axis=1) % 2),), f"S^s'_{p}")


@dataclass
class StabilizerGenerator:
    kind: str  # A_r | A_s | S_r | S_s | boundary
    site: tuple
    operator: MonomialOperator


def bulk_generators(code: SurfaceCode) -> list[StabilizerGenerator]:
    G = _dihedral(code)
    out = []
    for v in code.geometry.vertices:
        if not code.geometry.vertex_sides(v):
            out.append(StabilizerGenerator("A_r", v, code.vertex_op(v, G.r)))
            out.append(StabilizerGenerator("A_s", v, code.vertex_op(v, G.s)))
    for p in code.geometry.plaquettes:
        out.append(StabilizerGenerator("S_r", p, S_r(code, p)))
        out.append(StabilizerGenerator("S_s", p, S_s(code, p)))
    return out


def _edge_phase(code: SurfaceCode, e: int, kind: str) -> MonomialOperator:
    m = _dihedral(code).m
    fns = {
        "S_r": lambda c: c[:, 0] // 2,
        "S_s": lambda c: c[:, 0] % 2,
        "S_r/S_s": lambda c: c[:, 0] // 2 - c[:, 0] % 2,
    }
    return MonomialOperator((DiagonalPhase((e,), m, fns[kind]),), f"{kind}@{e}")


BOUNDARY_KIND = {"B1": "S_r/S_s", "B2": "S_r", "B3": "S_s"}


def boundary_stabilizers(code: SurfaceCode, label: str) -> list[StabilizerGenerator]:
    """Single-edge diagonal stabilizers plus truncated vertex operators on boundary B1, B2 or B3."""
    if label not in BOUNDARY_KIND:
        raise ValueError(f"unknown boundary {label!r}")
    sides = [s for s in SIDES if code.labels.get(s) == label]
    out = []
    for side in sides:
        for e in code.geometry.boundary_edges(side):
            out.append(StabilizerGenerator("boundary", (side, e), _edge_phase(code, e, BOUNDARY_KIND[label])))
        for v in code.geometry.vertices:
            if side in code.geometry.vertex_sides(v):
                for k in code.vertex_subgroup(v).generators:
                    out.append(StabilizerGenerator("boundary", (side, v), code.vertex_op(v, k)))
    return out


# --- commutators --------------------------------------------------------------

@dataclass
class RelationResult:
    name: str
    ok: bool
    checked: int
    exhaustive: bool
    witness: list[int] | None = None
    support: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return dict(name=self.name, ok=self.ok, checked=self.checked, exhaustive=self.exhaustive,
                    witness=self.witness, support=list(self.support))


def _check(name, lhs, rhs, order, exhaustive, samples, rng) -> RelationResult:
    rep = operators_equal(lhs, rhs, order, exhaustive=exhaustive, samples=samples, rng=rng)
    return RelationResult(name, rep.ok, rep.checked, rep.exhaustive, rep.witness, rep.support)


def commutator_relations(code: SurfaceCode, v: tuple[int, int]) -> tuple[list, list]:
    """(non-trivial relations, trivial relations) as (name, lhs, rhs) at bulk vertex v."""
    G = _dihedral(code)
    geo = code.geometry
    if geo.vertex_sides(v) or len(geo.neighbours(v)) < 4:
        raise ValueError("need a bulk vertex with four plaquettes")
    Ar, As = code.vertex_op(v, G.r), code.vertex_op(v, G.s)
    nb = geo.neighbours(v)
    ne = nb["NE"]
    Sr, Ss = S_r(code, ne), S_s(code, ne)
    I = identity_operator()
    nontrivial = [
        ("[A^r, A^s] = (A^r)^-2", commutator(Ar, As), Ar ** -2),
        ("[A^r, S^r_NE] = (S^s_NE)^-2", commutator(Ar, Sr), Ss ** -2),
        ("[A^s, S^r_NE] = (S^r_NE)^2", commutator(As, Sr), Sr ** 2),
    ]
    trivial = [
        ("[A^r, S^s_NE] = I", commutator(Ar, Ss), I),
        ("[A^s, S^s_NE] = I", commutator(As, Ss), I),
        ("[S^r_NE, S^s_NE] = I", commutator(Sr, Ss), I),
    ]
    for pos in ("NW", "SE", "SW"):
        p = nb[pos]
        for an, A in (("A^r", Ar), ("A^s", As)):
            for sn, S in (("S^r", S_r(code, p)), ("S^s", S_s(code, p))):
                trivial.append((f"[{an}, {sn}_{pos}] = I", commutator(A, S), I))
    # neighbouring vertices and plaquettes
    x, y = v
    w = (x + 1, y)
    for an, A in (("A^r", Ar), ("A^s", As)):
        for bn, g in (("A^r", G.r), ("A^s", G.s)):
            trivial.append((f"[{an}_v, {bn}_v+x] = I", commutator(A, code.vertex_op(w, g)), I))
    east = (ne[0] + 1, ne[1]) if ne[0] + 1 < geo.width else (ne[0] - 1, ne[1])
    trivial.append(("[S^r_NE, S^r_E] = I", commutator(Sr, S_r(code, east)), I))
    trivial.append(("[S^r_NE, S^s_E] = I", commutator(Sr, S_s(code, east)), I))
    return nontrivial, trivial


@dataclass
class CommutatorReport:
    N: int
    seed: int
    results: list[RelationResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def as_dict(self) -> dict:
        return {"N": self.N, "seed": self.seed, "ok": self.ok, "relations": [r.as_dict() for r in self.results]}


def verify_commutators(N: int, exhaustive: bool | None = None, samples: int = 100_000,
                       seed: int = DEFAULT_SEED, include_trivial: bool = True,
                       trivial_samples: int | None = None) -> CommutatorReport:
    code = dihedral_code(N, 4, 4)
    v = (2, 2)
    rng = np.random.default_rng(seed)
    nontrivial, trivial = commutator_relations(code, v)
    rep = CommutatorReport(N, seed)
    for name, lhs, rhs in nontrivial:
        rep.results.append(_check(name, lhs, rhs, code.group.order, exhaustive, samples, rng))
    if include_trivial:
        ts = samples if trivial_samples is None else trivial_samples
        for name, lhs, rhs in trivial:
            rep.results.append(_check(name, lhs, rhs, code.group.order, exhaustive, ts, rng))
    return rep


# --- plaquette projectors from the diagonal stabilizers -----------------------

def projector_from_stabilizers(m: int, flux: np.ndarray, alpha: int, beta: int) -> np.ndarray:
    """(1/2m) sum_{gamma, delta} zeta^{-alpha gamma} S_r^gamma (-1)^{beta delta} S_s^{(m/2) delta}.

    ``flux`` holds flux indices ``2a + j``; the stabilizer eigenvalues are used
    in place of the operators, which is exact because both are diagonal.
    """
    a, j = flux // 2, flux % 2
    zr = np.exp(2j * np.pi * a / m)
    zs = np.exp(2j * np.pi * j / m)
    total = np.zeros(flux.shape, dtype=complex)
    for gamma in range(m):
        for delta in range(2):
            total += (np.exp(-2j * np.pi * alpha * gamma / m) * zr ** gamma
                      * (-1) ** (beta * delta) * zs ** ((m // 2) * delta))
    return total / (2 * m)


def verify_projector_reconstruction(N: int) -> bool:
    code = dihedral_code(N, 2, 2)
    flux = None
    for batch in enumerate_configs(4, code.group.order):
        c = np.zeros((batch.shape[0], code.n_edges), dtype=np.int64)
        edges = code.geometry.plaquette_edges((0, 0))
        c[:, list(edges)] = batch
        flux = code.flux_indices(c, (0, 0))
        for target in range(code.group.order):
            P = projector_from_stabilizers(4 * N, flux, target // 2, target % 2)
            if not np.allclose(P, (flux == target).astype(float), atol=1e-12):
                return False
    return flux is not None


def eigenvalue_law(N: int, exhaustive: bool | None = None, samples: int = 100_000,
                   seed: int = DEFAULT_SEED) -> bool:
    """S_r and S_s eigenvalues are zeta^alpha, zeta^beta of the flux, and the edge-by-edge form agrees."""
    code = dihedral_code(N, 2, 2)
    m = 4 * N
    p = (0, 0)
    edges = list(code.geometry.plaquette_edges(p))
    mapping = {e: i for i, e in enumerate(edges)}
    ops = [S_r(code, p), S_s(code, p), S_r_dressed(code, p), S_s_dressed(code, p)]
    ops = [o.relabel(mapping) for o in ops]
    order = code.group.order
    if exhaustive is None:
        exhaustive = order ** 4 <= 20_000_000
    stream = enumerate_configs(4, order) if exhaustive else sample_configs(
        4, order, samples, np.random.default_rng(seed))
    mt, inv = code.group.mul_table, code.group.inv_table
    for c in stream:
        flux = mt[mt[c[:, 0], c[:, 1]], inv[mt[c[:, 3], c[:, 2]]]]
        ph = [o.apply(c)[1] for o in ops]
        if not (np.all(ph[0] == (flux // 2) % m) and np.all(ph[1] == (flux % 2) % m)):
            return False
        if not (np.all(ph[2] == ph[0]) and np.all(ph[3] == ph[1])):
            return False
    return True


# --- syndromes ----------------------------------------------------------------

@dataclass
class SyndromeReport:
    fluxes: dict[tuple[int, int], str] = field(default_factory=dict)  # only non-identity fluxes
    eigenvalues: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)  # (alpha, beta)
    boundary_violations: list[int] = field(default_factory=list)
    vertex_charges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (self.fluxes or self.boundary_violations or self.vertex_charges)

    def as_dict(self, code: SurfaceCode | None = None) -> dict:
        name = (lambda e: code.geometry.edge_name(e)) if code else str
        return {
            "fluxes": {f"p{p}": f for p, f in sorted(self.fluxes.items())},
            "boundary_violations": [name(e) for e in self.boundary_violations],
            "vertex_charges": [list(v) for v in self.vertex_charges],
        }


def syndrome(code: SurfaceCode, config) -> SyndromeReport:
    c = np.asarray(config)[None, :]
    rep = SyndromeReport()
    for p in code.geometry.plaquettes:
        f = int(code.flux_indices(c, p)[0])
        if f != 0:
            rep.fluxes[p] = str(code.group.elements[f])
            rep.eigenvalues[p] = (f // 2, f % 2)
    for e in range(code.n_edges):
        K = code.edge_subgroup(e)
        if K is not None and int(c[0, e]) not in K.indices:
            rep.boundary_violations.append(e)
    return rep


def state_syndrome(code: SurfaceCode, state: SparseState) -> SyndromeReport:
    """Union over terms of the flux and boundary syndromes, plus vertex charges."""
    rep = SyndromeReport()
    for c in state.configs:
        r = syndrome(code, c)
        rep.fluxes.update(r.fluxes)
        rep.eigenvalues.update(r.eigenvalues)
        rep.boundary_violations = sorted(set(rep.boundary_violations) | set(r.boundary_violations))
    for v in code.geometry.vertices:
        if code.vertex_subgroup(v).order > 1 and not vertex_average(code, v, state).allclose(state):
            rep.vertex_charges.append(v)
    return rep


@dataclass
class StabilizationReport:
    flat: bool
    boundary_ok: bool
    vertex_ok: bool
    mode: str
    syndrome: SyndromeReport

    @property
    def ok(self) -> bool:
        return self.flat and self.boundary_ok and self.vertex_ok


def verify_stabilization(code: SurfaceCode, target) -> StabilizationReport:
    """Check a materialized state directly, or a representative configuration.

    For a representative the vertex condition holds by construction: the
    averaged vertex operators form projectors (checked via the composition law
    on the representative), flatness and boundary membership are gauge
    invariant, so the symmetrized state is stabilized iff its seed is flat and
    obeys the boundary conditions.
    """
    if isinstance(target, SparseState):
        syn = state_syndrome(code, target)
        flat = not syn.fluxes
        return StabilizationReport(flat, not syn.boundary_violations, not syn.vertex_charges, "materialized", syn)
    c = np.asarray(target)
    syn = syndrome(code, c)
    vertex_ok = all(_composition_law(code, v, c) for v in code.geometry.vertices)
    return StabilizationReport(not syn.fluxes, not syn.boundary_violations, vertex_ok, "representative", syn)


def _composition_law(code: SurfaceCode, v, c: np.ndarray) -> bool:
    K = code.vertex_subgroup(v)
    for g in K.elements:
        Ag = code.vertex_op(v, g)
        for h in K.elements:
            lhs, _ = (Ag @ code.vertex_op(v, h)).apply(c[None, :])
            rhs, _ = code.vertex_op(v, g * h).apply(c[None, :])
            if not np.array_equal(lhs, rhs):
                return False
    return True
