"""The transversal gate obtained by stacking an SPT layer, and its logical action.

Each plaquette is split along its lower-left to upper-right diagonal and
weighted by ``alpha(g1, g2) / alpha(g4, g3)``; boundary edges carry the
boundary cochains, conjugated on B1 and B2 and plain on B3.  With
``delta beta = alpha`` this relative orientation is the one under which the
boundary terms cancel the gauge variation of the bulk.  The opposite weight
(``orientation="lower-right"``) is kept for comparison; it is only gauge
invariant when B3 carries the conjugate cochain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cohomology import Cochain1, Cocycle2, alpha, beta_closed_form, restrict, trivial_cochain
from .groups import DihedralGroup, GroupElement, subgroup_generated
from .lattice import (
    SIDES,
    SurfaceCode,
    dihedral_code,
    logical_representative,
    random_gauge_transform,
)
from .monomial import DiagonalPhase, MonomialOperator
from .phases import Phase
from .stabilizers import DEFAULT_SEED, syndrome


class CornerMismatch(ValueError):
    pass


def extended_beta_table(code: SurfaceCode, beta: Cochain1) -> np.ndarray:
    """Numerators of beta on every group element.

    Outside K the value of the rotation part ``r^a`` is used when that lies
    in K (which makes the qubit gate act trivially on the reflection bit),
    and 1 otherwise.  Only configurations off the code space see this.
    """
    G = code.group
    K = beta.domain
    t = np.zeros(G.order, dtype=np.int64)
    for g in G.elements:
        if g in K:
            t[g.index] = beta.table[g.index]
        elif isinstance(G, DihedralGroup):
            rot = G.el(g.coords[0], 0)
            if rot in K:
                t[g.index] = beta.table[rot.index]
    return t


def M_beta_edge(code: SurfaceCode, e: int, beta: Cochain1, dagger: bool = False) -> MonomialOperator:
    t = extended_beta_table(code, beta)
    return MonomialOperator((DiagonalPhase((e,), beta.modulus, lambda c: t[c[:, 0]], -1 if dagger else 1),),
                            f"M^beta{'+' if dagger else ''}_{e}")


ORIENTATIONS = ("upper-left", "lower-right")


def M_alpha_plaquette(code: SurfaceCode, p: tuple[int, int], a: Cocycle2,
                      orientation: str = "upper-left") -> MonomialOperator:
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    t = a.table
    sign = 1 if orientation == "upper-left" else -1

    def fn(c):  # columns g1, g2, g3, g4
        return sign * (t[c[:, 0], c[:, 1]] - t[c[:, 3], c[:, 2]])
    return MonomialOperator((DiagonalPhase(code.geometry.plaquette_edges(p), a.modulus, fn),), f"M^alpha_{p}")


DAGGERED = {"B1": True, "B2": True, "B3": False}


def check_corners(code: SurfaceCode, betas: dict[str, Cochain1]) -> None:
    geo = code.geometry
    for v in geo.vertices:
        sides = geo.vertex_sides(v)
        if len(sides) == 2:
            b1, b2 = (betas[code.labels[s]] for s in sides)
            for k in code.vertex_subgroup(v).elements:
                if b1(k) != b2(k):
                    raise CornerMismatch(f"boundary cochains disagree at corner {v} on {k}")


def U_alpha_beta(code: SurfaceCode, a: Cocycle2, betas: dict[str, Cochain1],
                 orientation: str = "upper-left", daggered: dict[str, bool] | None = None) -> MonomialOperator:
    for lab, b in betas.items():
        for side in SIDES:
            if code.labels.get(side) == lab and set(b.domain.indices) != set(code.boundaries[side].indices):
                raise ValueError(f"cochain for {lab} is not defined on the {side} boundary subgroup")
    missing = {code.labels[s] for s in SIDES} - set(betas)
    if missing:
        raise ValueError(f"no trivialisation supplied for {sorted(missing)}")
    check_corners(code, betas)
    fs = []
    for p in code.geometry.plaquettes:
        fs.extend(M_alpha_plaquette(code, p, a, orientation).factors)
    dag = dict(DAGGERED, **(daggered or {}))
    for side in SIDES:
        lab = code.labels[side]
        for e in code.geometry.boundary_edges(side):
            fs.extend(M_beta_edge(code, e, betas[lab], dag[lab]).factors)
    return MonomialOperator(fs, "U_alpha_beta")


def standard_cochains(N: int, code: SurfaceCode, beta3: Cochain1 | None = None) -> dict[str, Cochain1]:
    return {
        "B1": trivial_cochain(code.boundaries["left"]),
        "B2": trivial_cochain(code.boundaries["top"]),
        "B3": beta3 if beta3 is not None else beta_closed_form(N),
    }


@dataclass
class GateSetup:
    N: int
    width: int = 4
    height: int = 4
    junction: str = "nw"

    def build(self, beta3: Cochain1 | None = None):
        code = dihedral_code(self.N, self.width, self.height, self.junction)
        a = alpha(self.N)
        U = U_alpha_beta(code, a, standard_cochains(self.N, code, beta3))
        return code, a, U


@dataclass
class GaugeVerdict:
    ok: bool
    moves_tested: int
    failures: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "moves_tested": self.moves_tested, "failures": self.failures[:5]}


def _moves(code: SurfaceCode):
    out = []
    for v in code.geometry.vertices:
        for g in code.vertex_subgroup(v).elements:
            if g != code.group.identity:
                out.append((v, g, code.vertex_op(v, g)))
    return out


def verify_gauge_invariance(code: SurfaceCode, U: MonomialOperator, reps: list[np.ndarray], trials: int = 100,
                            seed: int = DEFAULT_SEED) -> GaugeVerdict:
    """U has the same phase on a representative, on random points of its orbit, and on every single move from those."""
    rng = np.random.default_rng(seed)
    moves = _moves(code)
    tested, failures = 0, []
    M = U.modulus
    for c in reps:
        points = [np.asarray(c)] + [random_gauge_transform(code, c, rng) for _ in range(trials)]
        base = np.vstack(points)
        _, ref = U.apply(c[None, :])
        _, ph_base = U.apply(base)
        for i in np.nonzero(ph_base != ref[0])[0]:
            failures.append({"move": "orbit point", "config": code.config_string(base[i])})
        tested += base.shape[0] - 1
        for v, g, op in moves:
            moved, _ = op.apply(base)
            _, ph = U.apply(moved)
            bad = np.nonzero(ph != ph_base)[0]
            tested += base.shape[0]
            for i in bad:
                failures.append({"vertex": list(v), "g": str(g), "config": code.config_string(base[i]),
                                 "phase_before": Phase.root(int(ph_base[i]), M).pi_string(),
                                 "phase_after": Phase.root(int(ph[i]), M).pi_string()})
    return GaugeVerdict(not failures, tested, failures)


@dataclass
class PreservationVerdict:
    ok: bool
    diagonal: bool
    syndromes_unchanged: bool


def verify_codespace_preservation(code: SurfaceCode, U: MonomialOperator, configs: list[np.ndarray]) -> PreservationVerdict:
    diagonal = U.is_diagonal
    same = True
    for c in configs:
        out, _ = U.apply(np.asarray(c)[None, :])
        same &= bool(np.array_equal(out[0], c)) and syndrome(code, out[0]).as_dict() == syndrome(code, c).as_dict()
    return PreservationVerdict(diagonal and same, diagonal, same)


@dataclass
class GateReport:
    N: int
    width: int
    height: int
    phase0: Phase
    phase1: Phase
    gauge: GaugeVerdict | None
    preservation: PreservationVerdict | None

    @property
    def relative(self) -> Phase:
        return self.phase1 / self.phase0

    @property
    def expected(self) -> Phase:
        return Phase.from_pi(1, 4 * self.N)

    @property
    def ok(self) -> bool:
        gauge_ok = self.gauge is None or self.gauge.ok
        pres_ok = self.preservation is None or self.preservation.ok
        return gauge_ok and pres_ok and self.relative == self.expected

    def as_dict(self) -> dict:
        z = complex(self.relative)
        return {
            "N": self.N,
            "patch": [self.width, self.height],
            "phase_m0": self.phase0.pi_string(),
            "phase_m1": self.phase1.pi_string(),
            "relative_phase": self.relative.pi_string() if self.gauge is None or self.gauge.ok else None,
            "relative_phase_turns": str(self.relative.turns),
            "relative_phase_float": [z.real, z.imag],
            "expected": self.expected.pi_string(),
            "gauge_invariance": self.gauge.as_dict() if self.gauge else None,
            "codespace_preserved": self.preservation.ok if self.preservation else None,
            "ok": self.ok,
        }


def extract_logical_phase(N: int, width: int = 4, height: int = 4, trials: int = 0,
                          seed: int = DEFAULT_SEED, check_gauge: bool = True,
                          beta3: Cochain1 | None = None) -> GateReport:
    code, _, U = GateSetup(N, width, height).build(beta3)
    reps = [logical_representative(code, m) for m in (0, 1)]
    p0, p1 = (U.phase(c) for c in reps)
    gauge = verify_gauge_invariance(code, U, reps, trials, seed) if check_gauge else None
    pres = verify_codespace_preservation(code, U, reps)
    # global phase convention: U acts as 1 on the m = 0 state
    return GateReport(N, width, height, p0 / p0, p1 / p0, gauge, pres)


def gate_power(N: int, k: int, width: int = 4, height: int = 4) -> tuple[Phase, Phase]:
    code, _, U = GateSetup(N, width, height).build()
    Uk = U ** k
    return tuple(Uk.phase(logical_representative(code, m)) for m in (0, 1))


def mutate_beta(beta: Cochain1, g: GroupElement) -> Cochain1:
    """Negate beta at one element."""
    m = math.lcm(beta.modulus, 2)
    b = beta.rescaled(m)
    t = b.table.copy()
    t[g.index] = (t[g.index] + m // 2) % m
    return Cochain1(b.domain, m, t)


def twist_by_character(beta: Cochain1, j: int) -> Cochain1:
    """Multiply a cochain on <r> by the character r^a -> exp(2 pi i j a / order(r))."""
    K = beta.domain
    n = K.order
    m = math.lcm(beta.modulus, n)
    b = beta.rescaled(m)
    t = b.table.copy()
    for g in K.elements:
        t[g.index] = (t[g.index] + j * g.coords[0] * (m // n)) % m
    return Cochain1(K, m, t)


def dressed_support(U: MonomialOperator, e: int) -> set[int]:
    """Edges on which U L_e U^-1 L_e^-1 can depend: supports of the factors touching e."""
    out = {e}
    for f in U.factors:
        if e in f.edges:
            out.update(f.edges)
    return out


def beta_from_search(N: int) -> Cochain1:
    from .cohomology import trivialize
    G = dihedral_code(N).group
    return trivialize(restrict(alpha(N), subgroup_generated([G.r])))
