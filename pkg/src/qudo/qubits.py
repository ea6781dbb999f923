"""Qubit realisation of D_{2^{n-1}} edge operators.

An edge holding ``r^a s^j`` is stored in ``n`` qubits as ``bin(a)`` (big-endian,
``n - 1`` bits) followed by ``j``.  Qubit 0 is the most significant bit and
the leftmost tensor factor, so the basis index of ``r^a s^j`` equals its group
index ``2a + j``.

Every gate in the alphabet maps basis states to basis states up to a dyadic
phase, so circuits are simulated exactly as (permutation, phase) pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .groups import DihedralGroup, GroupElement, dihedral, irrep_by_name
from .phases import Phase

DENSE_LIMIT = 10
_MINUS = Phase.root(1, 2)


def n_to_N(n: int) -> int:
    if n < 3:
        raise ValueError("need n >= 3 qubits per edge")
    return 2 ** (n - 3)


def group_for(n: int) -> DihedralGroup:
    return dihedral(n_to_N(n))


def encode(n: int, g: GroupElement) -> str:
    G = group_for(n)
    if g.group != G:
        raise ValueError(f"{g} is not an element of D_{G.m} (n = {n})")
    a, j = g.coords
    return format(a, f"0{n - 1}b") + str(j)


def decode(n: int, bits: str) -> GroupElement:
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise ValueError(f"expected {n} bits, got {bits!r}")
    return group_for(n).el(int(bits[:-1], 2), int(bits[-1]))


# ---------------------------------------------------------------- circuits

@dataclass(frozen=True)
class Gate:
    """``x``: controlled-NOT with any number of controls.
    ``p``: multiply by exp(2 pi i turns) when target and all controls are 1."""

    kind: str
    target: int
    controls: tuple[int, ...] = ()
    turns: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("x", "p"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.target in self.controls or len(set(self.controls)) != len(self.controls):
            raise ValueError("target and controls must be distinct")
        object.__setattr__(self, "turns", Fraction(self.turns) % 1)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def inverse(self) -> "Gate":
        return self if self.kind == "x" else Gate("p", self.target, self.controls, -self.turns)

    def shifted(self, mapping) -> "Gate":
        return Gate(self.kind, mapping(self.target), tuple(mapping(c) for c in self.controls), self.turns)

    def name(self) -> str:
        k = len(self.controls)
        pre = "" if k == 0 else ("c" if k == 1 else f"c{k}")
        if self.kind == "x":
            return pre + "x"
        named = {Fraction(1, 2): "z", Fraction(1, 4): "s", Fraction(3, 4): "sdg",
                 Fraction(1, 8): "t", Fraction(7, 8): "tdg"}
        if self.turns in named and (k == 0 or self.turns in (Fraction(1, 2), Fraction(1, 4), Fraction(3, 4))):
            return pre + named[self.turns]
        return pre + f"p({_angle(self.turns)})"


def _angle(turns: Fraction) -> str:
    t = turns if turns <= Fraction(1, 2) else turns - 1
    f = 2 * t
    if f == 0:
        return "0"
    sign = "-" if f < 0 else ""
    f = abs(f)
    num = "pi" if f.numerator == 1 else f"{f.numerator}*pi"
    return sign + (num if f.denominator == 1 else f"{num}/{f.denominator}")


def _parse_angle(text: str) -> Fraction:
    t = text.replace(" ", "")
    if t == "0":
        return Fraction(0)
    m = re.fullmatch(r"(-?)(?:(\d+)\*)?pi(?:/(\d+))?", t)
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    f = Fraction(int(m.group(2) or 1), int(m.group(3) or 1))
    if m.group(1):
        f = -f
    return f / 2


def X(t, *controls) -> Gate:
    return Gate("x", t, tuple(controls))


def P(t, turns, *controls) -> Gate:
    return Gate("p", t, tuple(controls), Fraction(turns))


@dataclass
class QubitCircuit:
    n: int
    gates: list[Gate] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        if any(q < 0 or q >= self.n for q in g.qubits):
            raise ValueError(f"gate {g} touches a qubit outside 0..{self.n - 1}")

    def add(self, *gates: Gate) -> "QubitCircuit":
        for g in gates:
            self._check(g)
            if g.kind == "p" and g.turns == 0:
                continue
            self.gates.append(g)
        return self

    def then(self, other: "QubitCircuit") -> "QubitCircuit":
        """Circuit applying self first, then other."""
        if other.n != self.n:
            raise ValueError("qubit count mismatch")
        return QubitCircuit(self.n, self.gates + other.gates, self.name)

    def dagger(self) -> "QubitCircuit":
        return QubitCircuit(self.n, [g.inverse() for g in reversed(self.gates)], self.name + "^dag")

    def embedded(self, n: int, offset: int = 0) -> "QubitCircuit":
        return QubitCircuit(n, [g.shifted(lambda q: q + offset) for g in self.gates], self.name)

    def __len__(self) -> int:
        return len(self.gates)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g in self.gates:
            out[g.name()] = out.get(g.name(), 0) + 1
        return out


# ---------------------------------------------------------------- simulation

@dataclass
class MonomialAction:
    """U|x> = exp(2 pi i num[x] / denom) |perm[x]>."""

    perm: np.ndarray
    num: np.ndarray
    denom: int

    def rescaled(self, denom: int) -> "MonomialAction":
        if denom % self.denom:
            raise ValueError("denominator must be a multiple")
        return MonomialAction(self.perm, self.num * (denom // self.denom) % denom, denom)

    def equals(self, other: "MonomialAction", up_to_global_phase: bool = False) -> bool:
        if not np.array_equal(self.perm, other.perm):
            return False
        d = lcm(self.denom, other.denom)
        diff = (self.rescaled(d).num - other.rescaled(d).num) % d
        return bool(np.all(diff == diff[0])) if up_to_global_phase else bool(np.all(diff == 0))

    def matrix(self) -> np.ndarray:
        dim = len(self.perm)
        U = np.zeros((dim, dim), dtype=complex)
        U[self.perm, np.arange(dim)] = np.exp(2j * np.pi * self.num / self.denom)
        return U

    def diagonal_turns(self) -> np.ndarray:
        if not np.array_equal(self.perm, np.arange(len(self.perm))):
            raise ValueError("operator is not diagonal")
        return self.num


def circuit_action(c: QubitCircuit) -> MonomialAction:
    denom = 1
    for g in c.gates:
        denom = lcm(denom, g.turns.denominator)
    dim = 1 << c.n
    idx = np.arange(dim, dtype=np.int64)
    num = np.zeros(dim, dtype=np.int64)
    bit = lambda q: np.int64(1) << (c.n - 1 - q)
    for g in c.gates:
        mask = np.ones(dim, dtype=bool)
        for q in g.controls:
            mask &= (idx & bit(q)) != 0
        if g.kind == "x":
            idx = np.where(mask, idx ^ bit(g.target), idx)
        else:
            mask &= (idx & bit(g.target)) != 0
            num = (num + mask * (g.turns.numerator * (denom // g.turns.denominator))) % denom
    return MonomialAction(idx, num, denom)


def circuit_to_matrix(c: QubitCircuit, limit: int = DENSE_LIMIT) -> np.ndarray:
    if c.n > limit:
        raise ValueError(f"dense matrix for {c.n} qubits exceeds the {limit}-qubit limit")
    return circuit_action(c).matrix()


def unitary_equal(U: np.ndarray, V: np.ndarray, up_to_global_phase: bool = True, tol: float = 1e-10) -> bool:
    if U.shape != V.shape:
        return False
    if up_to_global_phase:
        t = np.vdot(V, U)
        if abs(t) < tol:
            return False
        V = V * (t / abs(t))
    return bool(np.max(np.abs(U - V)) < tol)


# ---------------------------------------------------------------- building blocks

def _increment(bits: list[int], controls: tuple[int, ...] = ()) -> list[Gate]:
    """+1 on the register ``bits`` (most significant first), optionally controlled."""
    out = []
    for i in range(len(bits) - 1):
        out.append(X(bits[i], *bits[i + 1:], *controls))
    out.append(X(bits[-1], *controls))
    return out


def _z_power(bits: list[int], k: int) -> list[Gate]:
    """Zc^k on a register holding a mod 2^len(bits): exp(2 pi i k a / 2^len)."""
    m = len(bits)
    return [P(b, Fraction(k * 2 ** (m - 1 - i), 2 ** m)) for i, b in enumerate(bits)]


def controlled_phase(t: int, c: int, turns: Fraction) -> list[Gate]:
    turns = Fraction(turns) % 1
    if turns == 0:
        return []
    if turns in (Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)):
        return [P(t, turns, c)]
    h = turns / 2
    return [X(t, c), P(t, -h), X(t, c), P(t, h), P(c, h)]


def _controlled_z_power(bits: list[int], k: int, c: int) -> list[Gate]:
    out = []
    for g in _z_power(bits, k):
        out.extend(controlled_phase(g.target, c, g.turns))
    return out


def compile_calX(n: int) -> QubitCircuit:
    """+1 on Z_{2^{n-1}}."""
    n_to_N(n)
    return QubitCircuit(n - 1, _increment(list(range(n - 1))), "calX")


def compile_calC(n: int) -> QubitCircuit:
    """a -> -a.  For n = 3 a single CX suffices; otherwise flip all bits, then add one."""
    n_to_N(n)
    if n == 3:
        return QubitCircuit(2, [X(0, 1)], "calC")
    bits = list(range(n - 1))
    return QubitCircuit(n - 1, [X(b) for b in bits] + _increment(bits), "calC")


def compile_calZ(n: int) -> QubitCircuit:
    n_to_N(n)
    return QubitCircuit(n - 1, _z_power(list(range(n - 1)), 1), "calZ")


def _a_bits(n: int) -> list[int]:
    return list(range(n - 1))


def compile_group_ops(n: int) -> dict[str, QubitCircuit]:
    N = n_to_N(n)
    a, j = _a_bits(n), n - 1
    calX = compile_calX(n).embedded(n)
    calC = compile_calC(n).embedded(n)
    ops: dict[str, QubitCircuit] = {}
    ops["L^r"] = QubitCircuit(n, list(calX.gates), "L^r")
    # X^{-Z}: add two controlled on j, then subtract one
    twice = _increment(a[:-1], (j,))
    ops["R^r"] = QubitCircuit(n, twice + calX.dagger().gates, "R^r")
    ops["L^s"] = QubitCircuit(n, calC.gates + [X(j)], "L^s")
    ops["R^s"] = QubitCircuit(n, [X(j)], "R^s")
    ops["Z_1r"] = QubitCircuit(n, [P(j, Fraction(1, 2))], "Z_1r")
    ops["Z_1s"] = QubitCircuit(n, [P(a[-1], Fraction(1, 2))], "Z_1s")
    ops["Z_1rs"] = QubitCircuit(n, [P(a[-1], Fraction(1, 2)), P(j, Fraction(1, 2))], "Z_1rs")
    for ell in range(1, 2 * N):
        plus = QubitCircuit(n, name=f"Z_E{ell}^1+")
        plus.add(*_z_power(a, ell), *_controlled_z_power(a, -2 * ell, j))
        minus = QubitCircuit(n, list(plus.gates) + [P(j, Fraction(1, 2))], f"Z_E{ell}^1-")
        ops[f"Z_E{ell}^1+"] = plus
        ops[f"Z_E{ell}^1-"] = minus
        ops[f"Z_E{ell}^2+"] = QubitCircuit(n, plus.dagger().gates, f"Z_E{ell}^2+")
        ops[f"Z_E{ell}^2-"] = QubitCircuit(n, minus.dagger().gates, f"Z_E{ell}^2-")
    return ops


def compile_M_beta(n: int) -> QubitCircuit:
    """Boundary counterterm on one B3 edge, identity on the reflection qubit."""
    n_to_N(n)
    a = _a_bits(n)
    c = QubitCircuit(n, name="M^beta")
    c.add(*[P(b, Fraction(1, 2 ** (i + 2))) for i, b in enumerate(a)])
    c.add(*[X(b) for b in a[1:]])
    c.add(P(a[-1], Fraction(1, 4), *a[:-1]))
    c.add(*[X(b) for b in a[1:]])
    c.add(P(a[0], Fraction(1, 2)))
    return c


# ---------------------------------------------------------------- reference actions

def reference_action(n: int, name: str) -> MonomialAction:
    """The operator ``name`` read off the group structure, on the encoded basis."""
    G = group_for(n)
    dim = G.order
    elems = G.elements
    perm = np.arange(dim)
    num = np.zeros(dim, dtype=np.int64)
    denom = 1
    if name in ("L^r", "L^s", "R^r", "R^s"):
        g = G.r if name.endswith("r") else G.s
        for h in elems:
            perm[h.index] = (g * h).index if name[0] == "L" else (h * g.inverse()).index
        return MonomialAction(perm, num, 1)
    if name in ("Z_1r", "Z_1s", "Z_1rs"):
        R = irrep_by_name(G, "1_" + name[3:])
        for h in elems:
            num[h.index] = R.phase_matrix(h)[0][0].numerator_mod(2)
        return MonomialAction(perm, num, 2)
    m = re.fullmatch(r"Z_E(\d+)\^([12])([+-])", name)
    if m:
        ell, which, sign = int(m.group(1)), m.group(2), m.group(3)
        R = irrep_by_name(G, f"E{ell}")
        denom = 2 * G.m
        for h in elems:
            pm = R.phase_matrix(h)
            first, second = (pm[0][0], pm[1][0]) if which == "1" else (pm[1][1], pm[0][1])
            if h.coords[1] == 0:
                ph = first
            else:
                ph = second if sign == "+" else second * _MINUS
            num[h.index] = ph.numerator_mod(denom)
        return MonomialAction(perm, num, denom)
    if name == "M^beta":
        from .cohomology import beta_closed_form
        from .lattice import dihedral_code
        from .logical_gate import extended_beta_table
        b = beta_closed_form(G.m // 4)
        t = extended_beta_table(dihedral_code(G.m // 4, 2, 2), b)
        return MonomialAction(perm, t.astype(np.int64) % b.modulus, b.modulus)
    if name in ("calX", "calC", "calZ"):
        k = G.m
        a = np.arange(k)
        if name == "calX":
            return MonomialAction((a + 1) % k, np.zeros(k, dtype=np.int64), 1)
        if name == "calC":
            return MonomialAction((-a) % k, np.zeros(k, dtype=np.int64), 1)
        return MonomialAction(a, a.astype(np.int64), k)
    raise KeyError(f"no reference for {name!r}")


# ---------------------------------------------------------------- stabilizer circuits

STAR_ORDER = ("left", "down", "right", "up")  # incoming, incoming, outgoing, outgoing


def _edge(n: int, k: int) -> tuple[list[int], int]:
    base = k * n
    return list(range(base, base + n - 1)), base + n - 1


def compile_vertex(n: int, which: str) -> QubitCircuit:
    """A_v^r or A_v^s on the four star edges, ordered as STAR_ORDER."""
    ops = compile_group_ops(n)
    right, left = ops["R^" + which], ops["L^" + which]
    c = QubitCircuit(4 * n, name=f"A^{which}")
    for k, op in enumerate((right, right, left, left)):
        c.add(*op.embedded(4 * n, k * n).gates)
    return c


def _parity_into(js: list[int]) -> list[Gate]:
    return [X(js[-1], q) for q in js[:-1]]


def compile_S_r(n: int) -> QubitCircuit:
    """Zc_1 Zc_2^{Z_1} Zc_3^{-Z_1 Z_2 Z_3} Zc_4^{-Z_1 Z_2 Z_3 Z_4} on the plaquette edges g1..g4."""
    edges = [_edge(n, k) for k in range(4)]
    js = [j for _, j in edges]
    c = QubitCircuit(4 * n, name="S^r")
    c.add(*_z_power(edges[0][0], 1))
    c.add(*_z_power(edges[1][0], 1), *_controlled_z_power(edges[1][0], -2, js[0]))
    for k in (2, 3):
        bits = edges[k][0]
        c.add(*_z_power(bits, -1))
        par = _parity_into(js[:k + 1])
        c.add(*par, *_controlled_z_power(bits, 2, js[k]), *reversed(par))
    return c


def compile_S_s(n: int) -> QubitCircuit:
    """zeta^{(1 - Z_1 Z_2 Z_3 Z_4)/2}."""
    js = [_edge(n, k)[1] for k in range(4)]
    par = _parity_into(js)
    c = QubitCircuit(4 * n, name="S^s")
    c.add(*par, P(js[-1], Fraction(1, 2 ** (n - 1))), *reversed(par))
    return c


def compile_stabilizers(n: int) -> dict[str, QubitCircuit]:
    return {"A^r": compile_vertex(n, "r"), "A^s": compile_vertex(n, "s"),
            "S^r": compile_S_r(n), "S^s": compile_S_s(n)}


def lattice_action(op, edges: list[int], n: int) -> MonomialAction:
    """A lattice MonomialOperator on ``edges`` as an action on the 4n-qubit (or kn-qubit) register."""
    from .monomial import enumerate_configs
    G = group_for(n)
    k = len(edges)
    if not set(op.support) <= set(edges):
        raise ValueError("operator acts outside the given edges")
    configs = np.vstack(list(enumerate_configs(k, G.order)))
    full = np.zeros((configs.shape[0], max(edges) + 1), dtype=np.int64)
    full[:, edges] = configs
    out, ph = op.apply(full)
    weights = (np.int64(G.order) ** np.arange(k - 1, -1, -1)).astype(np.int64)
    src = configs @ weights
    dst = out[:, edges] @ weights
    perm = np.empty_like(src)
    num = np.empty_like(src)
    perm[src] = dst
    num[src] = ph % op.modulus
    return MonomialAction(perm, num, op.modulus)


def compile_operator(n: int, name: str) -> QubitCircuit:
    named = {"calX": compile_calX, "calC": compile_calC, "calZ": compile_calZ, "M^beta": compile_M_beta}
    if name in named:
        return named[name](n)
    ops = compile_group_ops(n)
    if name in ops:
        return ops[name]
    stabs = compile_stabilizers(n)
    if name in stabs:
        return stabs[name]
    raise KeyError(f"unknown operator {name!r}; known: {sorted(ops) + sorted(named) + sorted(stabs)}")


def operator_names(n: int) -> list[str]:
    return ["calX", "calC", "calZ", *compile_group_ops(n), "M^beta", *compile_stabilizers(n)]


# ---------------------------------------------------------------- text formats

def emit_circuit(c: QubitCircuit, fmt: str = "qasm", header: bool = False) -> str:
    lines = []
    if fmt == "qasm":
        if header:
            lines += ["OPENQASM 2.0;", f"qreg q[{c.n}];"]
        for g in c.gates:
            args = ", ".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"{g.name()} {args};")
    elif fmt == "plain":
        if header:
            lines.append(f"qubits {c.n}")
        for g in c.gates:
            ctl = ",".join(map(str, g.controls)) or "-"
            lines.append(f"{g.kind} target={g.target} controls={ctl} turns={g.turns}")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(lines) + ("\n" if lines else "")


_QASM = re.compile(r"^(?:c(\d*))?(x|z|s|sdg|t|tdg|p\(([^)]*)\))\s+(.*);$")
_NAMED_TURNS = {"z": Fraction(1, 2), "s": Fraction(1, 4), "sdg": Fraction(3, 4),
                "t": Fraction(1, 8), "tdg": Fraction(7, 8)}


def parse_circuit(text: str, n: int | None = None, fmt: str = "qasm") -> QubitCircuit:
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//") or line.startswith("OPENQASM"):
            continue
        if fmt == "qasm":
            if line.startswith("qreg"):
                n = int(re.search(r"\[(\d+)\]", line).group(1))
                continue
            m = _QASM.match(line)
            if not m:
                raise ValueError(f"cannot parse {raw!r}")
            k = 0 if m.group(1) is None else int(m.group(1) or 1)
            qs = [int(x) for x in re.findall(r"q\[(\d+)\]", m.group(4))]
            if len(qs) != k + 1:
                raise ValueError(f"wrong number of qubits in {raw!r}")
            op = m.group(2)
            if op == "x":
                gates.append(Gate("x", qs[-1], tuple(qs[:-1])))
            else:
                turns = _NAMED_TURNS[op] if op in _NAMED_TURNS else _parse_angle(m.group(3))
                gates.append(Gate("p", qs[-1], tuple(qs[:-1]), turns))
        elif fmt == "plain":
            if line.startswith("qubits"):
                n = int(line.split()[1])
                continue
            kind, *fields = line.split()
            kv = dict(f.split("=", 1) for f in fields)
            ctl = () if kv["controls"] == "-" else tuple(int(x) for x in kv["controls"].split(","))
            gates.append(Gate(kind, int(kv["target"]), ctl, Fraction(kv.get("turns", "0"))))
        else:
            raise ValueError(f"unknown format {fmt!r}")
    if n is None:
        n = 1 + max((q for g in gates for q in g.qubits), default=-1)
    return QubitCircuit(n, gates)
