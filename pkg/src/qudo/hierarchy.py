"""Clifford-hierarchy level of small unitaries.

Two independent routes:

* ``clifford_level`` works on dense matrices and follows the recursive
  definition: level 1 is the Pauli group (up to phase); U is at level k when
  U P U^dag is at level k-1 for every Pauli generator P.
* ``diagonal_level`` handles diagonal gates exp(2 pi i f(x) / 2^m) of any
  width through the Boolean-monomial expansion of f: a monomial on |S| qubits
  with reduced coefficient c / 2^d contributes level |S| + d - 1.

Levels of tensor products are maxima of the factor levels (induction on the
recursive definition), which is how vertex operators are handled.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .qubits import (
    P,
    QubitCircuit,
    circuit_action,
    circuit_to_matrix,
    compile_group_ops,
    compile_S_r,
    compile_S_s,
    n_to_N,
)

TOL = 1e-10
MAX_DENSE_QUBITS = 5
MAX_K = 6


def pauli_generators(nq: int) -> list[tuple[str, np.ndarray]]:
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.diag([1, -1]).astype(complex)
    out = []
    for q in range(nq):
        for name, m in (("X", X), ("Z", Z)):
            op = np.array([[1]], dtype=complex)
            for k in range(nq):
                op = np.kron(op, m if k == q else np.eye(2))
            out.append((f"{name}{q}", op))
    return out


def is_pauli(U: np.ndarray, tol: float = TOL) -> bool:
    """U = c X^b Z^z for some phase c."""
    dim = U.shape[0]
    cols = np.argmax(np.abs(U), axis=0)
    if not np.allclose(np.abs(U[cols, np.arange(dim)]), 1, atol=tol):
        return False
    x = np.arange(dim)
    b = cols[0]
    if not np.array_equal(cols, x ^ b):
        return False
    ph = U[cols, x] / U[cols[0], 0]
    nq = dim.bit_length() - 1
    z = 0
    for q in range(nq):
        e = 1 << q
        val = ph[e]
        if abs(val - 1) < tol:
            continue
        if abs(val + 1) < tol:
            z |= e
        else:
            return False
    parity = np.array([bin(v & z).count("1") & 1 for v in range(dim)])
    return bool(np.allclose(ph, 1 - 2 * parity, atol=tol))


def _key(U: np.ndarray) -> bytes:
    flat = U.ravel()
    i = int(np.argmax(np.abs(flat) > 0.5))
    V = U * (abs(flat[i]) / flat[i])
    return np.round(V, 8).tobytes()


@dataclass
class HierarchyLevel:
    name: str
    level: int | None  # None: above max_k
    max_k: int
    certificate: dict[str, int | None] = field(default_factory=dict)
    method: str = "dense"

    @property
    def verdict(self) -> str:
        return str(self.level) if self.level is not None else f"exceeds {self.max_k}"

    def as_dict(self) -> dict:
        return {"operator": self.name, "level": self.level, "verdict": self.verdict,
                "max_k": self.max_k, "method": self.method, "certificate": self.certificate}


class LevelAnalyzer:
    """Memoised recursion; the memo maps a phase-normalised matrix to its level or a lower bound."""

    def __init__(self, tol: float = TOL):
        self.tol = tol
        self._memo: dict[tuple[int, bytes], tuple[int | None, int]] = {}
        self._lock = threading.Lock()
        self._paulis: dict[int, list[tuple[str, np.ndarray]]] = {}

    def paulis(self, nq):
        if nq not in self._paulis:
            self._paulis[nq] = pauli_generators(nq)
        return self._paulis[nq]

    def level(self, U: np.ndarray, max_k: int) -> int | None:
        nq = U.shape[0].bit_length() - 1
        key = (nq, _key(U))
        hit = self._memo.get(key)
        if hit is not None:
            lvl, bound = hit
            if lvl is not None:
                return lvl if lvl <= max_k else None
            if bound >= max_k:
                return None
        lvl = self._compute(U, max_k, nq)
        with self._lock:
            self._memo[key] = (lvl, max_k) if lvl is not None else (None, max_k)
        return lvl

    def _compute(self, U, max_k, nq):
        if is_pauli(U, self.tol):
            return 1
        if max_k <= 1:
            return None
        Ud = U.conj().T
        worst = 1
        for _, Pm in self.paulis(nq):
            sub = self.level(U @ Pm @ Ud, max_k - 1)
            if sub is None:
                return None
            worst = max(worst, sub)
        return worst + 1

    def certificate(self, U: np.ndarray, max_k: int) -> dict[str, int | None]:
        nq = U.shape[0].bit_length() - 1
        Ud = U.conj().T
        return {name: self.level(U @ Pm @ Ud, max_k - 1) for name, Pm in self.paulis(nq)}


_DEFAULT = LevelAnalyzer()


def clifford_level(U: np.ndarray | QubitCircuit, max_k: int = MAX_K, name: str = "U",
                   analyzer: LevelAnalyzer | None = None) -> HierarchyLevel:
    if isinstance(U, QubitCircuit):
        if U.n > MAX_DENSE_QUBITS:
            raise ValueError(f"dense analyzer capped at {MAX_DENSE_QUBITS} qubits, got {U.n}")
        name = U.name or name
        U = circuit_to_matrix(U)
    if U.shape[0] > 2 ** MAX_DENSE_QUBITS:
        raise ValueError(f"dense analyzer capped at {MAX_DENSE_QUBITS} qubits")
    an = analyzer or _DEFAULT
    lvl = an.level(U, max_k)
    cert = an.certificate(U, max_k) if max_k > 1 else {}
    return HierarchyLevel(name, lvl, max_k, cert)


# ---------------------------------------------------------------- diagonal route

def monomial_coefficients(f: np.ndarray, m: int) -> np.ndarray:
    """Coefficients a_S (mod 2^m) with f(x) = sum_S a_S prod_{i in S} x_i; index bits as in f."""
    a = np.asarray(f, dtype=np.int64).copy() % (1 << m)
    dim = a.shape[0]
    nq = dim.bit_length() - 1
    for q in range(nq):
        step = 1 << q
        v = a.reshape(-1, 2, step)
        v[:, 1, :] -= v[:, 0, :]
    return a % (1 << m)


def _two_adic(c: int) -> int:
    return (c & -c).bit_length() - 1


def diagonal_level(f: np.ndarray, m: int) -> tuple[int, dict]:
    """Level of diag(exp(2 pi i f / 2^m)) and the monomial attaining it."""
    a = monomial_coefficients(f, m)
    a[0] = 0  # global phase
    best, arg = 1, None
    idx = np.nonzero(a)[0]
    if idx.size:
        sizes = np.array([bin(int(i)).count("1") for i in idx])
        dens = np.array([m - _two_adic(int(a[i])) for i in idx])
        lv = sizes + dens - 1
        j = int(np.argmax(lv))
        best, arg = max(1, int(lv[j])), {"monomial_mask": int(idx[j]), "size": int(sizes[j]),
                                         "coefficient": f"{int(a[idx[j]])}/2^{m}"}
    return best, {"witness": arg}


def diagonal_circuit_level(c: QubitCircuit, name: str | None = None) -> HierarchyLevel:
    act = circuit_action(c)
    f = act.diagonal_turns()
    d = act.denom
    m = d.bit_length() - 1
    if d != 1 << m:
        raise ValueError("phases are not dyadic")
    lvl, cert = diagonal_level(f, m)
    return HierarchyLevel(name or c.name, lvl, MAX_K, cert, "phase-polynomial")


# ---------------------------------------------------------------- specific families

def phase_gate(k: int) -> np.ndarray:
    """P(2 pi / 2^k)."""
    return np.diag([1, np.exp(2j * np.pi / 2 ** k)])


def s_s_on_reflection_bits(n: int) -> QubitCircuit:
    """S^s only reads the four reflection qubits; restrict it to them."""
    full = compile_S_s(n)
    js = [k * n + n - 1 for k in range(4)]
    pos = {q: i for i, q in enumerate(js)}
    return QubitCircuit(4, [g.shifted(lambda q: pos[q]) for g in full.gates], "S^s|j")


@dataclass
class StabilizerLevels:
    n: int
    levels: dict[str, HierarchyLevel]

    @property
    def maximum(self) -> int | None:
        vals = [h.level for h in self.levels.values()]
        return None if any(v is None for v in vals) else max(vals)

    def as_dict(self) -> dict:
        return {"n": self.n, "max_level": self.maximum,
                "generators": {k: v.as_dict() for k, v in self.levels.items()},
                "note": "level of the group is the maximum over generators; individual elements may sit lower"}


def stabilizer_levels(n: int, max_k: int = MAX_K, analyzer: LevelAnalyzer | None = None) -> StabilizerLevels:
    """Per-generator levels of A^r, A^s, S^r, S^s for n qubits per edge."""
    n_to_N(n)
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"unsupported: dense analyzer capped at n={MAX_DENSE_QUBITS}")
    ops = compile_group_ops(n)
    an = analyzer or _DEFAULT
    out = {}
    for which in ("r", "s"):
        parts = {f"{side}^{which}": clifford_level(ops[f"{side}^{which}"], max_k, analyzer=an)
                 for side in ("L", "R")}
        vals = [p.level for p in parts.values()]
        lvl = None if None in vals else max(vals)
        out[f"A^{which}"] = HierarchyLevel(f"A^{which}", lvl, max_k, {k: v.level for k, v in parts.items()},
                                           "tensor of dense edge factors")
    out["S^r"] = diagonal_circuit_level(compile_S_r(n), "S^r")
    ss = s_s_on_reflection_bits(n)
    dense = clifford_level(ss, max_k, "S^s", an)
    poly = diagonal_circuit_level(ss, "S^s")
    if dense.level != poly.level:
        raise AssertionError(f"S^s: dense level {dense.level} != phase-polynomial level {poly.level}")
    out["S^s"] = dense
    return StabilizerLevels(n, out)


def logical_gate_level(n: int, max_k: int = MAX_K) -> HierarchyLevel:
    return clifford_level(phase_gate(n), max_k, f"P(2pi/2^{n})")


def phase_circuit(k: int) -> QubitCircuit:
    return QubitCircuit(1, [P(0, Fraction(1, 2 ** k))], f"P(2pi/2^{k})")
