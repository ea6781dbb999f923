from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qudo.hierarchy import (
    LevelAnalyzer, clifford_level, diagonal_circuit_level, diagonal_level, is_pauli, logical_gate_level,
    monomial_coefficients, phase_gate, s_s_on_reflection_bits, stabilizer_levels,
)
from qudo.qubits import P, QubitCircuit, X

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
S = np.diag([1, 1j])
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def kron(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


@pytest.mark.parametrize("k,level", [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)])
def test_phase_gate_levels(k, level):
    assert clifford_level(phase_gate(k)).level == level


def test_known_gates():
    assert clifford_level(H).level == 2
    assert clifford_level(CX).level == 2
    assert clifford_level(np.diag([1, 1, 1, 1, 1, 1, 1, -1])).level == 3  # CCZ
    assert clifford_level(phase_gate(6), max_k=4).level is None


def test_is_pauli():
    X_ = np.array([[0, 1], [1, 0]])
    Z_ = np.diag([1, -1])
    assert is_pauli(1j * kron(X_, Z_ @ X_))
    assert not is_pauli(kron(H, np.eye(2)))


cliffords_1q = st.sampled_from([H, S, H @ S, S @ H, np.eye(2)])


@given(st.integers(1, 4), cliffords_1q, cliffords_1q, st.booleans())
def test_level_invariant_under_clifford_conjugation(k, c1, c2, entangle):
    U = kron(phase_gate(k), np.eye(2)) @ np.kron(np.eye(2), phase_gate(k))
    C = kron(c1, c2)
    if entangle:
        C = CX @ C
    an = LevelAnalyzer()
    assert clifford_level(C @ U @ C.conj().T, analyzer=an).level == clifford_level(U, analyzer=an).level


@given(st.integers(1, 3), st.integers(2, 5), st.data())
def test_diagonal_routes_agree(nq, m, data):
    f = np.array(data.draw(st.lists(st.integers(0, 2 ** m - 1), min_size=2 ** nq, max_size=2 ** nq)))
    U = np.diag(np.exp(2j * np.pi * f / 2 ** m))
    lvl, _ = diagonal_level(f, m)
    assert clifford_level(U, max_k=m + nq + 1).level == lvl


@given(st.integers(1, 4), st.integers(1, 6), st.data())
def test_monomial_expansion_reconstructs(nq, m, data):
    f = np.array(data.draw(st.lists(st.integers(0, 2 ** m - 1), min_size=2 ** nq, max_size=2 ** nq)))
    a = monomial_coefficients(f, m)
    for x in range(2 ** nq):
        val = sum(int(a[S]) for S in range(2 ** nq) if S & x == S)
        assert val % 2 ** m == f[x] % 2 ** m


def test_diagonal_circuit_level():
    c = QubitCircuit(3, [P(2, Fraction(1, 2), 0, 1)])  # CCZ
    assert diagonal_circuit_level(c).level == 3
    with pytest.raises(Exception):
        diagonal_circuit_level(QubitCircuit(1, [P(0, Fraction(1, 3))]))


@pytest.mark.parametrize("n,expected", [(3, 2), (4, 3)])
def test_stabilizer_levels(n, expected):
    rep = stabilizer_levels(n)
    assert rep.maximum == expected
    assert rep.levels["S^s"].level == diagonal_circuit_level(s_s_on_reflection_bits(n)).level


@pytest.mark.parametrize("n", [3, 4, 5])
def test_logical_gate_level(n):
    assert logical_gate_level(n).level == n


def test_dense_cap():
    with pytest.raises(ValueError, match="unsupported"):
        stabilizer_levels(6)
    with pytest.raises(ValueError):
        clifford_level(QubitCircuit(6, [X(0)]))
