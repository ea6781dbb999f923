import numpy as np
import pytest
from hypothesis import given, strategies as st

from qudo.lattice import dihedral_code, logical_representative, random_gauge_transform
from qudo.stabilizers import (
    S_r, S_r_dressed, S_s, S_s_dressed, boundary_stabilizers, bulk_generators, syndrome, verify_commutators,
)


def eigen_oracle(code, c, p):
    """zeta^a and (-1)^j of the plaquette flux r^a s^j, as turn numerators mod 4N."""
    g1, g2, g3, g4 = (code.group.element(int(c[e])) for e in code.geometry.plaquette_edges(p))
    a, j = (g1 * g2 * (g4 * g3).inverse()).coords
    return a, j


@given(st.sampled_from([1, 2, 3]), st.integers(0, 2**32 - 1))
def test_plaquette_stabilizer_eigenvalues(N, seed):
    code = dihedral_code(N, 4, 4)
    rng = np.random.default_rng(seed)
    c = rng.integers(0, code.group.order, size=(16, code.n_edges))
    for p in [(0, 0), (1, 2), (3, 3)]:
        _, pr = S_r(code, p).apply(c)
        _, ps = S_s(code, p).apply(c)
        _, dr = S_r_dressed(code, p).apply(c)
        _, ds = S_s_dressed(code, p).apply(c)
        for i in range(c.shape[0]):
            a, j = eigen_oracle(code, c[i], p)
            assert pr[i] % (4 * N) == a and ps[i] % (4 * N) == j
        assert np.array_equal(pr, dr) and np.array_equal(ps, ds)


@pytest.mark.parametrize("N", [1, 2])
def test_logical_reps_are_plus_one_eigenstates_of_diagonal_terms(N):
    code = dihedral_code(N, 4, 4)
    rng = np.random.default_rng(1)
    for m in (0, 1):
        c = random_gauge_transform(code, logical_representative(code, m), rng)
        for gen in bulk_generators(code):
            if gen.kind.startswith("S"):
                assert gen.operator.phase(c).is_one()
        for label in ("B1", "B2", "B3"):
            for gen in boundary_stabilizers(code, label):
                if gen.operator.is_diagonal:
                    assert gen.operator.phase(c).is_one(), (label, gen.site)


@pytest.mark.parametrize("N", [1, 2])
def test_boundary_vertex_ops_keep_boundary_membership(N):
    code = dihedral_code(N, 4, 4)
    c = logical_representative(code, 1)
    for label in ("B1", "B2", "B3"):
        for gen in boundary_stabilizers(code, label):
            out, _ = gen.operator.apply(c[None, :])
            assert syndrome(code, out[0]).empty


@given(st.sampled_from([1, 2]), st.integers(0, 2**32 - 1))
def test_edge_error_syndrome_is_local(N, seed):
    code = dihedral_code(N, 4, 4)
    rng = np.random.default_rng(seed)
    G = code.group
    geo = code.geometry
    c = logical_representative(code, 0).copy()
    e = int(rng.integers(code.n_edges))
    g = G.element(int(rng.integers(1, G.order)))
    c[e] = G.mul_table[g.index, c[e]]
    syn = syndrome(code, c)
    touching = {p for p in geo.plaquettes if e in geo.plaquette_edges(p)}
    assert set(syn.fluxes) <= touching
    if g.coords[1] == 0 and geo.edge_side(e) is None:
        assert set(syn.fluxes) == touching


def test_error_witness_is_replayable():
    code = dihedral_code(1, 4, 4)
    c = logical_representative(code, 0).copy()
    c[code.geometry.v(2, 1)] = code.group.r.index
    d = syndrome(code, c).as_dict(code)
    assert len(d["fluxes"]) == 2
    again = code.parse_config(code.config_string(c))
    assert syndrome(code, again).as_dict(code) == d


def test_commutators_exhaustive_N1():
    rep = verify_commutators(1, exhaustive=True, include_trivial=False)
    assert rep.ok
    assert all(r.exhaustive and r.checked == 8 ** len(r.support) for r in rep.results)


def test_commutators_detect_wrong_relation():
    from qudo.monomial import commutator, operators_equal
    code = dihedral_code(1, 4, 4)
    G = code.group
    v = (2, 2)
    Ar, As = code.vertex_op(v, G.r), code.vertex_op(v, G.s)
    assert not operators_equal(commutator(Ar, As), Ar ** 2 @ Ar, G.order).ok
