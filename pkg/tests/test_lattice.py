import numpy as np
import pytest
from hypothesis import given, strategies as st

from qudo.lattice import (
    SparseState, TermCapExceeded, dihedral_code, electric_triangle, logical_representative, logical_state,
    random_gauge_transform, symmetrize,
)
from qudo.stabilizers import (
    eigenvalue_law, syndrome, verify_commutators, verify_projector_reconstruction, verify_stabilization,
)

patches = st.sampled_from([(2, 2), (4, 4), (6, 4), (4, 6)])


def flux_oracle(code, c, p):
    """Direct group-element product around the plaquette."""
    g1, g2, g3, g4 = (code.group.element(int(c[e])) for e in code.geometry.plaquette_edges(p))
    return g1 * g2 * (g4 * g3).inverse()


@given(st.sampled_from([1, 2]), patches, st.integers(0, 2**32 - 1))
def test_flux_matches_group_product(N, wh, seed):
    code = dihedral_code(N, *wh)
    rng = np.random.default_rng(seed)
    c = rng.integers(0, code.group.order, size=code.n_edges)
    for p in code.geometry.plaquettes:
        assert code.flux(c, p) == flux_oracle(code, c, p)


@given(st.sampled_from([1, 2, 3]), patches, st.integers(0, 2**32 - 1))
def test_gauge_moves_preserve_flatness_and_boundaries(N, wh, seed):
    code = dihedral_code(N, *wh)
    rng = np.random.default_rng(seed)
    for m in (0, 1):
        c = random_gauge_transform(code, logical_representative(code, m), rng)
        assert syndrome(code, c).empty


@given(st.sampled_from([1, 2]), st.integers(0, 2**32 - 1))
def test_vertex_operators_are_representations(N, seed):
    code = dihedral_code(N, 4, 4)
    rng = np.random.default_rng(seed)
    G = code.group
    v = (2, 2)
    c = rng.integers(0, G.order, size=(8, code.n_edges))
    g, h = G.element(int(rng.integers(G.order))), G.element(int(rng.integers(G.order)))
    lhs, _ = (code.vertex_op(v, g) @ code.vertex_op(v, h)).apply(c)
    rhs, _ = code.vertex_op(v, g * h).apply(c)
    assert np.array_equal(lhs, rhs)


def test_materialized_states_small_patch():
    code = dihedral_code(1, 2, 2)
    for m, z in ((0, 1), (1, -1)):
        s = logical_state(code, m, materialize=True)
        assert verify_stabilization(code, s).ok
        assert abs(electric_triangle(code, s) - z) < 1e-12
        # projector image of a basis state: uniform amplitude over the gauge orbit
        assert np.allclose(s.amps, s.amps[0])


def test_materialized_states_orthogonal():
    code = dihedral_code(1, 2, 2)
    a = set(logical_state(code, 0, materialize=True).as_dict())
    b = set(logical_state(code, 1, materialize=True).as_dict())
    assert not a & b


def test_term_cap(monkeypatch):
    monkeypatch.setenv("QUDO_TERM_CAP", "100")
    code = dihedral_code(1, 2, 2)
    with pytest.raises(TermCapExceeded):
        symmetrize(code, SparseState.basis(logical_representative(code, 0)))


@pytest.mark.parametrize("wh", [(4, 4), (6, 6)])
def test_electric_triangle_both_patches(wh):
    code = dihedral_code(1, *wh)
    assert electric_triangle(code, logical_representative(code, 0)) == 1
    assert electric_triangle(code, logical_representative(code, 1)) == -1


@given(st.sampled_from([1, 2]), st.integers(0, 2**32 - 1))
def test_electric_triangle_gauge_invariant(N, seed):
    code = dihedral_code(N, 4, 4)
    rng = np.random.default_rng(seed)
    for m, z in ((0, 1), (1, -1)):
        c = random_gauge_transform(code, logical_representative(code, m), rng)
        assert electric_triangle(code, c) == z


def test_junction_variants():
    for j in ("nw", "ne"):
        code = dihedral_code(1, 4, 4, junction=j)
        c = logical_representative(code, 1)
        assert verify_stabilization(code, c).ok


def test_config_string_roundtrip():
    code = dihedral_code(2, 4, 4)
    c = logical_representative(code, 1)
    assert np.array_equal(code.parse_config(code.config_string(c)), c)


def test_single_error_two_syndromes():
    code = dihedral_code(1, 4, 4)
    G = code.group
    c = logical_representative(code, 0).copy()
    e = code.geometry.h(1, 2)
    c[e] = G.mul_table[G.r.index, c[e]]
    assert len(syndrome(code, c).fluxes) == 2


def test_commutators_small():
    assert verify_commutators(1, samples=2000, exhaustive=False).ok


def test_projector_and_eigenvalues():
    assert verify_projector_reconstruction(1)
    assert eigenvalue_law(1)
    assert eigenvalue_law(2, exhaustive=False, samples=20000)


@pytest.mark.parametrize("bad", [(3, 4), (0, 2)])
def test_bad_patch(bad):
    with pytest.raises(ValueError):
        dihedral_code(1, *bad)
