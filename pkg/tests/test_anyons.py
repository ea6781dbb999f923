from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qudo.anyons import (
    AnyonLabel, Z2Z2_NAMES, codeswitch_z2, codeswitch_z2z2, enumerate_anyons, expand_product, lagrangians,
    map_lagrangian, parse_anyon, spt_permutation, vacuum,
)
from qudo.cohomology import alpha
from qudo.groups import centralizer, conjugacy_class, dihedral, subgroup_generated

Ns = [1, 2, 3, 4]


def lagrangian_oracle(N, K):
    """Multiplicity of (C, pi) in the boundary algebra of K (trivial 2-cocycle).

    For g in C, the centralizer Z(g) permutes the cosets {tK : t^-1 g t in K}; the
    multiplicity is the inner product of that permutation character with pi.
    """
    G = dihedral(N)
    Kset = set(K.elements)
    cosets = {}
    for t in G.elements:
        key = frozenset(t * k for k in K.elements)
        cosets.setdefault(key, t)
    out = Counter()
    for a in enumerate_anyons(N):
        g = a.representative
        good = [t for t in cosets.values() if t.inverse() * g * t in Kset]
        Z = centralizer(g)
        tot = 0
        for h in Z.elements:
            fix = sum(1 for t in good if (h * t).inverse() * t in Kset)
            tot += fix * np.conj(a.character(h))
        n = tot / Z.order
        k = int(round(n.real))
        assert abs(n - k) < 1e-9
        if k:
            out[a] = k
    return out


@pytest.mark.parametrize("N", Ns)
def test_anyon_count_and_dimension(N):
    anyons = enumerate_anyons(N)
    assert len(anyons) == 8 * N * N + 14
    assert sum(a.qdim ** 2 for a in anyons) == (8 * N) ** 2


@pytest.mark.parametrize("N", Ns)
def test_labels_roundtrip(N):
    for a in enumerate_anyons(N):
        assert parse_anyon(str(a), N) == a


def test_label_aliases():
    assert parse_anyon("1_{rs}", 1) == AnyonLabel(1, 0, "1_rs")
    assert parse_anyon("E", 1) == parse_anyon("E_1", 1)
    assert parse_anyon("[r]_{+1}", 2) == parse_anyon("[r]", 2)
    assert str(parse_anyon("[r]_{z^2}", 1)) == "[r]_{-1}"
    with pytest.raises(ValueError):
        parse_anyon("[s]", 1)


@pytest.mark.parametrize("N", Ns)
def test_centralizer_characters_orthogonal(N):
    by_rep = {}
    for a in enumerate_anyons(N):
        Z = centralizer(a.representative)
        by_rep.setdefault(a.rep, []).append(np.array([a.character(h) for h in Z.elements]))
    for rows in by_rep.values():
        X = np.array(rows)
        assert np.allclose(X @ X.conj().T / X.shape[1], np.eye(len(rows)), atol=1e-9)


@pytest.mark.parametrize("N", Ns)
def test_lagrangians_match_oracle(N):
    G = dihedral(N)
    gens = {"<rs>": G.r * G.s, "<s>": G.s, "<r>": G.r}
    for L in lagrangians(N):
        assert +L.terms == lagrangian_oracle(N, subgroup_generated([gens[L.subgroup]]))
        assert L.dimension == 8 * N


def spt_oracle(N, a):
    """Tensor the centralizer irrep with the slant character h -> alpha(g,h)/alpha(h,g)."""
    al = alpha(N)
    g = a.representative
    Z = centralizer(g)
    chi = {h.index: a.character(h) * complex(al(g, h) / al(h, g)) for h in Z.elements}
    hits = [b for b in enumerate_anyons(N) if b.rep == a.rep
            and all(abs(b.character(h) - chi[h.index]) < 1e-9 for h in Z.elements)]
    assert len(hits) == 1
    return hits[0]


@pytest.mark.parametrize("N", Ns)
def test_spt_permutation_matches_slant_product(N):
    perm = spt_permutation(N)
    for a in enumerate_anyons(N):
        assert perm(a) == spt_oracle(N, a)


@pytest.mark.parametrize("N", Ns)
def test_spt_invariants(N):
    perm = spt_permutation(N)
    assert perm.is_bijection() and perm.is_involution()
    for L in lagrangians(N):
        assert perm.apply(L).terms == L.terms
    for a in enumerate_anyons(N):
        assert perm(a).qdim == a.qdim
    assert perm(vacuum(N)) == vacuum(N)


@pytest.mark.parametrize("N", Ns)
def test_codeswitch_z2z2_images(N):
    L1, L2, L3 = lagrangians(N)
    cmap = codeswitch_z2z2(N)
    assert +map_lagrangian(L1, cmap).terms == expand_product("(1+m1m2)(1+e1e2)", Z2Z2_NAMES)
    assert +map_lagrangian(L2, cmap).terms == expand_product("(1+m2)(1+e1)", Z2Z2_NAMES)
    assert +map_lagrangian(L3, cmap).terms == expand_product(f"{2 * N}(1+m1)(1+e2)", Z2Z2_NAMES)


@pytest.mark.parametrize("N", Ns)
def test_codeswitch_structure(N):
    cmap = codeswitch_z2z2(N)
    targets = {t for r in cmap.rows for t in r.target.split()}
    assert len(targets) == 16  # every anyon of D(Z2 x Z2) is reached exactly once
    assert len(cmap.rows) == 16
    assert cmap.image(vacuum(N)) == Counter({"1": 1})
    # the condensed bundle: classes of r^{2a}
    bundle = cmap.rows[0].bundle
    assert {a.representative for a in bundle} == {dihedral(N).r ** (2 * a) for a in range(N + 1)}
    # logical triangles survive
    s = dihedral(N).s
    assert cmap.image(AnyonLabel(N, s.index, "++"))


@pytest.mark.parametrize("N", Ns)
def test_codeswitch_z2(N):
    L1, L2, L3 = lagrangians(N)
    cmap = codeswitch_z2(N)
    assert len(cmap.rows) == 4
    imgs = [+map_lagrangian(L, cmap).terms for L in (L1, L2, L3)]
    assert imgs[1] == Counter({"1": 2, "e": 2})
    assert set(imgs[0]) == {"1", "m"} and set(imgs[2]) == {"1", "m"}


@given(st.sampled_from(Ns), st.data())
def test_class_sizes(N, data):
    a = data.draw(st.sampled_from(enumerate_anyons(N)))
    assert a.class_size == len(conjugacy_class(a.representative))
    assert a.class_size * centralizer(a.representative).order == 8 * N
