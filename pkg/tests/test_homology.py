"""Homology: oriented boundaries, Betti numbers, torsion, and the box/Hom
agreement check, validated against a dense rational-arithmetic oracle."""

import json

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

import hombox as hb
from hombox import InputError
from hombox.cellcx import canon_key


def rp2():
    """The 6-vertex triangulation of the real projective plane."""
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return hb.CellComplex.from_simplices([frozenset(t) for t in tris])


def sphere2():
    return hb.CellComplex.from_simplices(
        [frozenset("abcd") - {v} for v in "abcd"])


def hexagon():
    verts = "uvwxyz"
    return hb.CellComplex.from_simplices(
        [frozenset((verts[i], verts[(i + 1) % 6])) for i in range(6)])


def oracle_homology(K):
    """Betti numbers and torsion by dense rational ranks and Smith normal
    form, independent of the package's elimination."""
    D = K.max_dim
    ids_of = [K.cells_of_dim(d) for d in range(D + 1)]
    ranks = [0] * (D + 2)
    invs = [[] for _ in range(D + 2)]
    for d in range(1, D + 1):
        rows = {r: k for k, r in enumerate(ids_of[d - 1])}
        mat = sympy.zeros(len(ids_of[d - 1]), len(ids_of[d]))
        for j, i in enumerate(ids_of[d]):
            p = K.payloads[i]
            if isinstance(p, frozenset):
                faces = [p - {v} for v in sorted(p, key=canon_key)]
            else:
                faces = [p[:t] + p[t + 1:] for t in range(len(p))]
            for t, fp in enumerate(faces):
                mat[rows[K.index[fp]], j] = (-1) ** t
        ranks[d] = mat.rank()
        if ranks[d]:
            snf = smith_normal_form(mat, domain=sympy.ZZ)
            diag = [abs(snf[k, k]) for k in range(min(snf.shape))]
            invs[d] = sorted(int(x) for x in diag if x)
    bettis = [len(ids_of[d]) - ranks[d] - ranks[d + 1] for d in range(D + 1)]
    torsion = [[f for f in invs[d + 1] if f > 1] for d in range(D + 1)]
    # Z/2 ranks follow from the invariant factors: factors that stay odd
    # survive reduction mod 2
    r2 = [sum(1 for f in invs[d] if f % 2) for d in range(D + 2)]
    bettis2 = [len(ids_of[d]) - r2[d] - r2[d + 1] for d in range(D + 1)]
    return bettis, torsion, bettis2


def oracle_cases():
    pt = hb.CellComplex.from_simplices([frozenset("a")])
    seg = hb.CellComplex.from_simplices([frozenset("ab")])
    solid = hb.CellComplex.from_simplices([frozenset("abc")])
    hollow = hb.CellComplex.from_simplices(
        [frozenset("ab"), frozenset("bc"), frozenset("ca")])
    both = hb.CellComplex.from_simplices(
        [frozenset("abc"), frozenset("pq"), frozenset("qr"), frozenset("rp")])
    return [("point", pt), ("segment", seg), ("solid", solid),
            ("hollow", hollow), ("sphere", sphere2()), ("rp2", rp2()),
            ("hexagon", hexagon()), ("union", both)]


# -- oriented boundaries -----------------------------------------------------


@pytest.mark.parametrize("name,K", oracle_cases())
def test_boundary_squares_to_zero(name, K):
    bnd = hb.oriented_boundary(K)
    for i in range(len(K)):
        if K.dims[i] < 2:
            continue
        acc = {}
        for f, s in bnd[i].items():
            for f2, s2 in bnd[f].items():
                acc[f2] = acc.get(f2, 0) + s * s2
        assert all(v == 0 for v in acc.values()), (name, i)


def test_boundary_squares_to_zero_on_chains(solid_triangle):
    sd = hb.barycentric_subdivision(solid_triangle)
    bnd = hb.oriented_boundary(sd)
    for i in range(len(sd)):
        if sd.dims[i] < 2:
            continue
        acc = {}
        for f, s in bnd[i].items():
            for f2, s2 in bnd[f].items():
                acc[f2] = acc.get(f2, 0) + s * s2
        assert all(v == 0 for v in acc.values())


def test_boundary_shape(solid_triangle):
    bnd = hb.oriented_boundary(solid_triangle)
    for i in range(len(solid_triangle)):
        col = bnd[i]
        assert set(col) == set(solid_triangle.down[i])
        assert sorted(col.values()) == sorted(
            (-1) ** t for t in range(len(col)))


def test_boundary_rejects_product_payloads(corpus):
    hom = hb.hom_complex(corpus["K_3^2"])
    with pytest.raises(InputError):
        hb.oriented_boundary(hom.cx)


# -- Betti numbers against the oracle ----------------------------------------


@pytest.mark.parametrize("name,K", oracle_cases())
def test_betti_matches_oracle(name, K):
    ob, ot, ob2 = oracle_homology(K)
    b, t = hb.betti(K, "z")
    assert b == ob, name
    assert [sorted(row) for row in t] == ot, name
    b2, t2 = hb.betti(K, "z2")
    assert b2 == ob2, name
    assert all(row == [] for row in t2)


def test_betti_box_matches_oracle(corpus):
    box = hb.box_edge(corpus["K_4^3"])
    ob, ot, _ = oracle_homology(box.cx)
    b, t = hb.betti(box.cx, "z")
    assert (b, [sorted(r) for r in t]) == (ob, ot) == ([1, 13], [[], []])
    # and the order complex (used for non-simplicial payloads) agrees
    assert hb.betti(hb.order_complex(box.cx), "z") == (b, t)


def test_betti_hom_goes_via_order_complex(corpus):
    hom = hb.hom_complex(corpus["K_4^3"])
    oc = hb.order_complex(hom.cx)
    ob, ot, _ = oracle_homology(oc)
    b, t = hb.betti(hom.cx, "z")
    assert b == ob and [sorted(r) for r in t] == ot
    assert b == [1, 13]


def test_betti_known_values():
    assert hb.betti(hb.CellComplex.from_simplices([frozenset("a")])) == (
        [1], [[]])
    assert hb.betti(hexagon()) == ([1, 1], [[], []])
    assert hb.betti(sphere2()) == ([1, 0, 1], [[], [], []])
    assert hb.betti(hb.CellComplex.empty()) == ([], [])


def test_rp2_torsion():
    K = rp2()
    # sanity of the fixture: a closed surface, every edge in two triangles
    for e in K.cells_of_dim(1):
        assert len(K.up[e]) == 2
    assert hb.betti(K, "z") == ([1, 0, 0], [[], [2], []])
    assert hb.betti(K, "z2") == ([1, 1, 1], [[], [], []])


def test_betti_invariant_under_subdivision():
    for K in (rp2(), sphere2(), hexagon()):
        sd = hb.barycentric_subdivision(K)
        assert hb.betti(sd, "z") == hb.betti(K, "z")
        assert hb.betti(sd, "z2") == hb.betti(K, "z2")


def test_betti_additive_on_disjoint_union():
    both = hb.CellComplex.from_simplices(
        [frozenset("abc"), frozenset("pq"), frozenset("qr"), frozenset("rp")])
    b, t = hb.betti(both)
    assert b == [2, 1, 0]
    assert t == [[], [], []]


BOX_BETTI = {
    "K_2^2": [2],
    "K_3^2": [1, 1],
    "K_4^2": [1, 0, 1, 0],
    "K_3^3": [6],
    "K_4^3": [1, 13],
    "K_5^3": [1, 0, 29, 0],
    "K3_112": [6, 0],
    "K3_122": [6, 0, 0, 0],
}


@pytest.mark.parametrize("name", sorted(BOX_BETTI))
def test_betti_of_corpus_boxes(name, corpus):
    box = hb.box_edge(corpus[name])
    b, t = hb.betti(box.cx, "z")
    assert b == BOX_BETTI[name]
    assert all(row == [] for row in t)


def test_betti_rejects_bad_coeff(solid_triangle):
    with pytest.raises(InputError):
        hb.betti(solid_triangle, "q")


# -- reports and agreement ---------------------------------------------------


def test_homology_report_is_json_ready():
    rep = hb.homology_report(rp2())
    assert json.loads(json.dumps(rep)) == rep
    assert rep == {"betti": [1, 0, 0], "torsion": [[], [2], []]}


@pytest.mark.parametrize("name", ["K_3^2", "K_4^3", "K3_112"])
def test_homology_agreement(name, corpus):
    out = hb.homology_agreement(corpus[name])
    assert out.agree
    assert out.box_report == out.hom_report
    assert out.box_report["betti"] == BOX_BETTI[name]


def test_homology_agreement_z2(corpus):
    out = hb.homology_agreement(corpus["K_3^2"], coeff="z2")
    assert out.agree
    assert out.box_report["betti"] == [1, 1]
    assert all(row == [] for row in out.box_report["torsion"])
