"""Spectral sequences of filtered complexes: filtration validation, page
arithmetic, the symmetric-degree filtration of Cartan models, and the
contraction filtration of G-differential complexes."""

import pytest

from equicoh import core, gdiff, lie, ratlin as rl, spectral


def su2_model(sym_cap=2):
    g = lie.su2()
    a = gdiff.ce_gdiff(lie.ce_complex(g, lie.trivial_rep(g)))
    return a, gdiff.cartan_model(a, sym_cap)


def small_complex():
    space = core.GradedSpace.from_dims({0: 1, 1: 2, 2: 1})
    d = core.LinearMap.from_blocks(space, space, 1, {0: [[1], [0]], 1: [[0, 1]]})
    return core.CochainComplex.build(space, d)


def test_build_filtered_rejects_partial_level_zero():
    cx = small_complex()
    half = core.Subspace.from_spans(cx.space, {0: [[1]], 1: [[1], [0]]})
    with pytest.raises(spectral.NotSubcomplex) as exc:
        spectral.build_filtered(cx, [half])
    assert "level 0" in str(exc.value)


def test_build_filtered_rejects_non_nested_levels():
    cx = small_complex()
    full = core.Subspace.full(cx.space)
    small = core.Subspace.from_spans(cx.space, {2: [[1]]})
    bigger = core.Subspace.from_spans(cx.space, {1: [[0], [1]], 2: [[1]]})
    with pytest.raises(spectral.NotSubcomplex) as exc:
        spectral.build_filtered(cx, [full, small, bigger])
    assert "level 2 escapes" in str(exc.value)


def test_build_filtered_rejects_non_d_stable_level():
    g = lie.su2()
    cx = lie.ce_complex(g, lie.trivial_rep(g)).complex
    full = core.Subspace.full(cx.space)
    # the line through the first generator is not closed under d
    line = core.Subspace.from_spans(cx.space, {1: [[1], [0], [0]]})
    with pytest.raises(spectral.NotSubcomplex) as exc:
        spectral.build_filtered(cx, [full, line])
    assert "not d-stable at degree 1" in str(exc.value)


def test_one_step_filtration_gives_total_cohomology():
    g = lie.su2()
    cx = lie.ce_complex(g, lie.trivial_rep(g)).complex
    fc = spectral.build_filtered(cx, [core.Subspace.full(cx.space)])
    pgs = spectral.pages(fc)
    h = core.cohomology(cx)
    final = pgs[-1]
    assert final.stable
    assert final.cells == {(0, 0): 1, (0, 3): 1}
    assert all(final.antidiagonal(n) == h.dim(n) for n in range(4))
    # page report shape
    assert pgs[1].to_json() == {"r": 1, "cells": [[0, 0, 1], [0, 3, 1]],
                                "stable": False}


def test_page_csv_table():
    g = lie.su2()
    cx = lie.ce_complex(g, lie.trivial_rep(g)).complex
    fc = spectral.build_filtered(cx, [core.Subspace.full(cx.space)])
    pgs = spectral.pages(fc)
    assert spectral.page_csv(pgs[-1]) == "p,q,dim\n0,0,1\n0,3,1\n"


def test_r_max_truncates_and_is_not_stable():
    _, model = su2_model(2)
    fc = spectral.symdegree_filtration(model)
    pgs = spectral.pages(fc, r_max=2)
    assert len(pgs) == 3 and pgs[-1].r == 2
    assert not pgs[-1].stable


def test_symdegree_su2_pages_and_transgression():
    a, model = su2_model(2)
    fc = spectral.symdegree_filtration(model)
    pgs = spectral.pages(fc)

    # first page = second page = H^q(A) x invariant polynomials (even p)
    h = core.cohomology(a.complex)
    assert [h.dim(n) for n in range(4)] == [1, 0, 0, 1]
    inv_poly = [lie.invariants(lie.sym_power_rep(lie.su2(), j)).total_dim()
                for j in range(3)]
    assert inv_poly == [1, 0, 1]
    expected = {}
    for q in range(4):
        for j in range(3):
            dim = h.dim(q) * inv_poly[j]
            if dim:
                expected[(2 * j, q)] = dim
    assert pgs[1].cells == expected
    assert pgs[2].cells == expected
    assert all((p % 2 == 0) for (p, q) in pgs[1].cells)

    # nothing moves until the transgression on page 4 kills both middle cells
    assert not pgs[1].diffs and not pgs[2].diffs and not pgs[3].diffs
    assert set(pgs[4].diffs) == {(0, 3)}
    mat = pgs[4].diffs[(0, 3)]
    assert len(mat) == 1 and len(mat[0]) == 1 and mat[0][0] != 0
    assert pgs[5].cells == {(0, 0): 1, (4, 3): 1}

    final = pgs[-1]
    assert final.stable
    # inside the validity band the limit is the equivariant cohomology
    eq = gdiff.equivariant_cohomology(a, 2)
    assert [final.antidiagonal(n) for n in range(5)] == eq.dims_list()
    assert eq.dims_list() == [1, 0, 0, 0, 0]

    # the second-page differential formula holds on representatives
    assert spectral.verify_cartan_d2(model, pgs[2])["ok"]


def test_symdegree_refined_by_repeated_level_same_limit():
    a, model = su2_model(1)
    fc = spectral.symdegree_filtration(model)
    doubled = (fc.levels[0],) + fc.levels
    fc2 = spectral.build_filtered(fc.complex, doubled)
    p1 = spectral.pages(fc)[-1]
    p2 = spectral.pages(fc2)[-1]
    assert p1.stable and p2.stable
    top = max(fc.complex.space.degrees())
    assert [p1.antidiagonal(n) for n in range(top + 1)] == \
        [p2.antidiagonal(n) for n in range(top + 1)]


def test_symdegree_torus_first_page_dims_and_d2_matrix():
    t = lie.abelian(2)
    a = gdiff.ce_gdiff(lie.ce_complex(t, lie.trivial_rep(t)))
    model = gdiff.cartan_model(a, 2)
    fc = spectral.symdegree_filtration(model)
    pgs = spectral.pages(fc)

    # H(torus) = [1,2,1]; all polynomials are invariant: dim S^j = j + 1
    h = core.cohomology(a.complex)
    assert [h.dim(n) for n in range(3)] == [1, 2, 1]
    expected = {(2 * j, q): h.dim(q) * (j + 1)
                for j in range(3) for q in range(3) if h.dim(q)}
    assert pgs[1].cells == expected
    assert pgs[2].cells == expected

    # page-2 differential on the (0,1) cell: [a] -> sum_j [i_j a] u_j.
    # Representatives of (0,1) are the two generator 1-forms and the target
    # cell is spanned by the two coordinate generators, so the matrix is the
    # identity.
    assert pgs[2].diffs[(0, 1)] == [[1, 0], [0, 1]]
    assert spectral.verify_cartan_d2(model, pgs[2])["ok"]

    final = pgs[-1]
    assert final.stable
    eq = gdiff.equivariant_cohomology(a, 2)
    assert [final.antidiagonal(n) for n in range(5)] == eq.dims_list()
    assert eq.dims_list() == [1, 0, 0, 0, 0]


def test_symdegree_torus_d2_operator_identity_by_hand():
    # independent check of the contraction-pairing formula on the invariant
    # complex of the 2-torus model: d applied to a degree-1 representative
    # a = v1 l1 + v2 l2 must equal v1 u1 + v2 u2, and to l1 ^ l2 must equal
    # l2 u1 - l1 u2 (first-slot contraction).
    t = lie.abelian(2)
    a = gdiff.ce_gdiff(lie.ce_complex(t, lie.trivial_rep(t)))
    model = gdiff.cartan_model(a, 2)
    d = model.complex.d
    mons1 = list(model.mons[1])
    u1, u2 = mons1.index((1, 0)), mons1.index((0, 1))

    # degree 1 invariants = the two 1-forms; degree 2 = [l1^l2, u1, u2]
    fine2 = model.fine[2]
    assert [(n, m, k) for (n, m, k, _, _) in fine2] == [(2, 0, 1), (0, 1, 2)]
    for v1, v2 in ((1, 0), (0, 1), (3, -2)):
        out = d.apply(1, [v1, v2])
        expected = [0, 0, 0]
        expected[1 + u1] = v1
        expected[1 + u2] = v2
        assert out == expected

    # degree 3 invariants: only the block of 1-forms times linear monomials,
    # laid out as (form index) * 2 + (monomial index)
    fine3 = model.fine[3]
    assert [(n, m, k) for (n, m, k, _, _) in fine3] == [(1, 1, 4)]
    out = d.apply(2, [1, 0, 0])          # the top form l1 ^ l2
    expected = [0] * 4
    expected[1 * 2 + u1] = 1             # + l2 u1
    expected[0 * 2 + u2] = -1            # - l1 u2
    assert out == expected


def test_symdegree_point_circle_collapses_at_first_page():
    g = lie.abelian(1)
    space = core.GradedSpace.from_dims({0: 1})
    pt = core.CochainComplex.build(space, core.LinearMap.zero(space, space, 1))
    c = gdiff.trivial_action_gdiff(g, pt, unit=[1])
    model = gdiff.cartan_model(c, 2)
    fc = spectral.symdegree_filtration(model)
    pgs = spectral.pages(fc)
    expected = {(0, 0): 1, (2, 0): 1, (4, 0): 1}
    for pg in pgs[1:]:
        assert pg.cells == expected
        assert not pg.diffs
    assert pgs[-1].stable


def test_symdegree_su2_nontrivial_coefficients():
    g = lie.su2()
    a = gdiff.ce_gdiff(lie.ce_complex(g, lie.sym_power_rep(g, 2)))
    model = gdiff.cartan_model(a, 2)
    fc = spectral.symdegree_filtration(model)
    pgs = spectral.pages(fc)

    h = core.cohomology(a.complex)
    assert [h.dim(n) for n in range(4)] == [1, 0, 0, 1]
    expected = {(0, 0): 1, (0, 3): 1, (4, 0): 1, (4, 3): 1}
    assert pgs[1].cells == expected
    assert pgs[2].cells == expected
    assert spectral.verify_cartan_d2(model, pgs[2])["ok"]
    final = pgs[-1]
    assert final.stable
    eq = gdiff.equivariant_cohomology(a, 2)
    assert [final.antidiagonal(n) for n in range(5)] == eq.dims_list()


def test_contraction_filtration_su2_collapses_to_lie_cohomology():
    g = lie.su2()
    c = gdiff.ce_gdiff(lie.ce_complex(g, lie.trivial_rep(g)))
    fc = spectral.contraction_filtration(c)
    pgs = spectral.pages(fc)

    basic, _ = gdiff.basic_subcomplex(c)
    assert [basic.space.dim(n) for n in range(4)] == [1, 0, 0, 0]
    hg = lie.lie_cohomology(g, lie.trivial_rep(g))
    expected = {(0, q): hg.dims.get(q, 0) for q in range(4) if hg.dims.get(q, 0)}
    assert pgs[1].cells == expected
    assert pgs[2].cells == expected
    for pg in pgs[1:]:
        assert not pg.diffs
    final = pgs[-1]
    assert final.stable
    assert [final.antidiagonal(n) for n in range(4)] == [1, 0, 0, 1]


def test_contraction_filtration_weil_tensor_band():
    g = lie.su2()
    a = gdiff.ce_gdiff(lie.ce_complex(g, lie.trivial_rep(g)))
    w = gdiff.weil_algebra(g, 2)
    big, _ = gdiff.tensor_product(a, w.gdiff, check=False)
    fc = spectral.contraction_filtration(big)
    pgs = spectral.pages(fc)

    # first page: H^q(g) x basic cochain dims, all p
    basic, _ = gdiff.basic_subcomplex(big)
    hg = lie.lie_cohomology(g, lie.trivial_rep(g))
    expected1 = {}
    for p in range(12):
        for q in range(4):
            dim = hg.dims.get(q, 0) * basic.space.dim(p)
            if dim:
                expected1[(p, q)] = dim
    assert pgs[1].cells == expected1

    # second page inside the band: H^q(g) x equivariant dims of the factor
    eq = gdiff.equivariant_cohomology(a, 2)
    assert eq.dims_list() == [1, 0, 0, 0, 0]
    for p in range(5):
        for q in range(4):
            assert pgs[2].dim(p, q) == hg.dims.get(q, 0) * eq.dim(p)

    # the limit, inside the band, is the cohomology of the free factor
    final = pgs[-1]
    assert final.stable
    assert [final.antidiagonal(n) for n in range(5)] == [1, 0, 0, 1, 0]


def test_contraction_filtration_zero_contractions_degenerates():
    g = lie.su2()
    cx = small_complex()
    c = gdiff.trivial_action_gdiff(g, cx)
    fc = spectral.contraction_filtration(c)
    pgs = spectral.pages(fc)
    # zero contractions give the filtration by degree: the first page is the
    # cochain spaces along q = 0 with d_1 = d, the second page the cohomology
    assert pgs[1].cells == {(0, 0): 1, (1, 0): 2, (2, 0): 1}
    h = core.cohomology(cx)
    assert pgs[2].cells == {(p, 0): h.dim(p) for p in range(3) if h.dim(p)}
    assert pgs[-1].stable
