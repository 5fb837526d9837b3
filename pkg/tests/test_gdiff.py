"""G-differential complexes: axioms, Weil algebras, Cartan models,
the twisted embedding into the basic subcomplex, connections."""

import pytest

from equicoh import core, gdiff, lie, ratlin as rl


def su2_ce():
    g = lie.su2()
    return g, gdiff.ce_gdiff(lie.ce_complex(g, lie.trivial_rep(g)))


def test_ce_gdiff_axioms_pass():
    for g in (lie.su2(), lie.heisenberg(), lie.abelian(2)):
        c = gdiff.ce_gdiff(lie.ce_complex(g, lie.trivial_rep(g)))
        report = gdiff.check_gdiff_axioms(c)
        assert report.ok
        assert c.product is not None and c.unit is not None


def test_axiom_checker_catches_scaled_contraction():
    g, a = su2_ce()
    bad = list(a.contractions)
    bad[1] = bad[1].scale(2)
    with pytest.raises(gdiff.AxiomFailure) as exc:
        gdiff.build_gdiff(g, a.complex, bad, a.lie_ops,
                          product=a.product, unit=a.unit)
    report = exc.value.args[0]
    axioms = {f["axiom"] for f in report.failures}
    assert "iii" in axioms or "ii'" in axioms
    witness = report.failures[0]
    assert "degree" in witness and "basis_index" in witness


def test_weil_acyclic_and_basic_su2():
    g = lie.su2()
    for cap in (1, 2, 3):
        w = gdiff.weil_algebra(g, cap)
        h = core.cohomology(w.gdiff.complex)
        assert h.dim(0) == 1
        for n in range(1, 2 * cap + 1):
            assert h.dim(n) == 0
        basic, _ = gdiff.basic_subcomplex(w.gdiff)
        # invariant polynomials of su(2): powers of the quadratic Casimir
        expected = [1 if (n % 4 == 0 and n // 2 <= cap) else 0
                    for n in range(2 * cap + 1)]
        assert [basic.space.dim(n) for n in range(2 * cap + 1)] == expected
        assert basic.d.is_zero()


def test_weil_acyclic_and_basic_torus():
    t = lie.abelian(2)
    for cap in (1, 2):
        w = gdiff.weil_algebra(t, cap)
        h = core.cohomology(w.gdiff.complex)
        assert [h.dim(n) for n in range(2 * cap + 1)] == \
            [1] + [0] * (2 * cap)
        basic, _ = gdiff.basic_subcomplex(w.gdiff)
        dims = [basic.space.dim(n) for n in range(2 * cap + 1)]
        assert dims == [m // 2 + 1 if m % 2 == 0 else 0
                        for m in range(2 * cap + 1)]
        assert basic.d.is_zero()


def test_weil_product_axioms():
    w = gdiff.weil_algebra(lie.su2(), 2)
    report = gdiff.check_gdiff_axioms(w.gdiff)
    assert report.ok


def test_equivariant_point_is_invariant_polynomials():
    g = lie.su2()
    space = core.GradedSpace.from_dims({0: 1})
    pt = core.CochainComplex.build(space, core.LinearMap.zero(space, space, 1))
    c = gdiff.trivial_action_gdiff(g, pt, unit=[1])
    eq = gdiff.equivariant_cohomology(c, 2)
    assert eq.dims_list() == [1, 0, 0, 0, 1]
    assert eq.band == 4
    assert eq.reliable(4) and not eq.reliable(5)


def test_equivariant_su2_on_itself_is_trivial():
    _, a = su2_ce()
    eq = gdiff.equivariant_cohomology(a, 2)
    assert eq.dims_list() == [1, 0, 0, 0, 0]


def test_equivariant_torus_on_itself_is_trivial():
    t = lie.abelian(2)
    a = gdiff.ce_gdiff(lie.ce_complex(t, lie.trivial_rep(t)))
    eq = gdiff.equivariant_cohomology(a, 2)
    assert eq.dims_list() == [1, 0, 0, 0, 0]


def test_equivariant_circle_in_su2_gives_sphere():
    g = lie.su2()
    ce = lie.ce_complex(g, lie.trivial_rep(g))
    sub = lie.build_subalgebra(g, [[0, 0, 1]])
    ak = gdiff.ce_gdiff(ce, acting=sub)
    assert ak.algebra.dim == 1
    eq = gdiff.equivariant_cohomology(ak, 2)
    assert eq.dims_list() == [1, 0, 1, 0, 0]


def test_trivial_factor_keeps_low_degrees_nonzero():
    g, a = su2_ce()
    t = lie.abelian(2)
    lam2 = lie.ce_complex(t, lie.trivial_rep(t)).complex
    free2 = gdiff.trivial_action_gdiff(g, lam2,
                                       product=gdiff.wedge_product_table(2),
                                       unit=[1])
    big, _ = gdiff.tensor_product(a, free2)
    h = core.cohomology(big.complex)
    assert [h.dim(n) for n in range(6)] == [1, 2, 1, 1, 2, 1]
    eq = gdiff.equivariant_cohomology(big, 2)
    assert eq.dims_list() == [1, 2, 1, 0, 0]


def test_twisted_inclusion_su2():
    g, a = su2_ce()
    for cap in (1, 2):
        w = gdiff.weil_algebra(g, cap)
        model = gdiff.cartan_model(a, cap)
        tw = gdiff.cartan_weil_inclusion(model, w)   # verifies internally
        basic, _ = gdiff.basic_subcomplex(tw.tensor)
        top = 2 * cap + 2
        assert [basic.space.dim(n) for n in range(top)] == \
            [model.complex.space.dim(n) for n in range(top)]
        hb = core.cohomology(basic)
        hc = core.cohomology(model.complex)
        assert [hb.dim(n) for n in range(2 * cap + 1)] == \
            [hc.dim(n) for n in range(2 * cap + 1)]


def test_twisted_inclusion_rejects_wrong_sign():
    g, a = su2_ce()
    w = gdiff.weil_algebra(g, 1)
    model = gdiff.cartan_model(a, 1)
    with pytest.raises(gdiff.AxiomFailure):
        gdiff.cartan_weil_inclusion(model, w, variant=(1, 0, 0))


def test_twisted_inclusion_nontrivial_coefficients():
    g = lie.su2()
    a = gdiff.ce_gdiff(lie.ce_complex(g, lie.sym_power_rep(g, 2)))
    w = gdiff.weil_algebra(g, 1)
    model = gdiff.cartan_model(a, 1)
    tw = gdiff.cartan_weil_inclusion(model, w)
    basic, _ = gdiff.basic_subcomplex(tw.tensor)
    hb = core.cohomology(basic)
    hc = core.cohomology(model.complex)
    assert [hb.dim(n) for n in range(3)] == [hc.dim(n) for n in range(3)]


def test_maurer_cartan_connection_is_flat():
    g, a = su2_ce()
    conn = gdiff.locally_free_connection(a)
    assert conn.exists
    assert conn.theta == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    um = gdiff.weil_universal_map(gdiff.weil_algebra(g, 2), a, conn.theta)
    assert um.curvature == ((0, 0, 0), (0, 0, 0), (0, 0, 0))


def test_no_connection_for_trivial_action():
    g = lie.su2()
    t = lie.abelian(2)
    lam2 = lie.ce_complex(t, lie.trivial_rep(t)).complex
    triv = gdiff.trivial_action_gdiff(g, lam2,
                                      product=gdiff.wedge_product_table(2),
                                      unit=[1])
    assert not gdiff.locally_free_connection(triv).exists


def test_circle_connection_in_su2():
    g = lie.su2()
    ce = lie.ce_complex(g, lie.trivial_rep(g))
    sub = lie.build_subalgebra(g, [[0, 0, 1]])
    ak = gdiff.ce_gdiff(ce, acting=sub)
    conn = gdiff.locally_free_connection(ak)
    assert conn.exists and conn.theta == ((0, 0, 1),)


def test_universal_map_rejects_non_connection():
    g, a = su2_ce()
    w = gdiff.weil_algebra(g, 1)
    bad_theta = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    with pytest.raises(gdiff.ConnectionInvalid):
        gdiff.weil_universal_map(w, a, bad_theta)


def test_universal_map_needs_product():
    g = lie.su2()
    a = gdiff.ce_gdiff(lie.ce_complex(g, lie.sym_power_rep(g, 2)))
    w = gdiff.weil_algebra(g, 1)
    with pytest.raises(gdiff.NotMultiplicative):
        gdiff.weil_universal_map(w, a, [[1, 0, 0]] * 3)


def test_tensor_rejects_mismatched_algebras():
    _, a = su2_ce()
    h = lie.heisenberg()
    b = gdiff.ce_gdiff(lie.ce_complex(h, lie.trivial_rep(h)))
    with pytest.raises(gdiff.MismatchedAlgebra):
        gdiff.tensor_product(a, b)


def test_short_exact_sequence_euler_characteristic():
    g = lie.su2()
    w = gdiff.weil_algebra(g, 2)
    wsp = w.gdiff.space
    spans = {}
    for deg in wsp.degrees():
        labs = wsp.labels(deg)
        cols = []
        for i, lab in enumerate(labs):
            if sum(lab[2]) >= 1:   # positive symmetric degree
                v = [0] * len(labs)
                v[i] = 1
                cols.append(v)
        spans[deg] = rl.mat_from_columns(cols, nrows=len(labs))
    subsp = core.Subspace.from_spans(wsp, spans)
    b = gdiff.sub_gdiff(w.gdiff, subsp)
    c, _ = gdiff.quotient_gdiff(w.gdiff, subsp)
    # the quotient is the exterior algebra of the dual
    assert [c.space.dim(n) for n in range(4)] == [1, 3, 3, 1]
    eq_b = gdiff.equivariant_cohomology(b, 1)
    eq_a = gdiff.equivariant_cohomology(w.gdiff, 1)
    eq_c = gdiff.equivariant_cohomology(c, 1)
    degs = sorted(set(eq_a.model.complex.space.degrees())
                  | set(eq_b.model.complex.space.degrees())
                  | set(eq_c.model.complex.space.degrees()))
    for n in degs:
        assert (eq_b.model.complex.space.dim(n) + eq_c.model.complex.space.dim(n)
                == eq_a.model.complex.space.dim(n))
    chi = sum((-1) ** n * (eq_b.cohomology.dim(n) - eq_a.cohomology.dim(n)
                           + eq_c.cohomology.dim(n)) for n in degs)
    assert chi == 0


def test_twisted_inclusion_injective_each_degree():
    g, a = su2_ce()
    w = gdiff.weil_algebra(g, 1)
    model = gdiff.cartan_model(a, 1)
    tw = gdiff.cartan_weil_inclusion(model, w)
    assert not tw.inclusion.is_zero()
    for deg in model.complex.space.degrees():
        if model.complex.space.dim(deg):
            blk = tw.inclusion.block(deg)
            assert rl.rank(blk) == model.complex.space.dim(deg)


def test_low_degree_descriptions_su2():
    g, a = su2_ce()
    data = gdiff.low_degree_data(a)
    assert data["h0_model"] == data["h0_kernel"] == 1
    assert data["kernel_invariant"]
    assert data["closed_invariant_is_horizontal"]
    assert data["h1_model"] == data["h1_direct"] == 0


def test_low_degree_descriptions_product():
    g, a = su2_ce()
    t = lie.abelian(2)
    lam2 = lie.ce_complex(t, lie.trivial_rep(t)).complex
    free2 = gdiff.trivial_action_gdiff(g, lam2,
                                       product=gdiff.wedge_product_table(2),
                                       unit=[1])
    big, _ = gdiff.tensor_product(a, free2)
    data = gdiff.low_degree_data(big)
    assert data["h0_model"] == data["h0_kernel"] == 1
    assert data["kernel_invariant"]
    assert data["closed_invariant_is_horizontal"]
    assert data["h1_model"] == data["h1_direct"] == 2


def test_forgetful_map_iso_degree_one_epi_degree_two():
    g, a = su2_ce()
    t = lie.abelian(2)
    lam2 = lie.ce_complex(t, lie.trivial_rep(t)).complex
    free2 = gdiff.trivial_action_gdiff(g, lam2,
                                       product=gdiff.wedge_product_table(2),
                                       unit=[1])
    big, _ = gdiff.tensor_product(a, free2)
    model = gdiff.cartan_model(big, 2)
    fm = gdiff.forgetful_matrices(model, up_to=2)
    h = core.cohomology(big.complex)
    # degree 1: bijective, degree 2: surjective onto ordinary cohomology
    assert rl.ncols(fm[1]) == len(fm[1]) == 2 and rl.rank(fm[1]) == 2
    assert rl.rank(fm[2]) == h.dim(2) == 1
    assert rl.rank(fm[0]) == 1
