"""Momentum data and the equivariant side of the Poisson calculus: setup
validation with witnesses, the fiber-tangent subcomplex, the invariance
comparison on the contraction kernel, equivariant cohomology with subgroup
restriction, the low-degree descriptions, the contraction-depth spectral
sequence, and the sharp comparison between form and multivector models."""

from fractions import Fraction

import pytest

from equicoh import gdiff, lie, poisson as po
from equicoh.poly import PolyForm, PolyMultivector


def coord(ambient, j):
    return po.function(ambient, {tuple(1 if t == j else 0
                                       for t in range(ambient)): Fraction(1)})


def su2_momentum(submersive=True):
    g = lie.su2()
    p = po.linear_poisson(g)
    mu = [coord(3, j) for j in range(3)]
    return g, p, po.momentum_setup(p, g, mu=mu, submersive=submersive)


def circle_q2():
    sp = po.symplectic_poisson(1)
    mu = po.function(2, {(2, 0): Fraction(-1, 2), (0, 2): Fraction(-1, 2)})
    return sp, po.momentum_setup(sp, lie.abelian(1), mu=[mu])


# ---------------------------------------------------------------------------
# Setup and validation


def test_setup_lifts_and_anchors():
    g, p, md = su2_momentum()
    for j in range(3):
        expected = po.exterior_d(coord(3, j)).scale(-1)
        assert md.one_forms[j].sub(expected).is_zero()
        assert md.fields[j].sub(po.pi_sharp(p, md.one_forms[j])).is_zero()


def test_anchor_fields_reverse_brackets_and_preserve_the_structure():
    g, p, md = su2_momentum()
    assert po.schouten(md.fields[0], md.fields[1]).add(md.fields[2]).is_zero()
    for v in md.fields:
        assert po.d_pi(p, v).is_zero()


def test_setup_requires_mu_or_forms():
    sp = po.symplectic_poisson(1)
    with pytest.raises(ValueError):
        po.momentum_setup(sp, lie.abelian(1))


def test_quadratic_components_fail_the_reversal_check():
    g = lie.su2()
    p = po.linear_poisson(g)
    squares = [po.function(3, {tuple(2 if t == j else 0
                                     for t in range(3)): Fraction(1)})
               for j in range(3)]
    with pytest.raises(po.NotAntiHomomorphism) as exc:
        po.momentum_setup(p, g, mu=squares)
    assert "generators (0, 1)" in str(exc.value)


def test_wrong_declared_field_is_caught():
    sp = po.symplectic_poisson(1)
    mu = po.function(2, {(2, 0): Fraction(-1, 2), (0, 2): Fraction(-1, 2)})
    wrong = PolyMultivector(2, 1, {((0,), (0, 0)): Fraction(1)})
    with pytest.raises(po.MomentMismatch) as exc:
        po.momentum_setup(sp, lie.abelian(1), mu=[mu], action_fields=[wrong])
    assert "generator 0" in str(exc.value)


def test_exact_lifts_with_nonzero_cobracket_are_inconsistent():
    g, p, _ = su2_momentum()
    forms = [po.exterior_d(coord(3, j)).scale(-1) for j in range(3)]
    delta = ({(1, 2): Fraction(1)}, {}, {})
    bial = lie.Bialgebra(g, delta)
    with pytest.raises(po.DDeltaViolation) as exc:
        po.momentum_setup(p, g, one_forms=forms, cobracket=bial)
    assert "generator 0" in str(exc.value)


def test_nontrivial_cobracket_needs_explicit_forms():
    g, p, _ = su2_momentum()
    delta = ({(1, 2): Fraction(1)}, {}, {})
    bial = lie.Bialgebra(g, delta)
    with pytest.raises(ValueError):
        po.momentum_setup(p, g, mu=[coord(3, j) for j in range(3)],
                          cobracket=bial)


# ---------------------------------------------------------------------------
# The induced G-differential structure


def test_momentum_gdiff_slice_dims_and_axioms():
    _, _, md = su2_momentum()
    c, model = po.momentum_gdiff(md, slice_degree=2)
    assert [model.space.dim(q) for q in range(4)] == [6, 18, 18, 6]
    rep = gdiff.check_gdiff_axioms(c, check_product=False)
    assert rep.ok


def test_momentum_gdiff_contractions_negate_the_lifts():
    _, p, md = su2_momentum()
    c, model = po.momentum_gdiff(md, slice_degree=1)
    w = model.element(1, 0)
    expected = po.contract(md.one_forms[0].scale(-1), w)
    got = model.from_vector(0, [row[model.index[(1, model.basis[1][0])]]
                                for row in c.contractions[0].block(1)])
    assert got.sub(expected).is_zero()


# ---------------------------------------------------------------------------
# Fiber-tangent subcomplex and the invariance comparison


def test_tangent_space_on_even_slices_is_the_casimir_line():
    _, _, md = su2_momentum()
    for s, expected in [(0, (1,)), (2, (1, 0, 0, 0)), (3, (0, 0, 0, 0))]:
        rep = po.mu_tangent_complex(md, slice_degree=s)
        assert rep.dims[:len(expected)] == expected
        assert rep.cohomology_dims[:len(expected)] == expected


def test_zero_action_makes_everything_tangent():
    sp = po.symplectic_poisson(1)
    md = po.momentum_setup(sp, lie.abelian(1), mu=[po.function(2, {})])
    rep = po.mu_tangent_complex(md, slice_degree=2)
    model = po.poisson_complex(sp, slice_degree=2)
    assert rep.dims == tuple(model.space.dim(q) for q in range(3))


def test_module_action_equals_geometric_derivative_on_the_kernel():
    _, _, md = su2_momentum()
    out = po.invariance_comparison(md, slice_degree=2)
    assert set(out) == {0, 1, 2}
    compared = 0
    for per in out.values():
        for m1, m2 in per.values():
            assert m1 == m2
            compared += 1
    assert compared > 0


def test_invariance_comparison_circle_action():
    _, md = circle_q2()
    out = po.invariance_comparison(md, slice_degree=3)
    for per in out.values():
        for m1, m2 in per.values():
            assert m1 == m2


# ---------------------------------------------------------------------------
# Equivariant cohomology and subgroup restriction


def test_equivariant_dims_match_invariants_in_degree_zero():
    _, _, md = su2_momentum()
    for s in range(5):
        rep = po.equivariant_poisson_cohomology(md, sym_cap=2, slice_degree=s)
        inv = 1 if s % 2 == 0 else 0
        assert rep.cohomology.dim(0) == inv
        assert rep.invariant_function_dim == inv
        for n in range(1, rep.cohomology.band + 1):
            assert rep.cohomology.dim(n) == 0


def test_circle_restriction_factorizes():
    _, _, md = su2_momentum()
    for s in range(4):
        rep = po.equivariant_poisson_cohomology(md, sym_cap=2, slice_degree=s,
                                                generators=[2])
        inv = 1 if s % 2 == 0 else 0
        dims = [rep.cohomology.dim(n) for n in range(4)]
        assert dims == [inv, 0, inv, 0]


def test_low_degree_sides_agree():
    _, _, md = su2_momentum()
    for s in [0, 2, 3]:
        out = po.poisson_low_degree(md, sym_cap=2, slice_degree=s)
        assert out["h1_lie_vanishes"] is True
        assert out["h0_model"] == out["h0_direct"]
        assert out["h1_model"] == out["h1_direct"]


def test_low_degree_sides_agree_for_the_circle_action():
    _, md = circle_q2()
    for s in [0, 1, 2]:
        out = po.poisson_low_degree(md, sym_cap=2, slice_degree=s)
        assert out["h0_model"] == out["h0_direct"]
        assert out["h1_model"] == out["h1_direct"]


# ---------------------------------------------------------------------------
# The contraction-depth spectral sequence


def test_momentum_spectral_sequence_collapses_for_the_dual_slices():
    _, _, md = su2_momentum()
    ss = po.momentum_spectral_sequence(md, slice_degree=2)
    assert ss.e1_matches is True
    assert ss.e2_matches is True
    cells1 = {k: v for k, v in ss.pages[1].cells.items() if v}
    assert cells1 == {(0, 0): 1, (0, 3): 1}
    assert ss.predicted_e1 == cells1
    assert ss.predicted_e2 == cells1
    data = ss.to_json()
    assert data["first_differential_page"] == 0
    assert data["e1_matches"] is True


def test_circle_spectral_sequence_reports_no_predictions():
    _, md = circle_q2()
    ss = po.momentum_spectral_sequence(md, slice_degree=2)
    assert ss.predicted_e1 is None and ss.e1_matches is None
    # antidiagonal limits agree with the direct slice cohomology
    model = po.poisson_complex(po.symplectic_poisson(1), slice_degree=2)
    from equicoh.core import cohomology
    h = cohomology(model.complex)
    final = ss.pages[-1]
    for n in range(3):
        assert final.antidiagonal(n) == h.dim(n)


# ---------------------------------------------------------------------------
# Form models and the sharp comparison


def test_de_rham_model_needs_linear_fields():
    quad = PolyMultivector(2, 1, {((1,), (2, 0)): Fraction(1)})
    with pytest.raises(po.UnsupportedRegime):
        po.de_rham_gdiff(lie.abelian(1), [quad], slice_degree=2)


def test_de_rham_model_needs_one_field_per_generator():
    rot = PolyMultivector(2, 1, {((1,), (1, 0)): Fraction(1),
                                 ((0,), (0, 1)): Fraction(-1)})
    with pytest.raises(po.MomentMismatch):
        po.de_rham_gdiff(lie.abelian(2), [rot], slice_degree=2)


def test_de_rham_model_axioms_and_dims():
    rot = PolyMultivector(2, 1, {((1,), (1, 0)): Fraction(1),
                                 ((0,), (0, 1)): Fraction(-1)})
    c, model = po.de_rham_gdiff(lie.abelian(1), [rot], slice_degree=2)
    assert [model.space.dim(q) for q in range(3)] == [3, 4, 1]
    rep = gdiff.check_gdiff_axioms(c, check_product=False)
    assert rep.ok


def test_sharp_intertwines_the_circle_models():
    _, md = circle_q2()
    for s in range(4):
        rep = po.sharp_comparison(md, slice_degree=s, sym_cap=2)
        assert rep["d_intertwines"] is True
        assert rep["contraction_intertwines"] is True
        assert rep["invertible"] is True
        assert rep["tangent_matches_basic_image"] is True
        assert rep["equivariant_dims_agree"] is True
        if s > 0:
            assert rep["d_sign"] == -1


def test_sharp_comparison_torus_on_four_coordinates():
    sp = po.symplectic_poisson(2)
    mu = [po.function(4, {(2, 0, 0, 0): Fraction(-1, 2),
                          (0, 2, 0, 0): Fraction(-1, 2)}),
          po.function(4, {(0, 0, 2, 0): Fraction(-1, 2),
                          (0, 0, 0, 2): Fraction(-1, 2)})]
    md = po.momentum_setup(sp, lie.abelian(2), mu=mu)
    rep = po.sharp_comparison(md, slice_degree=2, sym_cap=1)
    assert rep["d_intertwines"] and rep["contraction_intertwines"]
    assert rep["invertible"] and rep["tangent_matches_basic_image"]
    assert rep["equivariant_dims_agree"] is True


def test_circle_equivariant_slice_zero_is_polynomial_in_the_generator():
    _, md = circle_q2()
    rep = po.equivariant_poisson_cohomology(md, sym_cap=2, slice_degree=0)
    assert [rep.cohomology.dim(n) for n in range(5)] == [1, 0, 1, 0, 1]
