from fractions import Fraction as F

import pytest

from equicoh import poly


def V(n, i):
    return poly.basis_vector(n, i)


def D(n, i):
    return poly.basis_form(n, i)


def X(n, i):
    return poly.coordinate(n, i)


def test_construction_normalizes_and_drops_zeros():
    w = poly.PolyMultivector(2, 1, [(((0,), (0, 0)), F(1)),
                                    (((0,), (0, 0)), F(-1))])
    assert w.is_zero()
    with pytest.raises(ValueError):
        poly.PolyMultivector(2, 2, {((1, 0), (0, 0)): F(1)})
    with pytest.raises(poly.AmbientMismatch):
        poly.PolyMultivector(2, 1, {((5,), (0, 0)): F(1)})
    with pytest.raises(poly.DegreeMismatch):
        poly.PolyMultivector(2, 1, {((0, 1), (0, 0)): F(1)})


def test_wedge_signs_and_nilpotence():
    n = 3
    a, b = D(n, 0), D(n, 1)
    assert poly.wedge(a, b) == poly.wedge(b, a).scale(-1)
    assert poly.wedge(a, a).is_zero()
    ab = poly.wedge(a, b)
    c = D(n, 2)
    assert poly.wedge(ab, c) == poly.wedge(a, poly.wedge(b, c))
    with pytest.raises(TypeError):
        poly.wedge(a, V(n, 0))
    with pytest.raises(poly.AmbientMismatch):
        poly.wedge(a, D(2, 0))


def test_exterior_d_products_and_square_zero():
    n = 2
    x, y = X(n, 0), X(n, 1)
    xy = poly.wedge(x, y)
    dxy = poly.exterior_d(xy)
    expect = poly.scale_by_function(y, D(n, 0)).add(
        poly.scale_by_function(x, D(n, 1)))
    assert dxy == expect
    # d(x^2 dy) = 2x dx^dy
    form = poly.scale_by_function(poly.wedge(x, x), D(n, 1))
    dd = poly.exterior_d(form)
    expect2 = poly.scale_by_function(x, poly.wedge(D(n, 0), D(n, 1))).scale(2)
    assert dd == expect2
    assert poly.exterior_d(dd).is_zero()
    mixed = poly.scale_by_function(poly.wedge(y, y), D(n, 0)).add(
        poly.scale_by_function(xy, D(n, 1)))
    assert poly.exterior_d(poly.exterior_d(mixed)).is_zero()


def test_pairing_identity_and_degree_guard():
    n = 3
    top_f = poly.wedge(poly.wedge(D(n, 0), D(n, 1)), D(n, 2))
    top_v = poly.wedge(poly.wedge(V(n, 0), V(n, 1)), V(n, 2))
    assert poly.pairing(top_f, top_v) == poly.constant(n, 1)
    f, g = X(n, 0), X(n, 1)
    lhs = poly.pairing(poly.scale_by_function(f, D(n, 0)),
                       poly.scale_by_function(g, V(n, 0)))
    assert lhs == poly.function(n, {(1, 1, 0): F(1)})
    with pytest.raises(poly.DegreeMismatch):
        poly.pairing(D(n, 0), top_v)


def _basis_forms(n, k):
    from itertools import combinations
    out = []
    for idx in combinations(range(n), k):
        out.append(poly.PolyForm(n, k, {(idx, (0,) * n): F(1)}))
    return out


def _basis_mvs(n, k):
    from itertools import combinations
    out = []
    for idx in combinations(range(n), k):
        out.append(poly.PolyMultivector(n, k, {(idx, (0,) * n): F(1)}))
    return out


def test_contract_examples_and_adjunction():
    n = 2
    e01 = poly.wedge(V(n, 0), V(n, 1))
    assert poly.contract(D(n, 0), e01) == V(n, 1)
    assert poly.contract(D(n, 1), e01) == V(n, 0).scale(-1)
    assert poly.contract(poly.wedge(D(n, 0), D(n, 1)), e01) == poly.constant(n, 1)
    assert poly.contract(poly.wedge(D(n, 0), D(n, 1)), V(n, 0)).is_zero()
    # <beta, i_alpha w> = <alpha ^ beta, w> across a full basis sweep
    n = 3
    for s in range(0, 3):
        for q in range(s, 4):
            for alpha in _basis_forms(n, s):
                for w in _basis_mvs(n, q):
                    for beta in _basis_forms(n, q - s):
                        lhs = poly.pairing(beta, poly.contract(alpha, w))
                        rhs = poly.pairing(poly.wedge(alpha, beta), w)
                        assert lhs == rhs


def test_contract_form_adjunction():
    n = 3
    for s in range(0, 3):
        for p in range(s, 4):
            for v in _basis_mvs(n, s):
                for beta in _basis_forms(n, p):
                    for w in _basis_mvs(n, p - s):
                        lhs = poly.pairing(poly.contract_form(v, beta), w)
                        rhs = poly.pairing(beta, poly.wedge(v, w))
                        assert lhs == rhs


def test_interior_is_antiderivation():
    n = 3
    v = V(n, 1)
    for k in (1, 2):
        for a1 in _basis_forms(n, k):
            for a2 in _basis_forms(n, 1):
                lhs = poly.contract_form(v, poly.wedge(a1, a2))
                rhs = poly.wedge(poly.contract_form(v, a1), a2).add(
                    poly.wedge(a1, poly.contract_form(v, a2)).scale((-1) ** k))
                assert lhs == rhs


def test_slot_sum_matches_contraction_on_one_forms():
    # folding the slot-sum tensor of a 1-form reproduces the interior product
    n = 3
    x = X(n, 0)
    samples = [
        poly.wedge(V(n, 0), V(n, 1)),
        poly.wedge(poly.scale_by_function(x, V(n, 0)), V(n, 2)),
        poly.wedge(poly.wedge(V(n, 0), V(n, 1)), V(n, 2)),
    ]
    alphas = [D(n, 0), poly.scale_by_function(x, D(n, 1)), D(n, 2)]
    for w in samples:
        for alpha in alphas:
            t = poly.tilde_i(w, alpha)
            folded = poly.tensor_fold_functions(t, n, w.degree - 1)
            assert folded == poly.contract(alpha, w)


def test_tensor_helpers():
    n = 2
    beta = D(n, 1)
    w = V(n, 0)
    t = poly.tensor_from_pair(beta, w)
    assert t == {((1,), (0,), (0, 0)): F(1)}
    t2 = poly.tensor_lwedge(D(n, 0), t)
    assert t2 == {((0, 1), (0,), (0, 0)): F(1)}
    assert poly.tensor_is_zero(poly.tensor_add(t, poly.tensor_scale(t, -1)))


def test_vector_field_application():
    n = 2
    x, y = X(n, 0), X(n, 1)
    vf = poly.scale_by_function(x, V(n, 1))  # x d/dy
    yy = poly.wedge(y, y)
    assert poly.apply_vector_field(vf, yy) == poly.function(
        n, {(1, 1): F(2)})
    assert poly.apply_vector_field(vf, x).is_zero()


def test_function_conversions():
    n = 2
    f = poly.function(n, {(2, 0): F(1, 2)})
    g = poly.as_multivector(poly.as_form(f))
    assert g == f
    with pytest.raises(poly.DegreeMismatch):
        poly.as_form(V(n, 0))
