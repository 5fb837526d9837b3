import random

import pytest

from equicoh import ratlin as rl
from equicoh.core import (CochainComplex, DifferentialNotSquareZero, GradedSpace,
                          LinearMap, NotContained, NotReductive, Subspace,
                          cohomology, homotopy_witness, invariant_projection,
                          map_image, map_kernel, rank_kernel_image, subquotient)


def small_complex():
    # 0 -> Q^2 -> Q^2 -> Q -> 0 with d0 = e1* , d1 = projection to e2
    sp = GradedSpace.from_dims({0: 2, 1: 2, 2: 1})
    d = LinearMap.from_blocks(sp, sp, 1, {
        0: [[1, 0], [0, 0]],
        1: [[0, 1]],
    })
    return CochainComplex.build(sp, d)


def test_cohomology_small():
    c = small_complex()
    h = cohomology(c)
    assert h.dims_list(0, 2) == [1, 0, 0]
    # representative of H^0 is the canonical kernel vector (0,1)
    assert h.reps[0] == [[0], [1]]


def test_d_square_zero_enforced():
    sp = GradedSpace.from_dims({0: 1, 1: 1, 2: 1})
    d = LinearMap.from_blocks(sp, sp, 1, {0: [[1]], 1: [[1]]})
    with pytest.raises(DifferentialNotSquareZero):
        CochainComplex.build(sp, d)


def test_rank_kernel_image():
    c = small_complex()
    r, ker, img = rank_kernel_image(c.d, 0)
    assert r == 1
    assert rl.ncols(ker) == 1
    assert rl.ncols(img) == 1
    assert rl.is_zero(rl.mat_mul(c.d.block(0), ker))


def test_cohomology_invariant_under_basis_permutation():
    rng = random.Random(5)
    c = small_complex()
    base = cohomology(c).dims
    for _ in range(10):
        perms = {}
        mats = {}
        for n in c.space.degrees():
            p = list(range(c.space.dim(n)))
            rng.shuffle(p)
            perms[n] = p
            m = rl.zeros(len(p), len(p))
            for i, pi in enumerate(p):
                m[pi][i] = 1
            mats[n] = m
        blocks = {}
        for n in c.space.degrees():
            if c.space.dim(n + 1):
                inv = rl.solve(mats[n + 1], rl.identity(c.space.dim(n + 1)))
                blocks[n] = rl.mat_mul(rl.mat_mul(inv, c.d.block(n)), mats[n])
        d2 = LinearMap.from_blocks(c.space, c.space, 1, blocks)
        assert cohomology(CochainComplex.build(c.space, d2)).dims == base


def test_subquotient_and_projection():
    sp = GradedSpace.from_dims({0: 3})
    z = Subspace.from_spans(sp, {0: rl.mat_from_columns([[1, 0, 0], [0, 1, 0]], nrows=3)})
    b = Subspace.from_spans(sp, {0: rl.mat_from_columns([[1, 0, 0]], nrows=3)})
    sq = subquotient(z, b)
    assert sq.dim(0) == 1
    # [e1 + e2] = [e2]
    assert sq.project(0, [1, 1, 0]) == [1]
    assert sq.project(0, [1, 0, 0]) == [0]


def test_subquotient_not_contained():
    sp = GradedSpace.from_dims({0: 2})
    z = Subspace.from_spans(sp, {0: rl.mat_from_columns([[1, 0]], nrows=2)})
    b = Subspace.from_spans(sp, {0: rl.mat_from_columns([[0, 1]], nrows=2)})
    with pytest.raises(NotContained):
        subquotient(z, b)


def test_homotopy_witness_contract():
    c = small_complex()
    for n in [1, 2]:
        h = homotopy_witness(c, n)
        img = map_image(c.d).matrix(n)
        if rl.ncols(img):
            dh = rl.mat_mul(c.d.block(n - 1), h.block(n))
            assert rl.mat_eq(rl.mat_mul(dh, img), img)
        # d o H o d = d in degree n-1
        lhs = rl.mat_mul(rl.mat_mul(c.d.block(n - 1), h.block(n)), c.d.block(n - 1))
        assert rl.mat_eq(lhs, c.d.block(n - 1))


def test_invariant_projection_rotation():
    sp = GradedSpace.from_dims({0: 3})
    rot = LinearMap.from_blocks(sp, sp, 0, {0: [[0, -1, 0], [1, 0, 0], [0, 0, 0]]})
    ip = invariant_projection(sp, [rot])
    assert ip.subspace.dim(0) == 1
    p = ip.projector.block(0)
    assert rl.mat_eq(rl.mat_mul(p, p), p)
    assert rl.is_zero(rl.mat_mul(p, rot.block(0)))
    assert rl.is_zero(rl.mat_mul(rot.block(0), p))


def test_invariant_projection_not_reductive():
    sp = GradedSpace.from_dims({0: 2})
    nil = LinearMap.from_blocks(sp, sp, 0, {0: [[0, 1], [0, 0]]})
    with pytest.raises(NotReductive):
        invariant_projection(sp, [nil])


def test_map_kernel_image_subspaces():
    c = small_complex()
    k = map_kernel(c.d)
    i = map_image(c.d)
    assert k.dim(0) == 1 and k.dim(1) == 1 and k.dim(2) == 1
    assert i.dim(1) == 1 and i.dim(2) == 1
    assert k.contains(i)
