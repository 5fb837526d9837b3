"""Graded vector spaces, graded linear maps, cochain complexes and exact
subquotients over the rationals.

Degrees are integers; every graded object is finitely supported.  All values
are immutable after construction, so they can be shared freely.  Every basis
this module produces (kernels, images, cohomology representatives, quotient
representatives) comes out of canonical reduced echelon forms and is
therefore deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import ratlin as rl


class DifferentialNotSquareZero(Exception):
    """d composed with d has a nonzero block; carries (degree, matrix)."""


class NotContained(Exception):
    """Subquotient requested for spans without the required inclusion."""


class NotReductive(Exception):
    """Joint kernel of the operators meets the sum of their images."""


def _freeze_matrix(m):
    return tuple(tuple(rl.q(x) for x in row) for row in m)


def _thaw(m):
    return [list(row) for row in m]


@dataclass(frozen=True)
class GradedSpace:
    """Finitely supported graded space: degree -> ordered basis labels."""

    components: tuple  # tuple of (degree, tuple(labels)) sorted by degree

    @staticmethod
    def from_dims(dims: Mapping[int, int], prefix: str = "b") -> "GradedSpace":
        comps = []
        for n in sorted(dims):
            if dims[n]:
                comps.append((n, tuple(f"{prefix}{n}.{i}" for i in range(dims[n]))))
        return GradedSpace(tuple(comps))

    @staticmethod
    def from_labels(labels: Mapping[int, Sequence]) -> "GradedSpace":
        comps = []
        for n in sorted(labels):
            if len(labels[n]):
                comps.append((n, tuple(labels[n])))
        return GradedSpace(tuple(comps))

    def dim(self, n: int) -> int:
        for deg, labels in self.components:
            if deg == n:
                return len(labels)
        return 0

    def labels(self, n: int) -> tuple:
        for deg, labels in self.components:
            if deg == n:
                return labels
        return ()

    def degrees(self) -> list:
        return [deg for deg, _ in self.components]

    def total_dim(self) -> int:
        return sum(len(labels) for _, labels in self.components)

    def dims(self) -> dict:
        return {deg: len(labels) for deg, labels in self.components}


@dataclass(frozen=True)
class LinearMap:
    """Degree-homogeneous linear map between graded spaces.

    blocks[n] maps the degree-n component of source to degree n+shift of
    target; rows index target basis, columns source basis.  Blocks are stored
    only where both dimensions are positive."""

    source: GradedSpace
    target: GradedSpace
    shift: int
    blocks: tuple  # tuple of (degree, frozen matrix)

    @staticmethod
    def from_blocks(source, target, shift, blocks: Mapping[int, Sequence]) -> "LinearMap":
        frozen = []
        for n in sorted(blocks):
            m = blocks[n]
            sd, td = source.dim(n), target.dim(n + shift)
            if sd == 0 or td == 0:
                if m and not rl.is_zero(m):
                    raise ValueError(f"block at degree {n} maps between zero spaces")
                continue
            if len(m) != td or any(len(row) != sd for row in m):
                raise ValueError(
                    f"block at degree {n} has shape {len(m)}x{len(m[0]) if m else 0}, "
                    f"expected {td}x{sd}")
            fm = _freeze_matrix(m)
            if any(any(row) for row in fm):
                frozen.append((n, fm))
        return LinearMap(source, target, shift, tuple(frozen))

    @staticmethod
    def zero(source, target, shift) -> "LinearMap":
        return LinearMap(source, target, shift, ())

    @staticmethod
    def identity(space) -> "LinearMap":
        blocks = {n: rl.identity(space.dim(n)) for n in space.degrees()}
        return LinearMap.from_blocks(space, space, 0, blocks)

    def block(self, n: int):
        """Dense block at degree n (zeros if absent)."""
        for deg, m in self.blocks:
            if deg == n:
                return _thaw(m)
        return rl.zeros(self.target.dim(n + self.shift), self.source.dim(n))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self o other (apply other first)."""
        assert other.target is self.source or other.target == self.source, \
            "composition source/target mismatch"
        blocks = {}
        for n, m in other.blocks:
            mine = self.block(n + other.shift)
            if mine and mine[0]:
                prod = rl.mat_mul(mine, _thaw(m))
                if not rl.is_zero(prod):
                    blocks[n] = prod
        return LinearMap.from_blocks(other.source, self.target,
                                     self.shift + other.shift, blocks)

    def add(self, other: "LinearMap") -> "LinearMap":
        assert self.shift == other.shift and self.source == other.source \
            and self.target == other.target
        degs = {n for n, _ in self.blocks} | {n for n, _ in other.blocks}
        blocks = {n: rl.mat_add(self.block(n), other.block(n)) for n in degs}
        return LinearMap.from_blocks(self.source, self.target, self.shift, blocks)

    def scale(self, s) -> "LinearMap":
        blocks = {n: rl.mat_scale(_thaw(m), s) for n, m in self.blocks}
        return LinearMap.from_blocks(self.source, self.target, self.shift, blocks)

    def sub(self, other: "LinearMap") -> "LinearMap":
        return self.add(other.scale(-1))

    def is_zero(self) -> bool:
        return not self.blocks

    def equals(self, other: "LinearMap") -> bool:
        return self.shift == other.shift and self.sub(other).is_zero()

    def apply(self, n: int, vec: Sequence):
        """Apply to a degree-n coordinate vector; returns degree n+shift vector."""
        b = self.block(n)
        if not b or not b[0]:
            return [0] * self.target.dim(n + self.shift)
        return [row[0] for row in rl.mat_mul(b, [[x] for x in vec])]


def commutator(a: LinearMap, b: LinearMap) -> LinearMap:
    return a.compose(b).sub(b.compose(a))


def anticommutator(a: LinearMap, b: LinearMap) -> LinearMap:
    return a.compose(b).add(b.compose(a))


@dataclass(frozen=True)
class CochainComplex:
    """Graded space with a square-zero degree +1 differential."""

    space: GradedSpace
    d: LinearMap

    @staticmethod
    def build(space: GradedSpace, d: LinearMap) -> "CochainComplex":
        assert d.shift == 1
        dd = d.compose(d)
        if not dd.is_zero():
            n, m = dd.blocks[0]
            raise DifferentialNotSquareZero((n, _thaw(m)))
        return CochainComplex(space, d)

    def degrees(self):
        return self.space.degrees()


@dataclass(frozen=True)
class Subspace:
    """Graded subspace stored per degree in reduced column echelon form."""

    ambient: GradedSpace
    basis: tuple  # tuple of (degree, frozen matrix whose columns span)

    @staticmethod
    def from_spans(ambient: GradedSpace, spans: Mapping[int, Sequence]) -> "Subspace":
        basis = []
        for n in sorted(spans):
            m = spans[n]
            if not m or not len(m[0]):
                continue
            if len(m) != ambient.dim(n):
                raise ValueError(f"span at degree {n} has {len(m)} rows, "
                                 f"ambient dim is {ambient.dim(n)}")
            ech, _ = rl.column_echelon([list(row) for row in m])
            if rl.ncols(ech):
                basis.append((n, _freeze_matrix(ech)))
        return Subspace(ambient, tuple(basis))

    @staticmethod
    def full(ambient: GradedSpace) -> "Subspace":
        return Subspace.from_spans(
            ambient, {n: rl.identity(ambient.dim(n)) for n in ambient.degrees()})

    @staticmethod
    def zero(ambient: GradedSpace) -> "Subspace":
        return Subspace(ambient, ())

    def matrix(self, n: int):
        for deg, m in self.basis:
            if deg == n:
                return _thaw(m)
        return rl.zeros(self.ambient.dim(n), 0)

    def dim(self, n: int) -> int:
        for deg, m in self.basis:
            if deg == n:
                return len(m[0]) if m else 0
        return 0

    def dims(self) -> dict:
        return {deg: len(m[0]) for deg, m in self.basis}

    def total_dim(self) -> int:
        return sum(len(m[0]) for _, m in self.basis)

    def contains(self, other: "Subspace") -> bool:
        for n, _ in other.basis:
            if self.ambient.dim(n) == 0:
                continue
            if not rl.span_contains(self.matrix(n), other.matrix(n)):
                return False
        return True

    def add(self, other: "Subspace") -> "Subspace":
        degs = {n for n, _ in self.basis} | {n for n, _ in other.basis}
        return Subspace.from_spans(
            self.ambient,
            {n: rl.hstack(self.matrix(n), other.matrix(n)) for n in degs})

    def intersect(self, other: "Subspace") -> "Subspace":
        degs = {n for n, _ in self.basis} & {n for n, _ in other.basis}
        return Subspace.from_spans(
            self.ambient,
            {n: rl.intersect_spans(self.matrix(n), other.matrix(n)) for n in degs})

    def equals(self, other: "Subspace") -> bool:
        return self.contains(other) and other.contains(self)


def map_kernel(m: LinearMap) -> Subspace:
    spans = {}
    for n in m.source.degrees():
        sd = m.source.dim(n)
        td = m.target.dim(n + m.shift)
        if td == 0:
            spans[n] = rl.identity(sd)
        else:
            spans[n] = rl.kernel(m.block(n))
    return Subspace.from_spans(m.source, spans)


def map_image(m: LinearMap) -> Subspace:
    spans = {}
    for n, blk in m.blocks:
        ech, _ = rl.column_echelon(_thaw(blk))
        spans[n + m.shift] = ech
    return Subspace.from_spans(m.target, spans)


def image_of_subspace(m: LinearMap, sub: Subspace) -> Subspace:
    spans = {}
    for n, _ in sub.basis:
        blk = m.block(n)
        if blk and blk[0]:
            spans[n + m.shift] = rl.mat_mul(blk, sub.matrix(n))
    return Subspace.from_spans(m.target, spans)


def preimage_in_subspace(m: LinearMap, domain: Subspace, target_sub: Subspace) -> Subspace:
    """{x in domain : m(x) in target_sub}, degreewise."""
    spans = {}
    for n, _ in domain.basis:
        b = domain.matrix(n)
        td = m.target.dim(n + m.shift)
        if td == 0:
            spans[n] = b
            continue
        mb = rl.mat_mul(m.block(n), b)
        t = target_sub.matrix(n + m.shift)
        aug = rl.hstack(mb, t)
        ker = rl.kernel(aug)
        kb = rl.ncols(b)
        coeffs = [col[:kb] for col in rl.columns(ker)]
        if not coeffs:
            continue
        vecs = rl.mat_mul(b, rl.mat_from_columns(coeffs, nrows=kb))
        spans[n] = vecs
    return Subspace.from_spans(m.source, spans)


def rank_kernel_image(m: LinearMap, degree: int):
    """(rank, kernel columns, image columns) of the block at `degree`.
    Verifies rank-nullity before returning."""
    blk = m.block(degree)
    sd = m.source.dim(degree)
    td = m.target.dim(degree + m.shift)
    if sd == 0:
        return 0, [], []
    if td == 0:
        return 0, rl.identity(sd), []
    ker = rl.kernel(blk)
    img, _ = rl.column_echelon(blk)
    r = rl.ncols(img)
    assert r + rl.ncols(ker) == sd, "rank-nullity violated"
    return r, ker, img


@dataclass(frozen=True)
class SubquotientResult:
    """z/b: dims, canonical representatives (columns per degree, living in
    the ambient space) and the data needed to project z onto the quotient."""

    ambient: GradedSpace
    dims: dict
    reps: dict       # degree -> ambient-coordinate columns, one per class
    _den: dict       # degree -> denominator basis (columns)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def project(self, n: int, vec: Sequence):
        """Coordinates of [vec] in the chosen representative basis.
        vec must lie in z (ambient coordinates)."""
        den = self._den.get(n, rl.zeros(len(vec), 0))
        reps = self.reps.get(n, rl.zeros(len(vec), 0))
        aug = rl.hstack(den, reps)
        if not aug or not aug[0]:
            if any(vec):
                raise NotContained(f"vector not in the subquotient at degree {n}")
            return []
        sol = rl.solve_vec(aug, list(vec))
        if sol is None:
            raise NotContained(f"vector not in the subquotient at degree {n}")
        return sol[rl.ncols(den):]


def subquotient(z: Subspace, b: Subspace) -> SubquotientResult:
    """Form z/b.  Raises NotContained (with a witness degree) if b is not
    inside z.  Representatives are the canonical kernel/echelon columns of z
    that extend a basis of b, so repeated runs agree exactly."""
    if not z.contains(b):
        for n, _ in b.basis:
            if not rl.span_contains(z.matrix(n), b.matrix(n)):
                raise NotContained(f"denominator escapes numerator at degree {n}")
        raise NotContained("denominator escapes numerator")
    dims, reps, dens = {}, {}, {}
    degs = sorted({n for n, _ in z.basis} | {n for n, _ in b.basis})
    for n in degs:
        zb = z.matrix(n)
        bb = b.matrix(n)
        dens[n] = bb
        k = rl.ncols(bb)
        # pivot columns of [b | z] are the greedy left-to-right independent
        # set, so the pivots landing in the z-part are the canonical
        # representatives completing a basis of b.
        _, pivots = rl.rref(rl.hstack(bb, zb))
        chosen = [p - k for p in pivots if p >= k]
        dims[n] = len(chosen)
        if chosen:
            zcols = rl.columns(zb)
            reps[n] = rl.mat_from_columns([zcols[j] for j in chosen], nrows=len(zb))
    return SubquotientResult(z.ambient, dims, reps, dens)


@dataclass(frozen=True)
class CohomologyResult:
    space: GradedSpace
    dims: dict
    reps: dict  # degree -> columns of chosen cocycle representatives

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def dims_list(self, lo: int, hi: int) -> list:
        return [self.dim(n) for n in range(lo, hi + 1)]


def cohomology(c: CochainComplex) -> CohomologyResult:
    """ker d / im d with canonical representatives per degree."""
    z = map_kernel(c.d)
    b = map_image(c.d)
    sq = subquotient(z, b)
    degs = sorted(set(c.space.degrees()) | set(sq.dims))
    dims = {n: sq.dim(n) for n in degs}
    return CohomologyResult(c.space, dims, dict(sq.reps))


def homotopy_witness(c: CochainComplex, n: int) -> LinearMap:
    """H: C^n -> C^{n-1} with d o H = id on the image of d_{n-1};
    consequently d o H o d = d in degree n-1."""
    dprev = c.d.block(n - 1)
    tgt_dim = c.space.dim(n)
    src_dim = c.space.dim(n - 1)
    if tgt_dim == 0 or src_dim == 0:
        return LinearMap.zero(c.space, c.space, -1)
    img, piv_rows = rl.column_echelon(dprev)
    if not rl.ncols(img):
        return LinearMap.zero(c.space, c.space, -1)
    x = rl.solve(dprev, img)
    assert x is not None
    # h = x o (pivot-row extraction): on the image, coordinates are just the
    # pivot-row entries because img is in reduced column echelon form.
    h = rl.zeros(src_dim, tgt_dim)
    for j, pr in enumerate(piv_rows):
        for i in range(src_dim):
            h[i][pr] = x[i][j]
    return LinearMap.from_blocks(c.space, c.space, -1, {n: h})


@dataclass(frozen=True)
class InvariantProjection:
    subspace: Subspace
    projector: LinearMap


def invariant_projection(space: GradedSpace, operators: Sequence[LinearMap]) -> InvariantProjection:
    """Joint kernel of degree-0 operators plus the projection onto it along
    the sum of their images.  Raises NotReductive when the kernel meets the
    image sum (then no canonical complement exists)."""
    for op in operators:
        assert op.shift == 0
    spans_k, spans_s = {}, {}
    proj_blocks = {}
    for n in space.degrees():
        dim = space.dim(n)
        stacked = rl.vstack(*[op.block(n) for op in operators]) if operators else []
        if not stacked:
            spans_k[n] = rl.identity(dim)
            proj_blocks[n] = rl.identity(dim)
            continue
        ker = rl.kernel(stacked)
        imgs = rl.hstack(*[op.block(n) for op in operators])
        img, _ = rl.column_echelon(imgs)
        if rl.ncols(rl.intersect_spans(ker, img)):
            raise NotReductive(f"invariants meet the image sum at degree {n}")
        if rl.ncols(ker) + rl.ncols(img) != dim:
            raise NotReductive(f"invariants + images do not fill degree {n}")
        spans_k[n] = ker
        spans_s[n] = img
        basis = rl.hstack(ker, img)
        inv = rl.solve(basis, rl.identity(dim))
        assert inv is not None
        k = rl.ncols(ker)
        sel = [row[:] for row in inv[:k]]
        proj_blocks[n] = rl.mat_mul(ker, sel) if k else rl.zeros(dim, dim)
    sub = Subspace.from_spans(space, spans_k)
    proj = LinearMap.from_blocks(space, space, 0, proj_blocks)
    return InvariantProjection(sub, proj)


def restrict_complex(c: CochainComplex, sub: Subspace,
                     label_prefix: str = "s") -> tuple:
    """Restrict d to a d-stable subspace.  Returns (CochainComplex in the
    subspace's own coordinates, inclusion LinearMap).  Raises NotContained
    if the subspace is not d-stable (witness degree in the message)."""
    labels = {n: tuple(f"{label_prefix}{n}.{i}" for i in range(sub.dim(n)))
              for n in sorted(dict(sub.basis))}
    small = GradedSpace.from_labels(labels)
    blocks = {}
    incl = {}
    for n, _ in sub.basis:
        b = sub.matrix(n)
        incl[n] = b
        db = rl.mat_mul(c.d.block(n), b) if c.space.dim(n + 1) else None
        if db is None or rl.is_zero(db):
            continue
        t = sub.matrix(n + 1)
        sol = rl.solve(t, db)
        if sol is None:
            raise NotContained(f"subspace is not closed under d at degree {n}")
        blocks[n] = sol
    d = LinearMap.from_blocks(small, small, 1, blocks)
    inclusion = LinearMap.from_blocks(small, c.space, 0, incl)
    return CochainComplex.build(small, d), inclusion
