"""Lie algebras over Q: structure constants, representations, bialgebra data,
Chevalley-Eilenberg complexes and their cohomology.

Convention (fixed once, used by every module): the differential on
V (x) Lambda g* is

    d(v (x) w) = sum_a rho(e_a) v (x) (lambda^a ^ w) + v (x) dw,
    d lambda^m = - sum_{i<j} c^m_{ij} lambda^i ^ lambda^j,

contractions insert into the first slot, i_b lambda_I = (-1)^pos lambda_{I-b},
and Lie derivatives act diagonally with ad*_b lambda^m = - sum_l c^m_{bl}
lambda^l.  With these choices d*d = 0, L = d i + i d, and every operator
identity used downstream holds as an exact matrix identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import bases, ratlin as rl
from .core import (CochainComplex, GradedSpace, LinearMap, NotContained,
                   Subspace, cohomology, invariant_projection, restrict_complex)


class JacobiViolation(Exception):
    """Jacobi identity fails; carries the witness triple and defect vector."""


class AntisymmetryViolation(Exception):
    pass


class RepresentationInvalid(Exception):
    """Commutation defect; carries the witness generator pair."""


class CocycleViolation(Exception):
    pass


class DualJacobiViolation(Exception):
    pass


class NotSubcomplex(Exception):
    """The joint kernel is not closed under the differential."""


class FactorizationMismatch(Exception):
    """Computed relative cohomology disagrees with the asserted product form."""


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants c[i][j][k] of [e_i, e_j] = sum_k c^k_ij e_k."""

    dim: int
    c: tuple  # c[i][j] = tuple of length dim
    compact_type: bool = False
    name: str = ""

    def bracket(self, x: Sequence, y: Sequence) -> list:
        n = self.dim
        out = [0] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                cij = self.c[i][j]
                coef = x[i] * y[j]
                for k in range(n):
                    if cij[k]:
                        out[k] += coef * cij[k]
        return [rl.q(Fraction(v)) if isinstance(v, Fraction) else v for v in out]

    def ad(self, i: int):
        """Matrix of ad(e_i) acting on g (rows = output index)."""
        n = self.dim
        m = rl.zeros(n, n)
        for j in range(n):
            for k in range(n):
                m[k][j] = self.c[i][j][k]
        return m


def build_lie_algebra(dim: int, brackets: Sequence, compact_type: bool = False,
                      name: str = "") -> LieAlgebra:
    """brackets: [[i, j, [[k, coeff], ...]], ...], 0-based; missing (j,i)
    entries are filled by antisymmetry, conflicting ones rejected."""
    c = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    seen = set()
    for item in brackets:
        i, j, terms = item
        if not (0 <= i < dim and 0 <= j < dim):
            raise ValueError(f"bracket index out of range: ({i},{j})")
        vec = [0] * dim
        for k, coeff in terms:
            if not (0 <= k < dim):
                raise ValueError(f"bracket target out of range: {k}")
            vec[k] = rl.q(coeff)
        if i == j and any(vec):
            raise AntisymmetryViolation(f"[e_{i}, e_{i}] != 0")
        if (j, i) in seen:
            if any(c[j][i][k] + vec[k] for k in range(dim)):
                raise AntisymmetryViolation(f"inconsistent ({i},{j}) vs ({j},{i})")
        if (i, j) in seen:
            raise ValueError(f"duplicate bracket entry ({i},{j})")
        seen.add((i, j))
        c[i][j] = vec
        if (j, i) not in seen:
            c[j][i] = [-v for v in vec]
    g = LieAlgebra(dim, tuple(tuple(tuple(r) for r in row) for row in c),
                   compact_type, name)
    _check_jacobi(g)
    return g


def _check_jacobi(g: LieAlgebra):
    n = g.dim
    basis = rl.identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                d1 = g.bracket(basis[i], g.bracket(basis[j], basis[k]))
                d2 = g.bracket(basis[j], g.bracket(basis[k], basis[i]))
                d3 = g.bracket(basis[k], g.bracket(basis[i], basis[j]))
                defect = [a + b + c_ for a, b, c_ in zip(d1, d2, d3)]
                if any(defect):
                    raise JacobiViolation(((i, j, k), defect))


def su2() -> LieAlgebra:
    return build_lie_algebra(3, [[0, 1, [[2, 1]]], [1, 2, [[0, 1]]], [2, 0, [[1, 1]]]],
                             compact_type=True, name="su2")


def heisenberg() -> LieAlgebra:
    return build_lie_algebra(3, [[0, 1, [[2, 1]]]], name="heisenberg")


def abelian(n: int) -> LieAlgebra:
    return build_lie_algebra(n, [], compact_type=True, name=f"abelian{n}")


def sl2() -> LieAlgebra:
    # h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return build_lie_algebra(3, [[0, 1, [[1, 2]]], [0, 2, [[2, -2]]], [1, 2, [[0, 1]]]],
                             name="sl2")


@dataclass(frozen=True)
class Representation:
    algebra: LieAlgebra
    space_dim: int
    operators: tuple  # one matrix per generator
    name: str = ""

    def op(self, i: int):
        return [list(row) for row in self.operators[i]]


def build_representation(g: LieAlgebra, operators: Sequence, name: str = "") -> Representation:
    ops = [[list(map(rl.q, row)) for row in m] for m in operators]
    if len(ops) != g.dim:
        raise RepresentationInvalid("one operator per generator required")
    dim = len(ops[0]) if ops else 0
    for m in ops:
        if len(m) != dim or any(len(row) != dim for row in m):
            raise RepresentationInvalid("operators must be square of equal size")
    basis = rl.identity(g.dim)
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = rl.mat_sub(rl.mat_mul(ops[i], ops[j]), rl.mat_mul(ops[j], ops[i]))
            br = g.bracket(basis[i], basis[j])
            rhs = rl.zeros(dim, dim)
            for k in range(g.dim):
                if br[k]:
                    rhs = rl.mat_add(rhs, rl.mat_scale(ops[k], br[k]))
            if not rl.mat_eq(lhs, rhs):
                raise RepresentationInvalid(((i, j), rl.mat_sub(lhs, rhs)))
    return Representation(g, dim, tuple(tuple(tuple(row) for row in m) for m in ops),
                          name)


def trivial_rep(g: LieAlgebra, dim: int = 1) -> Representation:
    z = rl.zeros(dim, dim)
    return build_representation(g, [z] * g.dim, name=f"trivial{dim}")


def adjoint_rep(g: LieAlgebra) -> Representation:
    return build_representation(g, [g.ad(i) for i in range(g.dim)], name="adjoint")


def coadjoint_rep(g: LieAlgebra) -> Representation:
    # ad*_i = -(ad_i)^T
    return build_representation(
        g, [rl.mat_scale(rl.transpose(g.ad(i)), -1) for i in range(g.dim)],
        name="coadjoint")


def sym_power_rep(g: LieAlgebra, k: int) -> Representation:
    """Degree-k polynomials on g* (coordinates x_j dual to e_j); generators
    act as derivations with e_a . x_j = sum_m c^m_{aj} x_m, the derivative of
    the coadjoint flow on functions."""
    n = g.dim
    mons = bases.sym_basis(n, k)
    index = {m: i for i, m in enumerate(mons)}
    ops = []
    for a in range(n):
        m = rl.zeros(len(mons), len(mons))
        for col, e in enumerate(mons):
            for j in range(n):
                if not e[j]:
                    continue
                for tgt in range(n):
                    coeff = g.c[a][j][tgt]
                    if coeff:
                        new = list(e)
                        new[j] -= 1
                        new[tgt] += 1
                        m[index[tuple(new)]][col] += e[j] * coeff
        ops.append(m)
    return build_representation(g, ops, name=f"sym{k}-coadjoint")


def sym_range_rep(g: LieAlgebra, kmax: int) -> Representation:
    """Polynomials on g* of degree <= kmax (direct sum of the slice reps)."""
    pieces = [sym_power_rep(g, k) for k in range(kmax + 1)]
    dim = sum(p.space_dim for p in pieces)
    ops = []
    for a in range(g.dim):
        m = rl.zeros(dim, dim)
        off = 0
        for p in pieces:
            blk = p.op(a)
            for i in range(p.space_dim):
                for j in range(p.space_dim):
                    m[off + i][off + j] = blk[i][j]
            off += p.space_dim
        ops.append(m)
    return build_representation(g, ops, name=f"sym<={kmax}-coadjoint")


def invariants(rep: Representation) -> Subspace:
    space = GradedSpace.from_dims({0: rep.space_dim})
    ops = [LinearMap.from_blocks(space, space, 0, {0: rep.op(i)})
           for i in range(rep.algebra.dim)]
    spans = {}
    stacked = rl.vstack(*[o.block(0) for o in ops]) if ops else []
    spans[0] = rl.kernel(stacked) if stacked else rl.identity(rep.space_dim)
    return Subspace.from_spans(space, spans)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg complex


def _ce_labels(rep: Representation):
    n = rep.algebra.dim
    out = {}
    for k in range(n + 1):
        labels = []
        for idx in bases.ext_basis(n, k):
            for a in range(rep.space_dim):
                labels.append((a, idx))
        out[k] = labels
    return out


@dataclass(frozen=True)
class CEComplex:
    """Chevalley-Eilenberg complex of (g, V) with its operator package."""

    algebra: LieAlgebra
    rep: Representation
    complex: CochainComplex
    contractions: tuple  # LinearMap per generator, degree -1
    lie_ops: tuple       # LinearMap per generator, degree 0

    @property
    def space(self):
        return self.complex.space


def ce_complex(g: LieAlgebra, rep: Optional[Representation] = None) -> CEComplex:
    rep = rep if rep is not None else trivial_rep(g)
    assert rep.algebra == g
    n = g.dim
    vd = rep.space_dim
    labels = _ce_labels(rep)
    space = GradedSpace.from_labels(labels)
    ext = {k: bases.ext_basis(n, k) for k in range(n + 1)}
    pos = {k: {idx: i for i, idx in enumerate(ext[k])} for k in ext}

    def slot(k, idx, a):
        return pos[k][idx] * vd + a

    dblocks = {}
    for k in range(n):
        rows = len(ext[k + 1]) * vd
        cols = len(ext[k]) * vd
        m = rl.zeros(rows, cols)
        for idx in ext[k]:
            for a in range(vd):
                col = slot(k, idx, a)
                # action part: sum_b lambda^b ^ (rho(e_b) v)
                for b in range(n):
                    ins = bases.wedge_insert(b, idx)
                    if ins is None:
                        continue
                    s, new = ins
                    rho = rep.op(b)
                    for t in range(vd):
                        if rho[t][a]:
                            m[slot(k + 1, new, t)][col] += s * rho[t][a]
                # exterior part: v (x) d(lambda_idx), odd derivation with
                # d lambda^m = -sum_{i<j} c^m_{ij} lambda^i lambda^j
                for p_i, mgen in enumerate(idx):
                    dsign = -1 if p_i % 2 else 1
                    rest = idx[:p_i] + idx[p_i + 1:]
                    for i in range(n):
                        for j in range(i + 1, n):
                            cm = g.c[i][j][mgen]
                            if not cm:
                                continue
                            mg = bases.wedge_merge((i, j), rest)
                            if mg is None:
                                continue
                            s2, new = mg
                            m[slot(k + 1, new, a)][col] += -cm * dsign * s2
        dblocks[k] = m
    d = LinearMap.from_blocks(space, space, 1, dblocks)
    cx = CochainComplex.build(space, d)

    contractions = []
    lie_ops = []
    for b in range(n):
        iblocks = {}
        for k in range(1, n + 1):
            m = rl.zeros(len(ext[k - 1]) * vd, len(ext[k]) * vd)
            for idx in ext[k]:
                rem = bases.remove_slot(b, idx)
                if rem is None:
                    continue
                s, new = rem
                for a in range(vd):
                    m[slot(k - 1, new, a)][slot(k, idx, a)] = s
            iblocks[k] = m
        contractions.append(LinearMap.from_blocks(space, space, -1, iblocks))

        rho = rep.op(b)
        lblocks = {}
        for k in range(n + 1):
            dim_k = len(ext[k]) * vd
            m = rl.zeros(dim_k, dim_k)
            for idx in ext[k]:
                for a in range(vd):
                    col = slot(k, idx, a)
                    for t in range(vd):
                        if rho[t][a]:
                            m[slot(k, idx, t)][col] += rho[t][a]
                    # ad*_b lambda^m = -sum_l c^m_{bl} lambda^l on each slot
                    for p_i, mgen in enumerate(idx):
                        for l in range(n):
                            coeff = -g.c[b][l][mgen]
                            if not coeff:
                                continue
                            ins = bases.wedge_merge((l,), idx[:p_i] + idx[p_i + 1:])
                            if ins is None:
                                continue
                            s2, new = ins
                            sgn = -1 if p_i % 2 else 1
                            m[slot(k, new, a)][col] += coeff * s2 * sgn
            lblocks[k] = m
        lie_ops.append(LinearMap.from_blocks(space, space, 0, lblocks))
    return CEComplex(g, rep, cx, tuple(contractions), tuple(lie_ops))


@dataclass(frozen=True)
class Subalgebra:
    ambient: LieAlgebra
    basis: tuple       # columns: vectors in g
    complement: tuple  # columns: k-stable complement (may be empty tuple)

    def basis_matrix(self):
        return [list(row) for row in self.basis]


def build_subalgebra(g: LieAlgebra, vectors: Sequence,
                     complement: Optional[Sequence] = None) -> Subalgebra:
    """vectors: columns spanning k.  Verifies closure under the bracket and,
    when given (or found by solving the stability system), a k-stable
    complement."""
    b = rl.mat_from_columns([list(map(rl.q, v)) for v in vectors], nrows=g.dim)
    cols = rl.columns(b)
    if rl.rank(b) != len(cols):
        raise ValueError("subalgebra basis is dependent")
    for i, x in enumerate(cols):
        for j, y in enumerate(cols):
            if i < j and not rl.in_span(b, g.bracket(x, y)):
                raise ValueError(f"not closed under bracket: basis pair ({i},{j})")
    if complement is not None:
        w = rl.mat_from_columns([list(map(rl.q, v)) for v in complement], nrows=g.dim)
        _verify_stable_complement(g, b, w)
        comp = w
    else:
        comp = _solve_stable_complement(g, b)
    return Subalgebra(g, tuple(tuple(row) for row in b),
                      tuple(tuple(row) for row in comp) if comp else ())


def _verify_stable_complement(g, b, w):
    if rl.ncols(b) + rl.ncols(w) != g.dim or rl.ncols(rl.intersect_spans(b, w)):
        raise ValueError("complement does not complement")
    for x in rl.columns(b):
        for y in rl.columns(w):
            if not rl.in_span(w, g.bracket(x, y)):
                raise ValueError("complement is not stable under the subalgebra")


def _solve_stable_complement(g, b):
    """Search a k-stable complement by solving the linear system for an
    equivariant projection theta = B phi with phi B = I and
    [theta, ad_eta] = 0 for eta in the k-basis.  Returns columns or None."""
    r = g.dim
    s = rl.ncols(b)
    nunk = s * r

    def unk(i, j):
        return i * r + j

    rows, rhs = [], []
    for i in range(s):
        for j in range(s):
            row = [0] * nunk
            for t in range(r):
                if b[t][j]:
                    row[unk(i, t)] = b[t][j]
            rows.append(row)
            rhs.append([1 if i == j else 0])
    for eta in rl.columns(b):
        ad = rl.zeros(r, r)
        for j in range(r):
            col = g.bracket(eta, [1 if t == j else 0 for t in range(r)])
            for t in range(r):
                ad[t][j] = col[t]
        # B phi ad - ad B phi = 0, row (t, j)
        for t in range(r):
            for j in range(r):
                row = [0] * nunk
                for i in range(s):
                    for u in range(r):
                        if b[t][i] and ad[u][j]:
                            row[unk(i, u)] += b[t][i] * ad[u][j]
                    v = 0
                    for u in range(r):
                        if ad[t][u] and b[u][i]:
                            v += ad[t][u] * b[u][i]
                    if v:
                        row[unk(i, j)] -= v
                if any(row):
                    rows.append(row)
                    rhs.append([0])
    sol = rl.solve(rows, rhs)
    if sol is None:
        return None
    phi = [[sol[unk(i, j)][0] for j in range(r)] for i in range(s)]
    theta = rl.mat_mul(b, phi)
    comp = rl.kernel(theta)
    if rl.ncols(comp) != r - s:
        return None
    return comp


def relative_subcomplex(ce: CEComplex, k: Subalgebra) -> tuple:
    """Joint kernel of i_eta and L_eta over a basis of k, with the restricted
    differential.  Returns (CochainComplex, inclusion).  Raises NotSubcomplex
    if the kernel is not d-stable."""
    ops = []
    for col in rl.columns(k.basis_matrix()):
        i_op = None
        l_op = None
        for j, coeff in enumerate(col):
            if not coeff:
                continue
            ic = ce.contractions[j].scale(coeff)
            lc = ce.lie_ops[j].scale(coeff)
            i_op = ic if i_op is None else i_op.add(ic)
            l_op = lc if l_op is None else l_op.add(lc)
        if i_op is not None:
            ops.append(i_op)
            ops.append(l_op)
    space = ce.space
    spans = {}
    for n in space.degrees():
        dim = space.dim(n)
        stacked = []
        for op in ops:
            blk = op.block(n)
            if blk and blk[0]:
                stacked.extend(blk)
        spans[n] = rl.kernel(stacked) if stacked else rl.identity(dim)
    sub = Subspace.from_spans(space, spans)
    try:
        small, incl = restrict_complex(ce.complex, sub, label_prefix="rel")
    except NotContained as e:
        raise NotSubcomplex(str(e)) from e
    return small, incl


@dataclass(frozen=True)
class LieCohomology:
    dims: dict
    reps: dict
    predicted_dims: Optional[dict] = None

    def dims_list(self, lo: int, hi: int) -> list:
        return [self.dims.get(n, 0) for n in range(lo, hi + 1)]


def lie_cohomology(g: LieAlgebra, rep: Optional[Representation] = None,
                   k: Optional[Subalgebra] = None,
                   factorized: bool = False) -> LieCohomology:
    """Cohomology of C(g; V), relative to k when given.  With factorized=True
    (requires g.compact_type) the product prediction H(g,k) (x) V^g is
    computed independently and a mismatch raises FactorizationMismatch."""
    rep = rep if rep is not None else trivial_rep(g)
    ce = ce_complex(g, rep)
    if k is None:
        h = cohomology(ce.complex)
    else:
        small, _ = relative_subcomplex(ce, k)
        h = cohomology(small)
    predicted = None
    if factorized:
        if not g.compact_type:
            raise ValueError("factorized prediction requires compact_type")
        ce_triv = ce_complex(g, trivial_rep(g))
        if k is None:
            h_triv = cohomology(ce_triv.complex)
        else:
            small_t, _ = relative_subcomplex(ce_triv, k)
            h_triv = cohomology(small_t)
        inv_dim = invariants(rep).dim(0)
        predicted = {n: h_triv.dims.get(n, 0) * inv_dim
                     for n in range(0, g.dim + 1)}
        computed = {n: h.dims.get(n, 0) for n in range(0, g.dim + 1)}
        if computed != predicted:
            raise FactorizationMismatch((computed, predicted))
    dims = {n: h.dims.get(n, 0) for n in range(0, g.dim + 1)}
    return LieCohomology(dims, dict(h.reps), predicted)


# ---------------------------------------------------------------------------
# Bialgebra data


@dataclass(frozen=True)
class Bialgebra:
    algebra: LieAlgebra
    delta: tuple  # delta[i] = dict mapping (p,q) p<q -> coeff

    def delta_of(self, i: int) -> dict:
        return dict(self.delta[i])

    def dual_algebra(self) -> LieAlgebra:
        """[lambda^p, lambda^q]_* = sum_i delta(e_i)^{pq} lambda^i."""
        n = self.algebra.dim
        brackets = []
        for p in range(n):
            for q in range(p + 1, n):
                terms = []
                for i in range(n):
                    coeff = self.delta[i].get((p, q), 0)
                    if coeff:
                        terms.append([i, coeff])
                if terms:
                    brackets.append([p, q, terms])
        return build_lie_algebra(n, brackets, name=f"{self.algebra.name}-dual")


def _ad_on_wedge2(g: LieAlgebra, xi_idx: int, w: Mapping) -> dict:
    """ad_{e_xi} acting on an element of Lambda^2 g given as {(p,q): coeff}."""
    n = g.dim
    out: dict = {}
    for (p, q), coeff in w.items():
        for (src, other, flip) in ((p, q, False), (q, p, True)):
            br = g.c[xi_idx][src]
            for t in range(n):
                if not br[t]:
                    continue
                if t == other:
                    continue
                a, b = (t, other) if t < other else (other, t)
                sign = 1 if t < other else -1
                if flip:
                    sign = -sign
                out[(a, b)] = out.get((a, b), 0) + sign * coeff * br[t]
    return {k: v for k, v in out.items() if v}


def build_bialgebra(g: LieAlgebra, delta_triples: Sequence) -> Bialgebra:
    """delta_triples: [[i, [[p, q, coeff], ...]], ...] giving delta(e_i) in
    the lex-ordered Lambda^2 basis.  Validates the cocycle law
    delta([x,y]) = x.delta(y) - y.delta(x) and the dual Jacobi identity."""
    n = g.dim
    delta = [dict() for _ in range(n)]
    for i, terms in delta_triples:
        for p, q, coeff in terms:
            if not (0 <= p < q < n):
                raise ValueError(f"delta target must be lex-ordered pair, got ({p},{q})")
            delta[i][(p, q)] = rl.q(coeff)
    bi = Bialgebra(g, tuple(dict(d) for d in delta))
    _check_cocycle(bi)
    try:
        bi.dual_algebra()
    except JacobiViolation as e:
        raise DualJacobiViolation(e.args[0]) from e
    return bi


def _check_cocycle(bi: Bialgebra):
    g = bi.algebra
    n = g.dim
    basis = rl.identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            br = g.bracket(basis[i], basis[j])
            lhs: dict = {}
            for k in range(n):
                if br[k]:
                    for key, v in bi.delta[k].items():
                        lhs[key] = lhs.get(key, 0) + br[k] * v
            r1 = _ad_on_wedge2(g, i, bi.delta[j])
            r2 = _ad_on_wedge2(g, j, bi.delta[i])
            rhs: dict = dict(r1)
            for key, v in r2.items():
                rhs[key] = rhs.get(key, 0) - v
            keys = set(lhs) | set(rhs)
            defect = {k: lhs.get(k, 0) - rhs.get(k, 0) for k in keys
                      if lhs.get(k, 0) != rhs.get(k, 0)}
            if defect:
                raise CocycleViolation(((i, j), defect))


def coboundary_bialgebra(g: LieAlgebra, r_element: Mapping) -> Bialgebra:
    """delta = boundary of r in Lambda^2 g: delta(xi) = ad_xi r."""
    triples = []
    for i in range(g.dim):
        d = _ad_on_wedge2(g, i, dict(r_element))
        if d:
            triples.append([i, [[p, q, v] for (p, q), v in sorted(d.items())]])
    return build_bialgebra(g, triples)
