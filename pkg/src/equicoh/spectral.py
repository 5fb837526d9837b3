"""Spectral sequences of finite filtered cochain complexes.

A decreasing filtration F_0 = C >= F_1 >= ... >= F_T >= 0 by d-stable graded
subspaces determines pages

    Z_r(p, n)  = {x in F_p^n : dx in F_{p+r}^{n+1}}
    E_r^{p,q}  = Z_r(p, p+q) / (Z_{r-1}(p+1, p+q) + d Z_{r-1}(p-r+1, p+q-1))

with the convention Z_{-1}(p, n) = F_p^n.  The page differential
d_r : E_r^{p,q} -> E_r^{p+r, q-r+1} is induced by d on representatives.
Everything is finite, so the sequence reaches a final page where all
differentials vanish identically and the antidiagonals of E_oo are the
associated graded of H(C); both facts are asserted on every run, as is
E_{r+1} = H(E_r, d_r) cell by cell.

Two filtration constructors cover the main applications: the symmetric-degree
filtration of a Cartan model (levels 2m >= p) and the contraction filtration
of a G-differential complex (level p in degree n = joint kernel of all
(n - p + 1)-fold contraction products).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import ratlin as rl
from .core import (CochainComplex, GradedSpace, LinearMap, Subspace,
                   cohomology, subquotient)
from .gdiff import CartanModel, GDiffComplex


class NotSubcomplex(Exception):
    """A filtration level fails nesting, d-stability, or exhaustiveness;
    the message carries the witness level and degree."""


@dataclass(frozen=True)
class FilteredComplex:
    complex: CochainComplex
    levels: tuple   # Subspace per p = 0..T; F_0 is the whole space

    def level(self, p: int) -> Subspace:
        if p <= 0:
            return self.levels[0]
        if p < len(self.levels):
            return self.levels[p]
        return Subspace.zero(self.complex.space)

    @property
    def top(self) -> int:
        return len(self.levels) - 1


def build_filtered(complex_: CochainComplex, levels: Sequence[Subspace],
                   check: bool = True) -> FilteredComplex:
    levels = tuple(levels)
    if check:
        space = complex_.space
        full = Subspace.full(space)
        if not levels or not levels[0].equals(full):
            raise NotSubcomplex("level 0 must be the whole space")
        for p in range(1, len(levels)):
            for n in space.degrees():
                if levels[p - 1].dim(n) == space.dim(n):
                    continue
                if levels[p].dim(n) > levels[p - 1].dim(n) or \
                        not rl.span_contains(levels[p - 1].matrix(n),
                                             levels[p].matrix(n)):
                    raise NotSubcomplex(
                        f"level {p} escapes level {p - 1} at degree {n}")
        for p, sub in enumerate(levels):
            for n in space.degrees():
                b = sub.matrix(n)
                if not rl.ncols(b):
                    continue
                if sub.dim(n + 1) == space.dim(n + 1):
                    continue
                blk = complex_.d.block(n)
                if not (blk and blk[0]):
                    continue
                img = rl.mat_mul(blk, b)
                if rl.is_zero(img):
                    continue
                if not rl.span_contains(sub.matrix(n + 1), img):
                    raise NotSubcomplex(
                        f"level {p} is not d-stable at degree {n}")
    return FilteredComplex(complex_, levels)


@dataclass(frozen=True)
class Page:
    """One page of the spectral sequence.  `cells` maps (p, q) to the
    dimension, `reps` to representative columns inside C^{p+q}, `diffs` to
    the d_r matrix into cell (p + r, q - r + 1).  `cellmaps` keeps the
    subquotient projectors so classes of new vectors can be computed; it is
    working data, not part of the serialized report."""

    r: int
    cells: dict
    reps: dict
    diffs: dict
    stable: bool
    cellmaps: dict = field(repr=False, default_factory=dict)

    def dim(self, p: int, q: int) -> int:
        return self.cells.get((p, q), 0)

    def antidiagonal(self, n: int) -> int:
        return sum(d for (p, q), d in self.cells.items() if p + q == n)

    def to_json(self) -> dict:
        cells = sorted([p, q, d] for (p, q), d in self.cells.items() if d)
        return {"r": self.r, "cells": cells, "stable": self.stable}


def _z_subspace(fc: FilteredComplex, cache: dict, r: int, p: int, n: int) -> Subspace:
    """Z_r(p, n) as a Subspace concentrated in degree n."""
    if p < 0:
        # F_p = F_0 for p <= 0, so only the target level p + r matters.
        r, p = r + p, 0
    if r >= 0 and p + r > fc.top + 1:
        # every level beyond the last is zero; normalize for the cache
        r = max(fc.top + 1 - p, 0)
    key = (r, p, n)
    if key in cache:
        return cache[key]
    space = fc.complex.space
    fp = fc.level(p)
    b = fp.matrix(n)
    if not rl.ncols(b):
        out = Subspace.zero(space)
    elif r < 0:
        out = Subspace.from_spans(space, {n: b})
    else:
        target = fc.level(p + r).matrix(n + 1)
        m = fc.complex.d.block(n)
        if not (m and m[0]) or rl.ncols(target) == space.dim(n + 1):
            out = Subspace.from_spans(space, {n: b})
        else:
            mb = rl.mat_mul(m, b)
            if rl.is_zero(mb):
                out = Subspace.from_spans(space, {n: b})
            else:
                aug = rl.hstack(mb, rl.mat_scale(target, -1)) \
                    if rl.ncols(target) else mb
                ker = rl.kernel(aug)
                coeffs = [row[:] for row in ker[:rl.ncols(b)]] \
                    if ker and ker[0] else []
                if not coeffs or not coeffs[0]:
                    out = Subspace.zero(space)
                else:
                    out = Subspace.from_spans(space, {n: rl.mat_mul(b, coeffs)})
    cache[key] = out
    return out


def pages(fc: FilteredComplex, r_max: Optional[int] = None) -> list:
    """Pages E_0, E_1, ... through the final stable page (or through r_max).

    The final page is flagged stable only when the filtration length is
    exhausted and it agrees with its predecessor, both free of
    differentials; when stable, its antidiagonal sums are checked against
    the cohomology of the total complex."""
    space = fc.complex.space
    degs = space.degrees()
    if not degs:
        return [Page(0, {}, {}, {}, True)]
    max_n = max(degs)
    top_p = fc.top
    stop_r = top_p + 2
    limit = stop_r if r_max is None else min(r_max, stop_r)
    # E_0^{p,q} = F_p/F_{p+1} in degree p+q, so cells where consecutive
    # levels agree are zero on every page.
    support = [(p, n) for n in degs for p in range(0, top_p + 2)
               if fc.level(p).dim(n) > fc.level(p + 1).dim(n)]
    cache = {}
    out = []
    for r in range(limit + 1):
        cells, reps, diffs, sq = {}, {}, {}, {}
        for (p, n) in support:
            q = n - p
            znum = _z_subspace(fc, cache, r, p, n)
            if not znum.dim(n):
                continue
            den = _z_subspace(fc, cache, r - 1, p + 1, n)
            zden2 = _z_subspace(fc, cache, r - 1, p - r + 1, n - 1)
            b2 = zden2.matrix(n - 1)
            if rl.ncols(b2):
                m = fc.complex.d.block(n - 1)
                if m and m[0]:
                    img = rl.mat_mul(m, b2)
                    if not rl.is_zero(img):
                        den = den.add(Subspace.from_spans(space, {n: img}))
            cell = subquotient(znum, den)
            if cell.dim(n):
                cells[(p, q)] = cell.dim(n)
                reps[(p, q)] = cell.reps[n]
                sq[(p, q)] = cell
        for (p, q), k in cells.items():
            n = p + q
            tgt = (p + r, q - r + 1)
            if tgt not in cells:
                continue
            rep = reps[(p, q)]
            cols = [sq[tgt].project(n + 1, fc.complex.d.apply(
                n, [rep[t][j] for t in range(len(rep))])) for j in range(k)]
            mat = rl.mat_from_columns(cols, nrows=cells[tgt])
            if not rl.is_zero(mat):
                diffs[(p, q)] = mat
        stable = bool(r >= stop_r and out and out[-1].cells == cells
                      and not diffs and not out[-1].diffs)
        out.append(Page(r, cells, reps, diffs, stable, sq))
        if r >= 1:
            _assert_page_consistency(out[-2], out[-1])
    final = out[-1]
    if final.stable:
        h = cohomology(fc.complex)
        for n in range(max_n + 1):
            assert final.antidiagonal(n) == h.dim(n), \
                "spectral sequence must converge to the total cohomology"
    return out


def _assert_page_consistency(prev: Page, cur: Page):
    """E_{r+1} = H(E_r, d_r) and d_r o d_r = 0, cell by cell."""
    r = prev.r
    keys = set(prev.cells) | set(cur.cells)
    for (p, q) in keys:
        dim = prev.dim(p, q)
        out_m = prev.diffs.get((p, q))
        in_m = prev.diffs.get((p - r, q + r - 1))
        rank_out = rl.rank(out_m) if out_m is not None else 0
        rank_in = rl.rank(in_m) if in_m is not None else 0
        assert cur.dim(p, q) == dim - rank_out - rank_in, \
            f"page {r + 1} cell ({p},{q}) disagrees with homology of page {r}"
        if out_m is not None and in_m is not None:
            assert rl.is_zero(rl.mat_mul(out_m, in_m)), \
                f"d_{r} fails to square to zero at ({p},{q})"


# ---------------------------------------------------------------------------
# Filtrations used in practice


def symdegree_filtration(model: CartanModel) -> FilteredComplex:
    """F_p = components of symmetric degree m with 2m >= p inside the
    invariant complex of a Cartan model.  The invariant basis is fine-graded
    by (form degree, symmetric degree), so each level is spanned by trailing
    coordinate blocks."""
    space = model.complex.space
    levels = []
    for p in range(2 * model.sym_cap + 2):
        spans = {}
        for n in space.degrees():
            dim = space.dim(n)
            cols = []
            offset = 0
            for (_, m, inv_dim, _, _) in model.fine.get(n, ()):
                if 2 * m >= p:
                    for j in range(inv_dim):
                        v = [0] * dim
                        v[offset + j] = 1
                        cols.append(v)
                offset += inv_dim
            spans[n] = rl.mat_from_columns(cols, nrows=dim)
        levels.append(Subspace.from_spans(space, spans))
    return build_filtered(model.complex, levels)


def contraction_filtration(c: GDiffComplex) -> FilteredComplex:
    """F_p in degree n: everything killed by all (n - p + 1)-fold products
    of contractions.  Zero-fold products are the identity, so level n + 1
    vanishes in degree n; products longer than dim g vanish identically, so
    low levels are everything."""
    space = c.space
    r = c.algebra.dim
    degs = space.degrees()
    max_n = max(degs) if degs else 0

    products = {}
    for k in range(1, r + 1):
        products[k] = []
        for combo in itertools.combinations(range(r), k):
            op = c.contractions[combo[0]]
            for b in combo[1:]:
                op = c.contractions[b].compose(op)
            products[k].append(op)

    def level_spans(p):
        spans = {}
        for n in degs:
            dim = space.dim(n)
            k = n - p + 1
            if k <= 0:
                spans[n] = rl.zeros(dim, 0)
            elif k > r:
                spans[n] = rl.identity(dim)
            else:
                stacked = []
                for op in products[k]:
                    blk = op.block(n)
                    if blk and blk[0]:
                        stacked.extend(blk)
                spans[n] = rl.kernel(stacked) if stacked else rl.identity(dim)
        return spans

    levels = [Subspace.from_spans(space, level_spans(p))
              for p in range(max_n + 2)]
    return build_filtered(c.complex, levels)


# ---------------------------------------------------------------------------
# The second-page differential of the symmetric-degree filtration


def _twist_on_invariants(model: CartanModel) -> LinearMap:
    """The part of the Cartan differential that raises symmetric degree
    (contraction paired with multiplication by the coordinate generator),
    restricted to the invariant complex."""
    c = model.base
    sp = c.space
    mons = model.mons
    mspace = model.model_space
    blocks = {}
    for deg in mspace.degrees():
        if mspace.dim(deg + 1) == 0:
            continue
        blk = rl.zeros(mspace.dim(deg + 1), mspace.dim(deg))
        nonzero = False
        fine_by = {(n, m): (off, size) for (n, m, _, off, size)
                   in model.fine.get(deg, ())}
        tgt_by = {(n, m): (off, size) for (n, m, _, off, size)
                  in model.fine.get(deg + 1, ())}
        for (n, m), (off, _) in fine_by.items():
            if (n - 1, m + 1) not in tgt_by:
                continue
            to = tgt_by[(n - 1, m + 1)][0]
            nm = len(mons[m])
            pos2 = {e: i for i, e in enumerate(mons[m + 1])}
            for j in range(c.algebra.dim):
                iblk = c.contractions[j].block(n)
                if not (iblk and iblk[0]):
                    continue
                for t in range(len(iblk)):
                    for ai in range(sp.dim(n)):
                        v = iblk[t][ai]
                        if not v:
                            continue
                        for mi, expo in enumerate(mons[m]):
                            e2 = list(expo)
                            e2[j] += 1
                            mj = pos2[tuple(e2)]
                            blk[to + t * len(mons[m + 1]) + mj][off + ai * nm + mi] += v
                            nonzero = True
        if nonzero:
            blocks[deg] = blk
    twist_full = LinearMap.from_blocks(mspace, mspace, 1, blocks)

    inv = model.complex.space
    inv_blocks = {}
    for deg in inv.degrees():
        src = model.inclusion.block(deg)
        if not (src and src[0]) or inv.dim(deg + 1) == 0:
            continue
        fb = twist_full.block(deg)
        if not (fb and fb[0]):
            continue
        img = rl.mat_mul(fb, src)
        if rl.is_zero(img):
            continue
        sol = rl.solve(model.inclusion.block(deg + 1), img)
        assert sol is not None, "twist must preserve invariants"
        inv_blocks[deg] = sol
    return LinearMap.from_blocks(inv, inv, 1, inv_blocks)


def verify_cartan_d2(model: CartanModel, page2: Page) -> dict:
    """Check, on every representative of every even second-page cell, that
    the page differential agrees with applying the symmetric-degree-raising
    part of the Cartan differential to the representative's leading
    (symmetric degree p/2) component.  Returns {"ok": bool, "cells": [...],
    "failures": [...]}."""
    assert page2.r == 2, "second-page check requires the r = 2 page"
    twist = _twist_on_invariants(model)
    space = model.complex.space
    checked, failures = [], []
    for (p, q), k in sorted(page2.cells.items()):
        if p % 2:
            failures.append({"cell": [p, q], "reason": "odd column nonzero"})
            continue
        n = p + q
        tgt = (p + 2, q - 1)
        target_cell = page2.cellmaps.get(tgt)
        rep = page2.reps[(p, q)]
        m_lead = p // 2
        offset = 0
        lead = None
        for (_, m, inv_dim, _, _) in model.fine.get(n, ()):
            if m == m_lead:
                lead = (offset, inv_dim)
            offset += inv_dim
        for j in range(k):
            vec = [rep[t][j] for t in range(len(rep))]
            xl = [0] * len(vec)
            if lead is not None:
                for t in range(lead[0], lead[0] + lead[1]):
                    xl[t] = vec[t]
            tv = twist.apply(n, xl)
            dv = model.complex.d.apply(n, vec)
            if target_cell is None:
                # the target group is zero; both classes vanish, nothing to compare
                continue
            lhs = target_cell.project(n + 1, dv)
            rhs = target_cell.project(n + 1, tv)
            if lhs != rhs:
                failures.append({"cell": [p, q], "rep": j,
                                 "reason": "formula mismatch"})
        checked.append([p, q])
    return {"ok": not failures, "cells": checked, "failures": failures}


def page_csv(page: Page) -> str:
    """Cells of one page as CSV rows p,q,dim (sorted)."""
    lines = ["p,q,dim"]
    for (p, q), d in sorted(page.cells.items()):
        lines.append(f"{p},{q},{d}")
    return "\n".join(lines) + "\n"
