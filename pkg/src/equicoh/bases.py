"""Index bookkeeping for exterior and symmetric monomial bases.

Exterior monomials are strictly increasing index tuples; symmetric monomials
are exponent tuples.  All sign conventions for wedging and slot-removal live
here so every module agrees on them.
"""

from __future__ import annotations

from itertools import combinations


def ext_basis(n: int, k: int) -> list:
    """Strictly increasing k-tuples from range(n), lexicographic."""
    return [tuple(c) for c in combinations(range(n), k)]


def wedge_insert(j: int, idx: tuple):
    """lambda_j wedge lambda_idx.  Returns (sign, tuple) or None if j in idx."""
    if j in idx:
        return None
    pos = 0
    while pos < len(idx) and idx[pos] < j:
        pos += 1
    sign = -1 if pos % 2 else 1
    return sign, idx[:pos] + (j,) + idx[pos:]


def remove_slot(j: int, idx: tuple):
    """First-slot contraction: coefficient of removing j from lambda_idx.
    Returns (sign, tuple) or None if j not in idx."""
    if j not in idx:
        return None
    pos = idx.index(j)
    sign = -1 if pos % 2 else 1
    return sign, idx[:pos] + idx[pos + 1:]


def wedge_merge(a: tuple, b: tuple):
    """lambda_a wedge lambda_b.  Returns (sign, tuple) or None on repeats.
    Sign is the parity of the shuffle sorting the concatenation."""
    if set(a) & set(b):
        return None
    seq = list(a) + list(b)
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def sym_basis(n: int, m: int) -> list:
    """Exponent tuples of total degree m in n variables, lexicographic."""
    if n == 0:
        return [()] if m == 0 else []
    out = []

    def rec(prefix, rem, slots):
        if slots == 1:
            out.append(prefix + (rem,))
            return
        for e in range(rem, -1, -1):
            rec(prefix + (e,), rem - e, slots - 1)
    rec((), m, n)
    return sorted(out, reverse=True)


def sym_mul(e1: tuple, e2: tuple) -> tuple:
    return tuple(a + b for a, b in zip(e1, e2))


def sym_deg(e: tuple) -> int:
    return sum(e)


def unit_exp(n: int, j: int, k: int = 1) -> tuple:
    return tuple(k if i == j else 0 for i in range(n))
