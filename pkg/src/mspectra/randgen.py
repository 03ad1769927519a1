"""Seeded random multicomplexes and strict morphisms for property tests.

Objects are assembled from small building blocks (truncated free modules,
ZW windows, acyclic squares, the module K), then cut into a bidegree box by
quotienting the submodule generated by everything outside the box, further
cut by random submodules until every rank is small, and finally put through
a random change of basis.  Every result is a genuine finite multicomplex.
"""

from __future__ import annotations

import random

from .linalg import Matrix, inverse
from .multicomplex import (
    Morphism,
    Multicomplex,
    change_basis,
    direct_sum,
    direct_sum_morphism,
    hom_space,
    identity,
    inclusion_first,
    projection_first,
    quotient_module,
    submodule_closure,
    submodule_object,
    zero_morphism,
    zero_multicomplex,
)
from .representables import zw


def make_rng(seed):
    return random.Random(seed)


def _random_vector(rng, field, n):
    while True:
        v = tuple(field.random(rng) for _ in range(n))
        if any(v):
            return v


def _random_invertible(rng, field, n):
    while True:
        m = Matrix(field, n, n, tuple(tuple(field.random(rng) for _ in range(n)) for _ in range(n)))
        try:
            inverse(m)
        except ValueError:
            continue
        return m


def _finalise(A):
    """Drop any window marker: the object is taken at face value."""
    return Multicomplex(A.N, A.field, A.ranks, A.diffs, exact=None)


def square_block(N, field, b=(0, 0)):
    """``x, d_0 x, d_{N-1} x, d_0 d_{N-1} x``: acyclic for d_0 and for d_{N-1}."""
    p, q = b
    one = Matrix.identity(field, 1)
    s = N - 1
    ranks = {(p, q): 1, (p, q + 1): 1, (p - s, q + 1 - s): 1, (p - s, q + 2 - s): 1}
    diffs = {
        (0, (p, q)): one,
        (s, (p, q)): one,
        (0, (p - s, q + 1 - s)): one,
        (s, (p, q + 1)): one,
    }
    # relation l = N - 1: d_0 d_{N-1} + (-1)^{N-1} d_{N-1} d_0 = 0
    if (N - 1) % 2 == 0:
        diffs[(s, (p, q + 1))] = one.scale(field(-1))
    return Multicomplex(N, field, ranks, diffs)


def k_module(N, field, b=(0, 0)):
    """``K = k x (+) k d_0 x`` with only ``d_0`` nonzero."""
    p, q = b
    return Multicomplex(N, field, {(p, q): 1, (p, q + 1): 1}, {(0, (p, q)): Matrix.identity(field, 1)})


def _box_contains(box, b):
    p0, q0, size = box
    return p0 <= b[0] < p0 + size and q0 <= b[1] < q0 + size


def _cut_to_box(A, box):
    gens = {b: [row for row in Matrix.identity(A.field, r).data] for b, r in A.ranks.items() if not _box_contains(box, b)}
    if not gens:
        return A
    Q, _ = quotient_module(A, submodule_closure(A, gens))
    return Q


def _cut_ranks(rng, A, max_rank):
    while True:
        big = [b for b, r in A.ranks.items() if r > max_rank]
        if not big:
            return A
        b = rng.choice(sorted(big))
        v = _random_vector(rng, A.field, A.rank(b))
        A, _ = quotient_module(A, submodule_closure(A, {b: [v]}))


def _block(rng, N, field, box):
    p0, q0, size = box
    b = (rng.randrange(p0, p0 + size), rng.randrange(q0, q0 + size))
    kind = rng.random()
    if kind < 0.45:
        depth = rng.randrange(0, 3)
        return zw(N, 0, *b).window(field, max(p0, b[0] - depth))
    if kind < 0.7:
        k = rng.randrange(1, 4)
        return zw(N, k, *b).window(field, max(p0, b[0] - k - rng.randrange(0, 2)))
    if kind < 0.85:
        return square_block(N, field, b)
    return k_module(N, field, b)


def random_multicomplex(rng, N, field, box=5, max_rank=3, blocks=None, origin=(0, 0)):
    """A random valid multicomplex supported in a ``box x box`` square."""
    bx = (origin[0], origin[1], box)
    nblocks = blocks if blocks is not None else rng.randrange(1, 5)
    A = zero_multicomplex(N, field)
    for _ in range(nblocks):
        A = direct_sum(_finalise(A), _finalise(_cut_to_box(_block(rng, N, field, bx), bx)))
    A = _cut_ranks(rng, A, max_rank)
    roll = rng.random()
    if roll < 0.25 and A.ranks:
        b = rng.choice(A.support)
        A, _ = quotient_module(A, submodule_closure(A, {b: [_random_vector(rng, field, A.rank(b))]}))
    elif roll < 0.4 and A.ranks:
        b = rng.choice(A.support)
        sub = submodule_closure(A, {b: [_random_vector(rng, field, A.rank(b))]})
        A, _ = submodule_object(A, sub)
    A = _finalise(A)
    mats = {b: _random_invertible(rng, field, r) for b, r in A.ranks.items()}
    A, _ = change_basis(A, mats)
    return A


def random_hom(rng, A, B, zero_ok=True):
    basis = hom_space(A, B)
    if not basis:
        return zero_morphism(A, B)
    while True:
        f = zero_morphism(A, B)
        for h in basis:
            c = A.field.random(rng)
            if c:
                f = f + Morphism(A, B, {b: m.scale(c) for b, m in h.blocks.items()})
        if zero_ok or not f.is_zero():
            return f


def random_morphism(rng, N, field, box=4, max_rank=2):
    """A random strict morphism from a mixture of constructions."""
    kind = rng.randrange(11)
    mk = lambda **kw: random_multicomplex(rng, N, field, box=box, max_rank=max_rank, **kw)
    if kind == 0:
        A = mk()
        return identity(A)
    if kind == 1:
        A = mk()
        b = rng.choice(A.support) if A.ranks else None
        if b is None:
            return identity(A)
        _, pr = quotient_module(A, submodule_closure(A, {b: [_random_vector(rng, field, A.rank(b))]}))
        return Morphism(A, _finalise(pr.target), pr.blocks)
    if kind == 2:
        A = mk()
        if not A.ranks:
            return identity(A)
        b = rng.choice(A.support)
        S, inc = submodule_object(A, submodule_closure(A, {b: [_random_vector(rng, field, A.rank(b))]}))
        return Morphism(_finalise(S), A, inc.blocks)
    if kind == 3:
        A = mk()
        C = mk(blocks=1)
        return projection_first(A, C)
    if kind == 4:
        A = mk()
        C = mk(blocks=1)
        return inclusion_first(A, C)
    if kind == 5:
        A = mk()
        mats = {b: _random_invertible(rng, field, r) for b, r in A.ranks.items()}
        _, iso = change_basis(A, mats)
        return iso
    if kind == 6:
        A = mk()
        return zero_morphism(zero_multicomplex(N, field), A) if rng.random() < 0.5 else zero_morphism(A, zero_multicomplex(N, field))
    if kind == 7:
        A = mk()
        B = mk()
        return random_hom(rng, A, B)
    if kind >= 9:
        return _twisted_projection(rng, mk(), _acyclic_blocks(rng, N, field, box))
    # identity on one summand, a random map on the other
    A = mk(blocks=1)
    C = mk(blocks=1)
    D = mk(blocks=1)
    return direct_sum_morphism(identity(A), random_hom(rng, C, D))


def _acyclic_blocks(rng, N, field, box):
    C = zero_multicomplex(N, field)
    for _ in range(rng.randrange(1, 3)):
        b = (rng.randrange(0, box), rng.randrange(0, box))
        blk = square_block(N, field, b) if rng.random() < 0.6 else k_module(N, field, b)
        C = direct_sum(C, blk)
    return C


def _twisted_projection(rng, A, C):
    """``A (+) C -> A`` precomposed with a random automorphism of the sum."""
    field = A.field
    S = direct_sum(A, C)
    aut = random_hom(rng, S, S)
    pr = projection_first(A, C, S)
    f = pr @ (identity(S) + aut) if rng.random() < 0.5 else pr
    mats = {b: _random_invertible(rng, field, r) for b, r in S.ranks.items()}
    S2, iso = change_basis(S, mats)
    blocks = {b: f.block(b) @ inverse(mats[b]) for b in S.ranks}
    return Morphism(S2, A, blocks)


def random_composable_pair(rng, N, field, box=4, max_rank=2):
    """``(f, g)`` with ``g o f`` defined."""
    f = random_morphism(rng, N, field, box=box, max_rank=max_rank)
    B = f.target
    kind = rng.randrange(4)
    if kind == 0:
        C = random_multicomplex(rng, N, field, box=box, max_rank=max_rank)
        g = random_hom(rng, B, C)
    elif kind == 1:
        mats = {b: _random_invertible(rng, field, r) for b, r in B.ranks.items()}
        _, g = change_basis(B, mats)
    elif kind == 2 and B.ranks:
        b = rng.choice(B.support)
        _, pr = quotient_module(B, submodule_closure(B, {b: [_random_vector(rng, field, B.rank(b))]}))
        g = Morphism(B, _finalise(pr.target), pr.blocks)
    else:
        C = random_multicomplex(rng, N, field, box=box, max_rank=max_rank, blocks=1)
        g = inclusion_first(B, C)
    return f, g


def random_retract(rng, N, field, box=4, max_rank=2):
    """``(f, g, i_src, r_src, i_tgt, r_tgt)`` exhibiting ``f`` as a retract of ``g = f (+) h``."""
    f = random_morphism(rng, N, field, box=box, max_rank=max_rank)
    h = random_morphism(rng, N, field, box=box, max_rank=max_rank)
    g = direct_sum_morphism(f, h)
    i_s = inclusion_first(f.source, h.source, g.source)
    r_s = projection_first(f.source, h.source, g.source)
    i_t = inclusion_first(f.target, h.target, g.target)
    r_t = projection_first(f.target, h.target, g.target)
    return f, g, i_s, r_s, i_t, r_t
