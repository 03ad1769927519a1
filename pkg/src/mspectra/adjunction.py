"""The functors between bicomplexes (N=2) and 4-multicomplexes.

``j(M)^{p,q} = M^{q, 2q-p}`` with ``d_1 = d_0^M``, ``d_2 = d_1^M`` and
``d_0 = d_3 = 0``.  In the other direction ``q'(L)`` is ``L`` modulo the
submodule generated by the images of ``d_0`` and ``d_3``, and
``q(L)^{a,b} = q'(L)^{2a-b, a}`` with ``d_0, d_1`` induced by ``d_1, d_2``.

``q`` is left adjoint to ``j``: ``Hom(q(L), M) = Hom(L, j(M))`` via
``g -> j(g) o unit_L``.  The counit ``q j(M) -> M`` is the identity.
"""

from __future__ import annotations

from .linalg import Matrix, Subspace, rank_of_vectors
from .multicomplex import (
    Morphism,
    Multicomplex,
    ShapeError,
    add,
    hom_space,
    identity,
    shift,
    submodule_closure,
)


def j_bidegree(b):
    """Bidegree in ``j(M)`` of the piece ``M^{a,b}``."""
    a, bb = b
    return (2 * a - bb, a)


def q_bidegree(b):
    """Bidegree in ``q(L)`` of the piece ``q'(L)^{p,q}``."""
    p, q = b
    return (q, 2 * q - p)


def _require(A, N):
    if A.N != N:
        raise ShapeError(f"expected an N={N} multicomplex, got N={A.N}")


def j(M):
    """Bicomplex -> 4-multicomplex."""
    _require(M, 2)
    ranks = {j_bidegree(b): r for b, r in M.ranks.items()}
    diffs = {(i + 1, j_bidegree(b)): m for (i, b), m in M.diffs.items()}
    exact = None
    if M.exact is not None:
        a, bb, c = M.exact
        # a*x + bb*y >= c with (x, y) = (q, 2q - p)
        exact = (-bb, a + 2 * bb, c)
    return Multicomplex(4, M.field, ranks, diffs, exact=exact)


def j_morphism(f, source=None, target=None):
    src = source if source is not None else j(f.source)
    tgt = target if target is not None else j(f.target)
    return Morphism(src, tgt, {j_bidegree(b): m for b, m in f.blocks.items()})


class _QuotientData:
    """Per-bidegree quotient ``L^b / S^b`` with canonical representatives."""

    def __init__(self, L):
        _require(L, 4)
        field = L.field
        gens = {}
        for (i, b), m in L.diffs.items():
            if i in (0, 3):
                t = add(b, shift(i))
                gens.setdefault(t, []).extend(m.columns())
        self.L = L
        self.sub = submodule_closure(L, gens)
        self.reps = {}
        for b, r in L.ranks.items():
            S = self.sub.get(b, Subspace.zero(field, r))
            comp = Subspace.span(field, r, [S.reduce(e) for e in Matrix.identity(field, r).data])
            if comp.dim:
                self.reps[b] = (S, comp)

    def coords(self, b, vec):
        S, comp = self.reps[b]
        red = S.reduce(vec)
        return tuple(red[c] for c in comp.pivots)

    def rank(self, b):
        return self.reps[b][1].dim if b in self.reps else 0

    def projection_matrix(self, b):
        field = self.L.field
        return Matrix.from_columns(field, [self.coords(b, e) for e in Matrix.identity(field, self.L.rank(b)).data], self.rank(b))

    def section_matrix(self, b):
        return Matrix.from_columns(self.L.field, list(self.reps[b][1].basis), self.L.rank(b))


def _quotient_data(L):
    data = L._cache.get("qdata")
    if data is None:
        data = _QuotientData(L)
        L._cache["qdata"] = data
    return data


def q_prime(L):
    """``L / (A_4 d_0 L + A_4 d_3 L)`` as a 4-multicomplex (``d_0 = d_3 = 0``)."""
    Q = L._cache.get("qprime")
    if Q is not None:
        return Q
    data = _quotient_data(L)
    field = L.field
    ranks = {b: data.rank(b) for b in data.reps}
    diffs = {}
    for (i, b), m in L.diffs.items():
        if i in (0, 3):
            continue
        t = add(b, shift(i))
        if b not in data.reps or t not in data.reps:
            continue
        cols = [data.coords(t, m.apply(v)) for v in data.reps[b][1].basis]
        diffs[(i, b)] = Matrix.from_columns(field, cols, ranks[t])
    Q = Multicomplex(4, field, ranks, diffs, exact=L.exact)
    L._cache["qprime"] = Q
    return Q


def q(L):
    """4-multicomplex -> bicomplex."""
    Qp = q_prime(L)
    ranks = {q_bidegree(b): r for b, r in Qp.ranks.items()}
    diffs = {}
    for (i, b), m in Qp.diffs.items():
        if i in (1, 2):
            diffs[(i - 1, q_bidegree(b))] = m
    exact = None
    if Qp.exact is not None:
        a, bb, c = Qp.exact
        # a*p + bb*q >= c with (p, q) = (2x - y, x)
        exact = (2 * a + bb, -a, c)
    return Multicomplex(2, L.field, ranks, diffs, exact=exact)


def q_prime_morphism(f, source=None, target=None):
    src = source if source is not None else q_prime(f.source)
    tgt = target if target is not None else q_prime(f.target)
    dA, dB = _quotient_data(f.source), _quotient_data(f.target)
    blocks = {}
    for b in src.ranks:
        if not tgt.rank(b):
            continue
        blocks[b] = dB.projection_matrix(b) @ f.block(b) @ dA.section_matrix(b)
    return Morphism(src, tgt, blocks)


def q_morphism(f, source=None, target=None):
    g = q_prime_morphism(f)
    src = source if source is not None else q(f.source)
    tgt = target if target is not None else q(f.target)
    return Morphism(src, tgt, {q_bidegree(b): m for b, m in g.blocks.items()})


def unit(L, target=None):
    """``L -> j q(L)``, the per-bidegree quotient projection."""
    tgt = target if target is not None else j(q(L))
    data = _quotient_data(L)
    blocks = {b: data.projection_matrix(b) for b in data.reps}
    return Morphism(L, tgt, blocks)


def counit(M):
    """``q j(M) -> M``; the identity on presentations."""
    return identity(M)


# ---------------------------------------------------------------------------
# checks


def counit_is_identity(M):
    return q(j(M)) == M


def triangle_identities(L=None, M=None):
    """``q(unit_L) = id`` and ``j(counit_M) o unit_{j(M)} = id``."""
    out = {}
    if L is not None:
        qL = q(L)
        qu = q_morphism(unit(L), source=qL, target=q(j(qL)))
        out["q_unit"] = qu.source == qu.target and all(
            qu.block(b) == Matrix.identity(L.field, r) for b, r in qL.ranks.items()
        )
    if M is not None:
        jM = j(M)
        u = unit(jM)
        out["unit_j"] = u.target == jM and all(u.block(b) == Matrix.identity(M.field, r) for b, r in jM.ranks.items())
    return out


def involution_preserved(M=None, L=None):
    from .multicomplex import involve

    out = {}
    if M is not None:
        out["j"] = j(involve(M)) == involve(j(M))
    if L is not None:
        out["q"] = q(involve(L)) == involve(q(L))
    return out


def hom_bijection(L, M):
    """Compare ``Hom(q(L), M)`` with ``Hom(L, j(M))`` through ``g -> j(g) o unit_L``."""
    qL, jM = q(L), j(M)
    left = hom_space(qL, M)
    right = hom_space(L, jM)
    u = unit(L)
    images = []
    sup = L.support
    for g in left:
        h = j_morphism(g, source=u.target, target=jM) @ u
        vec = []
        for b in sup:
            for row in h.block(b).data:
                vec.extend(row)
        images.append(tuple(vec))
    n = sum(L.rank(b) * jM.rank(b) for b in sup)
    rk = rank_of_vectors(L.field, images, n) if images else 0
    return {
        "dim_hom_qL_M": len(left),
        "dim_hom_L_jM": len(right),
        "rank": rk,
        "bijective": rk == len(left) == len(right),
    }


def reversed_hom_dims(L, M):
    """Dimensions of ``Hom(j(M), L)`` and ``Hom(M, q(L))`` (no bijection expected)."""
    return len(hom_space(j(M), L)), len(hom_space(M, q(L)))


def blockwise_surjective(f):
    from .linalg import rank as _rank

    return all(_rank(f.block(b)) == r for b, r in f.target.ranks.items())


def quillen_adjunction_smoke(r=1, s=1, samples=20, seed=0, field=None):
    """Sampled checks that ``j`` sends surjections to (r,s)-fibrations and
    E_{0,0}-equivalences to E_{r,s}-equivalences."""
    from .linalg import QQ
    from .model import is_fibration, is_weak_equivalence
    from .randgen import make_rng, random_morphism

    field = field if field is not None else QQ
    rng = make_rng(seed)
    counts = {"samples": 0, "surjective": 0, "fib_ok": 0, "we00": 0, "we_ok": 0, "failures": []}
    for k in range(samples):
        f = random_morphism(rng, 2, field, box=4, max_rank=2)
        jf = j_morphism(f)
        counts["samples"] += 1
        if blockwise_surjective(f):
            counts["surjective"] += 1
            if is_fibration(jf, r, s).holds:
                counts["fib_ok"] += 1
            else:
                counts["failures"].append({"sample": k, "check": "fibration"})
        if is_weak_equivalence(f, 0, 0).holds:
            counts["we00"] += 1
            if is_weak_equivalence(jf, r, s).holds:
                counts["we_ok"] += 1
            else:
                counts["failures"].append({"sample": k, "check": "weak_equivalence"})
    counts["ok"] = not counts["failures"]
    return counts


def unit_zw_experiment(s, pmin, r=1, r2=1, p=0, qq=0, field=None):
    """Is ``unit`` of the window ``ZW^4_s(p,q)|_{p >= pmin}`` in E_{r,r2}?

    Returns ``(verdict, untrusted_count)``; only bidegrees whose page data
    lies inside the exact region of the window count towards the verdict.
    """
    from .linalg import QQ
    from .model import is_weak_equivalence
    from .representables import zw

    field = field if field is not None else QQ
    W = zw(4, s, p, qq).window(field, pmin)
    u = unit(W)
    v = is_weak_equivalence(u, r, r2)
    return v.holds, len(v.untrusted)
