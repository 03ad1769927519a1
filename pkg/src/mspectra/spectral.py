"""Witness cycles, witness boundaries and the pages of both spectral sequences.

Page ``r`` of the first spectral sequence at ``(p, q)`` is computed as

    ZW_r^{p,q}(A) / w_r(BW_r^{p,q-1}(A))

where a witness r-cycle is a tuple ``(a_0, ..., a_{r-1})`` with
``a_i in A^{p-i,q-i}`` and ``sum_{i+j=l} (-1)^i d_i a_j = 0`` for ``l < r``.
The second spectral sequence is the first one of ``A^inv``.

``classical_pages`` is an independent oracle: the spectral sequence of the
column-filtered total complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import Matrix, QuotientPresentation, Subspace, _nullspace_vectors, quotient, rank_of_vectors
from .multicomplex import add, cached_involve, cached_involve_morphism, inv_bidegree

FIRST = "first"
SECOND = "second"


class PageMapError(RuntimeError):
    """A map on pages failed to be well defined (a strictness bug upstream)."""


class OracleError(RuntimeError):
    """The total-complex differential does not square to zero."""


def _check_side(side):
    if side not in (FIRST, SECOND):
        raise ValueError(f"side must be {FIRST!r} or {SECOND!r}, got {side!r}")


# ---------------------------------------------------------------------------
# layouts


def zw_components(r, b):
    return [(b[0] - i, b[1] - i) for i in range(r)] if r else [tuple(b)]


def _layout(A, bids):
    offs, n = [], 0
    for c in bids:
        offs.append(n)
        n += A.rank(c)
    return offs, n


def zw_touched(r, b):
    """Bidegrees of ``A`` read when computing ``ZW_r`` at ``b``."""
    if r == 0:
        return {tuple(b)}
    out = set(zw_components(r, b))
    for l in range(r):
        out.add((b[0] - l, b[1] - l + 1))
    return out


def page_touched(r, b):
    """Bidegrees of ``A`` read when computing ``E_r`` at ``b``."""
    p, q = b
    out = zw_touched(r, b)
    if r == 1:
        out.add((p, q - 1))
    elif r >= 2:
        out |= zw_touched(r - 1, (p + r - 1, q + r - 2))
        out.add((p, q - 1))
        out |= zw_touched(r - 1, (p - 1, q - 1))
    return out


def page_trusted(A, r, b):
    """True if every datum used for ``E_r`` at ``b`` lies in A's exact region."""
    if A.exact is None:
        return True
    return all(A.is_exact_at(t) for t in page_touched(r, b))


# ---------------------------------------------------------------------------
# witness cycles and boundaries


def witness_cycles(A, r, p, q):
    """``ZW_r^{p,q}(A)`` inside the concatenation of ``A^{p-i,q-i}``, ``i < r``."""
    b = (p, q)
    key = ("zw", r, b)
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    field = A.field
    comps = zw_components(r, b)
    offs, n = _layout(A, comps)
    if r == 0 or n == 0:
        S = Subspace.full(field, n) if r == 0 else Subspace.zero(field, 0)
        A._cache[key] = S
        return S
    rows = []
    for l in range(r):
        t = (p - l, q - l + 1)
        rt = A.rank(t)
        if not rt:
            continue
        block = [[field.zero] * n for _ in range(rt)]
        nonzero = False
        for j in range(0, l + 1):
            i = l - j
            if i >= A.N or not A.has_diff(i, comps[j]):
                continue
            m = A.diffs[(i, comps[j])]
            sign = -1 if i % 2 else 1
            off = offs[j]
            for a in range(rt):
                row = m.data[a]
                tgt = block[a]
                for c, x in enumerate(row):
                    if x:
                        tgt[off + c] = field.reduce(tgt[off + c] + sign * x)
                        nonzero = True
        if nonzero:
            rows.extend(block)
    S = Subspace.span(field, n, _nullspace_vectors(field, rows, n))
    A._cache[key] = S
    return S


def boundary_domain(r, p, q):
    """Bidegree pieces of ``BW_r^{p,q-1}``: ``(b-part, a-part, c-part)``.

    Each part is ``(r', base)`` meaning ``ZW_{r'}`` at ``base``; the a-part is
    ``(0, (p, q-1))``.
    """
    if r == 0:
        return []
    if r == 1:
        return [(0, (p, q - 1))]
    return [(r - 1, (p + r - 1, q + r - 2)), (0, (p, q - 1)), (r - 1, (p - 1, q - 1))]


def _domain_bidegrees(r, p, q):
    out = []
    for rr, base in boundary_domain(r, p, q):
        out.extend(zw_components(rr, base))
    return out


def witness_boundary_map(A, r, p, q):
    """Matrix of ``w_r`` from ``BW_r^{p,q-1}`` coordinates to ``ZW_r^{p,q}`` coordinates.

    The domain coordinates are the concatenation ``b_0..b_{r-2}, a, c_0..c_{r-2}``
    of the ambient spaces (the matrix is defined on the whole ambient; the
    boundaries are its image on the subspace BW).
    """
    key = ("wmap", r, (p, q))
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    field = A.field
    tgt_bids = zw_components(r, (p, q)) if r else [(p, q)]
    toffs, nt = _layout(A, tgt_bids)
    dom = _domain_bidegrees(r, p, q)
    doffs, nd = _layout(A, dom)
    data = [[field.zero] * nd for _ in range(nt)]

    def put(m_out, col_piece, mat, sign):
        ro, co = toffs[m_out], doffs[col_piece]
        for a, row in enumerate(mat.data):
            for c, x in enumerate(row):
                if x:
                    data[ro + a][co + c] = field.reduce(data[ro + a][co + c] + sign * x)

    if r == 1:
        if A.has_diff(0, (p, q - 1)):
            put(0, 0, A.diffs[(0, (p, q - 1))], 1)
    elif r >= 2:
        nb = r - 1
        ia = nb
        for m in range(r):
            tb = tgt_bids[m]
            if m < A.N and A.has_diff(m, (p, q - 1)):
                put(m, ia, A.diffs[(m, (p, q - 1))], 1)
            sm = -1 if m % 2 else 1
            for i in range(m + 1, r + m):
                if i >= A.N:
                    break
                j = r + m - 1 - i
                src = dom[j]
                if A.has_diff(i, src):
                    si = -1 if i % 2 else 1
                    put(m, j, A.diffs[(i, src)], sm * si)
            if m >= 1 and A.rank(tb):
                put(m, ia + 1 + (m - 1), Matrix.identity(field, A.rank(tb)), 1)
    M = Matrix(field, nt, nd, tuple(tuple(row) for row in data))
    A._cache[key] = M
    return M


def boundary_space(A, r, p, q):
    """``BW_r^{p,q-1}(A)`` as a subspace of the concatenated domain coordinates."""
    field = A.field
    vecs = []
    dom = _domain_bidegrees(r, p, q)
    _, nd = _layout(A, dom)
    pos = 0
    for rr, base in boundary_domain(r, p, q):
        piece = zw_components(rr, base)
        _, npiece = _layout(A, piece)
        S = witness_cycles(A, rr, *base) if rr else Subspace.full(field, A.rank(base))
        for v in S.basis:
            vecs.append((field.zero,) * pos + tuple(v) + (field.zero,) * (nd - pos - npiece))
        pos += npiece
    return Subspace.span(field, nd, vecs)


def witness_boundaries(A, r, p, q):
    """``w_r(BW_r^{p,q-1}(A))`` inside the ZW_r coordinates at ``(p, q)``."""
    key = ("bd", r, (p, q))
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    field = A.field
    M = witness_boundary_map(A, r, p, q)
    if r == 0 or M.rows == 0 or M.cols == 0:
        S = Subspace.zero(field, M.rows)
    else:
        D = boundary_space(A, r, p, q)
        S = Subspace.span(field, M.rows, [M.apply(v) for v in D.basis])
    A._cache[key] = S
    return S


def page_at(A, r, b):
    """First-side ``E_r`` at ``b`` as a quotient presentation."""
    b = tuple(b)
    key = ("page", r, b)
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    Z = witness_cycles(A, r, *b)
    if Z.dim == 0:
        P = QuotientPresentation(Z, Z, Z)
    else:
        P = quotient(Z, witness_boundaries(A, r, *b))
    A._cache[key] = P
    return P


# ---------------------------------------------------------------------------
# page tables


@dataclass
class PageTable:
    """One page of one spectral sequence, bidegree -> quotient presentation."""

    side: str
    r: int
    entries: dict
    untrusted: set = dc_field(default_factory=set)

    def dim(self, b):
        P = self.entries.get(tuple(b))
        return P.dim if P is not None else 0

    def dims(self):
        """Nonzero dimensions, as a sorted dict."""
        return {b: self.entries[b].dim for b in sorted(self.entries) if self.entries[b].dim}

    def trusted(self, b):
        return tuple(b) not in self.untrusted

    def trusted_dims(self):
        return {b: d for b, d in self.dims().items() if b not in self.untrusted}


def page_bidegrees(A, r):
    """Support hull of ``A`` inflated by ``r + 1`` in every direction."""
    h = A.hull()
    if h is None:
        return []
    pmin, pmax, qmin, qmax = h
    k = r + 1
    return [(p, q) for p in range(pmin - k, pmax + k + 1) for q in range(qmin - k, qmax + k + 1)]


def _first_page(A, r):
    entries, untrusted = {}, set()
    for b in page_bidegrees(A, r):
        comps = zw_components(r, b)
        if not any(A.rank(c) for c in comps):
            continue
        entries[b] = page_at(A, r, b)
        if not page_trusted(A, r, b):
            untrusted.add(b)
    return entries, untrusted


def page(A, side, r):
    """Page ``r`` of the first (``'E``) or second (``''E``) spectral sequence."""
    _check_side(side)
    if r < 0:
        raise ValueError("page index must be non-negative")
    if side == FIRST:
        entries, untrusted = _first_page(A, r)
        return PageTable(FIRST, r, entries, untrusted)
    B = cached_involve(A)
    entries, untrusted = _first_page(B, r)
    N = A.N
    return PageTable(
        SECOND,
        r,
        {inv_bidegree(N, b): P for b, P in entries.items()},
        {inv_bidegree(N, b) for b in untrusted},
    )


def _apply_componentwise(f, comps, vec):
    out = []
    pos = 0
    for c in comps:
        n = f.source.rank(c)
        piece = vec[pos : pos + n]
        pos += n
        if f.target.rank(c):
            out.extend(f.block(c).apply(piece) if n else (f.field.zero,) * f.target.rank(c))
    return tuple(out)


def _first_side_map(f, r):
    A, B = f.source, f.target
    out = {}
    bids = set(page_bidegrees(A, r)) | set(page_bidegrees(B, r))
    for b in sorted(bids):
        comps = zw_components(r, b)
        if not any(A.rank(c) for c in comps) and not any(B.rank(c) for c in comps):
            continue
        PA, PB = page_at(A, r, b), page_at(B, r, b)
        if PA.dim == 0 and PB.dim == 0:
            continue
        for v in PA.divisor.basis:
            if not PB.is_trivial(_apply_componentwise(f, comps, v)):
                raise PageMapError(f"boundary at {b} (page {r}) does not map to a boundary")
        cols = [PB.coordinates(_apply_componentwise(f, comps, v)) for v in PA.representatives]
        out[b] = Matrix.from_columns(f.field, cols, PB.dim)
    return out


def induced_page_map(f, side, r):
    """Bidegree -> matrix of ``E_r(f)`` in the canonical representatives."""
    _check_side(side)
    if side == FIRST:
        return _first_side_map(f, r)
    g = cached_involve_morphism(f)
    return {inv_bidegree(f.N, b): m for b, m in _first_side_map(g, r).items()}


@dataclass(frozen=True)
class PageMapStatus:
    bidegree: tuple
    rank: int
    source_dim: int
    target_dim: int
    trusted: bool

    @property
    def injective(self):
        return self.rank == self.source_dim

    @property
    def surjective(self):
        return self.rank == self.target_dim

    @property
    def iso(self):
        return self.injective and self.surjective


def page_map_status(f, side, r):
    """Rank data of ``E_r(f)`` at every bidegree where either page is nonzero."""
    _check_side(side)
    if side == SECOND:
        g = cached_involve_morphism(f)
        return [
            PageMapStatus(inv_bidegree(f.N, s.bidegree), s.rank, s.source_dim, s.target_dim, s.trusted)
            for s in page_map_status(g, FIRST, r)
        ]
    key = ("status", r)
    hit = f._cache.get(key)
    if hit is not None:
        return hit
    out = []
    for b, m in sorted(_first_side_map(f, r).items()):
        rk = rank_of_vectors(f.field, [row for row in m.data], m.cols) if m.rows and m.cols else 0
        trusted = page_trusted(f.source, r, b) and page_trusted(f.target, r, b)
        out.append(PageMapStatus(b, rk, m.cols, m.rows, trusted))
    f._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# oracles


def page_two_via_page_one(A):
    """``E_2`` as the homology of ``(E_1, d_1)`` with ``E_1 = H(A, d_0)``."""
    field = A.field
    E1 = {}
    bids = set()
    for b in A.support:
        bids.add(b)
    for b in sorted(bids):
        cyc = Subspace.span(field, A.rank(b), _nullspace_vectors(field, A.diff(0, b).data, A.rank(b)))
        src = (b[0], b[1] - 1)
        bd = Subspace.span(field, A.rank(b), A.diff(0, src).columns()) if A.rank(src) else Subspace.zero(field, A.rank(b))
        E1[b] = quotient(cyc, bd)

    def d1_matrix(b):
        t = (b[0] - 1, b[1])
        if b not in E1 or t not in E1 or not E1[b].dim or not E1[t].dim:
            return None
        cols = [E1[t].coordinates(A.diff(1, b).apply(v)) for v in E1[b].representatives]
        return Matrix.from_columns(field, cols, E1[t].dim)

    entries = {}
    for b, P in E1.items():
        n = P.dim
        if not n:
            continue
        out = d1_matrix(b)
        ker = Subspace.full(field, n) if out is None else Subspace.span(field, n, _nullspace_vectors(field, out.data, n))
        inc = d1_matrix((b[0] + 1, b[1]))
        im = Subspace.zero(field, n) if inc is None else Subspace.span(field, n, inc.columns())
        entries[b] = quotient(ker, im)
    return PageTable(FIRST, 2, entries)


def total_differential(A, n):
    """Matrix of ``D = sum_i (-1)^(i*n) d_i`` from total degree ``n`` to ``n+1``.

    Columns and rows are ordered by increasing first degree ``p``.
    """
    field = A.field
    src = [b for b in A.support if b[1] - b[0] == n]
    tgt = [b for b in A.support if b[1] - b[0] == n + 1]
    soffs, ns = _layout(A, src)
    toffs, nt = _layout(A, tgt)
    tindex = {b: k for k, b in enumerate(tgt)}
    data = [[field.zero] * ns for _ in range(nt)]
    for k, b in enumerate(src):
        for i in range(A.N):
            t = add(b, (-i, 1 - i))
            if t not in tindex or not A.has_diff(i, b):
                continue
            sign = -1 if (i * n) % 2 else 1
            ro = toffs[tindex[t]]
            for a, row in enumerate(A.diffs[(i, b)].data):
                for c, x in enumerate(row):
                    if x:
                        data[ro + a][soffs[k] + c] = field.reduce(sign * x)
    return src, tgt, Matrix(field, nt, ns, tuple(tuple(row) for row in data))


def check_total_differential(A):
    """Raise ``OracleError`` unless ``D o D = 0`` in every total degree."""
    h = A.hull()
    if h is None:
        return
    ns = sorted({b[1] - b[0] for b in A.support})
    for n in ns:
        _, _, D1 = total_differential(A, n)
        _, _, D2 = total_differential(A, n + 1)
        if D1.rows and D2.cols and not (D2 @ D1).is_zero():
            raise OracleError(f"D^2 != 0 out of total degree {n}")


def classical_pages(A, r):
    """Page ``r`` of the column-filtered total complex, keyed by ``(p, n)``.

    ``F_p`` is spanned by the pieces with first degree ``<= p``;
    ``E_r^{p,n} = Z_r^{p,n} / (Z_{r-1}^{p-1,n} + D Z_{r-1}^{p+r-1,n-1})`` with
    ``Z_r^{p,n} = {x in F_p : Dx in F_{p-r}}``.  Only dimensions are returned.
    """
    check_total_differential(A)
    field = A.field
    if A.is_zero():
        return {}
    ns = sorted({b[1] - b[0] for b in A.support})
    ps = sorted({b[0] for b in A.support})
    cache = {}

    def degree_data(n):
        if n not in cache:
            src, tgt, D = total_differential(A, n)
            cache[n] = (src, tgt, D)
        return cache[n]

    def Z(rr, p, n):
        """Basis vectors (in C^n coordinates) of Z_rr^{p,n}; rr = -1 means F_p."""
        src, tgt, D = degree_data(n)
        dim = sum(A.rank(b) for b in src)
        cols = []
        pos = 0
        for b in src:
            for _ in range(A.rank(b)):
                if b[0] <= p:
                    cols.append(pos)
                pos += 1
        if rr <= 0:
            return [tuple(field.one if k == c else field.zero for k in range(dim)) for c in cols]
        rows = []
        pos = 0
        for b in tgt:
            for _ in range(A.rank(b)):
                if b[0] > p - rr:
                    rows.append(pos)
                pos += 1
        sub = [[D.data[rw][c] for c in cols] for rw in rows]
        kern = _nullspace_vectors(field, sub, len(cols))
        out = []
        for v in kern:
            full = [field.zero] * dim
            for c, x in zip(cols, v):
                full[c] = x
            out.append(tuple(full))
        return out

    result = {}
    for n in ns:
        src, _, _ = degree_data(n)
        dim = sum(A.rank(b) for b in src)
        if not dim:
            continue
        _, _, Dprev = degree_data(n - 1)
        for p in ps:
            z = Z(r, p, n)
            if not z:
                continue
            old = Z(r - 1, p - 1, n)
            prev = Z(r - 1, p + r - 1, n - 1)
            bd = [Dprev.apply(v) for v in prev] if Dprev.cols else []
            den = rank_of_vectors(field, old + bd, dim)
            d = len(z) - den
            if d:
                result[(p, n)] = d
    return result


def witness_dims_as_classical(A, r):
    """First-side page dims re-keyed by ``(p, n = q - p)``."""
    return {(b[0], b[1] - b[0]): d for b, d in page(A, FIRST, r).dims().items()}


__all__ = [
    "FIRST",
    "OracleError",
    "PageMapError",
    "PageMapStatus",
    "PageTable",
    "SECOND",
    "boundary_space",
    "check_total_differential",
    "classical_pages",
    "induced_page_map",
    "page",
    "page_at",
    "page_map_status",
    "page_touched",
    "page_trusted",
    "page_two_via_page_one",
    "witness_boundaries",
    "witness_boundary_map",
    "witness_cycles",
    "witness_dims_as_classical",
]
