"""N-multicomplexes with finite support, strict morphisms and the involution.

Sign convention: the structure maps satisfy, for every l,

    sum_{i+j=l} (-1)^i d_i d_j = 0,

so for N = 2 the two differentials *commute* (d_0 d_1 = d_1 d_0).  This is
not the anticommuting convention common in complex geometry.

Bidegrees are plain ``(p, q)`` tuples; ``d_i`` has bidegree ``(-i, 1-i)``.
Zero-rank bidegrees are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, Subspace, hstack, inverse, rank
from .linalg import _nullspace_vectors


class ShapeError(ValueError):
    """A block does not match the declared ranks."""


def shift(i):
    return (-i, 1 - i)


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def inv_bidegree(N, b):
    p, q = b
    return ((N - 2) * p - (N - 1) * q, (N - 3) * p - (N - 2) * q)


def _inv_region(N, region):
    if region is None:
        return None
    a, b, c = region
    return (a * (N - 2) + b * (N - 3), -a * (N - 1) - b * (N - 2), c)


class Multicomplex:
    """Finite-support bigraded vector space with structure maps ``d_0..d_{N-1}``.

    ``ranks`` maps bidegree -> positive rank; ``diffs`` maps ``(i, (p, q))``
    to the matrix of ``d_i`` out of ``A^{p,q}``.  ``exact`` optionally records
    that the object is a truncation of a larger (cone-supported) module which
    it matches exactly on the half-plane ``a*p + b*q >= c``; ``None`` means
    the object is what it claims to be everywhere.
    """

    __slots__ = ("N", "field", "ranks", "diffs", "exact", "_cache")

    def __init__(self, N, field, ranks, diffs=None, exact=None):
        if N < 2:
            raise ValueError("N must be at least 2")
        self.N = N
        self.field = field
        self.ranks = {tuple(b): r for b, r in ranks.items() if r > 0}
        self.exact = exact
        self._cache = {}
        clean = {}
        for (i, b), m in (diffs or {}).items():
            b = tuple(b)
            if not 0 <= i < N:
                raise ShapeError(f"structure map index {i} outside 0..{N - 1}")
            src = self.rank(b)
            tgt = self.rank(add(b, shift(i)))
            if m.shape != (tgt, src):
                raise ShapeError(
                    f"d_{i} at {b}: block shape {m.shape}, expected {(tgt, src)}"
                )
            if m.field is not field:
                raise ShapeError(f"d_{i} at {b}: block over a different field")
            if src and tgt and not m.is_zero():
                clean[(i, b)] = m
        self.diffs = clean

    def __repr__(self):
        return f"Multicomplex(N={self.N}, field={self.field!r}, dims={self.total_dim()}, support={len(self.ranks)})"

    def __eq__(self, other):
        return (
            isinstance(other, Multicomplex)
            and self.N == other.N
            and self.field is other.field
            and self.ranks == other.ranks
            and self.diffs == other.diffs
        )

    def __hash__(self):
        return id(self)

    def rank(self, b):
        return self.ranks.get(b, 0)

    def diff(self, i, b):
        m = self.diffs.get((i, b))
        if m is not None:
            return m
        return Matrix.zeros(self.field, self.rank(add(b, shift(i))), self.rank(b))

    def has_diff(self, i, b):
        return (i, b) in self.diffs

    @property
    def support(self):
        return sorted(self.ranks)

    def total_dim(self):
        return sum(self.ranks.values())

    def is_zero(self):
        return not self.ranks

    def hull(self):
        """Bounding box ``(pmin, pmax, qmin, qmax)`` of the support, or None."""
        if not self.ranks:
            return None
        ps = [b[0] for b in self.ranks]
        qs = [b[1] for b in self.ranks]
        return (min(ps), max(ps), min(qs), max(qs))

    def is_exact_at(self, b):
        if self.exact is None:
            return True
        a, bb, c = self.exact
        return a * b[0] + bb * b[1] >= c

    def basis_dims(self):
        return dict(self.ranks)


def zero_multicomplex(N, field):
    return Multicomplex(N, field, {})


def point_module(N, field, b=(0, 0)):
    """The one-dimensional multicomplex ``k(p,q)`` with all ``d_i = 0``."""
    return Multicomplex(N, field, {tuple(b): 1})


def _check_shapes(A):
    # construction already enforces shapes; kept for callers building by hand
    for (i, b), m in A.diffs.items():
        if m.shape != (A.rank(add(b, shift(i))), A.rank(b)):
            raise ShapeError(f"d_{i} at {b} has the wrong shape")


@dataclass(frozen=True)
class Violation:
    l: int
    p: int
    q: int
    residual: Matrix

    def __str__(self):
        return f"relation l={self.l} fails at ({self.p},{self.q})"


def relation_residual(A, l, b):
    """The matrix ``sum_{i+j=l} (-1)^i d_i d_j`` out of ``A^b``."""
    N = A.N
    tgt = add(b, (-l, 2 - l))
    acc = None
    for j in range(max(0, l - N + 1), min(l, N - 1) + 1):
        i = l - j
        if not (A.has_diff(j, b) and A.has_diff(i, add(b, shift(j)))):
            continue
        term = A.diff(i, add(b, shift(j))) @ A.diff(j, b)
        if i % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        acc = Matrix.zeros(A.field, A.rank(tgt), A.rank(b))
    return acc


def validate(A):
    """All failures of the multicomplex relations, as a list of ``Violation``."""
    _check_shapes(A)
    out = []
    for b in A.support:
        for l in range(0, 2 * (A.N - 1) + 1):
            if A.rank(add(b, (-l, 2 - l))) == 0:
                continue
            res = relation_residual(A, l, b)
            if not res.is_zero():
                out.append(Violation(l, b[0], b[1], res))
    return out


class Morphism:
    """Strict (bidegree (0,0)) map; ``blocks`` maps bidegree -> matrix."""

    __slots__ = ("source", "target", "blocks", "_cache")

    def __init__(self, source, target, blocks=None):
        if source.N != target.N:
            raise ShapeError("source and target have different N")
        if source.field is not target.field:
            raise ShapeError("source and target have different fields")
        self.source = source
        self.target = target
        self._cache = {}
        clean = {}
        for b, m in (blocks or {}).items():
            b = tuple(b)
            if m.shape != (target.rank(b), source.rank(b)):
                raise ShapeError(f"block at {b}: shape {m.shape}, expected {(target.rank(b), source.rank(b))}")
            if m.rows and m.cols and not m.is_zero():
                clean[b] = m
        self.blocks = clean

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"

    def __hash__(self):
        return id(self)

    @property
    def N(self):
        return self.source.N

    @property
    def field(self):
        return self.source.field

    def block(self, b):
        m = self.blocks.get(b)
        if m is not None:
            return m
        return Matrix.zeros(self.source.field, self.target.rank(b), self.source.rank(b))

    def apply(self, b, vec):
        return self.block(b).apply(vec)

    def __matmul__(self, other):
        """Composition ``self o other``."""
        if other.target.ranks != self.source.ranks:
            raise ShapeError("morphisms are not composable")
        blocks = {}
        for b in set(self.blocks) & set(other.blocks):
            blocks[b] = self.blocks[b] @ other.blocks[b]
        return Morphism(other.source, self.target, blocks)

    def __add__(self, other):
        blocks = dict(self.blocks)
        for b, m in other.blocks.items():
            blocks[b] = blocks[b] + m if b in blocks else m
        return Morphism(self.source, self.target, blocks)

    def is_zero(self):
        return not self.blocks


def identity(A):
    return Morphism(A, A, {b: Matrix.identity(A.field, r) for b, r in A.ranks.items()})


def zero_morphism(A, B):
    return Morphism(A, B, {})


@dataclass(frozen=True)
class MorphismViolation:
    i: int
    p: int
    q: int
    residual: Matrix

    def __str__(self):
        return f"d_{self.i} f != f d_{self.i} at ({self.p},{self.q})"


def validate_morphism(f):
    """All bidegrees/indices where ``d_i f = f d_i`` fails."""
    A, B = f.source, f.target
    if A.N != B.N or A.field is not B.field:
        raise ShapeError("source and target are incompatible")
    out = []
    for b in A.support:
        for i in range(A.N):
            t = add(b, shift(i))
            if B.rank(t) == 0:
                continue
            res = B.diff(i, b) @ f.block(b) - f.block(t) @ A.diff(i, b)
            if not res.is_zero():
                out.append(MorphismViolation(i, b[0], b[1], res))
    return out


def involve(A):
    """The involution: ``(A^inv)^{p,q} = A^{inv(p,q)}`` and ``d_i -> d_{N-1-i}``."""
    N = A.N
    ranks = {inv_bidegree(N, b): r for b, r in A.ranks.items()}
    diffs = {}
    for (i, b), m in A.diffs.items():
        diffs[(N - 1 - i, inv_bidegree(N, b))] = m
    return Multicomplex(N, A.field, ranks, diffs, exact=_inv_region(N, A.exact))


def involve_morphism(f, source=None, target=None):
    N = f.N
    src = source if source is not None else involve(f.source)
    tgt = target if target is not None else involve(f.target)
    return Morphism(src, tgt, {inv_bidegree(N, b): m for b, m in f.blocks.items()})


def _block_diag(field, m1, m2):
    top = hstack(field, [m1, Matrix.zeros(field, m1.rows, m2.cols)], m1.rows)
    bot = hstack(field, [Matrix.zeros(field, m2.rows, m1.cols), m2], m2.rows)
    return Matrix(field, m1.rows + m2.rows, m1.cols + m2.cols, top.data + bot.data)


def direct_sum(A, B):
    """``A (+) B`` with the basis of ``A`` first at every bidegree."""
    if A.N != B.N:
        raise ShapeError("direct sum of multicomplexes with different N")
    if A.field is not B.field:
        raise ShapeError("direct sum over different fields")
    ranks = dict(A.ranks)
    for b, r in B.ranks.items():
        ranks[b] = ranks.get(b, 0) + r
    diffs = {}
    for key in set(A.diffs) | set(B.diffs):
        i, b = key
        diffs[key] = _block_diag(A.field, A.diff(i, b), B.diff(i, b))
    if A.exact is None or B.exact is None or A.exact == B.exact:
        exact = A.exact if A.exact is not None else B.exact
    else:
        raise ShapeError("direct sum of truncations with different exact regions")
    return Multicomplex(A.N, A.field, ranks, diffs, exact=exact)


def direct_sum_morphism(f, g, source=None, target=None):
    src = source if source is not None else direct_sum(f.source, g.source)
    tgt = target if target is not None else direct_sum(f.target, g.target)
    blocks = {}
    for b in set(src.ranks):
        blocks[b] = _block_diag(src.field, f.block(b), g.block(b))
    return Morphism(src, tgt, blocks)


def inclusion_first(A, B, S=None):
    """``A -> A (+) B``."""
    S = S if S is not None else direct_sum(A, B)
    field = A.field
    blocks = {}
    for b, r in A.ranks.items():
        blocks[b] = Matrix(field, S.rank(b), r, Matrix.identity(field, r).data + Matrix.zeros(field, B.rank(b), r).data)
    return Morphism(A, S, blocks)


def projection_first(A, B, S=None):
    """``A (+) B -> A``."""
    S = S if S is not None else direct_sum(A, B)
    field = A.field
    blocks = {}
    for b, r in A.ranks.items():
        blocks[b] = hstack(field, [Matrix.identity(field, r), Matrix.zeros(field, r, B.rank(b))], r)
    return Morphism(S, A, blocks)


def truncate_below(A, pmin):
    """Quotient of ``A`` by everything in first degree ``< pmin``.

    The set ``{p < pmin}`` is closed under every ``d_i``, so this is a
    quotient multicomplex.
    """
    ranks = {b: r for b, r in A.ranks.items() if b[0] >= pmin}
    diffs = {(i, b): m for (i, b), m in A.diffs.items() if b[0] >= pmin and b[0] - i >= pmin}
    return Multicomplex(A.N, A.field, ranks, diffs, exact=(1, 0, pmin))


def change_basis(A, mats):
    """Transport ``A`` along invertible matrices ``mats[b]`` (new = g old).

    Returns the new multicomplex and the isomorphism ``A -> new``.
    """
    field = A.field
    g = {b: mats.get(b) or Matrix.identity(field, r) for b, r in A.ranks.items()}
    ginv = {b: inverse(m) for b, m in g.items()}
    diffs = {}
    for (i, b), m in A.diffs.items():
        t = add(b, shift(i))
        diffs[(i, b)] = g[t] @ m @ ginv[b]
    new = Multicomplex(A.N, field, A.ranks, diffs, exact=A.exact)
    return new, Morphism(A, new, g)


# ---------------------------------------------------------------------------
# submodules, quotients, hom spaces


def submodule_closure(A, generators):
    """Smallest sub-multicomplex containing the given vectors.

    ``generators`` maps bidegree -> iterable of vectors.  Returns a dict
    bidegree -> ``Subspace`` (bidegrees with zero subspace omitted).
    """
    field = A.field
    spaces = {}
    pending = {}
    for b, vecs in generators.items():
        vecs = [tuple(v) for v in vecs if any(v)]
        if vecs:
            pending.setdefault(tuple(b), []).extend(vecs)
    while pending:
        # process in order of increasing total degree q - p: d_i raises it by one
        b = min(pending, key=lambda x: (x[1] - x[0], x))
        vecs = pending.pop(b)
        old = spaces.get(b, Subspace.zero(field, A.rank(b)))
        new = Subspace.span(field, A.rank(b), list(old.basis) + vecs)
        if new.dim == old.dim:
            continue
        spaces[b] = new
        fresh = [v for v in new.basis if not old.contains(v)]
        for i in range(A.N):
            if not A.has_diff(i, b):
                continue
            t = add(b, shift(i))
            m = A.diff(i, b)
            imgs = [m.apply(v) for v in fresh]
            imgs = [v for v in imgs if any(v)]
            if imgs:
                pending.setdefault(t, []).extend(imgs)
    return spaces


def quotient_module(A, sub):
    """``A / sub`` with the projection morphism.

    ``sub`` maps bidegree -> ``Subspace`` and must be closed under the d_i.
    """
    field = A.field
    reps = {}
    coords = {}
    for b, r in A.ranks.items():
        S = sub.get(b, Subspace.zero(field, r))
        ident = Matrix.identity(field, r).data
        comp = Subspace.span(field, r, [S.reduce(v) for v in ident])
        if comp.dim:
            reps[b] = (S, comp)

    def coord(b, vec):
        S, comp = reps[b]
        red = S.reduce(vec)
        return tuple(red[c] for c in comp.pivots)

    ranks = {b: comp.dim for b, (S, comp) in reps.items()}
    diffs = {}
    for (i, b), m in A.diffs.items():
        t = add(b, shift(i))
        if b not in reps or t not in reps:
            continue
        cols = [coord(t, m.apply(v)) for v in reps[b][1].basis]
        diffs[(i, b)] = Matrix.from_columns(field, cols, ranks[t])
    Q = Multicomplex(A.N, field, ranks, diffs, exact=A.exact)
    blocks = {}
    for b in reps:
        ident = Matrix.identity(field, A.rank(b)).data
        blocks[b] = Matrix.from_columns(field, [coord(b, e) for e in ident], ranks[b])
    return Q, Morphism(A, Q, blocks)


def submodule_object(A, sub):
    """The sub-multicomplex ``sub`` as an object, with its inclusion."""
    field = A.field
    ranks = {b: S.dim for b, S in sub.items() if S.dim}
    diffs = {}
    for b, S in sub.items():
        if not S.dim:
            continue
        for i in range(A.N):
            t = add(b, shift(i))
            if t not in ranks or not A.has_diff(i, b):
                continue
            m = A.diff(i, b)
            cols = []
            for v in S.basis:
                c = sub[t].coordinates(m.apply(v))
                if c is None:
                    raise ValueError("subspace family is not closed under the structure maps")
                cols.append(c)
            diffs[(i, b)] = Matrix.from_columns(field, cols, ranks[t])
    Sobj = Multicomplex(A.N, field, ranks, diffs, exact=A.exact)
    blocks = {b: Matrix.from_columns(field, list(sub[b].basis), A.rank(b)) for b in ranks}
    return Sobj, Morphism(Sobj, A, blocks)


def _hom_layout(A, B):
    layout = []
    offset = 0
    for b in A.support:
        rb, ra = B.rank(b), A.rank(b)
        if rb:
            layout.append((b, offset, rb, ra))
            offset += rb * ra
    return layout, offset


def hom_equations(A, B):
    """Linear equations (rows) whose kernel is ``Hom(A, B)`` in block coordinates."""
    field = A.field
    red = field.reduce
    layout, n = _hom_layout(A, B)
    where = {b: (off, rb, ra) for b, off, rb, ra in layout}
    rows = []
    for b in A.support:
        for i in range(A.N):
            t = add(b, shift(i))
            rt = B.rank(t)
            if rt == 0:
                continue
            DA = A.diff(i, b)
            DB = B.diff(i, b)
            src = where.get(b)
            dst = where.get(t)
            if src is None and dst is None:
                continue
            # entry (r, c) of DB f_b - f_t DA
            for r in range(rt):
                for c in range(A.rank(b)):
                    row = [field.zero] * n
                    if src is not None:
                        off, rb, ra = src
                        for k in range(rb):
                            x = DB.data[r][k]
                            if x:
                                row[off + k * ra + c] = red(row[off + k * ra + c] + x)
                    if dst is not None:
                        off, rb2, ra2 = dst
                        for k in range(ra2):
                            x = DA.data[k][c]
                            if x:
                                row[off + r * ra2 + k] = red(row[off + r * ra2 + k] - x)
                    if any(row):
                        rows.append(row)
    return rows, layout, n


def morphism_from_vector(A, B, layout, vec):
    field = A.field
    blocks = {}
    for b, off, rb, ra in layout:
        data = tuple(tuple(vec[off + r * ra + c] for c in range(ra)) for r in range(rb))
        blocks[b] = Matrix(field, rb, ra, data)
    return Morphism(A, B, blocks)


def hom_space(A, B):
    """A basis of the space of strict morphisms ``A -> B`` (list of Morphisms)."""
    rows, layout, n = hom_equations(A, B)
    vecs = _nullspace_vectors(A.field, rows, n)
    return [morphism_from_vector(A, B, layout, v) for v in vecs]


def hom_dimension(A, B):
    rows, layout, n = hom_equations(A, B)
    if not rows:
        return n
    r, _ = A.field.rref(rows, n)
    return n - len(r)


def is_isomorphism(f):
    if f.source.ranks != f.target.ranks:
        return False
    return all(rank(f.block(b)) == r for b, r in f.source.ranks.items())


def cached_involve(A):
    """``involve(A)``, memoised on ``A`` (and linked back so inv(inv(A)) is A)."""
    inv = A._cache.get("inv")
    if inv is None:
        inv = involve(A)
        inv._cache["inv"] = A
        A._cache["inv"] = inv
    return inv


def cached_involve_morphism(f):
    g = f._cache.get("inv")
    if g is None:
        g = involve_morphism(f, cached_involve(f.source), cached_involve(f.target))
        g._cache["inv"] = f
        f._cache["inv"] = g
    return g
