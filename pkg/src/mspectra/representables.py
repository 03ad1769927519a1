"""Representing objects ZW_k(p,q), BW_r(p,q) and the maps between them.

A ``ConeModule`` is a finitely generated A_N-module given by generators and
one rewriting rule per generator:

* a *free* generator ``x`` (the module ZW_0) has basis ``w . x`` for every
  normal word ``w`` of A_N;
* a *chain* generator ``a_j`` of ZW_k satisfies
  ``d_0 a_j = sum_{t=1}^{j} (-1)^(t+1) d_t a_{j-t}``, so its basis is
  ``w . a_j`` for normal words ``w`` not ending in ``d_0``.

Module structure is computed with integer coefficients and is therefore
field independent.  Every bidegree has a finite basis (each letter other
than ``d_0`` lowers the first degree, ``d_0`` can occur only once, at the
end), so any quotient window ``p >= pmin`` is a finite multicomplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import algebra, format_word
from .linalg import Matrix, Subspace
from .multicomplex import Morphism, Multicomplex, add, inv_bidegree, point_module, shift


@dataclass(frozen=True)
class Generator:
    name: str
    bidegree: tuple
    lower: tuple | None  # None: free generator; else (a_{j-1}, ..., a_0) indices


def _add_into(acc, key, coef):
    c = acc.get(key, 0) + coef
    if c:
        acc[key] = c
    else:
        acc.pop(key, None)


class ConeModule:
    """Finitely generated A_N-module with cone-shaped support."""

    def __init__(self, N, generators, label=""):
        self.N = N
        self.generators = tuple(generators)
        self.label = label
        self.alg = algebra(N)
        self._basis = {}
        self._index = {}
        self._reduce = {}
        self._act = {}

    def __repr__(self):
        return f"ConeModule({self.label or 'N=%d' % self.N}, gens={[g.name for g in self.generators]})"

    @property
    def is_finite(self):
        return self.N == 2 or not self.generators

    def generator_index(self, name):
        for k, g in enumerate(self.generators):
            if g.name == name:
                return k
        raise KeyError(name)

    def basis(self, b):
        """Basis elements ``(word, generator_index)`` at bidegree ``b``."""
        b = tuple(b)
        out = self._basis.get(b)
        if out is not None:
            return out
        out = []
        for k, g in enumerate(self.generators):
            dp, dq = b[0] - g.bidegree[0], b[1] - g.bidegree[1]
            for w in self.alg.basis(dp, dq):
                if g.lower is not None and w and w[-1] == 0:
                    continue
                out.append((w, k))
        self._basis[b] = out
        self._index[b] = {e: n for n, e in enumerate(out)}
        return out

    def index(self, b):
        self.basis(b)
        return self._index[tuple(b)]

    def element_bidegree(self, elem):
        w, k = elem
        g = self.generators[k].bidegree
        s = sum(w)
        return (g[0] - s, g[1] + len(w) - s)

    def reduce(self, word, k):
        """Normal form of ``word . g_k`` as a dict basis element -> int."""
        key = (word, k)
        cached = self._reduce.get(key)
        if cached is not None:
            return cached
        acc = {}
        gen = self.generators[k]
        for w, c in self.alg.normal_form_word(word).items():
            if gen.lower is not None and w and w[-1] == 0:
                head = w[:-1]
                for t in range(1, min(len(gen.lower), self.N - 1) + 1):
                    sign = 1 if t % 2 else -1
                    for e, c2 in self.reduce(head + (t,), gen.lower[t - 1]).items():
                        _add_into(acc, e, sign * c * c2)
            else:
                _add_into(acc, (w, k), c)
        self._reduce[key] = acc
        return acc

    def act(self, i, elem):
        """``d_i`` applied to a basis element."""
        key = (i, elem)
        cached = self._act.get(key)
        if cached is None:
            w, k = elem
            cached = self.reduce((i,) + w, k)
            self._act[key] = cached
        return cached

    def act_element(self, i, element):
        acc = {}
        for e, c in element.items():
            for e2, c2 in self.act(i, e).items():
                _add_into(acc, e2, c * c2)
        return acc

    def act_word(self, word, element):
        for i in reversed(word):
            element = self.act_element(i, element)
        return element

    def generator_element(self, k):
        return {((), k): 1}

    def bidegrees(self, pmin):
        """All bidegrees with ``p >= pmin`` carrying a nonzero basis."""
        out = set()
        for g in self.generators:
            gp, gq = g.bidegree
            for dp in range(0, gp - pmin + 1):
                for length in range(0, dp + 2):
                    b = (gp - dp, gq - dp + length)
                    if b not in out and self.basis(b):
                        out.add(b)
        return sorted(out)

    def min_p(self):
        """Lowest first degree of the support (finite modules only)."""
        if not self.generators:
            return None
        if not self.is_finite:
            return None
        return min(g.bidegree[0] for g in self.generators) - 1

    def window(self, field, pmin=None):
        """The quotient multicomplex supported on ``p >= pmin``.

        For finite modules ``pmin`` may be omitted; the result is then the
        whole module.  The object records its exact region.
        """
        if pmin is None:
            if not self.is_finite:
                raise ValueError("an infinite cone module needs a window bound pmin")
            pmin = self.min_p() if self.generators else 0
        key = (id(field), pmin)
        cache = self.__dict__.setdefault("_windows", {})
        if key in cache:
            return cache[key]
        bids = self.bidegrees(pmin)
        ranks = {b: len(self.basis(b)) for b in bids}
        diffs = {}
        for b in bids:
            for i in range(self.N):
                t = add(b, shift(i))
                if t[0] < pmin or t not in ranks:
                    continue
                idx = self.index(t)
                cols = []
                nonzero = False
                for e in self.basis(b):
                    col = [0] * ranks[t]
                    for e2, c in self.act(i, e).items():
                        col[idx[e2]] = c
                        nonzero = True
                    cols.append(col)
                if nonzero:
                    diffs[(i, b)] = Matrix.from_columns(field, [tuple(field(x) for x in c) for c in cols], ranks[t])
        exact = None
        if not self.is_finite or (self.generators and pmin > self.min_p()):
            exact = (1, 0, pmin)
        W = Multicomplex(self.N, field, ranks, diffs, exact=exact)
        cache[key] = W
        return W

    def element_vector(self, field, element, b):
        idx = self.index(b)
        v = [field.zero] * len(idx)
        for e, c in element.items():
            v[idx[e]] = field(c)
        return tuple(v)

    def format_element(self, element):
        if not element:
            return "0"
        parts = []
        for (w, k), c in sorted(element.items(), key=lambda t: (t[0][1], t[0][0])):
            word = format_word(w)
            term = self.generators[k].name if word == "1" else f"{word}.{self.generators[k].name}"
            parts.append(f"{'-' if c < 0 else '+'} {'' if abs(c) == 1 else str(abs(c)) + '*'}{term}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s


def _relabel(gens, prefix, offset):
    out = []
    for g in gens:
        lower = None if g.lower is None else tuple(x + offset for x in g.lower)
        name = g.name if prefix is None else prefix + g.name[g.name.find("_"):] if "_" in g.name else prefix
        out.append(Generator(name, g.bidegree, lower))
    return out


def _zw_generators(N, k, p, q):
    if k == 0:
        return [Generator("x", (p, q), None)]
    gens = []
    for j in range(k):
        gens.append(Generator(f"a_{j}", (p - j, q - j), tuple(range(j - 1, -1, -1))))
    return gens


@lru_cache(maxsize=4096)
def zw(N, k, p, q):
    """The representing object ZW^N_k(p,q) of witness k-cycles at (p,q)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return ConeModule(N, _zw_generators(N, k, p, q), label=f"ZW^{N}_{k}({p},{q})")


@lru_cache(maxsize=4096)
def bw(N, r, p, q):
    """The representing object BW^N_r(p,q) of witness r-boundaries at (p,q).

    ``r >= 2``: generators ``b_0..b_{r-2}`` (a copy of ZW_{r-1}(p+r-1,q+r-1)),
    ``a`` (free, at (p,q)) and ``c_0..c_{r-2}`` (ZW_{r-1}(p-1,q)).
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    label = f"BW^{N}_{r}({p},{q})"
    if r == 0:
        return ConeModule(N, [], label=label)
    if r == 1:
        return ConeModule(N, [Generator("a", (p, q), None)], label=label)
    bs = _relabel(_zw_generators(N, r - 1, p + r - 1, q + r - 1), "b", 0)
    a = [Generator("a", (p, q), None)]
    cs = _relabel(_zw_generators(N, r - 1, p - 1, q), "c", len(bs) + 1)
    return ConeModule(N, bs + a + cs, label=label)


def iota_images(N, r, p, q):
    """Generator images of iota_r : ZW_r(p,q) -> BW_r(p,q-1).

    ``a_m -> d_m a + (-1)^m sum_{i=m+1}^{r+m-1} (-1)^i d_i b_{r+m-1-i} + [m>=1] c_{m-1}``
    with ``d_i = 0`` for ``i >= N``.
    """
    if r < 1:
        raise ValueError("iota_r needs r >= 1")
    Y = bw(N, r, p, q - 1)
    ia = Y.generator_index("a")
    images = []
    for m in range(r):
        el = {}
        if m < N:
            for e, c in Y.act(m, ((), ia)).items():
                _add_into(el, e, c)
        sm = -1 if m % 2 else 1
        for i in range(m + 1, r + m):
            if i >= N:
                break
            j = r + m - 1 - i
            si = -1 if i % 2 else 1
            for e, c in Y.act(i, ((), Y.generator_index(f"b_{j}"))).items():
                _add_into(el, e, sm * si * c)
        if m >= 1:
            _add_into(el, ((), Y.generator_index(f"c_{m - 1}")), 1)
        images.append(el)
    return images


def iota_relation_defects(N, r, p, q):
    """Check the images of iota_r satisfy the defining relations of ZW_r.

    Returns the list of ``l`` for which ``sum_{i+j=l} (-1)^i d_i iota(a_j)``
    does not normalise to zero in BW_r(p, q-1).
    """
    Y = bw(N, r, p, q - 1)
    images = iota_images(N, r, p, q)
    bad = []
    for l in range(r):
        acc = {}
        for j in range(0, l + 1):
            i = l - j
            if i >= N:
                continue
            s = -1 if i % 2 else 1
            for e, c in Y.act_element(i, images[j]).items():
                _add_into(acc, e, s * c)
        if acc:
            bad.append(l)
    return bad


@dataclass(frozen=True)
class ConeMorphism:
    """A module map between cone modules given by generator images."""

    source: ConeModule
    target: ConeModule
    images: tuple  # one element dict per source generator

    def image_of(self, elem):
        w, k = elem
        return self.target.act_word(w, self.images[k])

    def window(self, field, pmin=None, source=None, target=None):
        src = source if source is not None else self.source.window(field, pmin)
        tgt = target if target is not None else self.target.window(field, pmin)
        blocks = {}
        for b in src.support:
            if tgt.rank(b) == 0:
                continue
            cols = [self.target.element_vector(field, self.image_of(e), b) for e in self.source.basis(b)]
            blocks[b] = Matrix.from_columns(field, cols, tgt.rank(b))
        return Morphism(src, tgt, blocks)


def iota(N, r, p, q):
    return ConeMorphism(zw(N, r, p, q), bw(N, r, p, q - 1), tuple(iota_images(N, r, p, q)))


def map_to_finite(X, field, pmin, target, gen_vectors):
    """Window morphism ``X|_{p>=pmin} -> target`` (a finite multicomplex)
    sending generator ``k`` to ``gen_vectors[k]`` and extended by the action.
    """
    src = X.window(field, pmin)
    blocks = {}
    for b in src.support:
        if target.rank(b) == 0:
            continue
        cols = []
        for w, k in X.basis(b):
            v = gen_vectors[k]
            cur = X.generators[k].bidegree
            if v is None or target.rank(cur) == 0:
                cols.append((field.zero,) * target.rank(b))
                continue
            for i in reversed(w):
                v = target.diff(i, cur).apply(v)
                cur = add(cur, shift(i))
            cols.append(v)
        blocks[b] = Matrix.from_columns(field, cols, target.rank(b))
    return Morphism(src, target, blocks)


def q_projection(N, r, field, pmin=None, p=0, q=0):
    """``q_r : ZW_r(p,q) -> k(p,q)`` sending a_0 to the generator, the rest to 0."""
    if r < 1:
        raise ValueError("q_r needs r >= 1")
    X = zw(N, r, p, q)
    if pmin is None:
        pmin = X.min_p() if X.is_finite else p - 2 * r - 2
    k = point_module(N, field, (p, q))
    gens = [(field.one,)] + [None] * (r - 1)
    return map_to_finite(X, field, pmin, k, gens)


def zw_infinity_bound(p, u):
    """Number of generators of ZW_infinity(p,.) that reach first degree ``u``."""
    return max(p - u + 2, 1)


def zw_infinity_basis(N, p, q, at):
    """Basis of ZW_infinity(p,q) at bidegree ``at`` (stabilised colimit)."""
    at = tuple(at)
    if at[0] > p:
        return []
    s = zw_infinity_bound(p, at[0])
    return list(zw(N, s, p, q).basis(at))


def zw_infinity_window(N, p, q, field, pmin):
    """ZW_infinity(p,q) truncated to first degree ``>= pmin``."""
    s = zw_infinity_bound(p, pmin)
    W = zw(N, s, p, q).window(field, pmin)
    if W.exact is None:
        W = Multicomplex(N, field, W.ranks, W.diffs, exact=(1, 0, pmin))
    return W


def zw_infinity_projection(N, field, pmin, p=0, q=0):
    """``pi : ZW_infinity(p,q) -> k(p,q)`` on the window ``p >= pmin``."""
    s = zw_infinity_bound(p, pmin)
    X = zw(N, s, p, q)
    k = point_module(N, field, (p, q))
    f = map_to_finite(X, field, pmin, k, [(field.one,)] + [None] * (s - 1))
    if f.source.exact is None:
        src = Multicomplex(N, field, f.source.ranks, f.source.diffs, exact=(1, 0, pmin))
        f = Morphism(src, k, f.blocks)
    return f


# ---------------------------------------------------------------------------
# generating (trivial) cofibrations


FIRST = "first"
SECOND = "second"


@dataclass(frozen=True)
class GeneratingMap:
    """``J``: ``0 -> ZW_k(p,q)``; ``I``: ``iota_k : ZW_k(p,q) -> BW_k(p,q-1)``.

    ``side = SECOND`` means the involution image of the first-side map.
    """

    kind: str
    side: str
    k: int
    p: int
    q: int
    N: int

    def sort_key(self):
        return (self.kind, self.side, self.k, self.p, self.q)

    def __str__(self):
        pre = "'" if self.side == FIRST else "''"
        if self.kind == "J":
            return f"{pre}J: 0 -> ZW_{self.k}({self.p},{self.q})"
        return f"{pre}I: iota_{self.k}: ZW_{self.k}({self.p},{self.q}) -> BW_{self.k}({self.p},{self.q - 1})"

    def domain(self):
        if self.kind == "J":
            return ConeModule(self.N, [], label="0")
        return zw(self.N, self.k, self.p, self.q)

    def codomain(self):
        if self.kind == "J":
            return zw(self.N, self.k, self.p, self.q)
        return bw(self.N, self.k, self.p, self.q - 1)

    def cone_morphism(self):
        if self.kind == "J":
            return ConeMorphism(self.domain(), self.codomain(), ())
        return iota(self.N, self.k, self.p, self.q)

    def generator_offsets(self):
        """Generator bidegrees of domain and codomain relative to ``(p, q)``."""
        out = set()
        for X in (self.domain(), self.codomain()):
            for g in X.generators:
                out.add((g.bidegree[0] - self.p, g.bidegree[1] - self.q))
        return out

    def window(self, field, pmin):
        """Materialise as a morphism of finite windows (involved on the second side)."""
        f = self.cone_morphism().window(field, pmin)
        if self.side == FIRST:
            return f
        from .multicomplex import involve_morphism

        return involve_morphism(f)


def _family_offsets(N, kind, k):
    return GeneratingMap(kind, FIRST, k, 0, 0, N).generator_offsets()


def first_side_families(r):
    """``('I_r, 'J_r)`` as lists of (kind, k).

    'I_r = J_1 u ... u J_{r-1} u {iota_{r+1}},  'J_r = J_0 u ... u J_r.
    """
    I = [("J", k) for k in range(1, r)] + [("I", r + 1)]
    J = [("J", k) for k in range(0, r + 1)]
    return I, J


def generating_sets(N, r, s, window):
    """All maps of ``I_{r,s}`` and ``J_{r,s}`` with parameters in ``window``.

    ``window`` is ``(pmin, pmax, qmin, qmax)``; second-side parameters refer
    to the first-side map before applying the involution.
    """
    pmin, pmax, qmin, qmax = window
    Ir, Jr = first_side_families(r)
    Is, Js = first_side_families(s)
    out_I, out_J = [], []
    for p in range(pmin, pmax + 1):
        for q in range(qmin, qmax + 1):
            for kind, k in Ir:
                out_I.append(GeneratingMap(kind, FIRST, k, p, q, N))
            for kind, k in Is:
                out_I.append(GeneratingMap(kind, SECOND, k, p, q, N))
            for kind, k in Jr:
                out_J.append(GeneratingMap(kind, FIRST, k, p, q, N))
            for kind, k in Js:
                out_J.append(GeneratingMap(kind, SECOND, k, p, q, N))
    return {"I": sorted(out_I, key=GeneratingMap.sort_key), "J": sorted(out_J, key=GeneratingMap.sort_key)}


def relevant_parameters(N, kind, k, support):
    """Parameters ``(p, q)`` of the family for which some generator of the
    domain or codomain sits in ``support``; for all others every Hom space
    into a module supported on ``support`` vanishes."""
    offs = _family_offsets(N, kind, k)
    out = set()
    for b in support:
        for o in offs:
            out.add((b[0] - o[0], b[1] - o[1]))
    return sorted(out)


# ---------------------------------------------------------------------------
# Hom spaces out of cone modules, in generator coordinates


def word_matrix(A, word, start):
    """Matrix of ``d_{w_1} ... d_{w_l}`` on ``A`` starting at bidegree ``start``."""
    key = ("word", word, start)
    m = A._cache.get(key)
    if m is not None:
        return m
    if not word:
        m = Matrix.identity(A.field, A.rank(start))
    else:
        inner = word_matrix(A, word[1:], start)
        mid = start
        for i in word[1:]:
            mid = add(mid, shift(i))
        m = A.diff(word[0], mid) @ inner
    A._cache[key] = m
    return m


def generator_layout(X, A):
    layout = []
    off = 0
    for g in X.generators:
        r = A.rank(g.bidegree)
        layout.append((off, r))
        off += r
    return layout, off


def hom_from_cone(X, A):
    """``Hom(X, A)`` as a subspace of generator-image coordinates.

    A tuple of generator images ``(y_g)`` extends to a module map iff
    ``h(d_i beta) = d_i h(beta)`` for every basis element ``beta`` of ``X``
    whose ``d_i``-image lands in the support of ``A``.
    """
    key = ("hom", id(X), X.label)
    cached = A._cache.get(key)
    if cached is not None:
        return cached
    field = A.field
    red = field.reduce
    layout, n = generator_layout(X, A)
    rows = []
    for t in A.support:
        rt = A.rank(t)
        for i in range(A.N):
            b = (t[0] + i, t[1] - 1 + i)
            for beta in X.basis(b):
                eq = [[0] * n for _ in range(rt)]
                touched = False
                for (w2, k2), c in X.act(i, beta).items():
                    off, rg = layout[k2]
                    if not rg:
                        continue
                    M = word_matrix(A, w2, X.generators[k2].bidegree)
                    for r_ in range(rt):
                        row = M.data[r_]
                        e = eq[r_]
                        for col in range(rg):
                            if row[col]:
                                e[off + col] += c * row[col]
                                touched = True
                w, k = beta
                off, rg = layout[k]
                if rg and A.rank(b):
                    M = A.diff(i, b) @ word_matrix(A, w, X.generators[k].bidegree)
                    for r_ in range(rt):
                        row = M.data[r_]
                        e = eq[r_]
                        for col in range(rg):
                            if row[col]:
                                e[off + col] -= row[col]
                                touched = True
                if touched:
                    for e in eq:
                        e = [red(field(x)) if x else field.zero for x in e]
                        if any(e):
                            rows.append(e)
    from .linalg import _nullspace_vectors

    H = Subspace.span(field, n, _nullspace_vectors(field, rows, n))
    A._cache[key] = (H, layout, n)
    return H, layout, n


def precompose_matrix(phi, A, layout_x, nx, layout_y, ny):
    """Matrix of ``h -> h o phi`` from Y-generator to X-generator coordinates."""
    field = A.field
    Y = phi.target
    cols = [[field.zero] * nx for _ in range(ny)]
    data = [[field.zero] * ny for _ in range(nx)]
    for kx, img in enumerate(phi.images):
        offx, rx = layout_x[kx]
        if not rx:
            continue
        for (w, ky), c in img.items():
            offy, ry = layout_y[ky]
            if not ry:
                continue
            M = word_matrix(A, w, Y.generators[ky].bidegree)
            for a in range(rx):
                row = M.data[a]
                for bcol in range(ry):
                    if row[bcol]:
                        data[offx + a][offy + bcol] = field.reduce(data[offx + a][offy + bcol] + c * row[bcol])
    del cols
    return Matrix(field, nx, ny, tuple(tuple(r) for r in data))


def postcompose_matrix(f, X, layout_a, na, layout_b, nb):
    """Matrix of ``h -> f o h`` in generator coordinates."""
    field = f.field
    data = [[field.zero] * na for _ in range(nb)]
    for k, g in enumerate(X.generators):
        offa, ra = layout_a[k]
        offb, rb = layout_b[k]
        if not ra or not rb:
            continue
        M = f.block(g.bidegree)
        for i in range(rb):
            for j in range(ra):
                data[offb + i][offa + j] = M.data[i][j]
    return Matrix(field, nb, na, tuple(tuple(r) for r in data))


__all__ = [
    "ConeModule",
    "ConeMorphism",
    "FIRST",
    "GeneratingMap",
    "Generator",
    "SECOND",
    "bw",
    "generating_sets",
    "hom_from_cone",
    "inv_bidegree",
    "iota",
    "iota_images",
    "iota_relation_defects",
    "map_to_finite",
    "q_projection",
    "zw",
    "zw_infinity_basis",
    "zw_infinity_projection",
    "zw_infinity_window",
]
