"""Weak equivalences, fibrations and lifting properties for E_{r,s}.

Weak equivalences and fibrations are decided on pages: a map is an
E_{r,s}-weak equivalence when it induces isomorphisms on 'E_{r+1} and
''E_{s+1}, and a fibration when it is surjective on 'E_i for i <= r and on
''E_j for j <= s.

Lifting properties are decided independently, through Hom spaces out of the
representing cone modules: for ``phi : X -> Y`` and ``f : A -> B`` the
commuting squares form the space

    S = {(u, v) in Hom(X, A) x Hom(Y, B) : f u = v phi}

and ``f`` has the RLP iff ``h -> (h phi, f h)`` maps ``Hom(Y, A)`` onto ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import rank_of_vectors
from .multicomplex import cached_involve_morphism
from .representables import (
    FIRST,
    SECOND,
    GeneratingMap,
    first_side_families,
    generator_layout,
    hom_from_cone,
    postcompose_matrix,
    precompose_matrix,
    relevant_parameters,
)
from .spectral import page_map_status


@dataclass(frozen=True)
class Certificate:
    side: str
    page: int
    bidegree: tuple
    reason: str
    rank: int = 0
    source_dim: int = 0
    target_dim: int = 0

    def as_dict(self):
        return {
            "side": self.side,
            "page": self.page,
            "bidegree": list(self.bidegree),
            "reason": self.reason,
            "rank": self.rank,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
        }


@dataclass
class Verdict:
    holds: bool
    certificates: list = dc_field(default_factory=list)
    untrusted: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.holds


def _scan(f, side, r, test, reason, stop_early):
    bad, untrusted = [], []
    for st in page_map_status(f, side, r):
        if test(st):
            continue
        cert = Certificate(side, r, st.bidegree, reason, st.rank, st.source_dim, st.target_dim)
        if st.trusted:
            bad.append(cert)
            if stop_early:
                break
        else:
            untrusted.append(cert)
    return bad, untrusted


def is_weak_equivalence(f, r, s, stop_early=False):
    """Is ``f`` an isomorphism on 'E_{r+1} and on ''E_{s+1}?"""
    certs, untrusted = [], []
    for side, page in ((FIRST, r + 1), (SECOND, s + 1)):
        b, u = _scan(f, side, page, lambda st: st.iso, "not an isomorphism", stop_early)
        certs += b
        untrusted += u
        if certs and stop_early:
            break
    return Verdict(not certs, certs, untrusted)


def is_side_equivalence(f, side, r):
    """Is ``f`` an E_r-quasi-isomorphism on one side (an isomorphism on page r+1)?"""
    certs, untrusted = _scan(f, side, r + 1, lambda st: st.iso, "not an isomorphism", False)
    return Verdict(not certs, certs, untrusted)


def is_fibration(f, r, s, stop_early=False):
    """Is ``f`` surjective on 'E_i (i <= r) and on ''E_j (j <= s)?"""
    certs, untrusted = [], []
    for side, top in ((FIRST, r), (SECOND, s)):
        for page in range(top + 1):
            b, u = _scan(f, side, page, lambda st: st.surjective, "not surjective", stop_early)
            certs += b
            untrusted += u
            if certs and stop_early:
                return Verdict(False, certs, untrusted)
    return Verdict(not certs, certs, untrusted)


def classify(f, r, s):
    we = is_weak_equivalence(f, r, s)
    fib = is_fibration(f, r, s)
    return {"weak_equivalence": we, "fibration": fib}


# ---------------------------------------------------------------------------
# lifting properties


def _first_side_rlp(f, phi):
    A, B = f.source, f.target
    X, Y = phi.source, phi.target
    HYA, lyA, nyA = hom_from_cone(Y, A)
    HYB, lyB, nyB = hom_from_cone(Y, B)
    field = f.field
    if not X.generators:
        if HYB.dim == 0:
            return True
        if HYA.dim < HYB.dim:
            return False
        FY = postcompose_matrix(f, Y, lyA, nyA, lyB, nyB)
        return rank_of_vectors(field, [FY.apply(h) for h in HYA.basis], nyB) == HYB.dim
    HXA, lxA, nxA = hom_from_cone(X, A)
    if HXA.dim == 0 and HYB.dim == 0:
        return True
    lxB, nxB = generator_layout(X, B)
    FX = postcompose_matrix(f, X, lxA, nxA, lxB, nxB)
    PB = precompose_matrix(phi, B, lxB, nxB, lyB, nyB)
    cols = [FX.apply(u) for u in HXA.basis]
    cols += [tuple(field.reduce(-x) for x in PB.apply(v)) for v in HYB.basis]
    dim_squares = HXA.dim + HYB.dim - rank_of_vectors(field, cols, nxB)
    if dim_squares == 0:
        return True
    if HYA.dim < dim_squares:
        return False
    PA = precompose_matrix(phi, A, lxA, nxA, lyA, nyA)
    FY = postcompose_matrix(f, Y, lyA, nyA, lyB, nyB)
    lifts = [PA.apply(h) + FY.apply(h) for h in HYA.basis]
    return rank_of_vectors(field, lifts, nxA + nyB) == dim_squares


def has_rlp(f, g):
    """Does ``f`` have the right lifting property against the generating map ``g``?

    On the second side ``f`` lifts against ``g^inv`` iff ``f^inv`` lifts
    against the first-side map, so both sides reduce to cone-module Homs.
    """
    phi = g.cone_morphism()
    if g.side == FIRST:
        return _first_side_rlp(f, phi)
    return _first_side_rlp(cached_involve_morphism(f), phi)


def family_members(f, r, s, which):
    """Members of ``I_{r,s}`` (``which='I'``) or ``J_{r,s}`` (``'J'``) that can
    carry a nonzero square for ``f``, sorted deterministically.

    All other members have ``Hom(X, A) = Hom(Y, B) = 0`` and lift vacuously.
    """
    if which not in ("I", "J"):
        raise ValueError("which must be 'I' or 'J'")
    out = []
    for side, top in ((FIRST, r), (SECOND, s)):
        fam_I, fam_J = first_side_families(top)
        fam = fam_I if which == "I" else fam_J
        g = f if side == FIRST else cached_involve_morphism(f)
        support = set(g.source.support) | set(g.target.support)
        for kind, k in fam:
            for p, q in relevant_parameters(f.N, kind, k, support):
                out.append(GeneratingMap(kind, side, k, p, q, f.N))
    return sorted(set(out), key=GeneratingMap.sort_key)


def in_window(g, window):
    if window is None:
        return True
    pmin, pmax, qmin, qmax = window
    return pmin <= g.p <= pmax and qmin <= g.q <= qmax


def rlp_against(f, r, s, which, window=None, stop_early=False):
    """``Verdict`` for the RLP against ``I_{r,s}`` or ``J_{r,s}``.

    Certificates are the generating maps that fail to lift.
    """
    failures = []
    for g in family_members(f, r, s, which):
        if not in_window(g, window):
            continue
        if not has_rlp(f, g):
            failures.append(g)
            if stop_early:
                break
    return Verdict(not failures, failures)


def acyclic_fibration_crosscheck(f, r, s, window=None):
    """Compare RLP against ``I_{r,s}`` with ``fibration and weak equivalence``,
    and RLP against ``J_{r,s}`` with ``fibration``."""
    rlp_I = rlp_against(f, r, s, "I", window)
    rlp_J = rlp_against(f, r, s, "J", window)
    fib = is_fibration(f, r, s)
    we = is_weak_equivalence(f, r, s)
    return {
        "rlp_I": rlp_I.holds,
        "rlp_J": rlp_J.holds,
        "fibration": fib.holds,
        "weak_equivalence": we.holds,
        "agree_I": rlp_I.holds == (fib.holds and we.holds),
        "agree_J": rlp_J.holds == fib.holds,
        "failing_I": [str(g) for g in rlp_I.certificates],
        "failing_J": [str(g) for g in rlp_J.certificates],
        "fib_certificates": [c.as_dict() for c in fib.certificates],
        "we_certificates": [c.as_dict() for c in we.certificates],
    }
