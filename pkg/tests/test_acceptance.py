"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (the lines appear in the ``-v`` output) or directly with
``python tests/test_acceptance.py``.
"""

import sys
import time
from itertools import product

import pytest

from mspectra.adjunction import (
    counit_is_identity,
    hom_bijection,
    involution_preserved,
    triangle_identities,
    unit,
    unit_zw_experiment,
)
from mspectra.algebra import basis, confluence_check, format_word
from mspectra.linalg import GF, QQ, Matrix, rank_of_vectors
from mspectra.model import acyclic_fibration_crosscheck, is_fibration, is_side_equivalence, is_weak_equivalence
from mspectra.multicomplex import (
    Multicomplex,
    change_basis,
    is_isomorphism,
    zero_morphism,
    zero_multicomplex,
)
from mspectra.randgen import (
    _random_invertible,
    make_rng,
    random_composable_pair,
    random_morphism,
    random_multicomplex,
    random_retract,
)
from mspectra.representables import FIRST, SECOND, zw, zw_infinity_projection
from mspectra.spectral import classical_pages, page, page_two_via_page_one, witness_dims_as_classical

F5 = GF(5)
FIELDS = (QQ, F5)


def _K(N, field=QQ):
    return Multicomplex(N, field, {(0, 0): 1, (0, 1): 1}, {(0, (0, 0)): Matrix.identity(field, 1)})


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    return ok, line


# ---------------------------------------------------------------------------
# 1. basis of A_N against brute force


def _ideal_quotient_dims(N, L):
    """dim of (free algebra / two-sided ideal of the relations) in word length L."""
    rels = [[((i, l - i), (-1) ** i) for i in range(N) if 0 <= l - i < N] for l in range(2 * N - 1)]
    groups = {}
    for w in product(range(N), repeat=L):
        groups.setdefault(sum(w), []).append(w)
    out = {}
    for S, words in groups.items():
        idx = {w: n for n, w in enumerate(words)}
        vecs = []
        for a in range(L - 1):
            for u in product(range(N), repeat=a):
                for v in product(range(N), repeat=L - 2 - a):
                    l = S - sum(u) - sum(v)
                    if not 0 <= l < 2 * N - 1:
                        continue
                    vec = [0] * len(words)
                    for (i, j), c in rels[l]:
                        vec[idx[u + (i, j) + v]] += c
                    vecs.append(tuple(vec))
        out[(-S, L - S)] = len(words) - rank_of_vectors(QQ, vecs, len(words))
    return out


def _normal_word_counts(N, L):
    """Words of length L containing no leading term of a rewriting rule."""
    lead = {(0, l) for l in range(N)} | {(l - N + 1, N - 1) for l in range(N, 2 * N - 1)}
    out = {}
    for w in product(range(N), repeat=L):
        if any(w[k : k + 2] in lead for k in range(L - 1)):
            continue
        b = (-sum(w), L - sum(w))
        out[b] = out.get(b, 0) + 1
    return out


def criterion_1():
    bad = []
    checked = 0
    for N in (2, 3, 4):
        for L in range(0, 7):
            ideal = _ideal_quotient_dims(N, L)
            normal = _normal_word_counts(N, L)
            for p in range(-6, 7):
                q = p + L
                if abs(q) > 6:
                    continue
                mine = len(basis(N, p, q))
                checked += 1
                if not (mine == ideal.get((p, q), 0) == normal.get((p, q), 0)):
                    bad.append((N, p, q))
    # no word has q < p
    for N in (2, 3, 4):
        for p in range(-6, 7):
            for q in range(-6, p):
                checked += 1
                if basis(N, p, q):
                    bad.append((N, p, q))
    words = sorted(format_word(w) for p in range(-6, 7) for q in range(-6, 7) for w in basis(2, p, q))
    four = words == sorted(["1", "d0", "d1", "d1.d0"])
    ok = not bad and four
    return report("criterion 1 (A_N basis)", ok, f"{checked} bidegrees checked, {len(bad)} mismatches; N=2 basis {words}")


# ---------------------------------------------------------------------------
# 2. confluence


def criterion_2():
    crit = {N: confluence_check(N) for N in range(2, 7)}
    ok = all(not v for v in crit.values())
    return report("criterion 2 (confluence)", ok, "unresolved overlaps " + str({N: len(v) for N, v in crit.items()}))


# ---------------------------------------------------------------------------
# 3. pages of the ZW windows


def _zw_page_facts(N, k, p, q, pmin):
    W = zw(N, k, p, q).window(QQ, pmin)
    expect = {(p, q): 1, (p - k, q - k + 1): 1}
    facts = []
    for i in range(1, k + 1):
        P = page(W, FIRST, i)
        facts.append(P.trusted_dims() == expect and all(P.trusted(b) for b in expect))
    facts.append(page(W, FIRST, k + 1).trusted_dims() == {})
    second = page(W, SECOND, 1)
    # the generators' bidegrees must be inside the trusted part of ''E_1
    gens = [g.bidegree for g in zw(N, k, p, q).generators]
    facts.append(second.trusted_dims() == {} and all(second.trusted(b) for b in gens))
    return facts


def criterion_3():
    failures = []
    cases = 0
    for N in (2, 3, 4):
        for k in range(1, 5):
            for p, q in ((0, 0), (2, -1)):
                pmin = p - 2 * k - 1
                a = _zw_page_facts(N, k, p, q, pmin)
                b = _zw_page_facts(N, k, p, q, pmin - 1)
                cases += 1
                if not (all(a) and a == b):
                    failures.append((N, k, p, q))
    return report("criterion 3 (ZW page dims)", not failures, f"{cases} cases incl. radius+1 re-run, failures {failures}")


# ---------------------------------------------------------------------------
# 4. witness pages against the classical filtration


def criterion_4(samples=200):
    bad = []
    nontrivial = 0
    total = 0
    for N in (2, 3, 4):
        for field in FIELDS:
            rng = make_rng(f"acceptance-4/{N}/{field.descriptor}")
            for n in range(samples):
                A = random_multicomplex(rng, N, field, box=5, max_rank=3)
                total += 1
                dims = [witness_dims_as_classical(A, r) for r in range(5)]
                if any(dims[r] != classical_pages(A, r) for r in range(5)):
                    bad.append((N, field.descriptor, n))
                if page_two_via_page_one(A).dims() != page(A, FIRST, 2).dims():
                    bad.append((N, field.descriptor, n, "page two"))
                nontrivial += dims[1] != dims[2] or dims[2] != dims[3]
    ok = not bad
    return report("criterion 4 (classical oracle)", ok,
                  f"{total} objects, {nontrivial} with E_1 != E_2 or E_2 != E_3, disagreements {bad[:5]}")


# ---------------------------------------------------------------------------
# 5. lifting properties against the generating families


def criterion_5(samples=200):
    bad = []
    stats = {"acyclic_fibration": 0, "fibration_only": 0, "neither": 0}
    for N in (2, 4):
        for r in (0, 1, 2):
            for s in (0, 1, 2):
                rng = make_rng(f"acceptance-5/{N}/{r}/{s}")
                for n in range(samples):
                    f = random_morphism(rng, N, FIELDS[n % 2])
                    res = acyclic_fibration_crosscheck(f, r, s)
                    if not (res["agree_I"] and res["agree_J"]):
                        bad.append((N, r, s, n))
                    if res["rlp_I"]:
                        stats["acyclic_fibration"] += 1
                    elif res["rlp_J"]:
                        stats["fibration_only"] += 1
                    else:
                        stats["neither"] += 1
    ok = not bad and all(stats.values())
    return report("criterion 5 (RLP crosscheck)", ok, f"{18 * samples} morphisms, outcomes {stats}, disagreements {bad[:5]}")


# ---------------------------------------------------------------------------
# 6. class axioms


def criterion_6(samples=60):
    problems = []
    exercised = {"2of3": 0, "retract": 0, "iso": 0, "mono": 0}
    pairs = [(0, 0), (1, 0), (0, 2), (1, 1), (2, 2)]
    for N in (2, 4):
        rng = make_rng(f"acceptance-6/{N}")
        for n in range(samples):
            field = FIELDS[n % 2]
            f, g = random_composable_pair(rng, N, field)
            gf = g @ f
            for r, s in pairs:
                w = [is_weak_equivalence(h, r, s).holds for h in (f, g, gf)]
                exercised["2of3"] += sum(w) >= 2
                if sum(w) == 2:
                    problems.append(("2of3", N, n, r, s))
            f, big, *_ = random_retract(rng, N, field)
            for r, s in pairs:
                if is_weak_equivalence(big, r, s).holds:
                    exercised["retract"] += 1
                    if not is_weak_equivalence(f, r, s).holds:
                        problems.append(("retract we", N, n, r, s))
                if is_fibration(big, r, s).holds:
                    exercised["retract"] += 1
                    if not is_fibration(f, r, s).holds:
                        problems.append(("retract fib", N, n, r, s))
            A = random_multicomplex(rng, N, field, box=4, max_rank=2)
            _, iso = change_basis(A, {b: _random_invertible(rng, field, k) for b, k in A.ranks.items()})
            assert is_isomorphism(iso)
            for r, s in pairs:
                exercised["iso"] += 1
                if not (is_weak_equivalence(iso, r, s).holds and is_fibration(iso, r, s).holds):
                    problems.append(("iso", N, n, r, s))
            h = random_morphism(rng, N, field)
            for r in range(3):
                for s in range(3):
                    if is_weak_equivalence(h, r, s).holds:
                        exercised["mono"] += 1
                        for r2, s2 in ((r + 1, s), (r, s + 1), (r + 2, s + 1)):
                            if not is_weak_equivalence(h, r2, s2).holds:
                                problems.append(("monotone", N, n, r, s, r2, s2))
    ok = not problems and all(exercised.values())
    return report("criterion 6 (class axioms)", ok, f"exercised {exercised}, violations {problems[:5]}")


# ---------------------------------------------------------------------------
# 7. a first-side equivalence that is no E_{r,s} equivalence


def criterion_7():
    notes = []
    ok = True
    for N in (2, 4):
        for pmin in (-5, -6):
            pi = zw_infinity_projection(N, QQ, pmin)
            for r in (0, 1, 2):
                side = is_side_equivalence(pi, FIRST, r)
                if not side.holds or side.untrusted:
                    ok = False
                    notes.append(f"N={N} pmin={pmin}: first side fails at r={r}")
                for s in range(4):
                    v = is_weak_equivalence(pi, r, s)
                    if v.holds or not v.certificates:
                        ok = False
                        notes.append(f"N={N} pmin={pmin}: E_({r},{s}) not refuted")
    f = zero_morphism(zero_multicomplex(4, QQ), _K(4))
    for r in (0, 1, 2):
        if not is_weak_equivalence(f, r, 3).holds or is_weak_equivalence(f, r, 2).holds:
            ok = False
            notes.append(f"0 -> K at r={r}")
    return report("criterion 7 (non-equivalence witness)", ok,
                  "pi passes 'E_(r+1) for r<=2 and fails E_(r,s) for s<=3; 0->K in E_(r,3) not E_(r,2)" if ok else str(notes))


# ---------------------------------------------------------------------------
# 8. the adjunction between bicomplexes and 4-multicomplexes


def criterion_8(samples=100):
    problems = []
    rng = make_rng("acceptance-8")
    for n in range(samples):
        field = FIELDS[n % 2]
        M = random_multicomplex(rng, 2, field)
        L = random_multicomplex(rng, 4, field)
        if not counit_is_identity(M):
            problems.append(("counit", n))
        if not all(triangle_identities(L, M).values()):
            problems.append(("triangle", n))
        if not all(involution_preserved(M, L).values()):
            problems.append(("involution", n))
        if n < 30 and not hom_bijection(L, M)["bijective"]:
            problems.append(("hom bijection", n))
    vK = is_weak_equivalence(unit(_K(4)), 1, 1)
    if vK.holds or vK.untrusted:
        problems.append(("unit(K)",))
    for s in (1, 2, 3):
        for pmin in (-2 * s - 3, -2 * s - 4):
            holds, _ = unit_zw_experiment(s, pmin)
            if not holds:
                problems.append(("unit(zw)", s, pmin))
    return report("criterion 8 (adjunction)", not problems,
                  f"{samples} random pairs; unit(K) not in E_(1,1); unit(ZW_s) in E_(1,1) for s=1,2,3; problems {problems[:5]}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(criterion, capsys):
    ok, line = criterion()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def main():
    failed = 0
    for c in CRITERIA:
        t = time.time()
        ok, line = c()
        print(f"{line}  [{time.time() - t:.1f}s]", flush=True)
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
