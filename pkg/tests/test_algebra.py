from itertools import product

import pytest

from mspectra.algebra import (
    algebra,
    basis,
    confluence_check,
    format_word,
    normal_form,
    parse_word,
    rules,
    word_bidegree,
    word_key,
)


def rule_map(N):
    return {r.leading: dict(r.replacement) for r in rules(N)}


def test_rules_bicomplex():
    r = rule_map(2)
    assert r[(0, 0)] == {}
    assert r[(0, 1)] == {(1, 0): 1}
    assert r[(1, 1)] == {}


def test_rule_three_l2():
    assert rule_map(3)[(0, 2)] == {(1, 1): 1, (2, 0): -1}


@pytest.mark.parametrize("N", range(2, 7))
def test_rule_shape(N):
    rs = rules(N)
    assert len(rs) == 2 * N - 1
    for r in rs:
        if r.l <= N - 1:
            assert r.leading == (0, r.l)
        else:
            assert r.leading == (r.l - N + 1, N - 1)
        for w, _ in r.replacement:
            assert word_key(w) < word_key(r.leading)
    assert dict(rs[0].replacement) == {}


def test_normal_form_examples():
    assert normal_form((0, 1, 0), 2) == {}
    assert normal_form((1, 2), 3) == {(2, 1): 1}
    assert normal_form((2, 1, 1, 0), 3) == {(2, 1, 1, 0): 1}


def test_basis_examples():
    assert basis(2, -1, 1) == [(1, 0)]
    assert basis(3, -2, 0) == [(1, 1), (2, 0)]
    for N in (2, 3, 4, 5):
        assert basis(N, 0, 0) == [()]
    A2 = {b: basis(2, *b) for b in [(0, 0), (0, 1), (-1, 0), (-1, 1)]}
    assert A2 == {(0, 0): [()], (0, 1): [(0,)], (-1, 0): [(1,)], (-1, 1): [(1, 0)]}
    assert sum(len(basis(2, p, q)) for p in range(-6, 7) for q in range(-6, 7)) == 4


@pytest.mark.parametrize("N", [2, 3, 4])
def test_basis_matches_brute_force(N):
    A = algebra(N)
    counts = {}
    for length in range(0, 7):
        seen = set()
        for w in product(range(N), repeat=length):
            seen.update(A.normal_form_word(w))
        for w in seen:
            b = word_bidegree(w)
            counts[b] = counts.get(b, 0) + 1
    for p in range(-6, 7):
        for q in range(-6, 7):
            if q - p <= 6:
                assert len(basis(N, p, q)) == counts.get((p, q), 0), (N, p, q)


@pytest.mark.parametrize("N", range(2, 7))
def test_confluence(N):
    assert confluence_check(N, 3) == []


def test_confluence_longer_words():
    assert confluence_check(3, 5) == []


def test_word_syntax():
    assert format_word((3, 1, 1, 0)) == "d3.d1.d1.d0"
    assert parse_word("d3.d1.d1.d0") == (3, 1, 1, 0)
    assert parse_word("1") == ()
    with pytest.raises(ValueError):
        parse_word("d3.x")


def test_basis_words_are_normal():
    A = algebra(4)
    for p in range(-5, 1):
        for q in range(-5, 3):
            for w in A.basis(p, q):
                assert A.is_normal(w) and word_bidegree(w) == (p, q)
                assert A.normal_form_word(w) == {w: 1}
