"""The algebra A_N = k<d_0..d_{N-1}> / (S_0, ..., S_{2N-2}) as a rewriting system.

Words are tuples of letter indices.  Words are ordered degree-lexicographically
with d_0 > d_1 > ... > d_{N-1}; each quadratic relation

    S_l = sum_{i+j=l} (-1)^i d_i d_j

is oriented into a rule rewriting its leading word.  Coefficients are kept as
Python ints (all rules have leading coefficient +-1), so normal forms are
valid over every field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

MAX_N = 8


def letter_bidegree(i):
    return (-i, 1 - i)


def word_bidegree(word):
    s = sum(word)
    return (-s, len(word) - s)


def word_key(word):
    """Sort key realising the degree-lexicographic order (larger = bigger word)."""
    return (len(word), tuple(-x for x in word))


def format_word(word):
    if not word:
        return "1"
    return ".".join(f"d{i}" for i in word)


def parse_word(text):
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for part in text.split("."):
        part = part.strip()
        if not part.startswith("d") or not part[1:].isdigit():
            raise ValueError(f"bad letter {part!r} in word {text!r}")
        out.append(int(part[1:]))
    return tuple(out)


def _add_into(acc, word, coef):
    c = acc.get(word, 0) + coef
    if c:
        acc[word] = c
    else:
        acc.pop(word, None)


@dataclass(frozen=True)
class RewriteRule:
    l: int
    leading: tuple
    replacement: tuple  # ((word, coef), ...)

    def __str__(self):
        rhs = " ".join(f"{'+' if c > 0 else '-'} {format_word(w)}" for w, c in self.replacement) or "0"
        if rhs.startswith("+ "):
            rhs = rhs[2:]
        return f"{format_word(self.leading)} -> {rhs}"


def _make_rules(N):
    rules = []
    for l in range(0, 2 * (N - 1) + 1):
        terms = [(i, l - i) for i in range(max(0, l - N + 1), min(l, N - 1) + 1)]
        lead = terms[0]
        lead_sign = -1 if lead[0] % 2 else 1
        # lead_sign * lead + sum(rest) = 0  =>  lead = -lead_sign * sum(rest)
        repl = []
        for i, j in terms[1:]:
            sign = -1 if i % 2 else 1
            repl.append(((i, j), -lead_sign * sign))
        repl.sort(key=lambda t: word_key(t[0]), reverse=True)
        rules.append(RewriteRule(l, lead, tuple(repl)))
    return rules


class Algebra:
    """Rewriting engine for A_N with memoised normal forms."""

    def __init__(self, N, max_N=MAX_N):
        if N < 2:
            raise ValueError("N must be at least 2")
        if N > max_N:
            raise ValueError(f"N={N} exceeds the configured limit {max_N}")
        self.N = N
        self.rules = _make_rules(N)
        self.table = {r.leading: r.replacement for r in self.rules}
        self._nf = {}
        self._basis = {}

    def __repr__(self):
        return f"Algebra(N={self.N})"

    def is_normal(self, word):
        t = self.table
        return not any((word[k], word[k + 1]) in t for k in range(len(word) - 1))

    def normal_form_word(self, word):
        """Normal form of a single word, as a dict word -> int coefficient."""
        word = tuple(word)
        cached = self._nf.get(word)
        if cached is not None:
            return cached
        t = self.table
        for k in range(len(word) - 1):
            repl = t.get((word[k], word[k + 1]))
            if repl is not None:
                acc = {}
                pre, post = word[:k], word[k + 2 :]
                for w, c in repl:
                    for w2, c2 in self.normal_form_word(pre + w + post).items():
                        _add_into(acc, w2, c * c2)
                break
        else:
            acc = {word: 1}
        self._nf[word] = acc
        return acc

    def normal_form(self, element):
        """Normal form of a word or of a dict word -> coefficient."""
        if isinstance(element, tuple):
            return dict(self.normal_form_word(element))
        acc = {}
        for w, c in element.items():
            for w2, c2 in self.normal_form_word(tuple(w)).items():
                _add_into(acc, w2, c * c2)
        return acc

    def multiply(self, u, v):
        """Product of two elements (dicts) in normal form."""
        acc = {}
        for w1, c1 in u.items():
            for w2, c2 in v.items():
                for w, c in self.normal_form_word(w1 + w2).items():
                    _add_into(acc, w, c1 * c2 * c)
        return acc

    def basis(self, p, q):
        """Normal words of bidegree ``(p, q)``, largest first."""
        key = (p, q)
        if key in self._basis:
            return self._basis[key]
        N = self.N
        length = q - p
        total = -p
        out = []
        if length >= 0 and total >= 0:
            mids = range(1, N - 1)
            for eps in (0, 1):
                for w in (0, 1):
                    m = length - eps - w
                    s = total - eps * (N - 1)
                    if m < 0 or s < 0:
                        continue
                    for mid in _compositions(s, m, 1, N - 2) if mids else ([()] if m == 0 and s == 0 else []):
                        out.append((N - 1,) * eps + mid + (0,) * w)
        # N = 2: d_{N-1} d_0 pattern with eps/w handled above; dedupe defensive
        out = sorted(set(out), key=word_key, reverse=True)
        self._basis[key] = out
        return out

    def dimension(self, p, q):
        return len(self.basis(p, q))


def _compositions(total, parts, lo, hi):
    """Ordered tuples of ``parts`` integers in [lo, hi] summing to ``total``."""
    if parts == 0:
        return [()] if total == 0 else []
    if hi < lo:
        return []
    out = []
    for first in range(lo, hi + 1):
        rest = total - first
        if rest < lo * (parts - 1) or rest > hi * (parts - 1):
            continue
        for tail in _compositions(rest, parts - 1, lo, hi):
            out.append((first,) + tail)
    return out


@lru_cache(maxsize=None)
def algebra(N):
    return Algebra(N)


def rules(N):
    return algebra(N).rules


def normal_form(element, N):
    return algebra(N).normal_form(element)


def basis(N, p, q):
    return list(algebra(N).basis(p, q))


# ---------------------------------------------------------------------------
# confluence


def _rewrite_at(A, word, k):
    repl = A.table[(word[k], word[k + 1])]
    return {word[:k] + w + word[k + 2 :]: c for w, c in repl}


def _nf_rightmost(A, element):
    acc = {}
    stack = list(element.items())
    while stack:
        w, c = stack.pop()
        for k in range(len(w) - 2, -1, -1):
            if (w[k], w[k + 1]) in A.table:
                for w2, c2 in _rewrite_at(A, w, k).items():
                    stack.append((w2, c * c2))
                break
        else:
            _add_into(acc, w, c)
    return acc


@dataclass(frozen=True)
class UnresolvedOverlap:
    word: tuple
    left: dict
    right: dict

    def __str__(self):
        return f"overlap {format_word(self.word)} does not resolve"


def overlaps(N):
    """Length-3 words whose prefix and suffix are both leading words."""
    A = algebra(N)
    leads = set(A.table)
    return [(a, b, c) for (a, b) in sorted(leads) for (b2, c) in sorted(leads) if b2 == b]


def confluence_check(N, max_len=3):
    """Unresolved ambiguities of the rewriting system (empty list = confluent).

    Every overlap ``xyz`` is rewritten first at ``xy`` and first at ``yz`` and
    both results are normalised.  For ``max_len > 3`` every word up to that
    length is additionally normalised with leftmost and rightmost strategies.
    """
    if max_len < 3:
        raise ValueError("max_len must be at least 3")
    A = algebra(N)
    out = []
    for word in overlaps(N):
        left = A.normal_form(_rewrite_at(A, word, 0))
        right = A.normal_form(_rewrite_at(A, word, 1))
        left_r = _nf_rightmost(A, _rewrite_at(A, word, 0))
        right_r = _nf_rightmost(A, _rewrite_at(A, word, 1))
        if not (left == right == left_r == right_r):
            out.append(UnresolvedOverlap(word, left, right))
    for length in range(4, max_len + 1):
        for word in product(range(N), repeat=length):
            if A.normal_form_word(word) != _nf_rightmost(A, {word: 1}):
                out.append(UnresolvedOverlap(word, A.normal_form_word(word), _nf_rightmost(A, {word: 1})))
    return out


def format_element(element):
    if not element:
        return "0"
    parts = []
    for w in sorted(element, key=word_key, reverse=True):
        c = element[w]
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(f"{sign} {mag}{format_word(w)}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s
