# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction kernels (same contract as ``_kernels_py``)."""

from fractions import Fraction
from math import gcd

from libc.stdlib cimport malloc, free


def rref_modp(rows, Py_ssize_t ncols, long long p):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, c, r, piv
    cdef long long f, inv, lead, x
    cdef long long *m
    cdef long long *row
    cdef long long *other
    if nrows == 0 or ncols == 0:
        return [], []
    m = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    try:
        for i in range(nrows):
            src = rows[i]
            for j in range(ncols):
                x = src[j] % p
                if x < 0:
                    x += p
                m[i * ncols + j] = x
        pivots = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    x = m[r * ncols + j]
                    m[r * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = x
            row = m + r * ncols
            lead = row[c]
            if lead != 1:
                inv = _powmod(lead, p - 2, p)
                for j in range(c, ncols):
                    row[j] = (row[j] * inv) % p
            for i in range(nrows):
                if i == r:
                    continue
                other = m + i * ncols
                f = other[c]
                if f != 0:
                    for j in range(c, ncols):
                        if row[j] != 0:
                            x = (other[j] - f * row[j]) % p
                            if x < 0:
                                x += p
                            other[j] = x
            pivots.append(c)
            r += 1
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(r)]
        return out, pivots
    finally:
        free(m)


cdef long long _powmod(long long base, long long e, long long p):
    cdef long long result = 1
    base %= p
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def _content_reduce(list row):
    cdef object g = 0
    cdef object x
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rref_int(rows, Py_ssize_t ncols):
    cdef list m = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t i, c, r = 0, piv
    cdef list prow
    cdef object a, b, g, aa, bb
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        a = prow[c]
        for i in range(nrows):
            if i != r:
                b = m[i][c]
                if b:
                    g = gcd(a, b)
                    aa = a // g
                    bb = b // g
                    m[i] = _content_reduce([aa * x - bb * y for x, y in zip(m[i], prow)])
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(m[:r], pivots):
        lead = row[c]
        out.append([Fraction(x, lead) if x else 0 for x in row])
    return out, pivots
