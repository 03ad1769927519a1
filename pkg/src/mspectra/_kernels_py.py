"""Pure-Python row reduction kernels.

These are the reference implementations; ``_ckernels`` provides compiled
versions with identical signatures and results.
"""

from fractions import Fraction
from math import gcd


def rref_modp(rows, ncols, p):
    """Reduced row echelon form over F_p.

    ``rows`` is a list of integer lists (entries need not be reduced).
    Returns ``(nonzero_rows, pivot_columns)``.
    """
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
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
        row = m[r]
        lead = row[c]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            row = [(x * inv) % p for x in row]
            m[r] = row
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], row)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _content_reduce(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination of an integer matrix.

    Rows are kept primitive (content 1) during elimination; only the final
    normalisation by pivots produces ``Fraction`` entries.  Returns
    ``(nonzero_rows, pivot_columns)`` with the rows in reduced echelon form.
    """
    m = [list(row) for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
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
                    aa, bb = a // g, b // g
                    m[i] = _content_reduce([aa * x - bb * y for x, y in zip(m[i], prow)])
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(m[:r], pivots):
        lead = row[c]
        out.append([Fraction(x, lead) if x else 0 for x in row])
    return out, pivots
