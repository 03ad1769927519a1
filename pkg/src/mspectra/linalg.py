"""Exact fields, dense matrices, canonical subspaces and quotients.

Everything here is immutable once built.  Vectors are plain tuples of field
elements; matrices act on column vectors (``rows`` = target dimension).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

from . import kernels


class FieldError(ValueError):
    pass


class RationalField:
    """The rational numbers, elements are ``Fraction`` (or ``int``)."""

    characteristic = 0
    descriptor = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    def reduce(self, x):
        return x

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not a rational number: {text!r}") from exc

    def format(self, x):
        return str(Fraction(x))

    def inv(self, x):
        return 1 / Fraction(x)

    def rref(self, rows, ncols):
        int_rows = []
        for row in rows:
            den = 1
            for x in row:
                if isinstance(x, Fraction) and x.denominator != 1:
                    den = lcm(den, x.denominator)
            if den == 1:
                int_rows.append([int(x) for x in row])
            else:
                int_rows.append([int(x * den) for x in row])
        return kernels.rref_int(int_rows, ncols)

    def random(self, rng, bound=3):
        return Fraction(rng.randint(-bound, bound))


class PrimeField:
    """The field with ``p`` elements; elements are ints in ``[0, p)``."""

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        if p >= 2**31:
            raise FieldError("prime must be below 2**31")
        self.p = p
        self.characteristic = p
        self.descriptor = f"Fp:{p}"
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p

    def parse(self, text):
        try:
            return int(text.strip()) % self.p
        except ValueError as exc:
            raise FieldError(f"not an integer residue: {text!r}") from exc

    def format(self, x):
        return str(x % self.p)

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def rref(self, rows, ncols):
        return kernels.rref_modp(rows, ncols, self.p)

    def random(self, rng, bound=None):
        return rng.randrange(self.p)


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def field_from_descriptor(text):
    text = text.strip()
    if text in ("Q", "QQ"):
        return QQ
    if text.startswith("Fp:"):
        try:
            return GF(int(text[3:]))
        except ValueError as exc:
            raise FieldError(f"bad field descriptor {text!r}") from exc
    raise FieldError(f"bad field descriptor {text!r} (expected 'Q' or 'Fp:<p>')")


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense matrix over a field.  ``data`` is a tuple of row tuples."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows, cols, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            data = tuple((z,) * cols for _ in range(rows))
        self.data = data

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [tuple(field(x) for x in row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field, columns, rows):
        cols = len(columns)
        z = field.zero
        if cols == 0:
            return cls(field, rows, 0, tuple(() for _ in range(rows)))
        return cls(field, rows, cols, tuple(tuple(col[i] for col in columns) for i in range(rows)))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.rows}x{self.cols}, {[list(r) for r in self.data]})"

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self):
        return not any(any(row) for row in self.data)

    def columns(self):
        return [tuple(row[j] for row in self.data) for j in range(self.cols)]

    def transpose(self):
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            red = self.field.reduce
            ocols = other.columns()
            data = tuple(
                tuple(red(sum(a * b for a, b in zip(row, col) if a and b)) for col in ocols)
                for row in self.data
            )
            if other.cols == 0:
                data = tuple(() for _ in range(self.rows))
            return Matrix(self.field, self.rows, other.cols, data)
        return self.apply(other)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        red = self.field.reduce
        return tuple(red(sum(a * b for a, b in zip(row, vec) if a and b)) for row in self.data)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        red = self.field.reduce
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple(tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
        )

    def __neg__(self):
        red = self.field.reduce
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(red(-a) for a in r) for r in self.data))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        red = self.field.reduce
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(red(c * a) for a in r) for r in self.data))


def hstack(field, blocks, rows):
    """Concatenate matrices side by side (all with ``rows`` rows)."""
    data = [[] for _ in range(rows)]
    cols = 0
    for b in blocks:
        if b.rows != rows:
            raise ValueError("row mismatch in hstack")
        for i, r in enumerate(b.data):
            data[i].extend(r)
        cols += b.cols
    return Matrix(field, rows, cols, tuple(tuple(r) for r in data))


def vstack(field, blocks, cols):
    data = []
    for b in blocks:
        if b.cols != cols:
            raise ValueError("column mismatch in vstack")
        data.extend(b.data)
    return Matrix(field, len(data), cols, tuple(data))


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``field^ambient_dim`` stored by its reduced echelon basis.

    Two equal subspaces have identical ``basis`` tuples.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, basis, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, field, ambient_dim, vectors):
        vectors = [v for v in vectors if any(v)]
        if not vectors:
            return cls(field, ambient_dim, (), ())
        rows, pivots = field.rref(vectors, ambient_dim)
        return cls(field, ambient_dim, tuple(tuple(r) for r in rows), tuple(pivots))

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field, ambient_dim):
        m = Matrix.identity(field, ambient_dim)
        return cls(field, ambient_dim, m.data, tuple(range(ambient_dim)))

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def reduce(self, vec):
        """Eliminate the pivot coordinates of ``vec`` using the basis."""
        red = self.field.reduce
        v = list(vec)
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [red(x - f * y) if y else x for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, vec):
        return not any(self.reduce(vec))

    def coordinates(self, vec):
        """Coefficients of ``vec`` in the echelon basis; ``None`` if outside."""
        if not self.contains(vec):
            return None
        return tuple(vec[c] for c in self.pivots)

    def __add__(self, other):
        return Subspace.span(self.field, self.ambient_dim, list(self.basis) + list(other.basis))

    def issubspace(self, other):
        return all(other.contains(v) for v in self.basis)


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    rows, _ = m.field.rref(m.data, m.cols)
    return len(rows)


def rank_of_vectors(field, vectors, dim):
    vectors = [v for v in vectors if any(v)]
    if not vectors or dim == 0:
        return 0
    rows, _ = field.rref(vectors, dim)
    return len(rows)


def _nullspace_vectors(field, data, ncols):
    if not data:
        rows, pivots = [], []
    else:
        rows, pivots = field.rref(data, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    red = field.reduce
    out = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for row, pc in zip(rows, pivots):
            if row[fc]:
                v[pc] = red(-row[fc])
        out.append(tuple(v))
    return out


def kernel(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.cols, _nullspace_vectors(m.field, m.data, m.cols))


def image(m: Matrix) -> Subspace:
    """Column space of ``m``."""
    return Subspace.span(m.field, m.rows, m.columns())


def solve(m: Matrix, b):
    """Some ``x`` with ``m x = b``, or ``None`` if ``b`` is not in the image."""
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    field = m.field
    b = tuple(field(x) for x in b)
    if m.cols == 0:
        return () if not any(b) else None
    aug = [tuple(row) + (bi,) for row, bi in zip(m.data, b)]
    rows, pivots = field.rref(aug, m.cols + 1) if aug else ([], [])
    if pivots and pivots[-1] == m.cols:
        return None
    x = [field.zero] * m.cols
    for row, pc in zip(rows, pivots):
        x[pc] = field.reduce(row[m.cols])
    return tuple(x)


class QuotientError(ValueError):
    """Raised when the divisor is not contained in the ambient subspace."""


class QuotientPresentation:
    """``ambient / divisor`` with canonical representatives.

    The representatives are the echelon basis of the complement
    ``{v in ambient : v vanishes on the divisor's pivot columns}``, so the
    presentation depends only on the two subspaces.
    """

    __slots__ = ("ambient", "divisor", "complement")

    def __init__(self, ambient, divisor, complement):
        self.ambient = ambient
        self.divisor = divisor
        self.complement = complement

    @property
    def representatives(self):
        return self.complement.basis

    @property
    def dim(self):
        return self.complement.dim

    def __repr__(self):
        return f"QuotientPresentation(dim={self.dim}, cycles={self.ambient.dim}, boundaries={self.divisor.dim})"

    def coordinates(self, vec):
        """Coordinates of the class of ``vec`` (which must lie in the ambient)."""
        r = self.divisor.reduce(vec)
        return tuple(r[c] for c in self.complement.pivots)

    def is_trivial(self, vec):
        return self.divisor.contains(vec)


def quotient(cycles: Subspace, boundaries: Subspace) -> QuotientPresentation:
    if cycles.ambient_dim != boundaries.ambient_dim:
        raise QuotientError("ambient dimensions differ")
    for v in boundaries.basis:
        if not cycles.contains(v):
            raise QuotientError("boundaries are not contained in cycles")
    reduced = [boundaries.reduce(v) for v in cycles.basis]
    comp = Subspace.span(cycles.field, cycles.ambient_dim, reduced)
    if comp.dim != cycles.dim - boundaries.dim:
        raise QuotientError("inconsistent quotient dimension")
    return QuotientPresentation(cycles, boundaries, comp)


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse of a non-square matrix")
    field = m.field
    if n == 0:
        return m
    ident = Matrix.identity(field, n).data
    aug = [tuple(r) + tuple(e) for r, e in zip(m.data, ident)]
    rows, pivots = field.rref(aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return Matrix(field, n, n, tuple(tuple(field.reduce(x) for x in r[n:]) for r in rows))
