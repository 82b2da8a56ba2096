"""Exact scalars and small exact linear algebra.

Two fields are supported: the rationals and prime fields F_p (backed by the
Mod residue class below).  Both support the ordinary arithmetic operators, so
the rest of the package never needs to know which field it is working over.

Rationals are gmpy2.mpq when gmpy2 is importable and fractions.Fraction
otherwise; AINFTY_RATIONAL=fraction forces the pure-python backend.
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache

if os.environ.get("AINFTY_RATIONAL", "").lower() == "fraction":
    Rational = Fraction
else:
    try:
        from gmpy2 import mpq as Rational
    except ImportError:  # pragma: no cover
        Rational = Fraction


class DivisionByZero(ZeroDivisionError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Mod:
    """A residue mod a prime p, always reduced into [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("mixing residues mod %d and mod %d" % (self.p, other.p))
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, (Fraction, Rational)):
            num, den = int(other.numerator), int(other.denominator)
            if den % self.p == 0:
                raise DivisionByZero("denominator vanishes mod %d" % self.p)
            return num * pow(den, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self):
        if self.v == 0:
            raise DivisionByZero("0 has no inverse mod %d" % self.p)
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (other - self.v) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "Mod(%d, %d)" % (self.v, self.p)

    def __str__(self):
        return str(self.v)


class Field:
    """Common interface of the two supported fields."""

    name = None

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        return self.one / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return a / b

    def parse(self, text):
        return self(Fraction(text.strip()))

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class Rationals(Field):
    name = "Q"

    def __call__(self, x):
        if type(x) is Rational:
            return x
        if isinstance(x, Mod):
            raise TypeError("cannot lift a residue to Q")
        if isinstance(x, str):
            x = Fraction(x.strip())
        return Rational(x)

    def format(self, a):
        # "n" when the denominator is 1 and "n/d" otherwise, for both backends
        return str(a)


class PrimeField(Field):
    def __init__(self, p):
        if not _is_prime(p):
            raise ValueError("%d is not prime" % p)
        self.p = p
        self.name = "Fp:%d" % p

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise ValueError("residue mod %d given to F_%d" % (x.p, self.p))
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, (Fraction, Rational)):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise DivisionByZero("denominator vanishes mod %d" % self.p)
            return Mod(num * pow(den, -1, self.p), self.p)
        return Mod(int(x), self.p)


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def field_from_tag(tag):
    """Accepts "Q", "Fp:7" or "F7"."""
    tag = tag.strip()
    if tag in ("Q", "QQ"):
        return QQ
    if tag.startswith("Fp:"):
        return GF(int(tag[3:]))
    if tag.startswith("F") and tag[1:].isdigit():
        return GF(int(tag[1:]))
    raise ValueError("unknown field tag %r" % tag)


class SparseMatrix:
    """nrows x ncols matrix with entries stored as {(row, col): nonzero}."""

    def __init__(self, nrows, ncols, entries=None, field=QQ):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self.entries = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, nrows, ncols))
            v = field(v)
            if v:
                self.entries[(r, c)] = v

    @classmethod
    def from_rows(cls, rows, field=QQ):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        entries = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}
        return cls(len(rows), ncols, entries, field)

    def to_rows(self):
        z = self.field.zero
        rows = [[z] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def __getitem__(self, rc):
        return self.entries.get(rc, self.field.zero)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.entries == other.entries)

    def __repr__(self):
        return "SparseMatrix(%d, %d, %r)" % (self.nrows, self.ncols, self.entries)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseMatrix(self.nrows, other.ncols, acc, self.field)

    def apply(self, vec):
        """Matrix times a dense vector."""
        out = [self.field.zero] * self.nrows
        for (r, c), v in self.entries.items():
            out[r] = out[r] + v * vec[c]
        return out


def _rref_rows(rows, ncols):
    """In-place reduction of dense rows; pivot = first nonzero in column order."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def rref(M):
    rows = M.to_rows()
    pivots = _rref_rows(rows, M.ncols)
    R = SparseMatrix.from_rows(rows, M.field) if rows else SparseMatrix(0, M.ncols, field=M.field)
    return R, pivots, len(pivots)


def rank(M):
    return rref(M)[2]


def kernel_basis(M):
    """Basis of {v : Mv = 0}, one vector per free column."""
    R, pivots, _ = rref(M)
    rows = R.to_rows()
    F = M.field
    basis = []
    pivset = set(pivots)
    for free in range(M.ncols):
        if free in pivset:
            continue
        v = [F.zero] * M.ncols
        v[free] = F.one
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def image_basis(M):
    """The pivot columns of M, a basis of its column span."""
    _, pivots, _ = rref(M)
    rows = M.to_rows()
    return [[rows[r][c] for r in range(M.nrows)] for c in pivots]


def inverse(M):
    if M.nrows != M.ncols:
        raise ValueError("not square")
    n = M.nrows
    F = M.field
    rows = [row + [F.one if i == j else F.zero for j in range(n)]
            for i, row in enumerate(M.to_rows())]
    pivots = _rref_rows(rows, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("singular matrix")
    return SparseMatrix.from_rows([row[n:] for row in rows], F)


def solve_in_span(vectors, target, field):
    """Coefficients c with sum c_k vectors[k] = target, or None."""
    if not vectors:
        return [] if not any(target) else None
    m = len(target)
    rows = [[vectors[k][i] for k in range(len(vectors))] + [target[i]] for i in range(m)]
    rows = [[field(x) for x in row] for row in rows]
    pivots = _rref_rows(rows, len(vectors) + 1)
    if len(vectors) in pivots:
        return None
    coeffs = [field.zero] * len(vectors)
    for row, pc in zip(rows, pivots):
        coeffs[pc] = row[-1]
    return coeffs
