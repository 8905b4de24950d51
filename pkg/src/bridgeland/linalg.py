"""Exact linear algebra over the rationals and over prime fields.

Matrices are plain lists of rows. Entries are ``gmpy2.mpq`` over ``QQ`` and
ints in ``range(p)`` over ``GF(p)``. Plain Gaussian elimination, tuned only
for desk-scale problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

Matrix = list  # list[list[element]]


@dataclass(frozen=True)
class Field:
    """A field tag. ``p == 0`` means the rationals."""

    p: int = 0

    def __post_init__(self):
        if self.p < 0 or self.p == 1:
            raise ValueError(f"bad characteristic {self.p}")
        if self.p and any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def tag(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __repr__(self):
        return self.tag

    def __call__(self, x):
        if self.p == 0:
            return mpq(x) if not isinstance(x, Fraction) else mpq(x.numerator, x.denominator)
        if isinstance(x, int):
            return x % self.p
        x = mpq(x) if not isinstance(x, Fraction) else x
        return (int(x.numerator) * pow(int(x.denominator), -1, self.p)) % self.p

    @property
    def zero(self):
        return mpq(0) if self.p == 0 else 0

    @property
    def one(self):
        return mpq(1) if self.p == 0 else 1

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / a
        return pow(a, -1, self.p)

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    @staticmethod
    def parse(tag: str) -> "Field":
        tag = tag.strip()
        if tag in ("QQ", "Q", "rational", "rationals"):
            return QQ
        if tag.startswith("GF(") and tag.endswith(")"):
            return Field(int(tag[3:-1]))
        raise ValueError(f"unknown field tag {tag!r}")


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------- basics


def zeros(F: Field, rows: int, cols: int) -> Matrix:
    return [[F.zero] * cols for _ in range(rows)]


def identity(F: Field, n: int) -> Matrix:
    m = zeros(F, n, n)
    for i in range(n):
        m[i][i] = F.one
    return m


def convert(F: Field, m: Sequence[Sequence]) -> Matrix:
    return [[F(x) for x in row] for row in m]


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return (0, cols or 0)
    return (len(m), len(m[0]))


def matmul(F: Field, a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b``. ``inner``/``cols`` disambiguate empty shapes."""
    ra = len(a)
    k = len(a[0]) if a else (inner if inner is not None else len(b))
    cb = len(b[0]) if b else (cols or 0)
    out = zeros(F, ra, cb)
    if k == 0:
        return out
    bt = list(zip(*b)) if b else [()] * cb
    p = F.p
    for i, row in enumerate(a):
        orow = out[i]
        for j in range(cb):
            col = bt[j]
            s = sum(x * y for x, y in zip(row, col) if x and y)
            orow[j] = s % p if p else mpq(s)
    return out


def matadd(F: Field, a: Matrix, b: Matrix) -> Matrix:
    return [[F.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(F: Field, c, a: Matrix) -> Matrix:
    return [[F.mul(c, x) for x in row] for row in a]


def transpose(m: Matrix, rows: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(rows or 0)] if rows else []
    return [list(r) for r in zip(*m)]


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for row in m for x in row)


def block_diag(F: Field, blocks: Sequence[Matrix], shapes: Sequence[tuple[int, int]]) -> Matrix:
    rows = sum(s[0] for s in shapes)
    cols = sum(s[1] for s in shapes)
    out = zeros(F, rows, cols)
    r0 = c0 = 0
    for blk, (r, c) in zip(blocks, shapes):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = blk[i][j]
        r0 += r
        c0 += c
    return out


# ----------------------------------------------------------- elimination


def rref(F: Field, m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns. Input is not modified."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    p = F.p
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = F.inv(a[r][c])
        if p:
            ar = [(inv * x) % p for x in a[r]]
        else:
            ar = [inv * x if x else x for x in a[r]]
        a[r] = ar
        nz = [j for j in range(c, cols) if ar[j] != 0]
        for i in range(rows):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f == 0:
                continue
            if p:
                for j in nz:
                    row[j] = (row[j] - f * ar[j]) % p
            else:
                for j in nz:
                    row[j] = row[j] - f * ar[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(F: Field, m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(F, m)[1])


def nullspace(F: Field, m: Matrix, cols: int | None = None) -> list[list]:
    """Basis of ``{x : m x = 0}`` as a list of column vectors."""
    n = len(m[0]) if m else (cols or 0)
    if not m:
        return [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    red, piv = rref(F, m)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for row, pc in zip(red, piv):
            v[pc] = F.neg(row[f])
        basis.append(v)
    return basis


def column_space(F: Field, m: Matrix) -> list[list]:
    """A basis (reduced) of the span of the columns of ``m``."""
    if not m or not m[0]:
        return []
    red, _ = rref(F, transpose(m))
    return red


def row_basis(F: Field, vectors: Sequence[Sequence]) -> list[list]:
    """Reduced basis of the span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors or not vectors[0]:
        return []
    return rref(F, vectors)[0]


def inverse(F: Field, m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + ident for row, ident in zip(m, identity(F, n))]
    red, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve(F: Field, a: Matrix, b: Sequence) -> list | None:
    """One solution of ``a x = b`` or None."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, piv = rref(F, aug)
    if n in piv:
        return None
    x = [F.zero] * n
    for row, pc in zip(red, piv):
        x[pc] = row[n]
    return x


def det(F: Field, m: Matrix):
    n = len(m)
    a = [list(r) for r in m]
    d = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return F.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = F.neg(d)
        d = F.mul(d, a[c][c])
        inv = F.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = F.mul(a[i][c], inv)
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[c])]
    return d


def int_det(m: Sequence[Sequence[int]]) -> int:
    d = det(QQ, convert(QQ, m))
    assert d.denominator == 1
    return int(d)


def reduce_mod(p: int, m: Matrix) -> Matrix:
    """Reduce a rational matrix modulo ``p``; raises if a denominator vanishes."""
    F = Field(p)
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            r.append(F(x))
        out.append(r)
    return out


def rational_reconstruction(a: int, p: int) -> Fraction | None:
    """Smallest n/d with n = a d (mod p), |n|, d <= sqrt(p/2)."""
    a %= p
    bound = int((p / 2) ** 0.5)
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def symmetric_lift(a: int, p: int) -> Fraction:
    a %= p
    return Fraction(a - p if a > p // 2 else a)
