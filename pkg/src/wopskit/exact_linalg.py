"""Exact dense linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; :class:`RMatrix` is an immutable
row-major matrix of them.  Nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import Inconsistent, RankDeficient, ShapeMismatch

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction (floats are refused)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class RMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        entries = tuple(to_rational(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RMatrix is immutable")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> RMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RMatrix:
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RMatrix:
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def column(cls, values: Sequence) -> RMatrix:
        return cls(len(values), 1, values)

    @classmethod
    def row(cls, values: Sequence) -> RMatrix:
        return cls(1, len(values), values)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def get_row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> RMatrix:
        return RMatrix(r1 - r0, c1 - c0, [self[i, j] for i in range(r0, r1) for j in range(c0, c1)])

    def is_zero(self) -> bool:
        return not any(self.entries)

    @property
    def T(self) -> RMatrix:
        return RMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    # -- arithmetic ---------------------------------------------------------

    def _check_same_shape(self, other: RMatrix) -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: RMatrix) -> RMatrix:
        self._check_same_shape(other)
        return RMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: RMatrix) -> RMatrix:
        self._check_same_shape(other)
        return RMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> RMatrix:
        return RMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> RMatrix:
        c = to_rational(c)
        return RMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __mul__(self, c):
        if isinstance(c, RMatrix):
            return self @ c
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, RMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * m:(i + 1) * m]
            for j in range(p):
                s = Fraction(0)
                for k in range(m):
                    x = arow[k]
                    if x:
                        y = b[k * p + j]
                        if y:
                            s += x * y
                out.append(s)
        return RMatrix(n, p, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(e) for e in r) + "]" for r in self.to_rows())
        return f"RMatrix({self.rows}x{self.cols}: [{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(e) for e in r] for r in self.to_rows()]


def vstack(blocks: Sequence[RMatrix]) -> RMatrix:
    if not blocks:
        raise ShapeMismatch("nothing to stack")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ShapeMismatch("vstack needs equal column counts")
    return RMatrix(sum(b.rows for b in blocks), cols, [e for b in blocks for e in b.entries])


def hstack(blocks: Sequence[RMatrix]) -> RMatrix:
    return vstack([b.T for b in blocks]).T


def kron(A: RMatrix, B: RMatrix) -> RMatrix:
    """Kronecker product; block (i, j) of the result is A[i, j] * B."""
    rows, cols = A.rows * B.rows, A.cols * B.cols
    out = []
    for i in range(A.rows):
        for k in range(B.rows):
            for j in range(A.cols):
                a = A[i, j]
                out.extend(a * B[k, l] for l in range(B.cols))
    return RMatrix(rows, cols, out)


# -- elimination ----------------------------------------------------------------


def _integer_rows(M: RMatrix) -> list[list[int]]:
    # row scaling by the lcm of denominators preserves rank
    rows = []
    for r in M.to_rows():
        m = lcm(*(e.denominator for e in r)) if r else 1
        rows.append([int(e * m) for e in r])
    return rows


def rank(M: RMatrix) -> int:
    """Exact rank via fraction-free (Bareiss) elimination."""
    a = _integer_rows(M)
    nrows, ncols = M.rows, M.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
        prev = p
        r += 1
    return r


def det(M: RMatrix) -> Fraction:
    if M.rows != M.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    a = M.to_rows()
    n = M.rows
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return result


def rref(M: RMatrix) -> tuple[RMatrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = M.to_rows()
    nrows, ncols = M.rows, M.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [e / p for e in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RMatrix.from_rows(a, ncols), pivots


def _solve_square(A: RMatrix, B: RMatrix) -> RMatrix | None:
    """Gauss-Jordan on [A | B]; None when A is singular."""
    n = A.rows
    aug = [ra + rb for ra, rb in zip(A.to_rows(), B.to_rows())]
    width = n + B.cols
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        if p != 1:
            aug[c] = [e / p for e in aug[c]]
        rowc = aug[c]
        for i in range(n):
            if i != c:
                f = aug[i][c]
                if f:
                    rowi = aug[i]
                    for j in range(c, width):
                        if rowc[j]:
                            rowi[j] -= f * rowc[j]
    return RMatrix(n, B.cols, [e for r in aug for e in r[n:]])


def inverse(A: RMatrix) -> RMatrix:
    if A.rows != A.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    X = _solve_square(A, RMatrix.identity(A.rows))
    if X is None:
        raise RankDeficient(f"{A.rows}x{A.cols} matrix is singular")
    return X


def pinv(A: RMatrix) -> RMatrix:
    """Exact Moore-Penrose pseudoinverse through a full-rank factorisation A = F G."""
    R, pivots = rref(A)
    k = len(pivots)
    if k == 0:
        return RMatrix.zeros(A.cols, A.rows)
    G = R.submatrix(0, k, 0, A.cols)
    F = RMatrix(A.rows, k, [A[i, c] for i in range(A.rows) for c in pivots])
    return G.T @ inverse(G @ G.T) @ inverse(F.T @ F) @ F.T


def solve(A: RMatrix, B: RMatrix) -> RMatrix:
    """Return one exact solution X of AX = B.

    Square nonsingular systems get the unique solution; anything else gets
    the minimum-norm solution A^+ B.  Raises Inconsistent when no X exists.
    """
    if A.rows != B.rows:
        raise ShapeMismatch(f"A has {A.rows} rows but B has {B.rows}")
    if A.rows == A.cols:
        X = _solve_square(A, B)
        if X is not None:
            return X
    X = pinv(A) @ B
    if A @ X != B:
        raise Inconsistent("linear system has no solution")
    return X


def left_inverse(A: RMatrix) -> RMatrix:
    """The canonical left inverse (A^t A)^{-1} A^t of a full-column-rank matrix."""
    if rank(A) != A.cols:
        raise RankDeficient(f"{A.rows}x{A.cols} matrix has rank {rank(A)} < {A.cols}")
    At = A.T
    return solve(At @ A, At)
