"""Multivariate polynomials over Q and matrices of them.

Monomials of a fixed total degree are indexed in descending lexicographic
order, so ``(n, 0, ..., 0)`` comes first.  Polynomials are immutable; the
coefficient map never stores zeros, which makes ``==`` structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DimensionMismatch, ShapeMismatch
from .exact_linalg import RMatrix, format_rational, to_rational

MultiIndex = tuple[int, ...]

#: degree reported for the zero polynomial
ZERO_DEGREE = -math.inf


def dim_homogeneous(d: int, n: int) -> int:
    """r_n: number of monomials of total degree exactly n in d variables."""
    if n < 0:
        return 0
    return math.comb(n + d - 1, n)


@lru_cache(maxsize=None)
def monomial_basis(d: int, n: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with |alpha| = n, in descending lexicographic order."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if n < 0:
        raise ValueError("degree must be >= 0")
    if d == 1:
        return ((n,),)
    out = []
    for first in range(n, -1, -1):
        for rest in monomial_basis(d - 1, n - first):
            out.append((first,) + rest)
    return tuple(out)


def monomials_up_to(d: int, n: int) -> list[MultiIndex]:
    """Monomials of total degree <= n, graded, each degree in descending lex order."""
    return [a for k in range(n + 1) for a in monomial_basis(d, k)]


@lru_cache(maxsize=None)
def basis_position(d: int, n: int) -> dict[MultiIndex, int]:
    return {a: j for j, a in enumerate(monomial_basis(d, n))}


def _add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


class MPoly:
    """A polynomial in ``d`` variables with rational coefficients."""

    __slots__ = ("d", "terms", "_hash")

    def __init__(self, d: int, terms: Mapping[MultiIndex, object] | Iterable = ()):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[MultiIndex, Fraction] = {}
        for alpha, c in items:
            alpha = tuple(int(e) for e in alpha)
            if len(alpha) != d or any(e < 0 for e in alpha):
                raise DimensionMismatch(f"bad exponent {alpha} for d={d}")
            c = to_rational(c)
            if c:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "terms", {a: c for a, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    @classmethod
    def _raw(cls, d: int, terms: dict[MultiIndex, Fraction]) -> MPoly:
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        object.__setattr__(p, "d", d)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> MPoly:
        return cls._raw(d, {})

    @classmethod
    def constant(cls, d: int, c) -> MPoly:
        c = to_rational(c)
        return cls._raw(d, {(0,) * d: c} if c else {})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c=1) -> MPoly:
        return cls(len(alpha), {tuple(alpha): c})

    @classmethod
    def var(cls, d: int, i: int) -> MPoly:
        """The coordinate x_i, with i counted from 1."""
        if not 1 <= i <= d:
            raise DimensionMismatch(f"coordinate {i} out of range for d={d}")
        return cls._raw(d, {tuple(1 if k == i - 1 else 0 for k in range(d)): Fraction(1)})

    # -- queries ------------------------------------------------------------

    @property
    def degree(self):
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(a) for a in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(alpha), Fraction(0))

    def homogeneous_part(self, n: int) -> MPoly:
        return MPoly._raw(self.d, {a: c for a, c in self.terms.items() if sum(a) == n})

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.d:
            raise DimensionMismatch(f"need {self.d} coordinates")
        pt = [to_rational(v) for v in point]
        total = Fraction(0)
        for alpha, c in self.terms.items():
            term = c
            for x, e in zip(pt, alpha):
                if e:
                    term *= x ** e
            total += term
        return total

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.d != self.d:
                raise DimensionMismatch(f"d={self.d} vs d={other.d}")
            return other
        return MPoly.constant(self.d, other)

    def __add__(self, other) -> MPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            v = out.get(a, 0) + c
            if v:
                out[a] = v
            else:
                out.pop(a, None)
        return MPoly._raw(self.d, out)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly._raw(self.d, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other) -> MPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MPoly:
        if not isinstance(other, MPoly):
            c = to_rational(other)
            if not c:
                return MPoly.zero(self.d)
            return MPoly._raw(self.d, {a: c * v for a, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[MultiIndex, Fraction] = {}
        for a, c in self.terms.items():
            for b, e in other.terms.items():
                k = _add_index(a, b)
                out[k] = out.get(k, 0) + c * e
        return MPoly._raw(self.d, {a: c for a, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MPoly:
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.constant(self.d, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, i: int) -> MPoly:
        """Partial derivative with respect to x_i (i counted from 1)."""
        k = i - 1
        out = {}
        for a, c in self.terms.items():
            if a[k]:
                b = a[:k] + (a[k] - 1,) + a[k + 1:]
                out[b] = c * a[k]
        return MPoly._raw(self.d, out)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.d == other.d and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.constant(self.d, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.d, frozenset(self.terms.items()))))
        return self._hash

    # -- rendering ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[MultiIndex, Fraction]]:
        """Terms by total degree descending, then lexicographically descending."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = list(names) if names else [f"x{k + 1}" for k in range(self.d)]
        parts = []
        for alpha, c in self.sorted_terms():
            mono = "*".join(
                names[k] if e == 1 else f"{names[k]}^{e}" for k, e in enumerate(alpha) if e
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    __str__ = render

    def __repr__(self) -> str:
        return f"MPoly(d={self.d}, {self.render()})"


def variables(d: int) -> list[MPoly]:
    return [MPoly.var(d, i) for i in range(1, d + 1)]


def homogenize_substitution(p: MPoly, d: int, num: int, den: int, k: int) -> MPoly:
    """Expand x_den^k * p(x_num / x_den) for a univariate p of degree <= k."""
    if p.d != 1:
        raise DimensionMismatch("homogenize_substitution needs a univariate polynomial")
    if p.degree > k:
        raise ValueError("degree of p exceeds the homogenizing power")
    out = {}
    for (e,), c in p.terms.items():
        alpha = [0] * d
        alpha[num - 1] += e
        alpha[den - 1] += k - e
        out[tuple(alpha)] = c
    return MPoly(d, out)


class PolyMatrix:
    """Dense matrix of MPoly entries sharing one dimension d."""

    __slots__ = ("rows", "cols", "d", "entries")

    def __init__(self, rows: int, cols: int, d: int, entries: Iterable[MPoly]):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries")
        for e in entries:
            if not isinstance(e, MPoly):
                raise TypeError("PolyMatrix entries must be MPoly")
            if e.d != d:
                raise DimensionMismatch(f"entry has d={e.d}, matrix has d={d}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], d: int) -> PolyMatrix:
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(len(rows), cols, d, [_as_poly(e, d) for r in rows for e in r])

    @classmethod
    def column(cls, polys: Sequence, d: int) -> PolyMatrix:
        return cls(len(polys), 1, d, [_as_poly(p, d) for p in polys])

    @classmethod
    def row(cls, polys: Sequence, d: int) -> PolyMatrix:
        return cls(1, len(polys), d, [_as_poly(p, d) for p in polys])

    @classmethod
    def zeros(cls, rows: int, cols: int, d: int) -> PolyMatrix:
        z = MPoly.zero(d)
        return cls(rows, cols, d, [z] * (rows * cols))

    @classmethod
    def identity(cls, n: int, d: int) -> PolyMatrix:
        return cls.constant(RMatrix.identity(n), d)

    @classmethod
    def constant(cls, M: RMatrix, d: int) -> PolyMatrix:
        return cls(M.rows, M.cols, d, [MPoly.constant(d, e) for e in M.entries])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> MPoly:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[MPoly]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    @property
    def T(self) -> PolyMatrix:
        return PolyMatrix(self.cols, self.rows, self.d,
                          [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    @property
    def degree(self):
        """max entry degree; ZERO_DEGREE for the zero matrix."""
        return max((e.degree for e in self.entries), default=ZERO_DEGREE)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def map(self, fn: Callable[[MPoly], MPoly]) -> PolyMatrix:
        return PolyMatrix(self.rows, self.cols, self.d, [fn(e) for e in self.entries])

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> PolyMatrix:
        return PolyMatrix(r1 - r0, c1 - c0, self.d,
                          [self[i, j] for i in range(r0, r1) for j in range(c0, c1)])

    def coefficient_matrix(self, alpha: Sequence[int]) -> RMatrix:
        """Numeric matrix of the coefficients of x^alpha in every entry."""
        return RMatrix(self.rows, self.cols, [e.coefficient(alpha) for e in self.entries])

    def support(self) -> set[MultiIndex]:
        return {a for e in self.entries for a in e.terms}

    def _check_same_shape(self, other: PolyMatrix) -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")
        if self.d != other.d:
            raise DimensionMismatch(f"d={self.d} vs d={other.d}")

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        other = _as_polymatrix(other, self.d)
        self._check_same_shape(other)
        return PolyMatrix(self.rows, self.cols, self.d,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        other = _as_polymatrix(other, self.d)
        self._check_same_shape(other)
        return PolyMatrix(self.rows, self.cols, self.d,
                          [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> PolyMatrix:
        return self.map(lambda e: -e)

    def __mul__(self, c) -> PolyMatrix:
        """Scalar (rational or polynomial) multiplication."""
        if isinstance(c, (PolyMatrix, RMatrix)):
            return self @ c
        return self.map(lambda e: e * c)

    def __rmul__(self, c) -> PolyMatrix:
        if isinstance(c, RMatrix):
            return PolyMatrix.constant(c, self.d) @ self
        return self.map(lambda e: c * e)

    def __matmul__(self, other) -> PolyMatrix:
        other = _as_polymatrix(other, self.d)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.d != other.d:
            raise DimensionMismatch(f"d={self.d} vs d={other.d}")
        n, m, p = self.rows, self.cols, other.cols
        d = self.d
        out = []
        for i in range(n):
            for j in range(p):
                acc: dict[MultiIndex, Fraction] = {}
                for k in range(m):
                    a = self.entries[i * m + k].terms
                    if not a:
                        continue
                    b = other.entries[k * p + j].terms
                    for ea, ca in a.items():
                        for eb, cb in b.items():
                            key = tuple(x + y for x, y in zip(ea, eb))
                            acc[key] = acc.get(key, 0) + ca * cb
                out.append(MPoly._raw(d, {e: c for e, c in acc.items() if c}))
        return PolyMatrix(n, p, d, out)

    def __rmatmul__(self, other) -> PolyMatrix:
        return _as_polymatrix(other, self.d) @ self

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.d == other.d and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.d, self.entries))

    def render(self) -> list[list[str]]:
        return [[e.render() for e in r] for r in self.to_rows()]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, d={self.d}, {self.render()})"


def _as_poly(e, d: int) -> MPoly:
    if isinstance(e, MPoly):
        if e.d != d:
            raise DimensionMismatch(f"entry has d={e.d}, expected {d}")
        return e
    return MPoly.constant(d, e)


def _as_polymatrix(M, d: int) -> PolyMatrix:
    if isinstance(M, PolyMatrix):
        return M
    if isinstance(M, RMatrix):
        return PolyMatrix.constant(M, d)
    raise TypeError(f"cannot use {type(M).__name__} as a polynomial matrix")


def poly_kron(A, B) -> PolyMatrix:
    """Kronecker product of polynomial (or constant) matrices."""
    d = A.d if isinstance(A, PolyMatrix) else B.d
    A = _as_polymatrix(A, d)
    B = _as_polymatrix(B, d)
    out = []
    for i in range(A.rows):
        for k in range(B.rows):
            for j in range(A.cols):
                a = A[i, j]
                for l in range(B.cols):
                    out.append(a * B[k, l])
    return PolyMatrix(A.rows * B.rows, A.cols * B.cols, d, out)


def poly_vstack(blocks: Sequence[PolyMatrix]) -> PolyMatrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ShapeMismatch("vstack needs equal column counts")
    return PolyMatrix(sum(b.rows for b in blocks), cols, blocks[0].d,
                      [e for b in blocks for e in b.entries])


# -- calculus -------------------------------------------------------------------


def gradient(f: MPoly) -> PolyMatrix:
    """Column (d_1 f, ..., d_d f)^t."""
    return PolyMatrix(f.d, 1, f.d, [f.diff(i) for i in range(1, f.d + 1)])


def grad_row(P: PolyMatrix) -> PolyMatrix:
    """For a column P of length r, the d x r matrix with (i, j) entry d_i P_j."""
    if P.cols != 1:
        raise ShapeMismatch("grad_row expects a column of polynomials")
    d = P.d
    return PolyMatrix(d, P.rows, d, [P[j, 0].diff(i) for i in range(1, d + 1) for j in range(P.rows)])


def divergence_weak_companion(Phi: PolyMatrix) -> PolyMatrix:
    """Row whose j-th entry is sum_i d_i Phi[i, j] (divergence of column j)."""
    if Phi.rows != Phi.cols or Phi.rows != Phi.d:
        raise ShapeMismatch("divergence needs a d x d matrix")
    d = Phi.d
    entries = []
    for j in range(d):
        s = MPoly.zero(d)
        for i in range(d):
            s = s + Phi[i, j].diff(i + 1)
        entries.append(s)
    return PolyMatrix(1, d, d, entries)
