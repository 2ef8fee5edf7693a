"""Moment functionals and the univariate classical polynomials.

Continuous families are normalized so that the zeroth moment is 1; with
rational parameters every moment is then rational.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import BadIndex, BadParameter, DimensionMismatch
from .exact_linalg import RMatrix, format_rational, to_rational
from .mpoly import MPoly, MultiIndex, PolyMatrix, homogenize_substitution


def pochhammer(a: Fraction, k: int) -> Fraction:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1)."""
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


class MomentFunctional:
    """A linear functional on polynomials in ``d`` variables, given by its moments.

    Subclasses implement :meth:`_moment`; results are memoized per instance.
    """

    type_name = "abstract"

    def __init__(self, d: int):
        if d < 1:
            raise BadParameter("dimension must be >= 1")
        self.d = d
        self._cache: dict[MultiIndex, Fraction] = {}
        self._lock = threading.Lock()

    def _moment(self, alpha: MultiIndex) -> Fraction:
        raise NotImplementedError

    def moment(self, alpha: Sequence[int]) -> Fraction:
        alpha = tuple(alpha)
        if len(alpha) != self.d:
            raise DimensionMismatch(f"multi-index {alpha} for d={self.d}")
        try:
            return self._cache[alpha]
        except KeyError:
            pass
        value = self._moment(alpha)
        with self._lock:
            self._cache[alpha] = value
        return value

    def pair(self, f: MPoly) -> Fraction:
        if f.d != self.d:
            raise DimensionMismatch(f"polynomial has d={f.d}, functional has d={self.d}")
        return sum((c * self.moment(a) for a, c in f.terms.items()), Fraction(0))

    def pair_matrix(self, M: PolyMatrix) -> RMatrix:
        if M.d != self.d:
            raise DimensionMismatch(f"matrix has d={M.d}, functional has d={self.d}")
        return RMatrix(M.rows, M.cols, [self.pair(e) for e in M.entries])

    def __add__(self, other: MomentFunctional) -> MomentFunctional:
        return sum_functional(self, other)

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor()})"


def pair(u: MomentFunctional, f: MPoly) -> Fraction:
    return u.pair(f)


def pair_matrix(u: MomentFunctional, M: PolyMatrix) -> RMatrix:
    return u.pair_matrix(M)


def _check_above_minus_one(name: str, values: Sequence[Fraction]) -> None:
    for v in values:
        if v <= -1:
            raise BadParameter(f"{name} must be > -1, got {format_rational(v)}")


class SimplexJacobi(MomentFunctional):
    """Weight x^alpha0 (1 - |x|)^beta on the standard d-simplex."""

    type_name = "simplex_jacobi"

    def __init__(self, alpha0: Sequence, beta=0):
        alpha0 = tuple(to_rational(a) for a in alpha0)
        beta = to_rational(beta)
        super().__init__(len(alpha0))
        _check_above_minus_one("alpha0", alpha0)
        _check_above_minus_one("beta", [beta])
        self.alpha0 = alpha0
        self.beta = beta

    def _moment(self, alpha: MultiIndex) -> Fraction:
        num = Fraction(1)
        for a0, k in zip(self.alpha0, alpha):
            num *= pochhammer(a0 + 1, k)
        total = sum(self.alpha0) + self.beta + self.d + 1
        return num / pochhammer(total, sum(alpha))

    def descriptor(self) -> dict:
        return {
            "type": self.type_name,
            "alpha0": [format_rational(a) for a in self.alpha0],
            "beta": format_rational(self.beta),
        }


def simplex_moment(alpha0: Sequence, beta, alpha: Sequence[int]) -> Fraction:
    return SimplexJacobi(alpha0, beta).moment(alpha)


class PointMass(MomentFunctional):
    """lambda * delta at a rational point."""

    type_name = "point_mass"

    def __init__(self, location: Sequence, weight=1):
        location = tuple(to_rational(x) for x in location)
        super().__init__(len(location))
        self.location = location
        self.weight = to_rational(weight)

    def _moment(self, alpha: MultiIndex) -> Fraction:
        value = self.weight
        for x, k in zip(self.location, alpha):
            if k:
                value *= x ** k
        return value

    def descriptor(self) -> dict:
        return {
            "type": self.type_name,
            "location": [format_rational(x) for x in self.location],
            "weight": format_rational(self.weight),
        }


def point_mass_moment(location: Sequence, weight, alpha: Sequence[int]) -> Fraction:
    return PointMass(location, weight).moment(alpha)


def _jacobi_t_ratio(k: int, a: Fraction) -> Fraction:
    # int_{-1}^{1} t^k (1-t)^a dt divided by the same integral at k = 0
    s = sum((comb(k, j) * Fraction(-2) ** j / (a + j + 1) for j in range(k + 1)), Fraction(0))
    return (a + 1) * s


class LaguerreJacobi(MomentFunctional):
    """Product weight x_1^a_1 ... x_{d-1}^a_{d-1} e^{-(x_1+...+x_{d-1})} (1 - x_d/x_1)^a_d.

    Supported on x_i > 0 (i < d) and -x_1 < x_d < x_1; needs d >= 2.
    """

    type_name = "laguerre_jacobi"

    def __init__(self, a: Sequence):
        a = tuple(to_rational(v) for v in a)
        if len(a) < 2:
            raise BadParameter("laguerre_jacobi needs d >= 2")
        super().__init__(len(a))
        _check_above_minus_one("a", a)
        self.a = a

    def _moment(self, k: MultiIndex) -> Fraction:
        a, d = self.a, self.d
        # x_d = x_1 t turns the x_1 factor into Gamma(a_1 + k_1 + k_d + 2)
        value = pochhammer(a[0] + 2, k[0] + k[d - 1])
        for i in range(1, d - 1):
            value *= pochhammer(a[i] + 1, k[i])
        return value * _jacobi_t_ratio(k[d - 1], a[d - 1])

    def descriptor(self) -> dict:
        return {"type": self.type_name, "a": [format_rational(v) for v in self.a]}


def laguerre_jacobi_moment(a: Sequence, k: Sequence[int]) -> Fraction:
    return LaguerreJacobi(a).moment(k)


class SumFunctional(MomentFunctional):
    type_name = "sum"

    def __init__(self, terms: Sequence[MomentFunctional]):
        terms = tuple(terms)
        if not terms:
            raise BadParameter("sum of no functionals")
        d = terms[0].d
        if any(t.d != d for t in terms):
            raise DimensionMismatch("summands have different dimensions")
        super().__init__(d)
        self.terms = terms

    def _moment(self, alpha: MultiIndex) -> Fraction:
        return sum((t.moment(alpha) for t in self.terms), Fraction(0))

    def descriptor(self) -> dict:
        return {"type": self.type_name, "terms": [t.descriptor() for t in self.terms]}


def sum_functional(u: MomentFunctional, v: MomentFunctional) -> SumFunctional:
    if u.d != v.d:
        raise DimensionMismatch(f"cannot add functionals with d={u.d} and d={v.d}")
    return SumFunctional([u, v])


def appell_type(alpha0: Sequence, beta, weight) -> SumFunctional:
    """Simplex-Jacobi functional plus ``weight`` times delta at the origin."""
    u = SimplexJacobi(alpha0, beta)
    return sum_functional(u, PointMass((0,) * u.d, weight))


def functional_from_descriptor(desc: dict) -> MomentFunctional:
    """Inverse of ``descriptor()``; raises BadParameter on malformed input."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise BadParameter("functional descriptor must be an object with a 'type' key")
    kind = desc["type"]
    try:
        if kind == "simplex_jacobi":
            return SimplexJacobi(desc["alpha0"], desc.get("beta", "0"))
        if kind == "point_mass":
            return PointMass(desc["location"], desc.get("weight", "1"))
        if kind == "laguerre_jacobi":
            return LaguerreJacobi(desc["a"])
        if kind == "sum":
            return SumFunctional([functional_from_descriptor(t) for t in desc["terms"]])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, BadParameter):
            raise
        raise BadParameter(f"malformed {kind} descriptor: {exc}") from exc
    raise BadParameter(f"unknown functional type {kind!r}")


# -- univariate classical polynomials ---------------------------------------------


def laguerre_1d(k: int, a) -> MPoly:
    """Laguerre L_k^(a)(t) from (n+1) L_{n+1} = (2n+1+a-t) L_n - (n+a) L_{n-1}."""
    a = to_rational(a)
    if k < 0:
        raise BadParameter("degree must be >= 0")
    _check_above_minus_one("a", [a])
    t = MPoly.var(1, 1)
    prev, cur = MPoly.zero(1), MPoly.constant(1, 1)
    for n in range(k):
        prev, cur = cur, ((2 * n + 1 + a) - t) * cur * Fraction(1, n + 1) - prev * ((n + a) / (n + 1))
    return cur


def jacobi_1d(k: int, a, b) -> MPoly:
    """Jacobi P_k^(a,b)(t) by the standard three-term recurrence."""
    a, b = to_rational(a), to_rational(b)
    if k < 0:
        raise BadParameter("degree must be >= 0")
    _check_above_minus_one("a, b", [a, b])
    t = MPoly.var(1, 1)
    p0 = MPoly.constant(1, 1)
    if k == 0:
        return p0
    p1 = t * ((a + b + 2) / 2) + (a - b) / 2
    for n in range(1, k):
        c = 2 * n + a + b
        a1 = 2 * (n + 1) * (n + a + b + 1) * c
        a2 = (c + 1) * (a * a - b * b)
        a3 = c * (c + 1) * (c + 2)
        a4 = 2 * (n + a) * (n + b) * (c + 2)
        p0, p1 = p1, ((t * a3 + a2) * p1 - p0 * a4) * (1 / a1)
    return p1


def example2_product_poly(a: Sequence, k: Sequence[int]) -> MPoly:
    """Koornwinder-type product polynomial orthogonal for :class:`LaguerreJacobi`.

    L_{k1-kd}^(a1+2kd+1)(x1) * prod_{1<i<d} L_{ki}^(ai)(xi) * x1^kd P_kd^(ad,0)(xd/x1)
    """
    a = tuple(to_rational(v) for v in a)
    k = tuple(int(v) for v in k)
    d = len(a)
    if len(k) != d or d < 2:
        raise BadIndex("index and parameter lengths must agree and d >= 2")
    if any(v < 0 for v in k):
        raise BadIndex("indices must be nonnegative")
    if k[0] < k[-1]:
        raise BadIndex(f"need k_1 >= k_d, got {k}")
    _check_above_minus_one("a", a)
    result = _embed(laguerre_1d(k[0] - k[-1], a[0] + 2 * k[-1] + 1), d, 1)
    for i in range(1, d - 1):
        result = result * _embed(laguerre_1d(k[i], a[i]), d, i + 1)
    return result * homogenize_substitution(jacobi_1d(k[-1], a[-1], 0), d, d, 1, k[-1])


def _embed(p: MPoly, d: int, i: int) -> MPoly:
    """View a univariate polynomial as a polynomial in x_i of d variables."""
    out = {}
    for (e,), c in p.terms.items():
        alpha = [0] * d
        alpha[i - 1] = e
        out[tuple(alpha)] = c
    return MPoly(d, out)
