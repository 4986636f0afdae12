"""Exact arithmetic on integer polynomials.

Everything here works with Python integers and :class:`fractions.Fraction`,
so results never depend on floating point.  The one numeric entry point,
:func:`complex_roots`, lives in :mod:`anosov_lie.roots` and is used here
only to attach a diagnostic margin to :class:`CirclenessVerdict`.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import InvalidInputError, NotAUnitError

__all__ = [
    "IntPolynomial",
    "CircleMethod",
    "CirclenessVerdict",
    "bareiss_det",
    "resultant",
    "composed_product",
    "reciprocal",
    "power_min_poly",
    "power_sum",
    "power_sums",
    "is_irreducible",
    "irreducibility",
    "squarefree_part",
    "poly_gcd",
    "chebyshev_transform",
    "sturm_count",
    "unit_circle_verdict",
    "parse_poly",
]

IRREDUCIBILITY_EXACT_DEGREE = 6


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients stored in ascending degree order.

    Trailing zeros are stripped on construction, so the empty tuple is the
    zero polynomial (degree -1).
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        out = cls([1])
        for r in roots:
            out = out * cls([-r, 1])
        return out

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        return parse_poly(text)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise InvalidInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if not self.coeffs or not other.coeffs:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def __pow__(self, n: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str | int]) -> "IntPolynomial":
        return cls(int(c) for c in data)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if d == 1 else f"x^{d}")
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __repr__(self) -> str:
        return f"IntPolynomial({str(self)!r})"


_TERM = re.compile(r"^([+-])?(\d*)\*?(x(?:\^(\d+))?)?$")


def parse_poly(text: str) -> IntPolynomial:
    """Parse the human form ``"x^2-3x+1"`` (also accepts ``*`` and spaces)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise InvalidInputError("empty polynomial string")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise InvalidInputError(f"cannot parse polynomial {text!r}")
    coeffs: dict[int, int] = {}
    for term in terms:
        m = _TERM.match(term)
        if not m or (not m.group(2) and not m.group(3)):
            raise InvalidInputError(f"cannot parse term {term!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            deg = int(m.group(4)) if m.group(4) else 1
        else:
            deg = 0
        coeffs[deg] = coeffs.get(deg, 0) + sign * mag
    top = max(coeffs)
    return IntPolynomial(coeffs.get(d, 0) for d in range(top + 1))


# --- rational polynomial helpers (ascending lists of Fraction) -------------

def _q(p: IntPolynomial | Sequence) -> list[Fraction]:
    cs = p.coeffs if isinstance(p, IntPolynomial) else p
    out = [Fraction(c) for c in cs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _qtrim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        quo[shift] = factor
        for i, c in enumerate(b):
            rem[i + shift] -= factor * c
        rem.pop()
        _qtrim(rem)
    return _qtrim(quo), rem


def _qmonic(a: list[Fraction]) -> list[Fraction]:
    return [c / a[-1] for c in a] if a else a


def _qgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return _qmonic(a)


def _to_int_poly(a: list[Fraction]) -> IntPolynomial:
    if any(c.denominator != 1 for c in a):
        raise ArithmeticError(f"expected integral coefficients, got {a}")
    return IntPolynomial(int(c) for c in a)


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Monic gcd over the rationals; integral when either input is monic."""
    return _to_int_poly(_qgcd(_q(f), _q(g)))


def squarefree_part(f: IntPolynomial) -> IntPolynomial:
    """``f / gcd(f, f')`` for monic ``f``."""
    if not f.is_monic():
        raise InvalidInputError(f"squarefree_part needs a monic polynomial, got {f}")
    g = _qgcd(_q(f), _q(f.derivative()))
    quo, rem = _qdivmod(_q(f), g)
    assert not rem
    return _to_int_poly(quo)


def exact_divide(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial | None:
    """Quotient ``f / g`` if ``g`` divides ``f`` over the integers, else None."""
    quo, rem = _qdivmod(_q(f), _q(g))
    if rem or any(c.denominator != 1 for c in quo):
        return None
    return IntPolynomial(int(c) for c in quo)


# --- determinants and resultants -------------------------------------------

def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial) -> list[list[int]]:
    m, n = f.degree, g.degree
    size = m + n
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return rows


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) = lead(f)^deg(g) * prod g(root of f), via Bareiss on Sylvester."""
    if f.is_zero() or g.is_zero():
        raise InvalidInputError("resultant of the zero polynomial is undefined")
    return bareiss_det(sylvester_matrix(f, g))


def _interpolate(points: Sequence[int], values: Sequence[int]) -> IntPolynomial:
    """Exact Newton interpolation; the result must have integer coefficients."""
    n = len(points)
    table = [Fraction(v) for v in values]
    coef = [table[0]]
    for level in range(1, n):
        table = [
            (table[i + 1] - table[i]) / (points[i + level] - points[i])
            for i in range(n - level)
        ]
        coef.append(table[0])
    poly = [Fraction(0)]
    for k in range(n - 1, -1, -1):
        # poly = poly * (x - points[k]) + coef[k]
        shifted = [Fraction(0)] + poly
        for i, c in enumerate(poly):
            shifted[i] -= points[k] * c
        shifted[0] += coef[k]
        poly = shifted
    return _to_int_poly(_qtrim(poly))


def _resultant_in_x(f: IntPolynomial, g_at: Callable[[int], IntPolynomial], degree: int) -> IntPolynomial:
    """Polynomial ``x -> Res_y(f(y), g_at(x)(y))`` of known degree, by interpolation."""
    points = list(range(degree + 1))
    values = [resultant(f, g_at(x0)) for x0 in points]
    return _interpolate(points, values)


def _require_monic(f: IntPolynomial, what: str) -> None:
    if f.is_zero():
        raise InvalidInputError(f"{what}: zero polynomial")
    if not f.is_monic():
        raise InvalidInputError(f"{what}: {f} is not monic")


def composed_product(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Monic polynomial whose roots are all products of a root of f and a root of g."""
    _require_monic(f, "composed_product")
    _require_monic(g, "composed_product")
    if f.constant == 0 or g.constant == 0:
        raise InvalidInputError("composed_product needs nonzero constant terms")
    n = g.degree

    def homogenized(x0: int) -> IntPolynomial:
        # y^n g(x0 / y) = sum_k g_k x0^k y^(n-k)
        out = [0] * (n + 1)
        for k, c in enumerate(g.coeffs):
            out[n - k] = c * x0**k
        return IntPolynomial(out)

    return _resultant_in_x(f, homogenized, f.degree * n)


def reciprocal(f: IntPolynomial) -> IntPolynomial:
    """Monic polynomial of the inverse roots of the unit polynomial ``f``."""
    _require_monic(f, "reciprocal")
    if f.constant not in (1, -1):
        raise NotAUnitError(f"{f} has constant term {f.constant}; inverse roots are not integral")
    rev = IntPolynomial(reversed(f.coeffs))
    return rev if rev.leading == 1 else -rev


def power_min_poly(f: IntPolynomial, a: int) -> IntPolynomial:
    """Monic polynomial whose roots are the ``a``-th powers of the roots of f."""
    _require_monic(f, "power_min_poly")
    if a == 0:
        return IntPolynomial([-1, 1]) ** f.degree
    if a < 0:
        return power_min_poly(reciprocal(f), -a)
    if a == 1:
        return f

    def x_minus_y_pow(x0: int) -> IntPolynomial:
        return IntPolynomial([x0] + [0] * (a - 1) + [-1])

    return _resultant_in_x(f, x_minus_y_pow, f.degree)


@functools.lru_cache(maxsize=4096)
def _power_sums_cached(coeffs: tuple[int, ...], count: int) -> tuple[int, ...]:
    d = len(coeffs) - 1
    a = coeffs  # a[d] == 1
    sums = [d]
    for m in range(1, count + 1):
        acc = 0
        for i in range(1, min(m - 1, d) + 1):
            acc += a[d - i] * sums[m - i]
        if m <= d:
            acc += m * a[d - m]
        sums.append(-acc)
    return tuple(sums)


def power_sums(f: IntPolynomial, count: int) -> tuple[int, ...]:
    """Newton power sums ``p_0 .. p_count`` of the roots of monic ``f``."""
    _require_monic(f, "power_sums")
    return _power_sums_cached(f.coeffs, count)


def power_sum(f: IntPolynomial, m: int) -> int:
    """Sum of ``root**m`` over the roots of f; negative m requires a unit."""
    if m < 0:
        return power_sums(reciprocal(f), -m)[-1]
    return power_sums(f, m)[m]


# --- irreducibility ---------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _has_rational_root(f: IntPolynomial) -> bool:
    if f.constant == 0:
        return True
    for d in _divisors(f.constant):
        if f(d) == 0 or f(-d) == 0:
            return True
    return False


def _has_factor_of_degree(f: IntPolynomial, k: int) -> bool:
    """Search monic integer divisors of degree k inside the Mignotte bound."""
    norm = math.isqrt(sum(c * c for c in f.coeffs)) + 1
    bounds = [math.comb(k, j) * norm for j in range(k + 1)]
    for b0 in _divisors(f.constant):
        for s0 in (b0, -b0):
            ranges = [range(-bounds[j], bounds[j] + 1) for j in range(1, k)]
            for middle in itertools.product(*ranges):
                cand = IntPolynomial((s0,) + middle + (1,))
                if exact_divide(f, cand) is not None:
                    return True
    return False


def _gf_poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        if c:
            shift = len(a) - len(m)
            for i, mc in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _gf_poly_mod(out, m, p)


def _gf_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _gf_poly_mod(a, b, p)
    return a


def _irreducible_mod_p(f: IntPolynomial, p: int) -> bool:
    """Ben-Or test: gcd(x^(p^i) - x, f) = 1 for i <= deg/2 over GF(p)."""
    m = [c % p for c in f.coeffs]
    d = f.degree
    xp = [0, 1]
    for _ in range(d // 2):
        # xp <- xp^p mod m
        result, base, e = [1], xp, p
        while e:
            if e & 1:
                result = _gf_mulmod(result, base, m, p)
            base = _gf_mulmod(base, base, m, p)
            e >>= 1
        xp = result
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        while diff and diff[-1] == 0:
            diff.pop()
        if len(_gf_gcd(m, diff, p)) > 1:
            return False
    return True


def irreducibility(f: IntPolynomial) -> str:
    """Return ``"irreducible"``, ``"reducible"`` or ``"probably-irreducible"``.

    Exact up to degree 6 (rational roots plus bounded factor enumeration).
    Above that, irreducibility modulo a small prime is an exact proof; when
    no small prime certifies it the answer is only ``"probably-irreducible"``.
    """
    _require_monic(f, "is_irreducible")
    d = f.degree
    if d < 1:
        raise InvalidInputError("irreducibility is undefined for constants")
    if d == 1:
        return "irreducible"
    if _has_rational_root(f):
        return "reducible"
    if d <= IRREDUCIBILITY_EXACT_DEGREE:
        for k in range(2, d // 2 + 1):
            if _has_factor_of_degree(f, k):
                return "reducible"
        return "irreducible"
    if squarefree_part(f) != f:
        return "reducible"
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29):
        if _irreducible_mod_p(f, p):
            return "irreducible"
    return "probably-irreducible"


def is_irreducible(f: IntPolynomial) -> bool:
    return irreducibility(f) != "reducible"


# --- unit circle certification ---------------------------------------------

class CircleMethod(str, enum.Enum):
    NON_PALINDROMIC_GCD = "non_palindromic_gcd"
    STURM_ON_CHEBYSHEV_TRANSFORM = "sturm_on_chebyshev_transform"
    ROOT_AT_PLUS_MINUS_ONE = "root_at_plus_minus_one"
    NUMERIC_ONLY = "numeric_only"


@dataclass(frozen=True)
class CirclenessVerdict:
    has_root_on_circle: bool
    method: CircleMethod
    numeric_margin: float

    @property
    def exact(self) -> bool:
        return self.method is not CircleMethod.NUMERIC_ONLY


def chebyshev_transform(h: IntPolynomial) -> IntPolynomial:
    """For palindromic ``h`` of degree 2k, the T with ``h(x) = x^k T(x + 1/x)``."""
    cs = h.coeffs
    if cs != tuple(reversed(cs)) or h.degree % 2:
        raise InvalidInputError(f"{h} is not an even-degree palindromic polynomial")
    k = h.degree // 2
    # x^j + x^-j as a polynomial in y = x + 1/x: D0 = 2, D1 = y, D(j+1) = y Dj - D(j-1)
    dickson = [IntPolynomial([2]), IntPolynomial([0, 1])]
    while len(dickson) <= k:
        dickson.append(IntPolynomial([0, 1]) * dickson[-1] - dickson[-2])
    out = IntPolynomial([cs[k]])
    for j in range(1, k + 1):
        out = out + IntPolynomial([cs[k + j]]) * dickson[j]
    return out


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    chain = [p, _q([i * c for i, c in enumerate(p)][1:])]
    while chain[-1] and len(chain[-1]) > 1:
        rem = _qdivmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _sign_changes(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = Fraction(0)
        for c in reversed(poly):
            v = v * x + c
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: IntPolynomial, lo: Fraction | int, hi: Fraction | int) -> int:
    """Number of distinct real roots of ``f`` in the closed interval [lo, hi]."""
    if f.is_zero():
        raise InvalidInputError("sturm_count of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    p = _q(f)
    sq, _ = _qdivmod(p, _qgcd(p, _q(f.derivative()))) if f.degree > 0 else (p, None)
    if len(sq) <= 1:
        return 0
    chain = _sturm_chain(sq)
    count = _sign_changes(chain, lo) - _sign_changes(chain, hi)
    at_lo = sum(c * lo**i for i, c in enumerate(sq)) == 0
    return count + (1 if at_lo else 0)


def _numeric_margin(f: IntPolynomial) -> float:
    from .roots import complex_roots

    if f.degree < 1:
        return math.inf
    return min(abs(abs(complex(z)) - 1.0) for z, _ in complex_roots(f))


def unit_circle_verdict(f: IntPolynomial, *, with_margin: bool = True) -> CirclenessVerdict:
    """Exact decision whether a monic integer polynomial has a root of modulus 1."""
    if f.is_zero() or not f.is_monic():
        raise InvalidInputError(f"unit_circle_verdict needs a monic polynomial, got {f}")
    sq = squarefree_part(f)
    if sq.degree < 1:
        return CirclenessVerdict(False, CircleMethod.NON_PALINDROMIC_GCD, math.inf)
    if sq(1) == 0 or sq(-1) == 0:
        return CirclenessVerdict(True, CircleMethod.ROOT_AT_PLUS_MINUS_ONE, 0.0)
    # roots on the circle are closed under z -> 1/conj(z) = 1/z, so they divide gcd(f, rev f)
    rev = _qmonic(_q(list(reversed(sq.coeffs))))
    common = _to_int_poly(_qgcd(_q(sq), rev))
    margin = _numeric_margin(sq) if with_margin else math.nan
    if common.degree < 1:
        return CirclenessVerdict(False, CircleMethod.NON_PALINDROMIC_GCD, margin)
    transform = chebyshev_transform(common)
    hits = sturm_count(transform, -2, 2)
    if hits:
        return CirclenessVerdict(True, CircleMethod.STURM_ON_CHEBYSHEV_TRANSFORM, 0.0)
    return CirclenessVerdict(False, CircleMethod.STURM_ON_CHEBYSHEV_TRANSFORM, margin)
