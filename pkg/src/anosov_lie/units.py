"""Algebraic units and the hyperbolicity conditions tying them together."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath

from .errors import InvalidInputError, NotAUnitError, NotHyperbolicError, NotIrreducibleError
from .poly import (
    CirclenessVerdict,
    IntPolynomial,
    composed_product,
    irreducibility,
    power_min_poly,
    unit_circle_verdict,
)
from .roots import complex_roots

__all__ = [
    "AlgebraicUnit",
    "SpectrumWord",
    "HyperbolicSystem",
    "make_unit",
    "word_poly",
    "validate_system",
    "search_units",
    "MAX_SEARCH_DEGREE",
]

MAX_SEARCH_DEGREE = 6

# exponent vector, one entry per unit: (1, 1, 0) stands for the products lambda_i * mu_j
SpectrumWord = tuple[int, ...]


@dataclass(frozen=True)
class AlgebraicUnit:
    min_poly: IntPolynomial
    conjugates: tuple[tuple[mpmath.mpc, mpmath.mpf], ...]
    circle_margin: float
    irreducibility: str = "irreducible"

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    def roots(self) -> list[mpmath.mpc]:
        return [z for z, _ in self.conjugates]

    def __str__(self) -> str:
        return str(self.min_poly)


def make_unit(f: IntPolynomial | str, target_error: float | None = None) -> AlgebraicUnit:
    """Validate ``f`` as the minimal polynomial of a hyperbolic algebraic unit."""
    if isinstance(f, str):
        f = IntPolynomial.parse(f)
    if f.is_zero() or f.degree < 1:
        raise InvalidInputError(f"{f} is constant")
    if not f.is_monic() or f.constant not in (1, -1):
        raise NotAUnitError(f"{f} is not a unit polynomial (monic with constant term +-1)")
    status = irreducibility(f)
    if status == "reducible":
        raise NotIrreducibleError(f"{f} is reducible over the rationals")
    verdict = unit_circle_verdict(f)
    if verdict.has_root_on_circle:
        raise NotHyperbolicError(f"{f} has a root on the unit circle ({verdict.method.value})")
    conjugates = tuple(complex_roots(f, target_error))
    return AlgebraicUnit(f, conjugates, verdict.numeric_margin, status)


def word_poly(units: Sequence[AlgebraicUnit | IntPolynomial], word: SpectrumWord) -> IntPolynomial:
    """Monic polynomial whose roots are the products selected by ``word``."""
    if len(word) != len(units):
        raise InvalidInputError(f"word {word} has length {len(word)}, expected {len(units)}")
    if not any(word):
        raise InvalidInputError("the zero word has no spectrum")
    out = None
    for unit, e in zip(units, word):
        if e == 0:
            continue
        poly = unit.min_poly if isinstance(unit, AlgebraicUnit) else unit
        piece = power_min_poly(poly, e)
        out = piece if out is None else composed_product(out, piece)
    return out


@dataclass(frozen=True)
class HyperbolicSystem:
    units: tuple[AlgebraicUnit, ...]
    words: tuple[SpectrumWord, ...]
    word_polys: tuple[IntPolynomial, ...]
    verdicts: tuple[CirclenessVerdict, ...]
    min_margin: float

    def table(self) -> list[tuple[SpectrumWord, IntPolynomial, CirclenessVerdict]]:
        return list(zip(self.words, self.word_polys, self.verdicts))


def validate_system(units: Sequence[AlgebraicUnit], words: Iterable[Sequence[int]]) -> HyperbolicSystem:
    """Certify that every word's product set avoids the unit circle."""
    units = tuple(units)
    words = tuple(tuple(int(e) for e in w) for w in words)
    polys, verdicts = [], []
    for w in words:
        poly = word_poly(units, w)
        verdict = unit_circle_verdict(poly)
        if verdict.has_root_on_circle:
            raise NotHyperbolicError(
                f"word {w} over units ({', '.join(map(str, units))}) has a product on the unit circle"
            )
        polys.append(poly)
        verdicts.append(verdict)
    margins = [u.circle_margin for u in units] + [v.numeric_margin for v in verdicts]
    return HyperbolicSystem(units, words, tuple(polys), tuple(verdicts), min(margins, default=math.inf))


def search_units(
    degree: int,
    coeff_bound: int,
    pair_constraints: Sequence[tuple[AlgebraicUnit, Iterable[Sequence[int]]]] | None = None,
) -> list[AlgebraicUnit]:
    """Enumerate hyperbolic units of a given degree with bounded coefficients.

    Candidates are ``x^d + a_{d-1} x^{d-1} + ... + a_0`` with ``a_0 = +-1``
    and the other coefficients in ``[-coeff_bound, coeff_bound]``; they are
    visited in lexicographic order of ``(a_0, a_1, ..., a_{d-1})``.  Each
    constraint ``(partner, words)`` additionally requires
    ``validate_system([partner, candidate], words)`` to succeed.
    """
    if degree < 1 or degree > MAX_SEARCH_DEGREE:
        raise InvalidInputError(f"search degree must be in 1..{MAX_SEARCH_DEGREE}, got {degree}")
    if coeff_bound < 1:
        raise InvalidInputError("coeff_bound must be positive")
    span = range(-coeff_bound, coeff_bound + 1)
    found = []
    for a0 in (-1, 1):
        for middle in itertools.product(span, repeat=degree - 1):
            f = IntPolynomial((a0,) + middle + (1,))
            if irreducibility(f) == "reducible":
                continue
            if unit_circle_verdict(f, with_margin=False).has_root_on_circle:
                continue
            unit = make_unit(f)
            try:
                for partner, words in pair_constraints or ():
                    validate_system([partner, unit], words)
            except NotHyperbolicError:
                continue
            found.append(unit)
    return found
