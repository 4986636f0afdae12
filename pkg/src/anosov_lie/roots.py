"""Simultaneous (Aberth) root finding with certified inclusion radii."""

from __future__ import annotations

import math
import os

import mpmath

from .errors import InvalidInputError, PrecisionError
from .poly import IntPolynomial, squarefree_part

__all__ = ["complex_roots", "default_target_error"]

DEFAULT_TARGET_ERROR = 1e-12
ANGLE_OFFSET = 0.4
MAX_ITERATIONS = 2000


def default_target_error() -> float:
    """Default root precision, overridable with ``ANOSOV_PRECISION``."""
    raw = os.environ.get("ANOSOV_PRECISION")
    if raw:
        value = float(raw)
        if not (0 < value < 1):
            raise InvalidInputError(f"ANOSOV_PRECISION must be in (0, 1), got {raw!r}")
        return value
    return DEFAULT_TARGET_ERROR


def complex_roots(f: IntPolynomial, target_error: float | None = None) -> list[tuple[mpmath.mpc, mpmath.mpf]]:
    """Approximate every distinct root of ``f`` with a certified error radius.

    Returns ``(approximation, radius)`` pairs sorted by decreasing real part
    (then decreasing imaginary part).  The disk of the given radius around
    each approximation contains exactly one root: radii come from the
    Weierstrass correction ``n |f(z_i)| / prod_{j != i} |z_i - z_j|`` and
    the disks are checked to be pairwise disjoint.
    """
    if target_error is None:
        target_error = default_target_error()
    if not (target_error > 0):
        raise InvalidInputError("target_error must be positive")
    if f.is_zero() or not f.is_monic():
        raise InvalidInputError(f"complex_roots needs a monic polynomial, got {f}")
    f = squarefree_part(f)
    n = f.degree
    if n < 1:
        return []
    if n == 1:
        return [(mpmath.mpc(-f.constant), mpmath.mpf(0))]

    digits = max(30, int(-math.log10(target_error)) + 20 + len(str(max(abs(c) for c in f.coeffs))))
    with mpmath.workdps(digits):
        roots = _aberth(f, n, digits)
        radii = _inclusion_radii(f, roots)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(roots[i] - roots[j]) <= radii[i] + radii[j]:
                    raise PrecisionError(f"root disks of {f} overlap; cannot separate roots")
        worst = max(radii)
        if worst > target_error:
            raise PrecisionError(f"roots of {f} reached radius {float(worst):.3g} > {target_error:.3g}")
        pairs = sorted(zip(roots, radii), key=lambda p: (-_key(p[0].real), -_key(p[0].imag)))
        return [(+z, +r) for z, r in pairs]


def _key(x) -> float:
    # round away float noise so conjugate pairs and ties order deterministically
    return round(float(x), 9)


def _aberth(f: IntPolynomial, n: int, digits: int) -> list[mpmath.mpc]:
    coeffs = [mpmath.mpf(c) for c in f.coeffs]
    dcoeffs = [mpmath.mpf(i * c) for i, c in enumerate(f.coeffs)][1:]
    radius = 1 + max(abs(c) for c in f.coeffs[:-1])
    z = [
        mpmath.mpc(radius) * mpmath.expj(2 * mpmath.pi * k / n + ANGLE_OFFSET)
        for k in range(n)
    ]
    tol = mpmath.mpf(10) ** (-(digits - 5))
    for _ in range(MAX_ITERATIONS):
        biggest = mpmath.mpf(0)
        new = []
        for i, zi in enumerate(z):
            fz = mpmath.polyval(coeffs[::-1], zi)
            dfz = mpmath.polyval(dcoeffs[::-1], zi)
            if fz == 0:
                new.append(zi)
                continue
            ratio = fz / dfz if dfz != 0 else mpmath.mpc(tol)
            repel = mpmath.fsum(1 / (zi - zj) for j, zj in enumerate(z) if j != i)
            step = ratio / (1 - ratio * repel)
            new.append(zi - step)
            biggest = max(biggest, abs(step) / max(1, abs(zi)))
        z = new
        if biggest < tol:
            return z
    raise PrecisionError(f"Aberth iteration for {f} did not converge in {MAX_ITERATIONS} steps")


def _inclusion_radii(f: IntPolynomial, roots: list[mpmath.mpc]) -> list[mpmath.mpf]:
    coeffs = [mpmath.mpf(c) for c in reversed(f.coeffs)]
    abs_coeffs = [abs(c) for c in coeffs]
    n = len(roots)
    # Horner rounding error is below 2 n eps sum |a_k| |z|^k; pad |f(z)| by it
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
    radii = []
    for i, zi in enumerate(roots):
        denom = mpmath.mpf(1)
        for j, zj in enumerate(roots):
            if j != i:
                denom *= abs(zi - zj)
        slack = 2 * (n + 1) * eps * mpmath.polyval(abs_coeffs, abs(zi))
        radii.append(n * (abs(mpmath.polyval(coeffs, zi)) + slack) / denom)
    return radii
