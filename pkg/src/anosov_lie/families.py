"""Builders for the Anosov Lie algebra families.

Each builder validates its units, writes the integer-basis structure
constants (closed form from power sums, or realize-then-round from numeric
conjugates), assembles the integer automorphism from companion matrices and
Kronecker products, and only returns once :func:`verify_certificate` passes.

Multi-index blocks are flattened with the first unit's exponent varying
fastest, so the automorphism on e.g. the ``X(k, l)`` block of ``type-pq``
is ``kron(C_g, C_f)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from . import linalg
from .certificate import AnosovCertificate, IntegerAutomorphism, verify_certificate
from .errors import ConstructionError, InvalidInputError, PrecisionError
from .lie import BasisLabel, NilpotentLieAlgebra, StructureConstants, jacobi_defect, type_of, verify_automorphism
from .poly import IntPolynomial, composed_product, power_min_poly, power_sum, reciprocal
from .roots import complex_roots, default_target_error
from .units import AlgebraicUnit, HyperbolicSystem, SpectrumWord, make_unit, validate_system

__all__ = [
    "FAMILIES",
    "companion_matrix",
    "power_coordinates",
    "Design",
    "RealizedBasis",
    "realize_integer_basis",
    "build_type_pq",
    "type_pq_design_algebra",
    "build_bipartite",
    "build_three_unit_2step",
    "build_three_unit_3step",
    "build_p2_family",
    "build_13dim",
    "build_16dim",
    "build_family",
    "expected_type",
]

ROUNDING_THRESHOLD = 0.25
PRECISION_RETRIES = 3
PRECISION_ESCALATION = 1e-6


def companion_matrix(f: IntPolynomial) -> list[list[int]]:
    """Sub-diagonal ones, last column the negated low coefficients; charpoly is f."""
    if not f.is_monic() or f.degree < 1:
        raise InvalidInputError(f"companion matrix needs a monic nonconstant polynomial, got {f}")
    d = f.degree
    m = [[0] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = 1
    for i in range(d):
        m[i][d - 1] = -f.coeffs[i]
    return m


def power_coordinates(g: IntPolynomial, m: int) -> list[int]:
    """Integer coordinates of ``x^m`` modulo g in the basis ``1, x, ..., x^(q-1)``."""
    c = companion_matrix(g)
    if m < 0:
        # multiplication by x^-1 on the same basis
        c = _integer_inverse(c)
        m = -m
    v = [1] + [0] * (g.degree - 1)
    for _ in range(m):
        v = [sum(row[j] * v[j] for j in range(len(v))) for row in c]
    return v


def _integer_inverse(m: list[list[int]]) -> list[list[int]]:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red = linalg.row_reduce(aug)
    inv = [row[n:] for row in red]
    if any(x.denominator != 1 for row in inv for x in row):
        raise InvalidInputError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


# --- realize-then-round -------------------------------------------------------

@dataclass
class Design:
    """A Lie algebra over numeric conjugates plus a candidate integer basis.

    ``brackets`` maps design index pairs ``(i, j)`` with ``i < j`` to sparse
    coefficient maps; ``basis[n]`` gives the n-th integer-basis vector in
    design coordinates; ``eigenvalues`` is the diagonal automorphism.
    """

    dim: int
    brackets: dict[tuple[int, int], dict[int, mpmath.mpc]]
    basis: list[dict[int, mpmath.mpc]]
    eigenvalues: list[mpmath.mpc]


@dataclass
class RealizedBasis:
    constants: StructureConstants
    automorphism: list[list[int]]
    max_residual: float
    target_error: float
    attempts: int = 1


def _design_bracket(design: Design, x: dict[int, mpmath.mpc], y: dict[int, mpmath.mpc]) -> dict[int, mpmath.mpc]:
    out: dict[int, mpmath.mpc] = {}
    for i, a in x.items():
        for j, b in y.items():
            if i < j:
                row, sign = design.brackets.get((i, j)), 1
            elif j < i:
                row, sign = design.brackets.get((j, i)), -1
            else:
                continue
            if row:
                for k, c in row.items():
                    out[k] = out.get(k, 0) + sign * a * b * c
    return out


def _round_coordinates(binv, vec: dict[int, mpmath.mpc], dim: int) -> tuple[list[int], float]:
    coords, worst = [], 0.0
    for k in range(dim):
        c = mpmath.fsum(binv[k, r] * v for r, v in vec.items())
        n = int(mpmath.nint(mpmath.re(c)))
        worst = max(worst, float(abs(c - n)))
        coords.append(n)
    return coords, worst


def _realize_once(design: Design) -> tuple[StructureConstants, list[list[int]], float]:
    n = design.dim
    b = mpmath.matrix(n, n)
    for col, vec in enumerate(design.basis):
        for row, val in vec.items():
            b[row, col] = val
    binv = b**-1
    worst = 0.0
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            vec = _design_bracket(design, design.basis[i], design.basis[j])
            if not vec:
                continue
            coords, res = _round_coordinates(binv, vec, n)
            worst = max(worst, res)
            for k, c in enumerate(coords):
                if c:
                    entries[(i, j, k)] = c
    matrix_cols = []
    for col, vec in enumerate(design.basis):
        image = {r: design.eigenvalues[r] * v for r, v in vec.items()}
        coords, res = _round_coordinates(binv, image, n)
        worst = max(worst, res)
        matrix_cols.append(coords)
    matrix = [[matrix_cols[c][r] for c in range(n)] for r in range(n)]
    return StructureConstants(n, entries), matrix, worst


def realize_integer_basis(
    make_design: Callable[[float], Design],
    *,
    target_error: float | None = None,
    automorphism: Sequence[Sequence[int]] | None = None,
    threshold: float = ROUNDING_THRESHOLD,
    retries: int = PRECISION_RETRIES,
) -> RealizedBasis:
    """Compute integer-basis structure constants numerically, round, then check exactly.

    ``make_design(err)`` must return the design with conjugates accurate to
    ``err``.  When any rounded coordinate is more than ``threshold`` away
    from an integer the precision is tightened by 10^-6 and the design is
    rebuilt, at most ``retries`` times.  Accepted constants must satisfy
    Jacobi exactly and, if given, be preserved by ``automorphism``.
    """
    err = default_target_error() if target_error is None else target_error
    worst = math.inf
    for attempt in range(retries + 1):
        with mpmath.workdps(max(30, int(-math.log10(err)) + 20)):
            constants, matrix, worst = _realize_once(make_design(err))
        if worst <= threshold:
            break
        err *= PRECISION_ESCALATION
    else:
        raise PrecisionError(
            f"realize-then-round residual {worst:.3g} above {threshold} after {retries} precision escalations"
        )
    if jacobi_defect(constants) != 0:
        raise ConstructionError("rounded structure constants violate the Jacobi identity")
    alg = NilpotentLieAlgebra(constants, (), (1,) * constants.dim)
    if not verify_automorphism(alg, matrix):
        raise ConstructionError("realized automorphism does not preserve the rounded brackets")
    if automorphism is not None and not verify_automorphism(alg, automorphism):
        raise ConstructionError("assembled automorphism does not preserve the rounded brackets")
    return RealizedBasis(constants, matrix, worst, err, attempt + 1)


# --- shared helpers -----------------------------------------------------------

def _as_unit(f: IntPolynomial | str | AlgebraicUnit, target_error: float | None) -> AlgebraicUnit:
    if isinstance(f, AlgebraicUnit):
        return f
    if isinstance(f, str):
        f = IntPolynomial.parse(f)
    return make_unit(f, target_error)


def _ordered_words(*groups: Sequence[SpectrumWord]) -> list[SpectrumWord]:
    out: list[SpectrumWord] = []
    for group in groups:
        for w in group:
            w = tuple(w)
            if w not in out:
                out.append(w)
    return out


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.10g}"


def _roots(unit: AlgebraicUnit, err: float) -> list[mpmath.mpc]:
    return [z for z, _ in complex_roots(unit.min_poly, err)]


def _finish(
    family: str,
    params: dict,
    units: Sequence[AlgebraicUnit],
    system: HyperbolicSystem,
    spectrum: Sequence[SpectrumWord],
    constants: StructureConstants,
    labels: Sequence[BasisLabel],
    layers: Sequence[int],
    matrix: list[list[int]],
    factors: Sequence[IntPolynomial],
    extra_margins: dict[str, str] | None = None,
) -> AnosovCertificate:
    alg = NilpotentLieAlgebra(constants, tuple(labels), tuple(layers))
    margins = {"min_margin": _fmt(system.min_margin)}
    for i, u in enumerate(units):
        margins[f"unit{i}"] = _fmt(u.circle_margin)
    margins.update(extra_margins or {})
    cert = AnosovCertificate(
        algebra=alg,
        automorphism=IntegerAutomorphism(matrix, factors),
        family=family,
        params=params,
        unit_polys=tuple(u.min_poly for u in units),
        spectrum_words=tuple(tuple(w) for w in spectrum),
        margins=margins,
        system=system,
    )
    cert.recorded_type = type_of(alg)
    report = verify_certificate(cert)
    if not report.passed:
        raise ConstructionError(
            f"{family} certificate failed verification: " + "; ".join(map(str, report.findings))
        )
    return cert


def _pick_constants(closed: StructureConstants, design_fn, matrix, method: str, target_error) -> tuple[StructureConstants, dict]:
    if method == "closed-form":
        return closed, {}
    if method not in ("realize", "both"):
        raise InvalidInputError(f"unknown method {method!r}; use closed-form, realize or both")
    realized = realize_integer_basis(design_fn, target_error=target_error, automorphism=matrix)
    extra = {"realize_residual": _fmt(realized.max_residual)}
    if realized.automorphism != matrix:
        raise ConstructionError("realized automorphism differs from the assembled companion blocks")
    if method == "both" and realized.constants != closed:
        raise ConstructionError("closed-form and realize-then-round structure constants disagree")
    return realized.constants, extra


# --- type (p, q) --------------------------------------------------------------

def build_type_pq(f, g, *, method: str = "closed-form", target_error: float | None = None) -> AnosovCertificate:
    """Two-step algebra ``[X(i,j), Y_j] = Z_i`` of type ``(pq + q, p)``.

    Eigenvalues: ``lambda_i mu_j`` on X, ``mu_j^-1`` on Y, ``lambda_i`` on Z,
    where lambda runs over the roots of f (degree p) and mu over g (degree q).
    In the integer basis ``[X(k,l), Y_r] = p_{l-r}(g) Z_k`` with ``p_m`` the
    m-th power sum of the roots of g.
    """
    uf, ug = _as_unit(f, target_error), _as_unit(g, target_error)
    p, q = uf.degree, ug.degree
    spectrum = [(1, 1), (0, -1), (1, 0)]
    system = validate_system([uf, ug], _ordered_words([(1, 0), (0, 1), (1, 1)], spectrum))
    nx = p * q
    labels = [BasisLabel("X", (k, l)) for l in range(q) for k in range(p)]
    labels += [BasisLabel("Y", (r,)) for r in range(q)]
    labels += [BasisLabel("Z", (s,)) for s in range(p)]
    layers = [1] * (nx + q) + [2] * p
    entries = {}
    for l in range(q):
        for k in range(p):
            for r in range(q):
                c = power_sum(ug.min_poly, l - r)
                if c:
                    entries[(k + p * l, nx + r, nx + q + k)] = c
    closed = StructureConstants(nx + q + p, entries)
    cf, cg = companion_matrix(uf.min_poly), companion_matrix(ug.min_poly)
    matrix = linalg.block_diag(linalg.kron(cg, cf), companion_matrix(reciprocal(ug.min_poly)), cf)
    factors = [composed_product(uf.min_poly, ug.min_poly), reciprocal(ug.min_poly), uf.min_poly]

    def design(err: float) -> Design:
        lam, mu = _roots(uf, err), _roots(ug, err)
        n = nx + q + p
        brackets = {(i + p * j, nx + j): {nx + q + i: mpmath.mpc(1)} for i in range(p) for j in range(q)}
        basis = [{i + p * j: lam[i] ** k * mu[j] ** l for j in range(q) for i in range(p)} for l in range(q) for k in range(p)]
        basis += [{nx + j: mu[j] ** -r for j in range(q)} for r in range(q)]
        basis += [{nx + q + i: lam[i] ** s for i in range(p)} for s in range(p)]
        eig = [lam[i] * mu[j] for j in range(q) for i in range(p)] + [1 / m for m in mu] + list(lam)
        return Design(n, brackets, basis, eig)

    constants, extra = _pick_constants(closed, design, matrix, method, target_error)
    return _finish("type-pq", {"p": p, "q": q}, [uf, ug], system, spectrum, constants, labels, layers, matrix, factors, extra)


def type_pq_design_algebra(p: int, q: int) -> NilpotentLieAlgebra:
    """The rational algebra ``[X(i,j), Y_j] = Z_i`` before any change of basis."""
    nx = p * q
    entries = {(i + p * j, nx + j, nx + q + i): 1 for i in range(p) for j in range(q)}
    labels = [BasisLabel("X", (i, j)) for j in range(q) for i in range(p)]
    labels += [BasisLabel("Y", (j,)) for j in range(q)] + [BasisLabel("Z", (i,)) for i in range(p)]
    return NilpotentLieAlgebra(StructureConstants(nx + q + p, entries), tuple(labels), (1,) * (nx + q) + (2,) * p)


# --- bipartite ----------------------------------------------------------------

def _bipartite_block(p: int, q: int, copies: int) -> tuple[dict, list[BasisLabel], list[int]]:
    """Vertex spaces (one per copy) sharing one edge space W of dim pq."""
    labels: list[BasisLabel] = []
    for c in range(copies):
        tag = None if copies == 1 else c + 1
        labels += [BasisLabel("X", (k,), tag) for k in range(p)]
        labels += [BasisLabel("Y", (l,), tag) for l in range(q)]
    w0 = copies * (p + q)
    labels += [BasisLabel("W", (k, l)) for l in range(q) for k in range(p)]
    entries = {}
    for c in range(copies):
        off = c * (p + q)
        for k in range(p):
            for l in range(q):
                entries[(off + k, off + p + l, w0 + k + p * l)] = 1
    layers = [1] * w0 + [2] * (p * q)
    return entries, labels, layers


def build_bipartite(f, g, *, target_error: float | None = None) -> AnosovCertificate:
    """Complete-bipartite two-step algebra ``[X_k, Y_l] = W(k,l)`` of type ``(p + q, pq)``."""
    uf, ug = _as_unit(f, target_error), _as_unit(g, target_error)
    p, q = uf.degree, ug.degree
    spectrum = [(1, 0), (0, 1), (1, 1)]
    system = validate_system([uf, ug], spectrum)
    entries, labels, layers = _bipartite_block(p, q, 1)
    cf, cg = companion_matrix(uf.min_poly), companion_matrix(ug.min_poly)
    matrix = linalg.block_diag(cf, cg, linalg.kron(cg, cf))
    factors = [uf.min_poly, ug.min_poly, composed_product(uf.min_poly, ug.min_poly)]
    constants = StructureConstants(len(labels), entries)
    return _finish("bipartite", {"p": p, "q": q}, [uf, ug], system, spectrum, constants, labels, layers, matrix, factors)


def build_16dim(f, g, *, target_error: float | None = None) -> AnosovCertificate:
    """Two copies of the K(2,3) vertex space sharing one edge space: dim 16, type (10, 6)."""
    uf, ug = _as_unit(f, target_error), _as_unit(g, target_error)
    if uf.degree != 2 or uf.min_poly.constant != 1 or ug.degree != 3:
        raise InvalidInputError("dim16 needs a quadratic unit with constant term +1 and a cubic unit")
    p, q = 2, 3
    spectrum = [(1, 0), (0, 1), (1, 1)]
    system = validate_system([uf, ug], spectrum)
    entries, labels, layers = _bipartite_block(p, q, 2)
    cf, cg = companion_matrix(uf.min_poly), companion_matrix(ug.min_poly)
    matrix = linalg.block_diag(cf, cg, cf, cg, linalg.kron(cg, cf))
    fg = composed_product(uf.min_poly, ug.min_poly)
    factors = [uf.min_poly, ug.min_poly, uf.min_poly, ug.min_poly, fg]
    constants = StructureConstants(len(labels), entries)
    return _finish("dim16", {"p": p, "q": q}, [uf, ug], system, spectrum, constants, labels, layers, matrix, factors)


# --- three units --------------------------------------------------------------

def _three_unit(f, g, h, steps: int, method: str, target_error) -> AnosovCertificate:
    uf, ug, uh = (_as_unit(x, target_error) for x in (f, g, h))
    p, q, r = uf.degree, ug.degree, uh.degree
    spectrum = [(1, 1, 1), (0, -1, 0), (0, 0, -1), (1, 0, 1), (1, 1, 0)]
    hypotheses = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    if steps == 3:
        spectrum.append((1, 0, 0))
    system = validate_system([uf, ug, uh], _ordered_words(hypotheses, spectrum))
    F, G, H = uf.min_poly, ug.min_poly, uh.min_poly

    nx = p * q * r
    y0 = nx
    z0 = y0 + q
    v0 = z0 + r
    w0 = v0 + p * r
    u0 = w0 + p * q
    n = u0 + (p if steps == 3 else 0)

    def xi(m, l, s):
        return m + p * l + p * q * s

    labels = [BasisLabel("X", (m, l, s)) for s in range(r) for l in range(q) for m in range(p)]
    labels += [BasisLabel("Y", (l,)) for l in range(q)]
    labels += [BasisLabel("Z", (s,)) for s in range(r)]
    labels += [BasisLabel("V", (m, s)) for s in range(r) for m in range(p)]
    labels += [BasisLabel("W", (m, l)) for l in range(q) for m in range(p)]
    layers = [1] * (nx + q + r) + [2] * (p * r + p * q)
    if steps == 3:
        labels += [BasisLabel("U", (i,)) for i in range(p)]
        layers += [3] * p

    entries = {}
    for s in range(r):
        for l in range(q):
            for m in range(p):
                for t in range(q):
                    c = power_sum(G, l - t)
                    if c:
                        entries[(xi(m, l, s), y0 + t, v0 + m + p * s)] = c
                for t in range(r):
                    c = power_sum(H, s - t)
                    if c:
                        entries[(xi(m, l, s), z0 + t, w0 + m + p * l)] = c
    if steps == 3:
        for m in range(p):
            for s in range(r):
                for t in range(r):
                    c = power_sum(H, s - t)
                    if c:
                        entries[(z0 + t, v0 + m + p * s, u0 + m)] = c
            for l in range(q):
                for t in range(q):
                    c = power_sum(G, l - t)
                    if c:
                        entries[(y0 + t, w0 + m + p * l, u0 + m)] = c
    closed = StructureConstants(n, entries)

    cf, cg, ch = companion_matrix(F), companion_matrix(G), companion_matrix(H)
    blocks = [
        linalg.kron(ch, linalg.kron(cg, cf)),
        companion_matrix(reciprocal(G)),
        companion_matrix(reciprocal(H)),
        linalg.kron(ch, cf),
        linalg.kron(cg, cf),
    ]
    factors = [
        composed_product(composed_product(F, G), H),
        reciprocal(G),
        reciprocal(H),
        composed_product(F, H),
        composed_product(F, G),
    ]
    if steps == 3:
        blocks.append(cf)
        factors.append(F)
    matrix = linalg.block_diag(*blocks)

    def design(err: float) -> Design:
        lam, mu, nu = _roots(uf, err), _roots(ug, err), _roots(uh, err)
        one = mpmath.mpc(1)
        brackets: dict[tuple[int, int], dict[int, mpmath.mpc]] = {}
        for i in range(p):
            for j in range(q):
                for k in range(r):
                    brackets[(xi(i, j, k), y0 + j)] = {v0 + i + p * k: one}
                    brackets[(xi(i, j, k), z0 + k)] = {w0 + i + p * j: one}
        if steps == 3:
            for i in range(p):
                for k in range(r):
                    brackets[(z0 + k, v0 + i + p * k)] = {u0 + i: one}
                for j in range(q):
                    brackets[(y0 + j, w0 + i + p * j)] = {u0 + i: one}
        basis = [
            {xi(i, j, k): lam[i] ** m * mu[j] ** l * nu[k] ** s for k in range(r) for j in range(q) for i in range(p)}
            for s in range(r) for l in range(q) for m in range(p)
        ]
        basis += [{y0 + j: mu[j] ** -l for j in range(q)} for l in range(q)]
        basis += [{z0 + k: nu[k] ** -s for k in range(r)} for s in range(r)]
        basis += [{v0 + i + p * k: lam[i] ** m * nu[k] ** s for k in range(r) for i in range(p)} for s in range(r) for m in range(p)]
        basis += [{w0 + i + p * j: lam[i] ** m * mu[j] ** l for j in range(q) for i in range(p)} for l in range(q) for m in range(p)]
        eig = [lam[i] * mu[j] * nu[k] for k in range(r) for j in range(q) for i in range(p)]
        eig += [1 / x for x in mu] + [1 / x for x in nu]
        eig += [lam[i] * nu[k] for k in range(r) for i in range(p)]
        eig += [lam[i] * mu[j] for j in range(q) for i in range(p)]
        if steps == 3:
            basis += [{u0 + i: lam[i] ** m for i in range(p)} for m in range(p)]
            eig += list(lam)
        return Design(n, brackets, basis, eig)

    constants, extra = _pick_constants(closed, design, matrix, method, target_error)
    family = "three-unit-2step" if steps == 2 else "three-unit-3step"
    return _finish(
        family, {"p": p, "q": q, "r": r}, [uf, ug, uh], system, spectrum, constants, labels, layers, matrix, factors, extra
    )


def build_three_unit_2step(f, g, h, *, method: str = "closed-form", target_error: float | None = None) -> AnosovCertificate:
    """Merged two-step algebra of type ``(pqr + q + r, pr + pq)``.

    ``[X(i,j,k), Y_j] = V(i,k)`` and ``[X(i,j,k), Z_k] = W(i,j)``, with
    eigenvalues ``lambda mu nu`` on X, ``mu^-1`` on Y, ``nu^-1`` on Z,
    ``lambda nu`` on V and ``lambda mu`` on W.
    """
    return _three_unit(f, g, h, 2, method, target_error)


def build_three_unit_3step(f, g, h, *, method: str = "closed-form", target_error: float | None = None) -> AnosovCertificate:
    """Three-step extension adding ``[Z_k, V(i,k)] = [Y_j, W(i,j)] = U_i`` (type ``(pqr+q+r, pr+pq, p)``)."""
    return _three_unit(f, g, h, 3, method, target_error)


# --- p = 2 family -------------------------------------------------------------

def _check_reciprocal_quadratic(unit: AlgebraicUnit, family: str) -> int:
    f = unit.min_poly
    if f.degree != 2 or f.constant != 1:
        raise InvalidInputError(f"{family} needs a quadratic unit x^2+ax+1 first, got {f}")
    a = f.coeffs[1]
    if abs(a) < 3:
        raise InvalidInputError(f"{family} needs |a| >= 3 in x^2+ax+1, got a = {a}")
    return a


def _xpair_basis(lam, mu, q: int) -> list[dict[int, mpmath.mpc]]:
    """``X_(i + q s) = sum_k mu_k^i (lam^s X_k + lam^-s X_(q+k))`` for s = 0, 1."""
    lam_inv = 1 / lam
    return [
        {**{k: lam**s * mu[k] ** i for k in range(q)}, **{q + k: lam_inv**s * mu[k] ** i for k in range(q)}}
        for s in range(2)
        for i in range(q)
    ]


def build_p2_family(f, g, *, method: str = "closed-form", target_error: float | None = None) -> AnosovCertificate:
    """Type ``(3q, q + 2)`` algebra for a quadratic unit ``x^2 + ax + 1`` and a degree-q unit.

    Design brackets ``[X_(iq+j), Y_j] = Z_(q+i+1)`` and ``[X_j, X_(j+q)] = Z_j``.
    In the integer basis ``[X_i, X_(q+i')]`` is ``x^(i+i')`` reduced modulo g
    and read in ``Z_0 .. Z_(q-1)``, while ``[X_(j+qs), Y_k] = p_{j-k}(g) Z_(q+s)``.
    """
    uf, ug = _as_unit(f, target_error), _as_unit(g, target_error)
    _check_reciprocal_quadratic(uf, "p2")
    q = ug.degree
    F, G = uf.min_poly, ug.min_poly
    spectrum = [(1, 1), (0, -1), (0, 2), (1, 0)]
    hypotheses = [(1, 0), (-1, 0), (0, 1), (1, 1), (-1, 1), (0, 2)]
    system = validate_system([uf, ug], _ordered_words(hypotheses, spectrum))
    y0, z0 = 2 * q, 3 * q
    n = 4 * q + 2
    labels = [BasisLabel("X", (i,)) for i in range(2 * q)]
    labels += [BasisLabel("Y", (k,)) for k in range(q)]
    labels += [BasisLabel("Z", (l,)) for l in range(q + 2)]
    layers = [1] * (3 * q) + [2] * (q + 2)
    entries = {}
    for i in range(q):
        for i2 in range(q):
            for t, c in enumerate(power_coordinates(G, i + i2)):
                if c:
                    entries[(i, q + i2, z0 + t)] = c
    for s in range(2):
        for j in range(q):
            for k in range(q):
                c = power_sum(G, j - k)
                if c:
                    entries[(j + q * s, y0 + k, z0 + q + s)] = c
    closed = StructureConstants(n, entries)
    cf, cg = companion_matrix(F), companion_matrix(G)
    matrix = linalg.block_diag(
        linalg.kron(cf, cg),
        companion_matrix(reciprocal(G)),
        linalg.matmul(cg, cg),
        cf,
    )
    factors = [composed_product(F, G), reciprocal(G), power_min_poly(G, 2), F]

    def design(err: float) -> Design:
        lam_roots, mu = _roots(uf, err), _roots(ug, err)
        lam, lam_inv = lam_roots[0], lam_roots[1]
        one = mpmath.mpc(1)
        brackets = {}
        for k in range(q):
            brackets[(k, y0 + k)] = {4 * q: one}
            brackets[(q + k, y0 + k)] = {4 * q + 1: one}
            brackets[(k, q + k)] = {z0 + k: one}
        basis = _xpair_basis(lam, mu, q)
        basis += [{y0 + m: mu[m] ** -k for m in range(q)} for k in range(q)]
        basis += [{z0 + k: (lam_inv - lam) * mu[k] ** l for k in range(q)} for l in range(q)]
        basis += [{4 * q: one, 4 * q + 1: one}, {4 * q: lam, 4 * q + 1: lam_inv}]
        eig = [lam * m for m in mu] + [lam_inv * m for m in mu] + [1 / m for m in mu]
        eig += [m**2 for m in mu] + [lam, lam_inv]
        return Design(n, brackets, basis, eig)

    constants, extra = _pick_constants(closed, design, matrix, method, target_error)
    return _finish("p2", {"q": q}, [uf, ug], system, spectrum, constants, labels, layers, matrix, factors, extra)


# --- 13-dimensional ----------------------------------------------------------

def build_13dim(f, g, *, target_error: float | None = None) -> AnosovCertificate:
    """Indecomposable 13-dimensional algebra of type (9, 4), realized then rounded.

    Design brackets ``[X_k, Y_k] = Z_k``, ``[X_(3+k), Y_k] = W_k`` for k = 1, 2
    and ``[X_3, Y_3] = -(Z_1 + Z_2)``, ``[X_6, Y_3] = -(W_1 + W_2)``.  The
    central lattice is spanned by ``Z_l, W_l`` (l = -1, 1) built from the
    differences ``mu_i^l - mu_3^l``, with mu_3 the conjugate of largest real part.
    """
    uf, ug = _as_unit(f, target_error), _as_unit(g, target_error)
    a = _check_reciprocal_quadratic(uf, "dim13")
    if ug.degree != 3 or ug.min_poly.constant != -1:
        raise InvalidInputError(f"dim13 needs a cubic unit with constant term -1, got {ug.min_poly}")
    F, G = uf.min_poly, ug.min_poly
    spectrum = [(1, 1), (0, -1), (1, 0), (1, 0)]
    system = validate_system([uf, ug], _ordered_words([(1, 0), (0, 1), (1, 1), (-1, 1)], spectrum))
    q = 3
    labels = [BasisLabel("X", (i,)) for i in range(6)] + [BasisLabel("Y", (k,)) for k in range(3)]
    labels += [BasisLabel("Z", (-1,)), BasisLabel("Z", (1,)), BasisLabel("W", (-1,)), BasisLabel("W", (1,))]
    layers = [1] * 9 + [2] * 4
    cf, cg = companion_matrix(F), companion_matrix(G)
    central = linalg.kron(cf, linalg.identity(2))
    matrix = linalg.block_diag(linalg.kron(cf, cg), companion_matrix(reciprocal(G)), central)
    factors = [composed_product(F, G), reciprocal(G), F, F]

    def design(err: float) -> Design:
        lam_roots, mu_sorted = _roots(uf, err), _roots(ug, err)
        lam, lam_inv = lam_roots[0], lam_roots[1]
        mu = [mu_sorted[1], mu_sorted[2], mu_sorted[0]]
        one = mpmath.mpc(1)
        z1, z2, w1, w2 = 9, 10, 11, 12
        brackets = {
            (0, 6): {z1: one},
            (1, 7): {z2: one},
            (2, 8): {z1: -one, z2: -one},
            (3, 6): {w1: one},
            (4, 7): {w2: one},
            (5, 8): {w1: -one, w2: -one},
        }
        basis = _xpair_basis(lam, mu, q)
        basis += [{6 + m: mu[m] ** -k for m in range(3)} for k in range(3)]
        for weight_z, weight_w in ((one, one), (lam, lam_inv)):
            for l in (-1, 1):
                d = [mu[i] ** l - mu[2] ** l for i in range(2)]
                basis.append({z1: weight_z * d[0], z2: weight_z * d[1], w1: weight_w * d[0], w2: weight_w * d[1]})
        eig = [lam * m for m in mu] + [lam_inv * m for m in mu] + [1 / m for m in mu]
        eig += [lam, lam, lam_inv, lam_inv]
        return Design(13, brackets, basis, eig)

    realized = realize_integer_basis(design, target_error=target_error, automorphism=matrix)
    if realized.automorphism != matrix:
        raise ConstructionError("realized 13-dim automorphism differs from the assembled blocks")
    alg = NilpotentLieAlgebra(realized.constants, tuple(labels), tuple(layers))
    n1 = power_sum(G, 1)
    anchors = [
        (("X1", "Y0"), {"Z1": 1}),
        (("X2", "Y0"), {"Z1": n1, "Z-1": 1}),
    ]
    for (x, y), expected in anchors:
        got = {k: v for k, v in alg.bracket_labels(x, y).items()}
        if got != {k: Fraction(v) for k, v in expected.items() if v}:
            raise ConstructionError(f"13-dim anchor [{x}, {y}] = {got}, expected {expected}")
    extra = {"realize_residual": _fmt(realized.max_residual)}
    return _finish(
        "dim13", {"p": 2, "q": 3, "a": a}, [uf, ug], system, spectrum, realized.constants, labels, layers, matrix, factors, extra
    )


# --- dispatch -----------------------------------------------------------------

FAMILIES: dict[str, tuple[Callable[..., AnosovCertificate], int]] = {
    "type-pq": (build_type_pq, 2),
    "bipartite": (build_bipartite, 2),
    "three-unit-2step": (build_three_unit_2step, 3),
    "three-unit-3step": (build_three_unit_3step, 3),
    "p2": (build_p2_family, 2),
    "dim13": (build_13dim, 2),
    "dim16": (build_16dim, 2),
}


def build_family(name: str, polys: Sequence[IntPolynomial | str], **kwargs) -> AnosovCertificate:
    if name not in FAMILIES:
        raise InvalidInputError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    builder, count = FAMILIES[name]
    if len(polys) != count:
        raise InvalidInputError(f"family {name} needs {count} unit polynomials, got {len(polys)}")
    return builder(*polys, **kwargs)


def expected_type(name: str, degrees: Sequence[int]) -> tuple[int, ...]:
    """Closed-form type of each family in terms of the unit degrees."""
    if name == "type-pq":
        p, q = degrees
        return (p * q + q, p)
    if name == "bipartite":
        p, q = degrees
        return (p + q, p * q)
    if name in ("three-unit-2step", "three-unit-3step"):
        p, q, r = degrees
        base = (p * q * r + q + r, p * r + p * q)
        return base if name.endswith("2step") else base + (p,)
    if name == "p2":
        q = degrees[1]
        return (3 * q, q + 2)
    if name == "dim13":
        return (9, 4)
    if name == "dim16":
        return (10, 6)
    raise InvalidInputError(f"unknown family {name!r}")
