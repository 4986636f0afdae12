"""Anosov certificates: verification and the on-disk text format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import linalg
from .errors import AnosovError, CertificateFormatError, NotNilpotentError
from .lie import (
    BasisLabel,
    NilpotentLieAlgebra,
    StructureConstants,
    jacobi_defect,
    lower_central_series,
    quotient_by_last_layer,
    type_of,
    verify_automorphism,
)
from .poly import IntPolynomial, bareiss_det, exact_divide, squarefree_part, unit_circle_verdict
from .units import HyperbolicSystem, SpectrumWord, make_unit

__all__ = [
    "IntegerAutomorphism",
    "AnosovCertificate",
    "Finding",
    "VerificationReport",
    "verify_certificate",
    "quotient_certificate",
    "dumps",
    "loads",
    "save",
    "load",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
STATUS_CERTIFICATE = "certificate"
STATUS_ALGEBRA_ONLY = "algebra-only"


@dataclass(frozen=True)
class IntegerAutomorphism:
    """Square integer matrix (row-major) with its characteristic polynomial factored."""

    matrix: tuple[tuple[int, ...], ...]
    charpoly_factors: tuple[IntPolynomial, ...]

    def __init__(self, matrix: Sequence[Sequence[int]], charpoly_factors: Sequence[IntPolynomial]):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in matrix))
        object.__setattr__(self, "charpoly_factors", tuple(charpoly_factors))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def determinant(self) -> int:
        return bareiss_det(self.matrix)

    def charpoly(self) -> IntPolynomial:
        return linalg.charpoly(self.matrix)

    def factor_product(self) -> IntPolynomial:
        out = IntPolynomial([1])
        for f in self.charpoly_factors:
            out = out * f
        return out


@dataclass
class AnosovCertificate:
    algebra: NilpotentLieAlgebra
    automorphism: IntegerAutomorphism | None
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    unit_polys: tuple[IntPolynomial, ...] = ()
    spectrum_words: tuple[SpectrumWord, ...] = ()
    margins: dict[str, str] = field(default_factory=dict)
    system: HyperbolicSystem | None = None
    status: str = STATUS_CERTIFICATE
    recorded_type: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return self.algebra.dim


@dataclass(frozen=True)
class Finding:
    check: str
    message: str

    def __str__(self) -> str:
        return f"{self.check}: {self.message}"


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    findings: list[Finding] = field(default_factory=list)
    semisimple: bool | None = None
    algebra_type: tuple[int, ...] | None = None

    @property
    def passed(self) -> bool:
        return not self.findings

    def record(self, check: str, ok: bool, message: str = "") -> bool:
        self.checks[check] = self.checks.get(check, True) and ok
        if not ok:
            self.findings.append(Finding(check, message))
        return ok

    def lines(self) -> list[str]:
        out = [f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in self.checks.items()]
        out += [f"finding {f}" for f in self.findings]
        return out


def _layer_indices(alg: NilpotentLieAlgebra) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for i, layer in enumerate(alg.layers):
        groups.setdefault(layer, []).append(i)
    return dict(sorted(groups.items()))


def _check_grading(alg: NilpotentLieAlgebra, report: VerificationReport, series_dims: list[int]) -> None:
    """Declared layers must match the central series: C^(i-1) = span of layers >= i."""
    from .lie import _central_series_bases

    groups = _layer_indices(alg)
    layers = sorted(groups)
    if layers != list(range(1, len(layers) + 1)):
        report.record("grading", False, f"layer tags {layers} are not 1..r")
        return
    if len(layers) != len(series_dims) - 1:
        report.record("grading", False, f"{len(layers)} declared layers but the algebra is {len(series_dims) - 1}-step")
        return
    bases = _central_series_bases(alg.constants)
    n = alg.dim
    for level in layers:
        idx = [i for l in layers if l >= level for i in groups[l]]
        rows = [[int(i == c) for c in range(n)] for i in idx]
        series = bases[level - 1]
        if len(rows) != len(series) or linalg.rank(rows + series) != len(rows):
            report.record("grading", False, f"layers >= {level} do not span C^{level - 1}")
            return
    report.record("grading", True)


def verify_certificate(cert: AnosovCertificate) -> VerificationReport:
    """Re-run every exact check and collect named findings."""
    report = VerificationReport()
    alg = cert.algebra

    defect = jacobi_defect(alg)
    report.record("jacobi", defect == 0, f"Jacobi defect is {defect}")

    non_integral = [e for e in alg.constants.entries() if e[3].denominator != 1]
    report.record("integrality", not non_integral, f"{len(non_integral)} non-integer structure constants")

    try:
        series = lower_central_series(alg)
        report.algebra_type = type_of(alg)
        report.record("nilpotent", True)
    except NotNilpotentError as exc:
        report.record("nilpotent", False, str(exc))
        series = None
    if series is not None:
        if cert.recorded_type is not None:
            report.record(
                "type",
                tuple(cert.recorded_type) == report.algebra_type,
                f"recorded type {tuple(cert.recorded_type)} but computed {report.algebra_type}",
            )
        _check_grading(alg, report, series)

    auto = cert.automorphism
    if auto is None:
        report.record(
            "automorphism",
            cert.status == STATUS_ALGEBRA_ONLY,
            "certificate carries no automorphism",
        )
    else:
        _check_automorphism(alg, auto, report)

    if cert.status == STATUS_CERTIFICATE:
        for f in cert.unit_polys:
            try:
                make_unit(f)
                report.record("units", True)
            except AnosovError as exc:
                report.record("units", False, f"{f}: {exc}")
    return report


def _check_automorphism(alg: NilpotentLieAlgebra, auto: IntegerAutomorphism, report: VerificationReport) -> None:
    n = alg.dim
    matrix = auto.matrix
    if len(matrix) != n or any(len(row) != n for row in matrix):
        report.record("automorphism", False, f"matrix is not {n}x{n}")
        return
    report.record("equivariance", verify_automorphism(alg, matrix), "M[e_i, e_j] != [M e_i, M e_j] for some pair")

    det = auto.determinant()
    report.record("determinant", det in (1, -1), f"determinant is {det}, not +-1")

    groups = _layer_indices(alg)
    preserved = True
    for layer, idx in groups.items():
        inside = set(idx)
        for c in idx:
            stray = [r for r in range(n) if r not in inside and matrix[r][c] != 0]
            if stray:
                preserved = False
                report.record(
                    "layers", False, f"column {alg.labels[c]} leaves layer {layer} (rows {stray[:3]})"
                )
                break
        if preserved:
            block = [[matrix[r][c] for c in idx] for r in idx]
            bdet = bareiss_det(block)
            report.record("layer-determinant", bdet in (1, -1), f"layer {layer} block has determinant {bdet}")
    if preserved:
        report.record("layers", True)

    factors = auto.charpoly_factors
    bad = [f for f in factors if f.degree < 1 or not f.is_monic()]
    report.record("charpoly", not bad, f"factors {[str(f) for f in bad]} are not monic and nonconstant")
    if bad:
        return
    cp = auto.charpoly()
    product = auto.factor_product()
    report.record("charpoly", cp == product, f"factor product {product} differs from charpoly {cp}")

    for f in factors:
        verdict = unit_circle_verdict(f, with_margin=False)
        ok = verdict.exact and not verdict.has_root_on_circle
        report.record("hyperbolicity", ok, f"factor {f} has a root on the unit circle ({verdict.method.value})")

    # side flag: minimal polynomial is squarefree iff rad(charpoly)(M) = 0
    rad = squarefree_part(cp)
    rows = [[(c, x) for c, x in enumerate(row) if x] for row in matrix]
    semisimple = True
    for j in range(n):
        acc = [0] * n
        for c in reversed(rad.coeffs):
            acc = [sum(x * acc[col] for col, x in row) for row in rows]
            acc[j] += c
        if any(acc):
            semisimple = False
            break
    report.semisimple = semisimple


def quotient_certificate(cert: AnosovCertificate) -> AnosovCertificate:
    """Quotient by the top layer, carrying the induced automorphism block."""
    alg = cert.algebra
    quotient = quotient_by_last_layer(alg)
    top = max(alg.layers)
    keep = [i for i in range(alg.dim) if alg.layers[i] < top]
    dropped = [i for i in range(alg.dim) if alg.layers[i] == top]
    auto = None
    if cert.automorphism is not None:
        m = cert.automorphism.matrix
        block = [[m[r][c] for c in keep] for r in keep]
        dropped_cp = linalg.charpoly([[m[r][c] for c in dropped] for r in dropped])
        factors = list(cert.automorphism.charpoly_factors)
        remaining = dropped_cp
        for f in list(factors):
            if remaining.degree < 1:
                break
            q = exact_divide(remaining, f)
            if q is not None:
                factors.remove(f)
                remaining = q
        if remaining.degree >= 1:
            factors = [linalg.charpoly(block)]
        auto = IntegerAutomorphism(block, factors)
    return AnosovCertificate(
        algebra=quotient,
        automorphism=auto,
        family=f"quotient({cert.family})",
        params=dict(cert.params),
        unit_polys=cert.unit_polys,
        spectrum_words=(),
        margins=dict(cert.margins),
        status=STATUS_ALGEBRA_ONLY,
        recorded_type=type_of(quotient),
    )


# --- serialization -----------------------------------------------------------

def to_dict(cert: AnosovCertificate) -> dict[str, Any]:
    alg = cert.algebra
    try:
        algebra_type = list(type_of(alg))
    except NotNilpotentError:
        algebra_type = None
    recorded = list(cert.recorded_type) if cert.recorded_type is not None else algebra_type
    auto = cert.automorphism
    return {
        "schema_version": SCHEMA_VERSION,
        "status": cert.status,
        "family": cert.family,
        "params": cert.params,
        "unit_polys": [f.to_json() for f in cert.unit_polys],
        "spectrum_words": [list(w) for w in cert.spectrum_words],
        "dim": alg.dim,
        "labels": [str(l) for l in alg.labels],
        "layers": list(alg.layers),
        "type": recorded,
        "brackets": [[i, j, k, str(c.numerator), str(c.denominator)] for i, j, k, c in alg.constants.entries()],
        "automorphism": None if auto is None else [[str(x) for x in row] for row in auto.matrix],
        "charpoly_factors": [] if auto is None else [f.to_json() for f in auto.charpoly_factors],
        "margins": dict(sorted(cert.margins.items())),
    }


def dumps(cert: AnosovCertificate) -> str:
    return json.dumps(to_dict(cert), indent=1, sort_keys=True) + "\n"


def _require(data: dict, key: str, kind):
    if key not in data:
        raise CertificateFormatError(f"missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise CertificateFormatError(f"field {key!r} has the wrong type")
    return value


def from_dict(data: dict[str, Any]) -> AnosovCertificate:
    if not isinstance(data, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    version = _require(data, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise CertificateFormatError(f"unsupported schema_version {version}")
    try:
        dim = _require(data, "dim", int)
        labels = tuple(BasisLabel.parse(s) for s in _require(data, "labels", list))
        layers = tuple(int(x) for x in _require(data, "layers", list))
        entries = {}
        for row in _require(data, "brackets", list):
            i, j, k, num, den = row
            key = (int(i), int(j), int(k))
            if key in entries:
                raise CertificateFormatError(f"duplicate bracket entry {key}")
            entries[key] = Fraction(int(num), int(den))
        algebra = NilpotentLieAlgebra(StructureConstants(dim, entries), labels, layers)
        raw_matrix = data.get("automorphism")
        auto = None
        if raw_matrix is not None:
            matrix = [[int(x) for x in row] for row in raw_matrix]
            factors = [IntPolynomial.from_json(c) for c in _require(data, "charpoly_factors", list)]
            auto = IntegerAutomorphism(matrix, factors)
        raw_type = data.get("type")
        return AnosovCertificate(
            algebra=algebra,
            automorphism=auto,
            family=str(_require(data, "family", str)),
            params=dict(_require(data, "params", dict)),
            unit_polys=tuple(IntPolynomial.from_json(c) for c in _require(data, "unit_polys", list)),
            spectrum_words=tuple(tuple(int(e) for e in w) for w in data.get("spectrum_words", [])),
            margins={str(k): str(v) for k, v in _require(data, "margins", dict).items()},
            status=str(_require(data, "status", str)),
            recorded_type=None if raw_type is None else tuple(int(x) for x in raw_type),
        )
    except CertificateFormatError:
        raise
    except (ValueError, TypeError, ZeroDivisionError, AnosovError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from exc


def loads(text: str) -> AnosovCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from exc
    return from_dict(data)


def save(cert: AnosovCertificate, path: str | Path) -> None:
    Path(path).write_text(dumps(cert), encoding="utf-8")


def load(path: str | Path) -> AnosovCertificate:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CertificateFormatError(f"cannot read {path}: {exc}") from exc
    return loads(text)
