"""Exact structure-constant Lie algebra.

Algebras are stored sparsely: only brackets ``[e_i, e_j]`` with ``i < j``
are kept, as maps ``k -> c_ij^k`` with :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import InvalidInputError, NotNilpotentError, ScopeExceededError

__all__ = [
    "BasisLabel",
    "StructureConstants",
    "NilpotentLieAlgebra",
    "bracket",
    "jacobi_defect",
    "lower_central_series",
    "type_of",
    "center",
    "derived_subalgebra",
    "verify_automorphism",
    "quotient_by_last_layer",
    "direct_sum",
    "basis_aligned_decomposition",
    "heisenberg",
    "abelian",
    "DECOMPOSITION_MAX_DIM",
]

ROLES = ("X", "Y", "Z", "V", "W", "U")
DECOMPOSITION_MAX_DIM = 24

_LABEL = re.compile(r"^([XYZVWU])(?:\(([-\d,]+)\)|(-?\d+))(?:#(\d+))?$")


@dataclass(frozen=True, order=True)
class BasisLabel:
    role: str
    indices: tuple[int, ...]
    copy: int | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise InvalidInputError(f"unknown basis role {self.role!r}")

    def __str__(self) -> str:
        if len(self.indices) == 1:
            body = f"{self.role}{self.indices[0]}"
        else:
            body = f"{self.role}({','.join(map(str, self.indices))})"
        return body if self.copy is None else f"{body}#{self.copy}"

    @classmethod
    def parse(cls, text: str) -> "BasisLabel":
        m = _LABEL.match(text)
        if not m:
            raise InvalidInputError(f"cannot parse basis label {text!r}")
        role, multi, single, copy = m.groups()
        indices = tuple(int(x) for x in multi.split(",")) if multi else (int(single),)
        return cls(role, indices, int(copy) if copy else None)


class StructureConstants:
    """Sparse antisymmetric table ``c_ij^k`` stored for ``i < j`` only."""

    def __init__(self, dim: int, entries: Mapping[tuple[int, int, int], Fraction | int] = ()):
        if dim < 0:
            raise InvalidInputError("dimension must be nonnegative")
        self.dim = dim
        self._pairs: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j, k), c in dict(entries).items():
            if not (0 <= i < j < dim and 0 <= k < dim):
                raise InvalidInputError(f"entry ({i}, {j}, {k}) is not canonical for dim {dim}")
            c = Fraction(c)
            if c:
                self._pairs.setdefault((i, j), {})[k] = c

    @classmethod
    def from_table(cls, dim: int, table: Mapping[tuple[int, int, int], Fraction | int]) -> "StructureConstants":
        """Canonicalize a table that may list both ``(i, j, k)`` and ``(j, i, k)``."""
        canon: dict[tuple[int, int, int], Fraction] = {}
        for (i, j, k), c in table.items():
            c = Fraction(c)
            if i == j:
                if c:
                    raise InvalidInputError(f"[e_{i}, e_{i}] must vanish, got {c} on e_{k}")
                continue
            key, val = ((i, j, k), c) if i < j else ((j, i, k), -c)
            if key in canon and canon[key] != val:
                raise InvalidInputError(
                    f"entries for [e_{key[0]}, e_{key[1]}] on e_{k} are not antisymmetric"
                )
            canon[key] = val
        return cls(dim, canon)

    def pair(self, i: int, j: int) -> dict[int, Fraction]:
        """``[e_i, e_j]`` as a sparse map, for any ordering of i and j."""
        if i < j:
            return self._pairs.get((i, j), {})
        if i > j:
            return {k: -c for k, c in self._pairs.get((j, i), {}).items()}
        return {}

    def get(self, i: int, j: int, k: int) -> Fraction:
        return self.pair(i, j).get(k, Fraction(0))

    def entries(self) -> list[tuple[int, int, int, Fraction]]:
        return sorted((i, j, k, c) for (i, j), row in self._pairs.items() for k, c in row.items())

    def nonzero_pairs(self) -> list[tuple[int, int]]:
        return sorted(self._pairs)

    def __eq__(self, other) -> bool:
        return isinstance(other, StructureConstants) and self.dim == other.dim and self.entries() == other.entries()

    def __repr__(self) -> str:
        return f"StructureConstants(dim={self.dim}, nnz={len(self.entries())})"


@dataclass(frozen=True)
class NilpotentLieAlgebra:
    """Structure constants plus labels and a declared layer per basis vector.

    Nothing is enforced at construction so that damaged certificates can be
    loaded and reported on; see :func:`anosov_lie.certificate.verify_certificate`.
    When ``layers`` is omitted it is inferred from the lower central series.
    """

    constants: StructureConstants
    labels: tuple[BasisLabel, ...] = ()
    layers: tuple[int, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        dim = self.constants.dim
        if not self.labels:
            object.__setattr__(self, "labels", tuple(BasisLabel("X", (i,)) for i in range(dim)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != dim:
            raise InvalidInputError(f"{len(self.labels)} labels for dimension {dim}")
        if len(set(self.labels)) != dim:
            raise InvalidInputError("basis labels are not unique")
        if not self.layers:
            object.__setattr__(self, "layers", _infer_layers(self.constants))
        else:
            object.__setattr__(self, "layers", tuple(int(x) for x in self.layers))
        if len(self.layers) != dim:
            raise InvalidInputError(f"{len(self.layers)} layer tags for dimension {dim}")

    @property
    def dim(self) -> int:
        return self.constants.dim

    def index(self, label: BasisLabel | str) -> int:
        if isinstance(label, str):
            label = BasisLabel.parse(label)
        return self.labels.index(label)

    def basis_vector(self, label: BasisLabel | str | int) -> list[Fraction]:
        i = label if isinstance(label, int) else self.index(label)
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def bracket_labels(self, a: BasisLabel | str, b: BasisLabel | str) -> dict[str, Fraction]:
        """``[a, b]`` keyed by label strings, for reading off table entries."""
        row = self.constants.pair(self.index(a), self.index(b))
        return {str(self.labels[k]): c for k, c in sorted(row.items())}

    def labelled_constants(self) -> dict[tuple[str, str, str], Fraction]:
        out = {}
        for i, j, k, c in self.constants.entries():
            a, b, t = str(self.labels[i]), str(self.labels[j]), str(self.labels[k])
            out[(a, b, t) if a < b else (b, a, t)] = c if a < b else -c
        return out


def _infer_layers(constants: StructureConstants) -> tuple[int, ...]:
    try:
        series = _central_series_bases(constants)
    except NotNilpotentError:
        return (1,) * constants.dim
    layers = []
    for i in range(constants.dim):
        e = [0] * constants.dim
        e[i] = 1
        depth = 1
        for level, basis in enumerate(series[1:], start=2):
            if basis and linalg.in_span(basis, e):
                depth = level
        layers.append(depth)
    return tuple(layers)


def _sparse(vec: Sequence) -> dict[int, Fraction]:
    return {i: Fraction(x) for i, x in enumerate(vec) if x}


def _bracket_sparse(constants: StructureConstants, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            if i == j:
                continue
            for k, c in constants.pair(i, j).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def bracket(alg: NilpotentLieAlgebra, x: Sequence, y: Sequence) -> list[Fraction]:
    """Bilinear, antisymmetric extension of the structure constants."""
    if len(x) != alg.dim or len(y) != alg.dim:
        raise InvalidInputError(f"vectors must have length {alg.dim}")
    res = _bracket_sparse(alg.constants, _sparse(x), _sparse(y))
    return [res.get(k, Fraction(0)) for k in range(alg.dim)]


def jacobi_defect(constants: StructureConstants | NilpotentLieAlgebra) -> Fraction:
    """Largest coefficient of a Jacobiator over all basis triples (0 iff Lie)."""
    if isinstance(constants, NilpotentLieAlgebra):
        constants = constants.constants
    worst = Fraction(0)
    n = constants.dim
    for i in range(n):
        for j in range(i + 1, n):
            ij = constants.pair(i, j)
            for k in range(j + 1, n):
                total: dict[int, Fraction] = {}
                for (first, second) in ((ij, k), (constants.pair(j, k), i), (constants.pair(k, i), j)):
                    for m, c in first.items():
                        for t, d in constants.pair(m, second).items():
                            total[t] = total.get(t, 0) + c * d
                for v in total.values():
                    if abs(v) > worst:
                        worst = abs(v)
    return worst


def _central_series_bases(constants: StructureConstants) -> list[list[list[Fraction]]]:
    n = constants.dim
    current = linalg.row_reduce(linalg.identity(n)) if n else []
    series = [current]
    while current:
        spans = []
        for a in range(n):
            ea = {a: Fraction(1)}
            for v in current:
                res = _bracket_sparse(constants, ea, _sparse(v))
                if res:
                    spans.append([res.get(k, Fraction(0)) for k in range(n)])
        nxt = linalg.row_reduce(spans) if spans else []
        if len(nxt) >= len(current):
            raise NotNilpotentError(f"lower central series stalls at dimension {len(current)}")
        series.append(nxt)
        current = nxt
    return series


def lower_central_series(alg: NilpotentLieAlgebra) -> list[int]:
    """Dimensions of ``C^0 = n, C^1 = [n, n], ...`` down to 0."""
    if "series" not in alg._cache:
        alg._cache["series"] = _central_series_bases(alg.constants)
    return [len(b) for b in alg._cache["series"]]


def type_of(alg: NilpotentLieAlgebra) -> tuple[int, ...]:
    dims = lower_central_series(alg)
    return tuple(a - b for a, b in zip(dims, dims[1:]))


def derived_subalgebra(alg: NilpotentLieAlgebra) -> list[list[Fraction]]:
    """Row basis (reduced echelon) of ``[n, n]``."""
    lower_central_series(alg)
    series = alg._cache["series"]
    return series[1] if len(series) > 1 else []


def center(alg: NilpotentLieAlgebra) -> list[list[Fraction]]:
    """Row basis of ``{z : [e_a, z] = 0 for all a}``."""
    n = alg.dim
    rows = []
    for a in range(n):
        for k in range(n):
            row = [alg.constants.get(a, j, k) for j in range(n)]
            if any(row):
                rows.append(row)
    return linalg.row_reduce(linalg.nullspace(rows, n))


def verify_automorphism(alg: NilpotentLieAlgebra, matrix: Sequence[Sequence]) -> bool:
    """Exact test of ``M [e_i, e_j] = [M e_i, M e_j]`` for all ``i < j``."""
    n = alg.dim
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise InvalidInputError(f"matrix must be {n}x{n}")
    cols = [{r: Fraction(matrix[r][c]) for r in range(n) if matrix[r][c]} for c in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs: dict[int, Fraction] = {}
            for k, c in alg.constants.pair(i, j).items():
                for r, m in cols[k].items():
                    lhs[r] = lhs.get(r, 0) + c * m
            lhs = {k: v for k, v in lhs.items() if v}
            if lhs != _bracket_sparse(alg.constants, cols[i], cols[j]):
                return False
    return True


def quotient_by_last_layer(alg: NilpotentLieAlgebra) -> NilpotentLieAlgebra:
    """Drop the top declared layer and every bracket landing in it."""
    top = max(alg.layers, default=0)
    if top < 2:
        raise InvalidInputError("algebra has a single layer; nothing to quotient")
    keep = [i for i in range(alg.dim) if alg.layers[i] < top]
    new_index = {old: new for new, old in enumerate(keep)}
    entries = {}
    for i, j, k, c in alg.constants.entries():
        if i in new_index and j in new_index and k in new_index:
            entries[(new_index[i], new_index[j], new_index[k])] = c
    return NilpotentLieAlgebra(
        StructureConstants(len(keep), entries),
        tuple(alg.labels[i] for i in keep),
        tuple(alg.layers[i] for i in keep),
    )


def direct_sum(a: NilpotentLieAlgebra, b: NilpotentLieAlgebra) -> NilpotentLieAlgebra:
    """Block sum; labels get copy tags 1 and 2 when they would collide."""
    off = a.dim
    entries = {(i, j, k): c for i, j, k, c in a.constants.entries()}
    entries.update({(i + off, j + off, k + off): c for i, j, k, c in b.constants.entries()})
    if set(a.labels) & set(b.labels):
        labels = tuple(BasisLabel(l.role, l.indices, 1) for l in a.labels) + tuple(
            BasisLabel(l.role, l.indices, 2) for l in b.labels
        )
    else:
        labels = a.labels + b.labels
    return NilpotentLieAlgebra(StructureConstants(a.dim + b.dim, entries), labels, a.layers + b.layers)


def basis_aligned_decomposition(
    alg: NilpotentLieAlgebra, max_dim: int = DECOMPOSITION_MAX_DIM
) -> tuple[list[int], list[int]] | None:
    """Split of the basis into two complementary ideal spans, or None.

    Two index sets I, J partition the basis into ideals exactly when every
    nonzero ``c_ij^k`` has ``i, j, k`` on the same side.  So the splits are
    the unions of connected components of the hypergraph with edges
    ``{i, j, k}``, and taking the component of index 0 against the rest
    settles the exhaustive search over all 2^(n-1) splits.  A None result
    only rules out decompositions into basis-spanned ideals.
    """
    n = alg.dim
    if n > max_dim:
        raise ScopeExceededError(f"decomposition search is limited to dim <= {max_dim}, got {n}")
    if n < 2:
        return None
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, k, _ in alg.constants.entries():
        for other in (j, k):
            ra, rb = find(i), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    first = [i for i in range(n) if find(i) == find(0)]
    if len(first) == n:
        return None
    return first, [i for i in range(n) if find(i) != find(0)]


def heisenberg(n: int = 1) -> NilpotentLieAlgebra:
    """(2n+1)-dimensional Heisenberg algebra, ``[X_i, Y_i] = Z0``."""
    entries = {(i, n + i, 2 * n): 1 for i in range(n)}
    labels = tuple(BasisLabel("X", (i,)) for i in range(n)) + tuple(
        BasisLabel("Y", (i,)) for i in range(n)
    ) + (BasisLabel("Z", (0,)),)
    return NilpotentLieAlgebra(StructureConstants(2 * n + 1, entries), labels, (1,) * (2 * n) + (2,))


def abelian(n: int) -> NilpotentLieAlgebra:
    return NilpotentLieAlgebra(StructureConstants(n), tuple(BasisLabel("X", (i,)) for i in range(n)), (1,) * n)
