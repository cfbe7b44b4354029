"""Persistent homology of a filtration with coefficients in Z/2.

The standard column algorithm: reduce the boundary matrix left to right
until all nonzero columns have distinct lowest entries, then read off
``(low(j), j)`` pairs. With ``clearing=True`` columns are processed by
decreasing dimension and a column already known to be a pivot row is zeroed
without work; the pairing and every reduced column are unchanged by this.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from . import _jit
from ._kernels import reduce_numba, reduce_numpy
from .complex import Filtration, Simplex
from .errors import MissingFace, NotACycleInterval


@dataclass
class BoundaryMatrix:
    """Sparse Z/2 boundary matrix in CSC form, columns in filtration order."""

    indptr: np.ndarray
    indices: np.ndarray
    dims: np.ndarray

    def __len__(self) -> int:
        return len(self.indptr) - 1

    def column(self, j: int) -> list[int]:
        return self.indices[self.indptr[j]:self.indptr[j + 1]].tolist()

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(len(self))]

    def to_dense(self) -> np.ndarray:
        m = len(self)
        out = np.zeros((m, m), dtype=np.uint8)
        for j in range(m):
            out[self.column(j), j] = 1
        return out


def _binomial_table(n: int, k: int) -> np.ndarray:
    table = np.zeros((n + 1, k + 1), dtype=np.int64)
    for v in range(n + 1):
        for r in range(k + 1):
            table[v, r] = math.comb(v, r)
    return table


def _simplex_keys(verts: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Combinatorial-number-system rank of each row of sorted vertices."""
    keys = np.zeros(len(verts), dtype=np.int64)
    for c in range(verts.shape[1]):
        keys += table[verts[:, c], c + 1]
    return keys


def boundary_matrix(f: Filtration) -> BoundaryMatrix:
    """Column ``j`` lists the filtration positions of the codimension-one faces of simplex ``j``."""
    m = len(f)
    dims = f.dims
    counts = np.where(dims > 0, dims + 1, 0)
    indptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    if m == 0 or indices.size == 0:
        return BoundaryMatrix(indptr, indices, dims.copy())

    n_vertices = int(f.verts.max()) + 1
    table = _binomial_table(n_vertices, f.verts.shape[1])
    by_dim = {}
    for d in range(int(dims.max()) + 1):
        pos = np.flatnonzero(dims == d)
        keys = _simplex_keys(f.verts[pos, : d + 1], table)
        order = np.argsort(keys, kind="stable")
        by_dim[d] = (keys[order], pos[order])
        if np.any(np.diff(keys[order]) == 0):
            raise ValueError(f"duplicate {d}-simplex in filtration")

    for d in range(1, int(dims.max()) + 1):
        pos = np.flatnonzero(dims == d)
        if pos.size == 0:
            continue
        verts = f.verts[pos, : d + 1]
        face_keys, face_pos = by_dim[d - 1]
        cols = np.empty((len(pos), d + 1), dtype=np.int64)
        for drop in range(d + 1):
            face = np.delete(verts, drop, axis=1)
            keys = _simplex_keys(face, table)
            at = np.searchsorted(face_keys, keys)
            at_clipped = np.minimum(at, len(face_keys) - 1)
            found = (at < len(face_keys)) & (face_keys[at_clipped] == keys) if len(face_keys) else np.zeros(len(keys), bool)
            if not found.all():
                bad = int(np.flatnonzero(~found)[0])
                raise MissingFace(
                    f"face {tuple(face[bad].tolist())} of simplex "
                    f"{tuple(verts[bad].tolist())} is not in the filtration"
                )
            cols[:, drop] = face_pos[at_clipped]
        cols.sort(axis=1)
        late = cols[:, -1] >= pos
        if late.any():
            bad = int(np.flatnonzero(late)[0])
            raise MissingFace(
                f"simplex {tuple(verts[bad].tolist())} precedes one of its faces in the filtration"
            )
        for c in range(d + 1):
            indices[indptr[pos] + c] = cols[:, c]
    return BoundaryMatrix(indptr, indices, dims.copy())


@dataclass
class ReductionResult:
    low: np.ndarray
    r_start: np.ndarray
    r_len: np.ndarray
    r_data: np.ndarray
    v_start: np.ndarray
    v_len: np.ndarray
    v_data: np.ndarray
    additions: int
    tracked_dims: frozenset[int] = frozenset()

    def reduced_column(self, j: int) -> list[int]:
        s = self.r_start[j]
        return self.r_data[s:s + self.r_len[j]].tolist()

    def basis_column(self, j: int) -> list[int]:
        s = self.v_start[j]
        return self.v_data[s:s + self.v_len[j]].tolist()

    def pairs(self) -> list[tuple[int, int]]:
        cols = np.flatnonzero(self.low >= 0)
        return sorted((int(self.low[j]), int(j)) for j in cols)

    def essential(self) -> list[int]:
        paired = np.zeros(len(self.low), dtype=bool)
        cols = np.flatnonzero(self.low >= 0)
        paired[cols] = True
        paired[self.low[cols]] = True
        return np.flatnonzero(~paired).tolist()


def _processing_order(dims: np.ndarray, clearing: bool) -> np.ndarray:
    positions = np.arange(len(dims), dtype=np.int64)
    if not clearing:
        return positions
    return np.lexsort((positions, -dims)).astype(np.int64)


def reduce(bm: BoundaryMatrix, clearing: bool = True, track_dims: Iterable[int] = (),
           backend: str | None = None) -> ReductionResult:
    """Reduce ``bm`` over Z/2.

    ``track_dims`` selects the dimensions for which V (the record of column
    additions) is kept; it is needed for representatives of essential classes.
    ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` for the configured default.
    """
    if backend is None:
        backend = "numba" if _jit.USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    track_dims = frozenset(int(d) for d in track_dims)
    top = int(bm.dims.max()) if len(bm.dims) else 0
    track = np.zeros(top + 2, dtype=bool)
    for d in track_dims:
        if 0 <= d <= top:
            track[d] = True
    order = _processing_order(bm.dims, clearing)
    fn = reduce_numba if backend == "numba" else reduce_numpy
    out = fn(bm.indptr, bm.indices, order, bm.dims, clearing, track)
    return ReductionResult(*out[:7], additions=int(out[7]), tracked_dims=track_dims)


# ---------------------------------------------------------------- diagrams


@dataclass(frozen=True, order=True)
class Interval:
    dim: int
    birth: float
    death: float
    birth_simplex: int
    death_simplex: int | None = None

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    @property
    def essential(self) -> bool:
        return self.death_simplex is None

    def contains(self, M: float) -> bool:
        return self.birth <= M < self.death


def _fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf"
    if x.is_integer():
        return str(int(x))
    return repr(x)


@dataclass
class PersistenceDiagram:
    intervals: list[Interval] = field(default_factory=list)
    reduction: ReductionResult | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def in_dim(self, k: int) -> list[Interval]:
        return [iv for iv in self.intervals if iv.dim == k]

    def dims(self) -> list[int]:
        return sorted({iv.dim for iv in self.intervals})

    def as_tuples(self, k: int | None = None) -> list[tuple[int, float, float]]:
        return [(iv.dim, iv.birth, iv.death) for iv in self.intervals if k is None or iv.dim == k]

    def to_text(self) -> str:
        return "".join(f"{iv.dim} {_fmt(iv.birth)} {_fmt(iv.death)}\n" for iv in self.intervals)

    def to_json(self, representatives: dict[Interval, list] | None = None) -> str:
        bars = []
        for iv in self.intervals:
            bar = {"dim": iv.dim, "birth": _num(iv.birth),
                   "death": None if math.isinf(iv.death) else _num(iv.death)}
            if representatives is not None and iv in representatives:
                bar["representative"] = representatives[iv]
            bars.append(bar)
        return json.dumps({"bars": bars}, indent=2, ensure_ascii=False) + "\n"


def _num(x: float):
    x = float(x)
    return int(x) if x.is_integer() else x


def barcodes(f: Filtration, keep_zero_length: bool = False, clearing: bool = True,
             representatives: bool = False, backend: str | None = None) -> PersistenceDiagram:
    """Persistence intervals of ``f``, sorted by (dim, birth, death).

    Only dimensions listed by ``f.homology_dims`` are reported: for a Rips
    filtration cut at ``max_dim`` that is ``0 .. max_dim - 1``.
    """
    bm = boundary_matrix(f)
    hom_dims = set(f.homology_dims)
    track = {d for d in hom_dims if d >= 1} if representatives else ()
    red = reduce(bm, clearing=clearing, track_dims=track, backend=backend)
    values, dims = f.values, f.dims
    out = []
    for birth, death in red.pairs():
        d = int(dims[birth])
        if d not in hom_dims:
            continue
        if values[death] == values[birth] and not keep_zero_length:
            continue
        out.append(Interval(d, float(values[birth]), float(values[death]), birth, death))
    for birth in red.essential():
        d = int(dims[birth])
        if d in hom_dims:
            out.append(Interval(d, float(values[birth]), math.inf, birth, None))
    out.sort(key=lambda iv: (iv.dim, iv.birth, iv.death, iv.birth_simplex))
    return PersistenceDiagram(out, red)


def betti_at(d: PersistenceDiagram, M: float, k: int) -> int:
    """Number of ``k``-dimensional bars alive at scale ``M`` (half-open ``[birth, death)``)."""
    return sum(1 for iv in d.intervals if iv.dim == k and iv.birth <= M < iv.death)


def betti_curve(d: PersistenceDiagram, scales: Sequence[float], k: int) -> list[int]:
    return [betti_at(d, M, k) for M in scales]


def boundary_of(chain: Iterable[Simplex | Sequence[int]]) -> set[tuple[int, ...]]:
    """Z/2 boundary of a chain given as simplices; returns faces with odd multiplicity."""
    out: set[tuple[int, ...]] = set()
    for s in chain:
        verts = s.vertices if isinstance(s, Simplex) else tuple(s)
        for i in range(len(verts)):
            face = verts[:i] + verts[i + 1:]
            if not face:
                continue
            out ^= {face}
    return out


def representative_cycle(f: Filtration, interval: Interval,
                         reduction: ReductionResult | None = None) -> list[Simplex]:
    """A cycle representing ``interval``, built only from simplices born no later than it.

    Finite bars use the reduced column of the death simplex; essential bars
    use the accumulated column operations of the birth simplex. The choice is
    deterministic but not canonical: other cycles may represent the same class.
    """
    if interval.dim < 1:
        raise NotACycleInterval("dimension-0 classes are components; use component_vertices")
    if interval.death_simplex is not None:
        if reduction is None:
            reduction = reduce(boundary_matrix(f))
        positions = reduction.reduced_column(interval.death_simplex)
    else:
        if reduction is None or interval.dim not in reduction.tracked_dims:
            reduction = reduce(boundary_matrix(f), track_dims=(interval.dim,))
        positions = reduction.basis_column(interval.birth_simplex)
    return [f[p] for p in positions]


def component_vertices(f: Filtration, interval: Interval) -> list[int]:
    """Vertices of the component born with a dimension-0 bar, just before it dies."""
    if interval.dim != 0:
        raise ValueError("component_vertices needs a dimension-0 interval")
    stop = len(f) if interval.death_simplex is None else interval.death_simplex
    vertices = [int(f.verts[i, 0]) for i in range(len(f)) if f.dims[i] == 0]
    ds = DisjointSet(vertices)
    for i in range(stop):
        if f.dims[i] == 1:
            ds.merge(int(f.verts[i, 0]), int(f.verts[i, 1]))
    root = int(f.verts[interval.birth_simplex, 0])
    return sorted(int(v) for v in ds.subset(root))
