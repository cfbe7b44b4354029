"""Flag complexes ("socioplexes") and Rips filtrations over a distance matrix.

Closed-ball convention throughout: two agents are joined at threshold ``M``
when their distance is ``<= M``, so the socioplex at ``M`` is exactly the
prefix of the filtration with value ``<= M``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CombinatorialBlowup, IndexOutOfRange
from .metric import as_array

DEFAULT_SIMPLEX_CAP = 5_000_000
CAP_ENV = "SOCIOPLEX_SIMPLEX_CAP"


def simplex_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV, "").strip()
    return int(env) if env else DEFAULT_SIMPLEX_CAP


@dataclass(frozen=True, order=True)
class Simplex:
    vertices: tuple[int, ...]
    value: float = 0.0

    def __post_init__(self):
        verts = tuple(int(v) for v in self.vertices)
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise ValueError(f"simplex vertices must be strictly increasing: {verts}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "value", float(self.value))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list[tuple[int, ...]]:
        """Codimension-one faces, as vertex tuples."""
        v = self.vertices
        if len(v) < 2:
            return []
        return [v[:i] + v[i + 1:] for i in range(len(v))]

    def sort_key(self):
        return (self.value, self.dim, self.vertices)


def simplex_diameter(m, vertices: Sequence[int]) -> float:
    a = as_array(m)
    v = list(vertices)
    if len(v) < 2:
        return 0.0
    return float(a[np.ix_(v, v)].max())


# ---------------------------------------------------------------- socioplex


@dataclass
class SimplicialComplex:
    """Simplices grouped by dimension; each list sorted lexicographically."""

    simplices: dict[int, list[Simplex]] = field(default_factory=dict)
    max_dim: int = 0

    def __len__(self) -> int:
        return sum(len(s) for s in self.simplices.values())

    def __iter__(self) -> Iterator[Simplex]:
        for d in sorted(self.simplices):
            yield from self.simplices[d]

    def __contains__(self, vertices) -> bool:
        if isinstance(vertices, Simplex):
            vertices = vertices.vertices
        return tuple(vertices) in self.vertex_sets()

    def dim_simplices(self, dim: int) -> list[Simplex]:
        return self.simplices.get(dim, [])

    def count(self, dim: int) -> int:
        return len(self.dim_simplices(dim))

    def vertex_sets(self) -> set[tuple[int, ...]]:
        return {s.vertices for s in self}

    def edges(self) -> list[tuple[int, int]]:
        return [s.vertices for s in self.dim_simplices(1)]

    def is_closed(self) -> bool:
        present = self.vertex_sets()
        return all(f in present for s in self for f in s.faces())

    def is_flag(self) -> bool:
        """Every vertex set whose edges are all present (up to max_dim) is a simplex."""
        present = self.vertex_sets()
        edges = set(self.edges())
        for s in self:
            if s.dim < 1:
                continue
            pairs = [(a, b) for i, a in enumerate(s.vertices) for b in s.vertices[i + 1:]]
            if not all(p in edges for p in pairs):
                return False
        # no clique missing: every clique found by brute force must be present
        adj: dict[int, set[int]] = {}
        for a, b in edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        for s in self:
            if s.dim + 1 > self.max_dim:
                continue
            common = set.intersection(*(adj.get(v, set()) for v in s.vertices))
            for w in common:
                if w > s.vertices[-1] and s.vertices + (w,) not in present:
                    return False
        return True


def diameter(m) -> float:
    """Largest off-diagonal entry; 0 for fewer than two points."""
    a = as_array(m)
    n = a.shape[0]
    if n < 2:
        return 0.0
    off = ~np.eye(n, dtype=bool)
    return float(a[off].max())


def neighborhood(m, i: int, M: float) -> set[int]:
    a = as_array(m)
    n = a.shape[0]
    if not 0 <= i < n:
        raise IndexOutOfRange(f"vertex {i} out of range for {n} points")
    row = a[i]
    return {int(j) for j in np.flatnonzero(row <= M) if j != i}


def build_socioplex(m, M: float, max_dim: int = 2, cap: int | None = None) -> SimplicialComplex:
    """The flag complex of the graph joining points at distance ``<= M``."""
    if M < 0 or max_dim < 0:
        raise ValueError("threshold and max_dim must be nonnegative")
    a = as_array(m)
    n = a.shape[0]
    limit = simplex_cap(cap)
    adj = [set(neighborhood(a, i, M)) for i in range(n)]
    out: dict[int, list[Simplex]] = {0: [Simplex((i,), 0.0) for i in range(n)]}
    if n > limit:
        raise CombinatorialBlowup(f"{n} vertices exceed the simplex cap {limit}")
    total = n

    # incremental clique enumeration: extend each clique by higher common neighbours
    frontier = [((i,), {j for j in adj[i] if j > i}, 0.0) for i in range(n)]
    for dim in range(1, max_dim + 1):
        nxt = []
        layer = []
        for verts, cands, value in frontier:
            for w in sorted(cands):
                new_verts = verts + (w,)
                new_value = max(value, max(float(a[v, w]) for v in verts))
                layer.append(Simplex(new_verts, new_value))
                nxt.append((new_verts, {c for c in cands & adj[w] if c > w}, new_value))
        total += len(layer)
        if total > limit:
            raise CombinatorialBlowup(
                f"socioplex exceeds the simplex cap {limit} at dimension {dim}; "
                "lower max_dim or the threshold"
            )
        if layer:
            out[dim] = sorted(layer, key=lambda s: s.vertices)
        frontier = nxt
        if not frontier:
            break
    return SimplicialComplex(out, max_dim)


# ---------------------------------------------------------------- filtration


class Filtration(Sequence[Simplex]):
    """Simplices ordered by (value, dimension, lexicographic vertices).

    Stored column-wise: ``values`` (float), ``dims`` (int) and ``verts``, an
    ``(m, max_dim + 1)`` int array padded with ``-1``. ``truncated`` marks a
    Rips filtration cut at ``max_dim``; homology in dimension ``max_dim`` and
    above is then an artefact of the cut.
    """

    def __init__(self, values, dims, verts, truncated: bool = False, max_scale: float = np.inf):
        self.values = np.asarray(values, dtype=float)
        self.dims = np.asarray(dims, dtype=np.int64)
        verts = np.asarray(verts, dtype=np.int64)
        if verts.ndim != 2:
            verts = verts.reshape(len(self.values), -1)
        self.verts = verts
        self.truncated = truncated
        self.max_scale = float(max_scale)
        self._positions = None

    @property
    def max_dim(self) -> int:
        return int(self.dims.max()) if len(self.dims) else 0

    @property
    def homology_dims(self) -> range:
        """Dimensions whose barcodes are meaningful for this filtration."""
        top = self.verts.shape[1] - 1 if self.truncated else self.max_dim + 1
        return range(0, max(top, 1))

    @classmethod
    def from_simplices(cls, simplices: Iterable, truncated: bool = False) -> "Filtration":
        """Sort arbitrary ``Simplex`` objects or ``(vertices, value)`` pairs."""
        items = [s if isinstance(s, Simplex) else Simplex(tuple(s[0]), s[1]) for s in simplices]
        items.sort(key=Simplex.sort_key)
        width = max((len(s.vertices) for s in items), default=1)
        verts = np.full((len(items), width), -1, dtype=np.int64)
        for row, s in enumerate(items):
            verts[row, : len(s.vertices)] = s.vertices
        return cls([s.value for s in items], [s.dim for s in items], verts, truncated=truncated)

    def __len__(self) -> int:
        return len(self.values)

    def vertices_of(self, i: int) -> tuple[int, ...]:
        d = int(self.dims[i])
        return tuple(int(v) for v in self.verts[i, : d + 1])

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        return Simplex(self.vertices_of(i), float(self.values[i]))

    def __iter__(self) -> Iterator[Simplex]:
        for i in range(len(self)):
            yield self[i]

    def position(self, vertices) -> int:
        if self._positions is None:
            self._positions = {self.vertices_of(i): i for i in range(len(self))}
        return self._positions[tuple(vertices)]

    def prefix(self, M: float) -> list[Simplex]:
        """Simplices with value ``<= M`` (values are sorted, so this is a prefix)."""
        stop = int(np.searchsorted(self.values, M, side="right"))
        return self[0:stop]

    def distinct_values(self) -> np.ndarray:
        return np.unique(self.values)


def _sort_order(values, dims, verts) -> np.ndarray:
    keys = [verts[:, c] for c in range(verts.shape[1] - 1, -1, -1)]
    return np.lexsort(keys + [dims, values])


def build_filtration(m, max_dim: int = 2, max_scale: float = np.inf, cap: int | None = None) -> Filtration:
    """Vietoris-Rips filtration: every clique of dimension ``<= max_dim`` with
    diameter ``<= max_scale``, valued by its diameter.

    Cliques are grown one vertex at a time with boolean adjacency masks.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    a = as_array(m)
    n = a.shape[0]
    limit = simplex_cap(cap)
    if n > limit:
        raise CombinatorialBlowup(f"{n} vertices exceed the simplex cap {limit}")
    adj = a <= max_scale
    np.fill_diagonal(adj, False)
    later = np.arange(n)[None, :]

    level_verts = [np.arange(n, dtype=np.int64)[:, None]]
    level_vals = [np.zeros(n)]
    total = n
    for dim in range(1, max_dim + 1):
        prev_v, prev_val = level_verts[-1], level_vals[-1]
        if len(prev_v) == 0:
            break
        chunk = max(1, 4_000_000 // max(n, 1))
        parts_v, parts_val = [], []
        for start in range(0, len(prev_v), chunk):
            pv = prev_v[start:start + chunk]
            common = adj[pv[:, 0]].copy()
            for c in range(1, pv.shape[1]):
                common &= adj[pv[:, c]]
            common &= later > pv[:, -1:]
            total += int(common.sum())
            if total > limit:
                raise CombinatorialBlowup(
                    f"filtration exceeds the simplex cap {limit} at dimension {dim}; "
                    "lower max_dim or max_scale"
                )
            rows, new = np.nonzero(common)
            verts = np.hstack([pv[rows], new[:, None]])
            vals = prev_val[start:start + chunk][rows]
            for c in range(pv.shape[1]):
                vals = np.maximum(vals, a[pv[rows, c], new])
            parts_v.append(verts)
            parts_val.append(vals)
        level_verts.append(np.vstack(parts_v) if parts_v else np.empty((0, dim + 1), np.int64))
        level_vals.append(np.concatenate(parts_val) if parts_val else np.empty(0))

    width = max_dim + 1
    verts = np.full((total, width), -1, dtype=np.int64)
    values = np.empty(total)
    dims = np.empty(total, dtype=np.int64)
    row = 0
    for d, (lv, lval) in enumerate(zip(level_verts, level_vals)):
        k = len(lv)
        verts[row:row + k, : d + 1] = lv
        values[row:row + k] = lval
        dims[row:row + k] = d
        row += k
    order = _sort_order(values, dims, verts)
    return Filtration(values[order], dims[order], verts[order], truncated=True, max_scale=max_scale)


# ---------------------------------------------------------------- exports


def _fmt(x: float) -> str:
    x = float(x)
    if x.is_integer():
        return str(int(x))
    return repr(x)


def socioplex_dot(m, M: float, ids: Sequence[str] | None = None) -> str:
    """Graphviz DOT of the 1-skeleton at threshold ``M``."""
    a = as_array(m)
    n = a.shape[0]
    ids = list(ids) if ids is not None else [str(i) for i in range(n)]
    lines = ["graph socioplex {"]
    for name in ids:
        lines.append(f"  {json.dumps(name)};")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j] <= M:
                lines.append(f"  {json.dumps(ids[i])} -- {json.dumps(ids[j])} [len={_fmt(a[i, j])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def simplices_json(simplices: Iterable[Simplex]) -> str:
    rows = [
        '  {"vertices": [' + ", ".join(str(v) for v in s.vertices) + '], "value": ' + _fmt(s.value) + "}"
        for s in simplices
    ]
    return "[\n" + ",\n".join(rows) + "\n]\n" if rows else "[]\n"
