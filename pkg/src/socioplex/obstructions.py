"""Persistent cycles read as obstructions to collaboration.

A 1-cycle alive at the working threshold ``M`` is a ring of agents who are
pairwise linked along the ring but not across it. The pairs across the ring
that are still farther apart than ``M`` are the missing links; the bar's
death tells how far ``M`` would have to grow before the ring fills in.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import Filtration, simplex_diameter
from .metric import as_array
from .persistence import PersistenceDiagram, representative_cycle


@dataclass
class ObstructionReport:
    cycle: list[int]
    cycle_ids: list[str]
    birth: float
    death: float
    missing_links: list[tuple[str, str]]
    threshold_gap: float
    dim: int = 1
    edges: list[tuple[int, ...]] = field(default_factory=list, repr=False)

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "cycle_ids": list(self.cycle_ids),
            "birth": _num(self.birth),
            "death": None if math.isinf(self.death) else _num(self.death),
            "persistence": None if math.isinf(self.persistence) else _num(self.persistence),
            "missing_links": [list(p) for p in self.missing_links],
            "threshold_gap": None if math.isinf(self.threshold_gap) else _num(self.threshold_gap),
        }


def _num(x: float):
    x = float(x)
    return int(x) if x.is_integer() else x


def _fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf"
    return str(int(x)) if x.is_integer() else f"{x:.6g}"


def _edge_lookup(f: Filtration, m):
    if m is not None:
        a = as_array(m)
        return lambda i, j: float(a[i, j])
    edges = {f.vertices_of(p): float(f.values[p]) for p in np.flatnonzero(f.dims == 1)}
    # edges cut by max_scale are farther apart than any threshold of interest
    return lambda i, j: edges.get((min(i, j), max(i, j)), math.inf)


def find_obstructions(f: Filtration, d: PersistenceDiagram, M: float,
                      min_persistence: float = 0.0, m=None, ids: Sequence[str] | None = None,
                      dims: Sequence[int] = (1,)) -> list[ObstructionReport]:
    """One report per bar of dimension in ``dims`` alive at ``M`` with
    persistence at least ``min_persistence``, longest first.

    Pair distances come from ``m`` when given, otherwise from the edge values
    of ``f``. Dimension-2 bars (voids) carry vertex sets only, without link
    suggestions.
    """
    if min_persistence < 0:
        raise ValueError("min_persistence must be nonnegative")
    dist = _edge_lookup(f, m)
    n_vertices = int(np.count_nonzero(f.dims == 0))
    ids = list(ids) if ids is not None else [str(i) for i in range(n_vertices)]
    reports = []
    for iv in d.intervals:
        if iv.dim not in dims or iv.dim < 1:
            continue
        if not iv.contains(M) or iv.persistence < min_persistence or iv.persistence <= 0:
            continue
        chain = representative_cycle(f, iv, d.reduction)
        verts = sorted({v for s in chain for v in s.vertices})
        missing = []
        if iv.dim == 1:
            for x, i in enumerate(verts):
                for j in verts[x + 1:]:
                    if dist(i, j) > M:
                        missing.append((ids[i], ids[j]))
        reports.append(ObstructionReport(
            cycle=verts,
            cycle_ids=[ids[v] for v in verts],
            birth=iv.birth,
            death=iv.death,
            missing_links=missing,
            threshold_gap=iv.death - M,
            dim=iv.dim,
            edges=[s.vertices for s in chain],
        ))
    reports.sort(key=lambda r: (-r.persistence, r.dim, r.birth, r.cycle))
    return reports


def obstructions_json(reports: Sequence[ObstructionReport]) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2, ensure_ascii=False) + "\n"


def obstructions_table(reports: Sequence[ObstructionReport]) -> str:
    if not reports:
        return "no obstructions alive at this threshold\n"
    header = ("dim", "birth", "death", "persist", "gap", "cycle", "missing links")
    rows = []
    for r in reports:
        rows.append((
            str(r.dim), _fmt(r.birth), _fmt(r.death), _fmt(r.persistence), _fmt(r.threshold_gap),
            " ".join(r.cycle_ids),
            " ".join(f"{a}-{b}" for a, b in r.missing_links) or "-",
        ))
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append("representative cycles are one deterministic choice among homologous cycles")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StrengthSummary:
    full_simplex: bool
    missing_links: int
    min_threshold: float


def group_strength(m, members, M: float) -> StrengthSummary:
    """How close a group is to spanning a full simplex at threshold ``M``.

    ``min_threshold`` is the group's diameter: the smallest threshold at which
    every pair is linked.
    """
    a = as_array(m)
    verts = sorted(int(v) for v in members)
    if not verts:
        raise ValueError("group must have at least one member")
    sub = a[np.ix_(verts, verts)]
    iu = np.triu_indices(len(verts), 1)
    missing = int(np.count_nonzero(sub[iu] > M))
    return StrengthSummary(missing == 0, missing, simplex_diameter(a, verts))
