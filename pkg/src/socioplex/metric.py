"""Categorical component distances and the weighted research distance."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .agents import AgentRecord, AgentSet
from .errors import AgentIOError, InvalidWeights, ParseError

N_COMPONENTS = 5
SIMPLEX_TOL = 1e-12
PARSE_TOL = 1e-6
COMPONENT_NAMES = ("institution", "fields", "phd_institution", "collaboration", "citation")


@dataclass(frozen=True)
class Weights:
    """Nonnegative coefficients k1..k5 summing to one."""

    k: tuple[float, ...]

    def __post_init__(self):
        k = tuple(float(x) for x in self.k)
        object.__setattr__(self, "k", k)
        if len(k) != N_COMPONENTS:
            raise InvalidWeights(f"expected {N_COMPONENTS} weights, got {len(k)}")
        if any(not np.isfinite(x) or x < 0 for x in k):
            raise InvalidWeights(f"weights must be finite and nonnegative: {k}")
        if abs(sum(k) - 1.0) > SIMPLEX_TOL:
            raise InvalidWeights(f"weights must sum to 1 (got {sum(k)!r})")

    @classmethod
    def uniform(cls) -> "Weights":
        return cls((0.2,) * N_COMPONENTS)

    @classmethod
    def parse(cls, text: str) -> "Weights":
        """Parse ``"k1,k2,k3,k4,k5"``; renormalize when the sum is within 1e-6 of 1."""
        try:
            k = [float(t) for t in text.split(",")]
        except ValueError:
            raise InvalidWeights(f"cannot parse weights {text!r}") from None
        if len(k) != N_COMPONENTS:
            raise InvalidWeights(f"expected {N_COMPONENTS} comma-separated weights, got {len(k)}")
        if any(not np.isfinite(x) or x < 0 for x in k):
            raise InvalidWeights(f"weights must be finite and nonnegative: {text!r}")
        total = sum(k)
        if abs(total - 1.0) > PARSE_TOL:
            raise InvalidWeights(f"weights sum to {total!r}, not 1")
        return cls(tuple(x / total for x in k))

    def __iter__(self):
        return iter(self.k)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.k, dtype=float)

    def __str__(self) -> str:
        return ",".join(format(x, ".12g") for x in self.k)


def _norm(text: str) -> str:
    return text.strip().casefold()


def _linked(a: AgentRecord, b: AgentRecord, attr: str) -> bool:
    return b.id in getattr(a, attr) or a.id in getattr(b, attr)


def component_distances(a: AgentRecord, b: AgentRecord) -> tuple[int, ...]:
    """The five category distances (institution, fields, PhD school,
    collaboration, citation), each 0 for the same agent, 1 on a match and 2
    otherwise. Links count in either direction.
    """
    if a.id == b.id:
        return (0,) * N_COMPONENTS
    same_inst = bool(_norm(a.institution)) and _norm(a.institution) == _norm(b.institution)
    shared_field = bool({_norm(f) for f in a.fields} & {_norm(f) for f in b.fields} - {""})
    same_phd = bool(_norm(a.phd_institution)) and _norm(a.phd_institution) == _norm(b.phd_institution)
    matches = (same_inst, shared_field, same_phd,
               _linked(a, b, "collaborators"), _linked(a, b, "citations"))
    return tuple(1 if m else 2 for m in matches)


def r_distance(cv: Sequence[int], w: Weights) -> float:
    total = 0.0
    for d, k in zip(cv, w.k):
        total += d * k
    return total


def component_tensor(agents: AgentSet) -> np.ndarray:
    """Component distances for all pairs as an ``(5, n, n)`` int8 array."""
    n = len(agents)
    out = np.full((N_COMPONENTS, n, n), 2, dtype=np.int8)
    if n == 0:
        return out

    def category_eq(values):
        codes = {}
        arr = np.array([codes.setdefault(v, len(codes)) if v else -1 for v in values])
        return (arr[:, None] == arr[None, :]) & (arr[:, None] >= 0)

    out[0][category_eq([_norm(r.institution) for r in agents])] = 1
    out[2][category_eq([_norm(r.phd_institution) for r in agents])] = 1

    codes: dict[str, int] = {}
    for rec in agents:
        for f in rec.fields:
            if _norm(f):
                codes.setdefault(_norm(f), len(codes))
    member = np.zeros((n, max(len(codes), 1)), dtype=np.int32)
    for i, rec in enumerate(agents):
        for f in rec.fields:
            if _norm(f):
                member[i, codes[_norm(f)]] = 1
    out[1][(member @ member.T) > 0] = 1

    index = agents.index
    for layer, attr in ((3, "collaborators"), (4, "citations")):
        adj = np.zeros((n, n), dtype=bool)
        for i, rec in enumerate(agents):
            for ref in getattr(rec, attr):
                j = index.get(ref)
                if j is not None:
                    adj[i, j] = True
        adj |= adj.T
        out[layer][adj] = 1

    idx = np.arange(n)
    out[:, idx, idx] = 0
    return out


@dataclass
class DistanceMatrix:
    """Square dissimilarity matrix with agent ids labelling rows and columns."""

    entries: np.ndarray
    ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.size == 0:
            entries = entries.reshape(0, 0)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {entries.shape}")
        self.entries = entries
        if not self.ids:
            self.ids = [str(i) for i in range(entries.shape[0])]
        self.ids = [str(x) for x in self.ids]
        if len(self.ids) != entries.shape[0]:
            raise ValueError("ids length does not match matrix size")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __len__(self) -> int:
        return self.n

    def to_json(self) -> str:
        rows = ",\n    ".join(
            "[" + ", ".join(_num(x) for x in row) + "]" for row in self.entries
        )
        ids = json.dumps(self.ids, ensure_ascii=False)
        return f'{{\n  "ids": {ids},\n  "entries": [\n    {rows}\n  ]\n}}\n'

    @classmethod
    def from_json(cls, text: str) -> "DistanceMatrix":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
        if not isinstance(data, dict) or "entries" not in data:
            raise ParseError('distance matrix JSON must be an object with "entries"')
        try:
            return cls(np.array(data["entries"], dtype=float), list(data.get("ids") or []))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    def save(self, path) -> None:
        try:
            Path(path).write_text(self.to_json(), encoding="utf-8")
        except OSError as exc:
            raise AgentIOError(f"cannot write {path}: {exc.strerror or exc}") from exc

    @classmethod
    def load(cls, path) -> "DistanceMatrix":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise AgentIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
        return cls.from_json(text)


def _num(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def as_array(m) -> np.ndarray:
    if isinstance(m, DistanceMatrix):
        return m.entries
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {arr.shape}")
    return arr


def distance_matrix(agents: AgentSet, w: Weights) -> DistanceMatrix:
    comps = component_tensor(agents)
    entries = np.zeros((len(agents),) * 2)
    # same accumulation order as r_distance so both agree bit for bit
    for d, k in zip(comps, w.k):
        entries = entries + d * k
    return DistanceMatrix(entries, agents.ids)


@dataclass
class MetricReport:
    triangle_violations: list[tuple[int, int, int]] = field(default_factory=list)
    asymmetric_pairs: list[tuple[int, int]] = field(default_factory=list)
    nonzero_diagonal: list[int] = field(default_factory=list)
    negative_entries: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.triangle_violations or self.asymmetric_pairs
                    or self.nonzero_diagonal or self.negative_entries)

    def summary(self) -> str:
        return (f"{len(self.triangle_violations)} triangle violations, "
                f"{len(self.asymmetric_pairs)} asymmetric pairs, "
                f"{len(self.nonzero_diagonal)} nonzero diagonal entries, "
                f"{len(self.negative_entries)} negative entries")


def verify_metric(m, tolerance: float = SIMPLEX_TOL) -> MetricReport:
    """Check the metric axioms exhaustively.

    Triangle violations are triples ``(i, j, k)`` with
    ``m[i, k] > m[i, j] + m[j, k] + tolerance``.
    """
    a = as_array(m)
    report = MetricReport()
    n = a.shape[0]
    report.nonzero_diagonal = [int(i) for i in np.flatnonzero(np.abs(np.diag(a)) > tolerance)]
    iu, ju = np.nonzero(np.triu(np.abs(a - a.T) > tolerance, 1))
    report.asymmetric_pairs = list(zip(iu.tolist(), ju.tolist()))
    ineg, jneg = np.nonzero(a < -tolerance)
    report.negative_entries = list(zip(ineg.tolist(), jneg.tolist()))
    triples = []
    for j in range(n):
        bad = a > a[:, j][:, None] + a[j, :][None, :] + tolerance
        ii, kk = np.nonzero(bad)
        triples.extend((int(i), j, int(k)) for i, k in zip(ii, kk))
    report.triangle_violations = sorted(triples)
    return report
