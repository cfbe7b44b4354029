"""Agent profile records: data model, CSV/JSON ingestion, validation."""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import AgentIOError, DanglingReference, DuplicateId, ParseError

CSV_COLUMNS = (
    "id",
    "name",
    "institution",
    "phd_institution",
    "field1",
    "field2",
    "field3",
    "collaborators",
    "citations",
)
MAX_FIELDS = 3
LIST_SEP = ";"


@dataclass(frozen=True)
class AgentRecord:
    id: str
    name: str = ""
    institution: str = ""
    phd_institution: str = ""
    fields: tuple[str, ...] = ()
    collaborators: frozenset[str] = frozenset()
    citations: frozenset[str] = frozenset()

    def __post_init__(self):
        # accept any iterables from callers, store canonical immutable types
        object.__setattr__(self, "fields", tuple(self.fields))
        object.__setattr__(self, "collaborators", frozenset(self.collaborators))
        object.__setattr__(self, "citations", frozenset(self.citations))


class AgentSet(Sequence[AgentRecord]):
    """Ordered, immutable collection of agents with an id -> position index.

    Positions are the row/column order of every distance matrix built from
    the set.
    """

    def __init__(self, records: Iterable[AgentRecord] = ()):
        self._records = tuple(records)
        index = {}
        for pos, rec in enumerate(self._records):
            if rec.id in index:
                raise DuplicateId(rec.id)
            index[rec.id] = pos
        self._index = index

    @property
    def index(self) -> dict[str, int]:
        return dict(self._index)

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self._records]

    def position(self, agent_id: str) -> int:
        return self._index[agent_id]

    def __contains__(self, agent_id) -> bool:
        if isinstance(agent_id, AgentRecord):
            return agent_id.id in self._index and self[self._index[agent_id.id]] == agent_id
        return agent_id in self._index

    def __getitem__(self, i):
        if isinstance(i, slice):
            return AgentSet(self._records[i])
        return self._records[i]

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[AgentRecord]:
        return iter(self._records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AgentSet):
            return NotImplemented
        return self._records == other._records

    def __repr__(self) -> str:
        return f"AgentSet(n={len(self)})"

    def dangling_references(self) -> list[tuple[str, str]]:
        """(agent id, referenced id) for every reference outside the set."""
        out = []
        for rec in self._records:
            for ref in sorted(rec.collaborators | rec.citations):
                if ref not in self._index and ref != rec.id:
                    out.append((rec.id, ref))
        return out


@dataclass(frozen=True)
class Problem:
    agent_id: str
    reason: str


@dataclass
class ValidationReport:
    problems: list[Problem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __len__(self) -> int:
        return len(self.problems)

    def __iter__(self):
        return iter(self.problems)

    def reasons(self, agent_id: str) -> list[str]:
        return [p.reason for p in self.problems if p.agent_id == agent_id]

    def format(self) -> str:
        return "\n".join(f"{p.agent_id}: {p.reason}" for p in self.problems)


def validate(agents: AgentSet) -> ValidationReport:
    """Collect every invariant violation in ``agents``; never raises."""
    report = ValidationReport()
    ids = set(agents.ids)
    for rec in agents:
        add = lambda reason: report.problems.append(Problem(rec.id, reason))  # noqa: E731
        if not rec.id or not rec.id.strip():
            add("id empty")
        if not rec.fields:
            add("fields empty")
        if len(rec.fields) > MAX_FIELDS:
            add(f"more than {MAX_FIELDS} fields")
        if any(not f.strip() for f in rec.fields):
            add("empty field code")
        normalized = [f.strip().casefold() for f in rec.fields]
        if len(set(normalized)) != len(normalized):
            add("duplicate field code")
        if rec.id in rec.collaborators or rec.id in rec.citations:
            add("self-reference")
        for ref in sorted((rec.collaborators | rec.citations) - ids - {rec.id}):
            add(f"dangling reference {ref!r}")
    return report


def _split_ids(text: str) -> frozenset[str]:
    return frozenset(t.strip() for t in text.split(LIST_SEP) if t.strip())


def _warn_dangling(agents: AgentSet) -> None:
    for agent_id, ref in agents.dangling_references():
        warnings.warn(
            f"agent {agent_id!r} references unknown id {ref!r}", DanglingReference, stacklevel=3
        )


def _read_csv(text: str) -> list[AgentRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("missing header", line=1) from None
    header = [h.strip() for h in header]
    if tuple(header) != CSV_COLUMNS:
        raise ParseError(f"expected header {','.join(CSV_COLUMNS)}", line=1)
    records = []
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        line = reader.line_num
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} columns, got {len(row)}", line=line)
        values = dict(zip(CSV_COLUMNS, row))
        agent_id = values["id"].strip()
        if not agent_id:
            raise ParseError("empty id", line=line)
        records.append(
            AgentRecord(
                id=agent_id,
                name=values["name"],
                institution=values["institution"],
                phd_institution=values["phd_institution"],
                fields=[values[k].strip() for k in ("field1", "field2", "field3") if values[k].strip()],
                collaborators=_split_ids(values["collaborators"]),
                citations=_split_ids(values["citations"]),
            )
        )
    return records


def _id_list(value, key, pos):
    if value is None:
        return frozenset()
    if isinstance(value, str):
        return _split_ids(value)
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(f"record {pos}: {key!r} must be a list of ids", line=None)
    return frozenset(v.strip() for v in value if v.strip())


def _read_json(text: str) -> list[AgentRecord]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(data, list):
        raise ParseError("top-level value must be an array of agent objects", line=1)
    records = []
    for pos, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise ParseError(f"record {pos} is not an object")
        agent_id = str(obj.get("id", "")).strip()
        if not agent_id:
            raise ParseError(f"record {pos}: empty id")
        if "fields" in obj:
            fields = obj["fields"]
            if not isinstance(fields, list):
                raise ParseError(f"record {pos}: 'fields' must be a list")
        else:
            fields = [obj.get(k) or "" for k in ("field1", "field2", "field3")]
        records.append(
            AgentRecord(
                id=agent_id,
                name=str(obj.get("name", "")),
                institution=str(obj.get("institution", "")),
                phd_institution=str(obj.get("phd_institution", "")),
                fields=[str(f).strip() for f in fields if str(f).strip()],
                collaborators=_id_list(obj.get("collaborators"), "collaborators", pos),
                citations=_id_list(obj.get("citations"), "citations", pos),
            )
        )
    return records


def _infer_format(path: Path, format: str | None) -> str:
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt not in ("csv", "json"):
        raise ParseError(f"unknown agent file format {fmt!r} (use csv or json)")
    return fmt


def load_agents(path, format: str | None = None) -> AgentSet:
    """Read an agent file, preserving row order.

    References to ids outside the file are kept and reported with a
    :class:`DanglingReference` warning.
    """
    path = Path(path)
    fmt = _infer_format(path, format)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise AgentIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    records = _read_csv(text) if fmt == "csv" else _read_json(text)
    agents = AgentSet(records)
    _warn_dangling(agents)
    return agents


def _check_writable_ids(agents: AgentSet) -> None:
    for rec in agents:
        for token in (rec.id, *rec.collaborators, *rec.citations):
            if LIST_SEP in token or token != token.strip():
                raise ParseError(f"id {token!r} cannot be serialized (contains {LIST_SEP!r} or padding)")


def _csv_text(agents: AgentSet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in agents:
        if len(rec.fields) > MAX_FIELDS:
            raise ParseError(f"agent {rec.id!r} has more than {MAX_FIELDS} fields")
        fields = list(rec.fields) + [""] * (MAX_FIELDS - len(rec.fields))
        writer.writerow(
            [rec.id, rec.name, rec.institution, rec.phd_institution, *fields,
             LIST_SEP.join(sorted(rec.collaborators)), LIST_SEP.join(sorted(rec.citations))]
        )
    return buf.getvalue()


def _json_text(agents: AgentSet) -> str:
    out = []
    for rec in agents:
        obj = {"id": rec.id, "name": rec.name, "institution": rec.institution,
               "phd_institution": rec.phd_institution}
        for k in range(MAX_FIELDS):
            obj[f"field{k + 1}"] = rec.fields[k] if k < len(rec.fields) else ""
        if len(rec.fields) > MAX_FIELDS:
            obj["fields"] = list(rec.fields)
        obj["collaborators"] = sorted(rec.collaborators)
        obj["citations"] = sorted(rec.citations)
        out.append(obj)
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


def save_agents(agents: AgentSet, path, format: str | None = None) -> None:
    path = Path(path)
    fmt = _infer_format(path, format)
    _check_writable_ids(agents)
    text = _csv_text(agents) if fmt == "csv" else _json_text(agents)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise AgentIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
