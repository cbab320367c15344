"""Multi-record documents.

Records are separated by blank lines.  A record may open with an
``ID: <identifier>`` line; records without one are numbered ``stmt-1``,
``stmt-2`` ... by position.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..model import Diagnostic, Severity, Span, Statement
from .parser import parse_expression
from .serialize import serialize

_ID_LINE = re.compile(r"ID:\s*(\S.*?)\s*$")


@dataclass(frozen=True)
class SourceRecord:
    id: str
    raw: str
    parsed: Optional[Statement]
    diagnostics: tuple[Diagnostic, ...] = field(default=())

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == Severity.ERROR)

    @property
    def ok(self) -> bool:
        return self.parsed is not None and not self.errors


def _blocks(raw: str) -> list[list[str]]:
    blocks: list[list[str]] = []
    current: list[str] = []
    for line in raw.replace("\r\n", "\n").replace("\r", "\n").split("\n"):
        if not line.strip():
            if current:
                blocks.append(current)
                current = []
            continue
        if line.lstrip().startswith("#"):
            continue
        current.append(line)
    if current:
        blocks.append(current)
    return blocks


def parse_document(raw: str) -> list[SourceRecord]:
    records: list[SourceRecord] = []
    seen: set[str] = set()
    for number, lines in enumerate(_blocks(raw), start=1):
        m = _ID_LINE.fullmatch(lines[0].strip())
        if m:
            rid, body = m.group(1), lines[1:]
        else:
            rid, body = f"stmt-{number}", lines
        text = " ".join(line.strip() for line in body)
        diags: list[Diagnostic] = []
        if rid in seen:
            diags.append(Diagnostic(Severity.ERROR, "DuplicateRecordId", f"record id {rid!r} repeated",
                                    statement_id=rid, span=Span(0, 1)))
        seen.add(rid)
        if not text:
            diags.append(Diagnostic(Severity.ERROR, "EmptyStatement", "record has no statement text",
                                    statement_id=rid, span=Span(0, 1)))
            records.append(SourceRecord(rid, text, None, tuple(diags)))
            continue
        parsed, parse_diags = parse_expression(text)
        diags.extend(d.with_id(rid) for d in parse_diags)
        records.append(SourceRecord(rid, text, parsed, tuple(diags)))
    return records


def serialize_document(records: Iterable[SourceRecord]) -> str:
    chunks = []
    for rec in records:
        body = serialize(rec.parsed) if rec.parsed is not None else rec.raw
        chunks.append(f"ID: {rec.id}\n{body}\n")
    return "\n".join(chunks)
