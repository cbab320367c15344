"""Lossless JSON export (schema ``igkit-1``) and re-import."""

from __future__ import annotations

import json
from typing import Any, Iterable

from ..errors import InterchangeError
from ..model import (
    Atomic,
    Combination,
    Component,
    Diagnostic,
    Negation,
    OrElse,
    PropertyNode,
    SemanticAnnotation,
    Severity,
    Span,
    Statement,
)
from ..notation.document import SourceRecord

SCHEMA = "igkit-1"


def _ann(a: SemanticAnnotation) -> dict:
    return {"prefix": a.prefix, "label": a.label, "value": a.value}


def _prop(p: PropertyNode) -> dict:
    return {
        "text": p.text,
        "dependence": p.dependence,
        "indexPath": list(p.index_path),
        "groupId": p.group_id,
        "siblingOperator": p.sibling_operator,
        "inferred": p.inferred,
        "filler": p.filler,
        "position": p.position,
        "annotations": [_ann(a) for a in p.annotations],
        "children": [_prop(c) for c in p.children],
        "nested": statement_to_dict(p.nested) if p.nested is not None else None,
    }


def _comp(c: Component) -> dict:
    return {
        "code": c.code,
        "altCode": c.alt_code,
        "text": c.text,
        "implied": c.implied,
        "inferred": c.inferred,
        "negated": c.negated,
        "grouped": c.grouped,
        "filler": c.filler,
        "position": c.position,
        "annotations": [_ann(a) for a in c.annotations],
        "properties": [_prop(p) for p in c.properties],
        "nested": statement_to_dict(c.nested) if c.nested is not None else None,
    }


def statement_to_dict(s: Statement) -> dict:
    if isinstance(s, Atomic):
        out: dict[str, Any] = {"type": "atomic", "components": [_comp(c) for c in s.components],
                               "trailing": s.trailing}
    elif isinstance(s, Combination):
        out = {"type": "combination", "operator": s.operator,
               "operands": [statement_to_dict(o) for o in s.operands]}
    elif isinstance(s, Negation):
        out = {"type": "negation", "operand": statement_to_dict(s.operand)}
    elif isinstance(s, OrElse):
        out = {"type": "orElse", "monitored": statement_to_dict(s.monitored),
               "consequential": statement_to_dict(s.consequential)}
    else:
        raise TypeError(f"not a statement: {s!r}")
    out["governance"] = s.governance
    out["consequenceType"] = s.consequence_type
    return out


def _get(d: dict, key: str):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise InterchangeError(f"missing field {key!r}") from None


def _ann_in(d: dict) -> SemanticAnnotation:
    return SemanticAnnotation(_get(d, "prefix"), _get(d, "label"), _get(d, "value"))


def _nested_in(d):
    return statement_from_dict(d) if d is not None else None


def _prop_in(d: dict) -> PropertyNode:
    return PropertyNode(
        text=_get(d, "text"), dependence=_get(d, "dependence"),
        index_path=tuple(_get(d, "indexPath")), group_id=_get(d, "groupId"),
        sibling_operator=_get(d, "siblingOperator"), inferred=_get(d, "inferred"),
        filler=_get(d, "filler"), position=_get(d, "position"),
        annotations=tuple(_ann_in(a) for a in _get(d, "annotations")),
        children=tuple(_prop_in(c) for c in _get(d, "children")),
        nested=_nested_in(_get(d, "nested")),
    )


def _comp_in(d: dict) -> Component:
    return Component(
        code=_get(d, "code"), alt_code=_get(d, "altCode"), text=_get(d, "text"),
        implied=_get(d, "implied"), inferred=_get(d, "inferred"), negated=_get(d, "negated"),
        grouped=_get(d, "grouped"), filler=_get(d, "filler"), position=_get(d, "position"),
        annotations=tuple(_ann_in(a) for a in _get(d, "annotations")),
        properties=tuple(_prop_in(p) for p in _get(d, "properties")),
        nested=_nested_in(_get(d, "nested")),
    )


def statement_from_dict(d: dict) -> Statement:
    meta = {"governance": _get(d, "governance"), "consequence_type": _get(d, "consequenceType")}
    kind = _get(d, "type")
    try:
        if kind == "atomic":
            return Atomic(components=tuple(_comp_in(c) for c in _get(d, "components")),
                          trailing=_get(d, "trailing"), **meta)
        if kind == "combination":
            return Combination(operator=_get(d, "operator"),
                               operands=tuple(statement_from_dict(o) for o in _get(d, "operands")), **meta)
        if kind == "negation":
            return Negation(operand=statement_from_dict(_get(d, "operand")), **meta)
        if kind == "orElse":
            return OrElse(monitored=statement_from_dict(_get(d, "monitored")),
                          consequential=statement_from_dict(_get(d, "consequential")), **meta)
    except ValueError as exc:
        raise InterchangeError(str(exc)) from exc
    raise InterchangeError(f"unknown node type {kind!r}")


def _diag(d: Diagnostic) -> dict:
    return {
        "severity": d.severity.value, "code": d.code, "message": d.message,
        "statementId": d.statement_id,
        "span": {"offset": d.span.offset, "length": d.span.length} if d.span else None,
    }


def _diag_in(d: dict) -> Diagnostic:
    span = _get(d, "span")
    return Diagnostic(
        Severity(_get(d, "severity")), _get(d, "code"), _get(d, "message"), _get(d, "statementId"),
        Span(_get(span, "offset"), _get(span, "length")) if span else None,
    )


def export_records(records: Iterable[SourceRecord]) -> str:
    doc = {
        "schema": SCHEMA,
        "records": [
            {
                "id": r.id,
                "raw": r.raw,
                "statement": statement_to_dict(r.parsed) if r.parsed is not None else None,
                "diagnostics": [_diag(d) for d in r.diagnostics],
            }
            for r in records
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def import_records(text: str) -> list[SourceRecord]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise InterchangeError(f"expected schema {SCHEMA!r}")
    out = []
    for r in _get(doc, "records"):
        stmt = _get(r, "statement")
        out.append(SourceRecord(
            id=_get(r, "id"), raw=_get(r, "raw"),
            parsed=statement_from_dict(stmt) if stmt is not None else None,
            diagnostics=tuple(_diag_in(d) for d in _get(r, "diagnostics")),
        ))
    return out
