"""Canonical shorthand output and plain-prose rendering."""

from __future__ import annotations

from typing import Callable, Iterable, Optional

from ..model import Atomic, Combination, Component, Negation, OrElse, PropertyNode, Statement

_GLUE = ",;:.!?"
OPERATOR_WORDS = {"AND": "and", "OR": "or", "XOR": "or"}


def _join(parts: Iterable[str]) -> str:
    out = ""
    for part in parts:
        if not part:
            continue
        if out and part[0] not in _GLUE:
            out += " "
        out += part
    return out


def _prefixed(filler: str, body: str) -> str:
    return f"{filler} {body}" if filler else body


def annotation_text(code: str, alt: Optional[str] = None, gid: Optional[str] = None,
                    path: Optional[tuple[int, ...]] = None, negated: bool = False,
                    annotations=()) -> str:
    out = code + (f"/{alt}" if alt else "") + (f"({gid})" if gid else "")
    if path is not None:
        out += ",prop" if not path else "".join(f",prop{i}" for i in path)
    if negated:
        out += ",NOT"
    for ann in annotations:
        out += f";{ann}"
    return f"({out})"


# -- shorthand ----------------------------------------------------------------


def _body(text: str, nested: Optional[Statement], inferred: bool) -> str:
    if nested is not None:
        return "{ " + serialize(nested) + " }"
    if inferred:
        return f"[{text}]"
    return text


def _property_items(node: PropertyNode, code: str, gid: Optional[str]) -> list[tuple[int, str]]:
    ann = annotation_text(code, gid=gid, path=node.index_path, annotations=node.annotations)
    items = [(node.position, _prefixed(node.filler, f"{_body(node.text, node.nested, node.inferred)} {ann}"))]
    for child in node.children:
        items.extend(_property_items(child, code, gid))
    return items


def _lead(items: list[tuple[int, str]], word: str) -> None:
    """Prefix the earliest fragment of a member's subtree with an operator."""
    k = min(range(len(items)), key=lambda j: items[j][0])
    pos, text = items[k]
    items[k] = (pos, f"{word} {text}")


def _is_bare(members: tuple[PropertyNode, ...], i: int) -> bool:
    m = members[i]
    if m.group_id or m.children or m.nested is not None or m.inferred or m.annotations or m.filler:
        return False
    if i > 0 and m.sibling_operator is None:
        return False
    if i + 1 < len(members) and members[i + 1].sibling_operator is None:
        return False
    return True


def _group_text(comp: Component) -> str:
    members = comp.members
    items: list[tuple[int, str]] = []
    for i, member in enumerate(members):
        if _is_bare(members, i):
            text = member.text
        else:
            ann = annotation_text(comp.code, gid=member.group_id, annotations=member.annotations)
            text = _prefixed(member.filler, f"{_body(member.text, member.nested, member.inferred)} {ann}")
        sub = [(member.position, text)]
        for child in member.children:
            sub.extend(_property_items(child, comp.code, member.group_id))
        if i > 0 and member.sibling_operator:
            _lead(sub, f"[{member.sibling_operator}]")
        items.extend(sub)
    inner = _join(t for _, t in sorted(items, key=lambda it: it[0]))
    ann = annotation_text(comp.code, comp.alt_code, negated=comp.negated, annotations=comp.annotations)
    return _prefixed(comp.filler, f"( {inner} ) {ann}")


def _atomic_text(atomic: Atomic) -> str:
    items: list[tuple[int, str]] = []
    for comp in atomic.explicit:
        if comp.grouped:
            items.append((comp.position, _group_text(comp)))
            props = comp.shared_properties
        else:
            ann = annotation_text(comp.code, comp.alt_code, negated=comp.negated,
                                  annotations=comp.annotations)
            body = _body(comp.text, comp.nested, comp.inferred)
            items.append((comp.position, _prefixed(comp.filler, f"{body} {ann}")))
            props = comp.properties
        for prop in props:
            items.extend(_property_items(prop, comp.code, None))
    parts = [t for _, t in sorted(items, key=lambda it: it[0])]
    return _join(parts + [atomic.trailing])


def _meta(statement: Statement) -> str:
    parts = []
    if statement.governance:
        parts.append(f"governance:{statement.governance}")
    if statement.consequence_type:
        parts.append(f"consequence:{statement.consequence_type}")
    return ";".join(parts)


def _wrapped(statement: Statement, parens_for: tuple[type, ...]) -> str:
    if _meta(statement) or not isinstance(statement, parens_for):
        return serialize(statement)
    return f"( {serialize(statement)} )"


def serialize(statement: Statement) -> str:
    """Render a statement tree as canonical shorthand."""
    if isinstance(statement, Atomic):
        body = _atomic_text(statement)
    elif isinstance(statement, Combination):
        body = f" [{statement.operator}] ".join(
            _wrapped(o, (Combination, OrElse)) for o in statement.operands
        )
    elif isinstance(statement, Negation):
        body = f"[NOT] ( {serialize(statement.operand)} )"
    elif isinstance(statement, OrElse):
        body = (
            f"{_wrapped(statement.monitored, (Combination, OrElse))} OR ELSE "
            f"{_wrapped(statement.consequential, (Combination,))}"
        )
    else:
        raise TypeError(f"not a statement: {statement!r}")
    meta = _meta(statement)
    return f"( {body} ) (;{meta})" if meta else body


# -- prose ---------------------------------------------------------------------


def _plain_property(node: PropertyNode) -> list[tuple[int, str]]:
    items = [(node.position, _prefixed(node.filler, _plain_body(node.text, node.nested, node.inferred)))]
    for child in node.children:
        items.extend(_plain_property(child))
    return items


def _plain_body(text: str, nested: Optional[Statement], inferred: bool) -> str:
    if nested is not None:
        return plain_text(nested)
    return f"[{text}]" if inferred else text


def plain_group(comp: Component, word: Callable[[str], str] = OPERATOR_WORDS.__getitem__) -> str:
    """Prose for a compound group: members joined by their operator words."""
    items: list[tuple[int, str]] = []
    for i, member in enumerate(comp.members):
        text = _prefixed(member.filler, _plain_body(member.text, member.nested, member.inferred))
        sub = [(member.position, text)]
        for child in member.children:
            sub.extend(_plain_property(child))
        if i > 0 and member.sibling_operator:
            _lead(sub, word(member.sibling_operator))
        items.extend(sub)
    return _join(t for _, t in sorted(items, key=lambda it: it[0]))


def plain_items(comp: Component) -> list[tuple[int, str]]:
    """Positioned prose fragments of one component (head, group, properties)."""
    if comp.grouped:
        items = [(comp.position, _prefixed(comp.filler, plain_group(comp)))]
        props = comp.shared_properties
    else:
        items = [(comp.position, _prefixed(comp.filler, _plain_body(comp.text, comp.nested, comp.inferred)))]
        props = comp.properties
    for prop in props:
        items.extend(_plain_property(prop))
    return items


def plain_text(statement: Statement) -> str:
    """Render a statement as prose with all coding removed."""
    if isinstance(statement, Atomic):
        items: list[tuple[int, str]] = []
        for comp in statement.explicit:
            items.extend(plain_items(comp))
        return _join([t for _, t in sorted(items, key=lambda it: it[0])] + [statement.trailing])
    if isinstance(statement, Combination):
        return f" {OPERATOR_WORDS[statement.operator]} ".join(plain_text(o) for o in statement.operands)
    if isinstance(statement, Negation):
        return f"not {plain_text(statement.operand)}"
    if isinstance(statement, OrElse):
        return f"{plain_text(statement.monitored)} or else {plain_text(statement.consequential)}"
    raise TypeError(f"not a statement: {statement!r}")
