"""Recursive-descent parser for coded statements.

Expression grammar (loosest binding first)::

    expr    := combo ("OR ELSE" combo)*          right-nested
    combo   := unary ("[OP]" unary)*             one operator per level
    unary   := "[NOT]" unary | primary
    primary := "(" expr ")" [meta] | atomic

An atomic statement is a run of annotated spans, compound groups
``( ... ) (CODE)``, nested statements ``{ ... } (CODE)`` and inferred
content ``[text] (CODE)``.  Property annotations (``prop``/``propN``) attach
to the nearest head component of the same code; group ids ``(a)`` bind
properties to a specific member of a compound group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional

from ..model import (
    CONSEQUENCE_TYPES,
    GOVERNANCE_TYPES,
    NESTABLE_CODES,
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
from ..taxonomy import BUILTIN_CTX_CODES, BUILTIN_PREFIXES
from . import lexer as lx
from .lexer import Token

_PROP = re.compile(r"prop(\d*)")
_COLON = re.compile(r"([A-Za-z][\w-]*):(\S+)")
_EQUALS = re.compile(r"([A-Za-z][\w-]*)=(\S+)")
_PUNCT = re.compile(r"([,;:.!?]+)\s*")


def normalize_ws(text: str) -> str:
    return " ".join(text.split())


def split_filler(text: str) -> tuple[str, str]:
    """Split leading punctuation off a span: ``", certified"`` -> ``(",", "certified")``."""
    text = normalize_ws(text)
    m = _PUNCT.match(text)
    if m is None:
        return "", text
    return m.group(1), text[m.end():]


@dataclass
class Annotation:
    """Parsed form of one ``(...)`` annotation body."""

    code: Optional[str]
    alt: Optional[str] = None
    gid: Optional[str] = None
    path: Optional[tuple[int, ...]] = None
    negated: bool = False
    annotations: tuple[SemanticAnnotation, ...] = ()
    governance: Optional[str] = None
    consequence: Optional[str] = None
    span: Optional[Span] = None

    @property
    def is_property(self) -> bool:
        return self.path is not None


def parse_annotation(body: str, span: Optional[Span] = None) -> tuple[Annotation, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    m = lx.ANNOT_BODY.fullmatch(body)
    if m is None:
        raise ValueError(f"not an annotation body: {body!r}")

    def err(code, msg, severity=Severity.ERROR):
        diags.append(Diagnostic(severity, code, msg, span=span))

    ann = Annotation(code=None, span=span)
    if m.group("code"):
        parts = m.group("code").split("/")
        ann.code = parts[0]
        if len(parts) > 1:
            ann.alt = parts[1]
        ann.gid = m.group("gid")
        rest = m.group("rest") or ""
    else:
        rest = m.group("meta") or ""
    props: list[Optional[int]] = []
    semantic: list[SemanticAnnotation] = []
    for item in (s.strip() for s in re.split(r"[,;]", rest)):
        if not item:
            continue
        pm = _PROP.fullmatch(item)
        if pm:
            props.append(int(pm.group(1)) if pm.group(1) else None)
            continue
        if item == "NOT":
            ann.negated = True
            continue
        cm = _COLON.fullmatch(item)
        em = _EQUALS.fullmatch(item)
        if cm or em:
            key, val = (cm or em).groups()
            if key == "governance":
                if val not in GOVERNANCE_TYPES:
                    err("UnknownTaxonomyLabel", f"unknown governance type {val!r}")
                elif ann.code is None:
                    ann.governance = val
                else:
                    semantic.append(SemanticAnnotation(key, val))
            elif key == "consequence":
                if val not in CONSEQUENCE_TYPES:
                    err("UnknownTaxonomyLabel", f"unknown consequence type {val!r}")
                elif ann.code is None:
                    ann.consequence = val
                else:
                    semantic.append(SemanticAnnotation(key, val))
            elif key == "polref":
                semantic.append(SemanticAnnotation("polref", "", val))
            elif cm or key in BUILTIN_PREFIXES:
                semantic.append(SemanticAnnotation(key, val))
            else:
                semantic.append(SemanticAnnotation("custom", key, val))
            continue
        if item in BUILTIN_CTX_CODES:
            semantic.append(SemanticAnnotation("ctx", item))
            continue
        if item in ("polref", "polref="):
            # kept so the validator can report the missing reference
            semantic.append(SemanticAnnotation("polref", "", None))
            continue
        err("UnknownModifier", f"unrecognised annotation item {item!r}")
    if props:
        if len(props) == 1 and props[0] is None:
            ann.path = ()
        elif all(p is not None and p > 0 for p in props):
            ann.path = tuple(props)  # type: ignore[arg-type]
        else:
            err("InvalidPropertyChain", "property chains must index every level (prop1,prop2,...)")
            ann.path = tuple(p or 1 for p in props)
    ann.annotations = tuple(semantic)
    if ann.code is None and (ann.annotations or ann.path is not None or ann.negated):
        err("UnknownCode", "annotation without a component code")
    return ann, diags


# -- pieces ------------------------------------------------------------------


@dataclass
class _Piece:
    kind: str  # span | nested | inferred | group
    filler: str
    text: str
    annot: Annotation
    nested: Optional[Statement] = None
    segments: list = field(default_factory=list)  # group: (operator, pieces, tail)


@dataclass
class _Node:
    code: str
    text: str
    position: int
    annot: Annotation
    filler: str = ""
    nested: Optional[Statement] = None
    inferred: bool = False
    independent: bool = False
    gid: Optional[str] = None
    operator: Optional[str] = None
    kids: list = field(default_factory=list)

    def path(self) -> tuple[int, ...]:
        return self.annot.path or ()

    def build(self) -> PropertyNode:
        return PropertyNode(
            text=self.text,
            dependence="independent" if self.independent else "dependent",
            index_path=() if self.independent else self.path(),
            group_id=self.gid,
            sibling_operator=self.operator,
            nested=self.nested,
            annotations=self.annot.annotations,
            children=tuple(k.build() for k in sorted(self.kids, key=lambda k: k.position)),
            inferred=self.inferred,
            filler=self.filler,
            position=self.position,
        )


@dataclass
class _Comp:
    code: str
    position: int
    annot: Annotation
    text: str = ""
    filler: str = ""
    nested: Optional[Statement] = None
    inferred: bool = False
    grouped: bool = False
    kids: list = field(default_factory=list)

    def build(self) -> Component:
        return Component(
            code=self.code,
            text=self.text,
            inferred=self.inferred,
            properties=tuple(k.build() for k in sorted(self.kids, key=lambda k: k.position)),
            nested=self.nested,
            annotations=self.annot.annotations,
            alt_code=self.annot.alt,
            negated=self.annot.negated,
            grouped=self.grouped,
            filler=self.filler,
            position=self.position,
        )


class _Parser:
    def __init__(self, tokens: list[Token], diags: list[Diagnostic]):
        self.tokens = tokens
        self.i = 0
        self.diags = diags

    # token helpers -----------------------------------------------------------

    def peek(self, k: int = 0) -> Optional[Token]:
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, *kinds: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, code: str, message: str, tok: Optional[Token] = None, severity=Severity.ERROR):
        span = tok.span if tok is not None else None
        self.diags.append(Diagnostic(severity, code, message, span=span))

    def annotation(self, tok: Token) -> Annotation:
        ann, diags = parse_annotation(tok.value, tok.span)
        self.diags.extend(diags)
        return ann

    def _paren_close(self, start: int) -> Optional[int]:
        depth = 0
        for j in range(start, len(self.tokens)):
            kind = self.tokens[j].kind
            if kind == lx.LPAREN:
                depth += 1
            elif kind == lx.RPAREN:
                depth -= 1
                if depth == 0:
                    return j
        return None

    def _group_ahead(self) -> bool:
        close = self._paren_close(self.i)
        if close is None or close + 1 >= len(self.tokens):
            return False
        after = self.tokens[close + 1]
        if after.kind == lx.TEXT and close + 2 < len(self.tokens):
            # "( a [AND] b ) text (I)": a group whose annotation is separated by filler
            inner = self.tokens[self.i + 1:close]
            after = self.tokens[close + 2]
            if not any(t.kind == lx.OP for t in inner):
                return False
        return after.kind == lx.ANNOT and not after.value.lstrip().startswith(";")

    # expressions -------------------------------------------------------------

    def expr(self) -> Optional[Statement]:
        if self.at(lx.ORELSE):
            self.error("DanglingOrElse", "OR ELSE without a monitored statement", self.take())
        left = self.combo()
        if not self.at(lx.ORELSE):
            return left
        tok = self.take()
        if self.peek() is None or self.at(lx.RPAREN, lx.RBRACE, lx.ORELSE):
            self.error("DanglingOrElse", "OR ELSE without a consequential statement", tok)
            return left
        right = self.expr()
        if left is None or right is None:
            if left is None:
                self.error("DanglingOrElse", "OR ELSE without a monitored statement", tok)
            return left or right
        return OrElse(monitored=left, consequential=right)

    def combo(self) -> Optional[Statement]:
        first = self.unary()
        operands = [first] if first is not None else []
        op: Optional[str] = None
        while self.at(lx.OP):
            tok = self.take()
            if op is not None and tok.value != op:
                self.error(
                    "MixedOperatorsWithoutParens",
                    f"[{op}] and [{tok.value}] mixed without parentheses",
                    tok,
                )
                if len(operands) > 1:
                    operands = [Combination(operator=op, operands=tuple(operands))]
            op = tok.value
            nxt = self.unary()
            if nxt is None:
                self.error("ExpectedStatement", f"statement expected after [{tok.value}]", tok)
            else:
                operands.append(nxt)
        if not operands:
            return None
        if len(operands) == 1:
            return operands[0]
        return Combination(operator=op or "AND", operands=tuple(operands))

    def unary(self) -> Optional[Statement]:
        if self.at(lx.NOT):
            tok = self.take()
            operand = self.unary()
            if operand is None:
                self.error("ExpectedStatement", "statement expected after [NOT]", tok)
                return None
            return Negation(operand=operand)
        return self.primary()

    def primary(self) -> Optional[Statement]:
        if self.at(lx.LPAREN) and not self._group_ahead():
            open_tok = self.take()
            inner = self.expr()
            if self.at(lx.RPAREN):
                self.take()
            else:
                self.error("UnbalancedDelimiter", "expected ')'", open_tok)
            if self.at(lx.ANNOT) and self.peek().value.lstrip().startswith(";"):
                ann = self.annotation(self.take())
                if inner is not None:
                    inner = _with_meta(inner, ann)
            return inner
        if self.at(lx.TEXT, lx.ANNOT, lx.LPAREN, lx.LBRACE, lx.INFERRED):
            return self.atomic()
        tok = self.peek()
        if tok is not None:
            self.error("ExpectedStatement", f"unexpected {tok.value!r}", tok)
        return None

    # atomic statements -------------------------------------------------------

    def atomic(self) -> Atomic:
        meta: list[Annotation] = []
        pieces, tail = self.pieces(in_group=False, meta=meta)
        if not pieces:
            self.diags.append(Diagnostic(
                Severity.WARNING, "NoAnnotations", "statement text carries no component annotations"))
        comps = _Assembler(self.diags).statement(pieces)
        stmt = Atomic(components=tuple(comps), trailing=normalize_ws(tail))
        for ann in meta:
            stmt = _with_meta(stmt, ann)
        return stmt

    def pieces(self, in_group: bool, meta: Optional[list] = None) -> tuple[list[_Piece], str]:
        pieces: list[_Piece] = []
        pending = ""
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == lx.TEXT:
                pending = f"{pending} {tok.value}" if pending else tok.value
                self.take()
            elif tok.kind == lx.ANNOT:
                self.take()
                ann = self.annotation(tok)
                if ann.code is None:
                    if ann.governance or ann.consequence:
                        if meta is None:
                            self.error("MisplacedAnnotation",
                                       "statement metadata inside a compound group", tok)
                        else:
                            meta.append(ann)
                    elif not ann.annotations:
                        self.error("UnknownCode", "annotation without a component code", tok)
                    continue
                filler, text = split_filler(pending)
                pending = ""
                if not text:
                    self.error("EmptyAnnotation", f"annotation ({tok.value}) has no text span", tok)
                    continue
                pieces.append(_Piece("span", filler, text, ann))
            elif tok.kind == lx.LBRACE:
                open_tok = self.take()
                inner = self.expr()
                if self.at(lx.RBRACE):
                    self.take()
                else:
                    self.error("UnbalancedDelimiter", "expected '}'", open_tok)
                ann = self._required_annotation(open_tok, "nested statement")
                if ann is None or inner is None:
                    continue
                pieces.append(_Piece("nested", normalize_ws(pending), "", ann, nested=inner))
                pending = ""
            elif tok.kind == lx.INFERRED:
                self.take()
                ann = self._required_annotation(tok, "inferred content")
                if ann is None:
                    continue
                pieces.append(_Piece("inferred", normalize_ws(pending), normalize_ws(tok.value), ann))
                pending = ""
            elif tok.kind == lx.LPAREN and not in_group and self._group_ahead():
                open_tok = self.take()
                segments = []
                op: Optional[str] = None
                while True:
                    seg, seg_tail = self.pieces(in_group=True)
                    segments.append((op, seg, seg_tail))
                    if self.at(lx.OP):
                        op = self.take().value
                        continue
                    break
                if self.at(lx.RPAREN):
                    self.take()
                else:
                    self.error("UnbalancedDelimiter", "expected ')' closing the compound group", open_tok)
                if self.at(lx.TEXT):
                    self.error("FillerAfterGroup", "text between a compound group and its annotation",
                               self.take())
                ann = self._required_annotation(open_tok, "compound group")
                if ann is None:
                    continue
                pieces.append(_Piece("group", normalize_ws(pending), "", ann, segments=segments))
                pending = ""
            elif tok.kind == lx.LPAREN and in_group:
                self.error("NestedGroup", "compound groups cannot be nested inside groups", tok)
                # skip the inner group and its annotation, keep reading the outer one
                depth = 0
                while self.peek() is not None:
                    kind = self.take().kind
                    depth += {lx.LPAREN: 1, lx.RPAREN: -1}.get(kind, 0)
                    if depth == 0:
                        break
                if self.at(lx.ANNOT):
                    self.take()
            else:
                break
        return pieces, pending

    def _required_annotation(self, anchor: Token, what: str) -> Optional[Annotation]:
        if self.at(lx.ANNOT):
            ann = self.annotation(self.take())
            if ann.code is not None:
                return ann
        self.error("MissingAnnotation", f"{what} must be followed by a component annotation", anchor)
        return None


def _with_meta(stmt: Statement, ann: Annotation) -> Statement:
    changes = {}
    if ann.governance:
        changes["governance"] = ann.governance
    if ann.consequence:
        changes["consequence_type"] = ann.consequence
    return replace(stmt, **changes) if changes else stmt


class _Assembler:
    """Turns a flat piece list into components with attached properties."""

    def __init__(self, diags: list[Diagnostic]):
        self.diags = diags
        self.pos = 0

    def warn(self, code, message, ann: Optional[Annotation], severity=Severity.ERROR):
        self.diags.append(Diagnostic(severity, code, message, span=ann.span if ann else None))

    def _next_pos(self) -> int:
        p = self.pos
        self.pos += 1
        return p

    def _check_nesting(self, piece: _Piece) -> tuple[str, Optional[Statement]]:
        if piece.kind != "nested":
            return piece.text, None
        if piece.annot.code in NESTABLE_CODES:
            return "", piece.nested
        from .serialize import plain_text

        self.warn("InvalidNestingTarget",
                  f"component {piece.annot.code} cannot hold a nested statement", piece.annot)
        return plain_text(piece.nested), None

    def statement(self, pieces: list[_Piece]) -> list[Component]:
        heads: list[_Comp] = []
        members: list[_Node] = []
        props: list[tuple[_Node, Annotation]] = []
        for piece in pieces:
            ann = piece.annot
            position = self._next_pos()
            if piece.kind == "group":
                if ann.is_property:
                    self.warn("UnsupportedPropertyGroup",
                              "compound groups of properties are not supported; read as a component group", ann)
                    ann.path = None
                comp = _Comp(ann.code, position, ann, filler=piece.filler, grouped=True)
                comp.kids = self.group(piece, ann.code)
                members.extend(comp.kids)
                heads.append(comp)
                continue
            text, nested = self._check_nesting(piece)
            if ann.is_property:
                if ann.negated:
                    self.warn("MisplacedNegation", "NOT applies to components, not properties",
                              ann, Severity.WARNING)
                node = _Node(ann.code, text, position, ann, filler=piece.filler, nested=nested,
                             inferred=piece.kind == "inferred", gid=None)
                props.append((node, ann))
                continue
            if ann.gid:
                self.warn("GroupIdOutsideGroup", f"group id ({ann.gid}) outside a compound group",
                          ann, Severity.WARNING)
            heads.append(_Comp(ann.code, position, ann, text=text, filler=piece.filler,
                               nested=nested, inferred=piece.kind == "inferred"))
        for node, ann in sorted(props, key=lambda p: (len(p[1].path or ()), p[0].position)):
            if ann.gid:
                target = next((m for m in members if m.gid == ann.gid and m.code == ann.code), None)
                if target is None:
                    self.warn("UnknownGroupId", f"no group member ({ann.gid}) for {ann.code}", ann)
            else:
                target = _nearest([h for h in heads if h.code == ann.code], node.position)
            if target is None:
                if not ann.gid:
                    self.warn("OrphanProperty",
                              f"property of {ann.code} has no {ann.code} component to attach to", ann)
                heads.append(_Comp(ann.code, node.position, replace(ann, path=None), text=node.text,
                                   filler=node.filler, nested=node.nested, inferred=node.inferred))
                continue
            self._place(target, node)
        heads.sort(key=lambda h: h.position)
        return [h.build() for h in heads]

    def group(self, piece: _Piece, code: str) -> list[_Node]:
        members: list[_Node] = []
        props: list[_Node] = []
        for op, seg, tail in piece.segments:
            seg_op = op
            if not seg:
                filler, text = split_filler(tail)
                if not text:
                    self.warn("EmptyGroupMember", "empty member in compound group", piece.annot)
                    continue
                members.append(_Node(code, text, self._next_pos(), _bare_annot(code),
                                     filler=filler, independent=True, operator=seg_op))
                continue
            for sub in seg:
                ann = sub.annot
                position = self._next_pos()
                text, nested = self._check_nesting(sub)
                node = _Node(ann.code, text, position, ann, filler=sub.filler, nested=nested,
                             inferred=sub.kind == "inferred", gid=ann.gid)
                if sub.kind == "group":
                    continue
                if ann.is_property:
                    props.append(node)
                    continue
                if ann.code != code:
                    self.warn("CodeMismatchInGroup",
                              f"member coded {ann.code} inside a {code} group", ann)
                node.independent = True
                node.operator = seg_op
                seg_op = None
                members.append(node)
            if normalize_ws(tail):
                self.warn("FillerBeforeGroupAnnotation",
                          "unannotated text after the last annotation of a group member", piece.annot)
                if members:
                    members[-1].text = normalize_ws(f"{members[-1].text} {tail}")
        for node in sorted(props, key=lambda n: (len(n.path()), n.position)):
            if node.gid:
                target = next((m for m in members if m.gid == node.gid), None)
            else:
                target = _nearest(members, node.position)
            if target is None:
                self.warn("OrphanProperty", "property inside a group has no member to attach to", node.annot)
                node.independent = True
                members.append(node)
                continue
            node.gid = None
            self._place(target, node)
        members.sort(key=lambda m: m.position)
        if members and members[0].operator is not None:
            members[0].operator = None
        return members

    def _place(self, target, node: _Node) -> None:
        path = node.path()
        if len(path) > 1:
            parent = _find_path(target.kids, path[:-1])
            if parent is None:
                self.warn("MissingParentProperty",
                          f"no property indexed {'.'.join(map(str, path[:-1]))} for chain "
                          f"{'.'.join(map(str, path))}", node.annot, Severity.WARNING)
            else:
                parent.kids.append(node)
                return
        target.kids.append(node)


def _bare_annot(code: str) -> Annotation:
    return Annotation(code=code)


def _nearest(heads, position: int):
    if not heads:
        return None
    # ties go to the following head
    return min(heads, key=lambda h: (abs(h.position - position), 0 if h.position > position else 1))


def _find_path(nodes: list[_Node], path: tuple[int, ...]) -> Optional[_Node]:
    for node in nodes:
        if not node.independent and node.path() == path:
            return node
        hit = _find_path(node.kids, path)
        if hit is not None:
            return hit
    return None


# -- entry points ------------------------------------------------------------


def _run(text: str, offset: int) -> tuple[Optional[Statement], list[Diagnostic]]:
    tokens, diags = lx.tokenize(text)
    parser = _Parser(tokens, diags)
    result = parser.expr()
    while parser.peek() is not None:
        tok = parser.take()
        parser.error("UnexpectedToken", f"unexpected {tok.value!r}", tok)
    if result is None and not any(d.severity == Severity.ERROR for d in diags):
        diags.append(Diagnostic(Severity.ERROR, "EmptyStatement", "no statement found", span=Span(0, 1)))
    if offset:
        diags = [
            replace(d, span=Span(d.span.offset + offset, d.span.length)) if d.span else d
            for d in diags
        ]
    return result, diags


def parse_expression(text: str, offset: int = 0) -> tuple[Optional[Statement], list[Diagnostic]]:
    """Parse a statement expression (combinations, negation, OR ELSE)."""
    return _run(text, offset)


def parse_statement(text: str, offset: int = 0) -> tuple[Optional[Statement], list[Diagnostic]]:
    """Parse a single statement; statement-level operators are reported."""
    result, diags = _run(text, offset)
    if result is not None and not isinstance(result, Atomic):
        diags.append(Diagnostic(Severity.ERROR, "UnexpectedOperator",
                                "statement-level operators found; use parse_expression",
                                span=Span(offset, len(text))))
    return result, diags
