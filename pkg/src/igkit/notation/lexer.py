"""Tokenizer for the inline shorthand.

A ``(`` directly followed by whitespace opens a structural group.  Otherwise
the balanced parenthesis is read as a component annotation when its body is
annotation-shaped (a single leading token such as ``A``, ``P(c),prop1`` or
``;governance:monitored``) and as literal prose when it is not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..model import CODES, Diagnostic, Severity, Span

TEXT = "TEXT"
ANNOT = "ANNOT"
LPAREN = "LPAREN"
RPAREN = "RPAREN"
LBRACE = "LBRACE"
RBRACE = "RBRACE"
OP = "OP"
NOT = "NOT"
INFERRED = "INFERRED"
ORELSE = "ORELSE"

ANNOT_BODY = re.compile(
    r"""\s*(?:
        (?P<code>[A-Za-z]+(?:/[A-Za-z]+)?)(?:\((?P<gid>[a-z])\))?\s*(?P<rest>[,;][^()\[\]{}]*)?
      | (?P<meta>;[^()\[\]{}]*)
    )\s*""",
    re.X,
)
ORELSE_RE = re.compile(r"\bOR\s+ELSE\b")
_OPERATOR_WORDS = {"AND", "OR", "XOR"}
_MARKER_LIKE = re.compile(r"[a-z]{1,4}|[ivxlcdm]+")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    offset: int
    length: int

    @property
    def span(self) -> Span:
        return Span(self.offset, self.length)


def _match_paren(text: str, start: int) -> int | None:
    depth = 0
    for i in range(start, len(text)):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i
    return None


def _diag(severity, code, message, offset, length) -> Diagnostic:
    return Diagnostic(severity, code, message, span=Span(offset, max(length, 1)))


def tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    stack: list[tuple[str, int]] = []
    buf: list[str] = []
    buf_start = 0
    i = 0
    n = len(text)

    def flush(end: int) -> None:
        nonlocal buf
        raw = "".join(buf)
        buf = []
        if not raw.strip():
            return
        pos = 0
        for m in ORELSE_RE.finditer(raw):
            _emit_text(raw[pos:m.start()], buf_start + pos)
            tokens.append(Token(ORELSE, "OR ELSE", buf_start + m.start(), m.end() - m.start()))
            pos = m.end()
        _emit_text(raw[pos:], buf_start + pos)

    def _emit_text(chunk: str, offset: int) -> None:
        if chunk.strip():
            tokens.append(Token(TEXT, chunk, offset, len(chunk)))

    def push_text(chunk: str, at: int) -> None:
        nonlocal buf_start
        if not buf:
            buf_start = at
        buf.append(chunk)

    while i < n:
        ch = text[i]
        if ch == "(":
            nxt = text[i + 1] if i + 1 < n else ""
            if nxt == "" or nxt.isspace():
                flush(i)
                tokens.append(Token(LPAREN, "(", i, 1))
                stack.append(("(", i))
                i += 1
                continue
            j = _match_paren(text, i)
            if j is None:
                diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter", "unclosed '('", i, 1))
                push_text(ch, i)
                i += 1
                continue
            body = text[i + 1:j]
            if body == "":
                diags.append(_diag(Severity.ERROR, "EmptyAnnotation", "empty annotation '()'", i, 2))
                i = j + 1
                continue
            m = ANNOT_BODY.fullmatch(body)
            if m is None:
                if any(c in body for c in "[]{}"):
                    flush(i)
                    tokens.append(Token(LPAREN, "(", i, 1))
                    stack.append(("(", i))
                    i += 1
                else:
                    push_text(text[i:j + 1], i)
                    i = j + 1
                continue
            code = m.group("code")
            if code is not None and not all(c in CODES for c in code.split("/")):
                marker = _MARKER_LIKE.fullmatch(code) is not None and m.group("rest") is None
                diags.append(_diag(
                    Severity.WARNING if marker else Severity.ERROR,
                    "UnknownCode",
                    f"unknown component code {code!r}; text kept as prose",
                    i, j + 1 - i,
                ))
                push_text(text[i:j + 1], i)
                i = j + 1
                continue
            flush(i)
            tokens.append(Token(ANNOT, body, i, j + 1 - i))
            i = j + 1
        elif ch == ")":
            if stack and stack[-1][0] == "(":
                stack.pop()
                flush(i)
                tokens.append(Token(RPAREN, ")", i, 1))
            else:
                diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter", "unmatched ')'", i, 1))
            i += 1
        elif ch == "{":
            flush(i)
            tokens.append(Token(LBRACE, "{", i, 1))
            stack.append(("{", i))
            i += 1
        elif ch == "}":
            if stack and stack[-1][0] == "{":
                stack.pop()
                flush(i)
                tokens.append(Token(RBRACE, "}", i, 1))
            else:
                diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter", "unmatched '}'", i, 1))
            i += 1
        elif ch == "[":
            j = text.find("]", i + 1)
            inner = text[i + 1:j] if j != -1 else ""
            if j == -1 or "[" in inner:
                diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter", "unclosed '['", i, 1))
                i += 1
                continue
            flush(i)
            word = inner.strip()
            if word in _OPERATOR_WORDS:
                tokens.append(Token(OP, word, i, j + 1 - i))
            elif word == "NOT":
                tokens.append(Token(NOT, word, i, j + 1 - i))
            else:
                _inferred(inner, i, j, tokens, diags)
            i = j + 1
        elif ch == "]":
            diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter", "unmatched ']'", i, 1))
            i += 1
        else:
            push_text(ch, i)
            i += 1
    flush(n)
    for kind, pos in stack:
        diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter", f"unclosed '{kind}'", pos, 1))
    return tokens, diags


_INLINE_ANNOT = re.compile(r"(?P<text>.*?\S)\s*\((?P<body>[^()]*(?:\([a-z]\))?[^()]*)\)\s*")


def _inferred(inner: str, i: int, j: int, tokens: list[Token], diags: list[Diagnostic]) -> None:
    # "[Attribute (A)]" is accepted as a lenient spelling of "[Attribute] (A)"
    m = _INLINE_ANNOT.fullmatch(inner)
    if m and ANNOT_BODY.fullmatch(m.group("body")) and m.group("body")[:1] != ";":
        tokens.append(Token(INFERRED, m.group("text"), i, j + 1 - i))
        tokens.append(Token(ANNOT, m.group("body"), i, j + 1 - i))
        return
    if not inner.strip():
        diags.append(_diag(Severity.ERROR, "EmptyAnnotation", "empty inferred content '[]'", i, j + 1 - i))
        return
    if any(c in inner for c in "(){}"):
        diags.append(_diag(Severity.ERROR, "UnbalancedDelimiter",
                           "inferred content may not contain structural delimiters", i, j + 1 - i))
        return
    tokens.append(Token(INFERRED, inner, i, j + 1 - i))
