"""Split raw policy text into candidate statements.

The splitter is deliberately conservative: it removes enumeration markers
and enclosing quotes and splits on sentence punctuation, but never rewrites
words inside a sentence.  There is no abbreviation dictionary, so ``Dec. 1``
splits.
"""

from __future__ import annotations

import re

_MARKER = re.compile(r"^\s*(?:\((?:[a-z]{1,2}|\d{1,3}|[ivxlcdm]{1,6}|[A-Z])\)|[•·▪◦‣*–-])\s+")
_QUOTES = {'"': '"', "“": "”", "``": "''", "„": "“", "«": "»"}
_INLINE_COLON = re.compile(r":\s+(?=[A-Z])")
_TRAILING_ELLIPSIS = re.compile(r"\s*(?:\.\.\.|…|\\dots)\s*$")


def _strip_quotes(text: str) -> str:
    text = text.strip()
    for opener, closer in _QUOTES.items():
        if text.startswith(opener) and text.endswith(closer) and len(text) > len(opener) + len(closer):
            return text[len(opener):len(text) - len(closer)].strip()
    return text


def _strip_markers(line: str) -> str:
    prev = None
    while prev != line:
        prev = line
        line = _MARKER.sub("", line, count=1)
    return line.strip()


def _sentences(text: str) -> list[str]:
    out: list[str] = []
    depth = 0
    quoted = False
    start = 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth = max(depth - 1, 0)
        elif ch in '"“”':
            quoted = not quoted if ch == '"' else ch == "“"
        elif ch in ".!?" and depth == 0 and not quoted:
            nxt = text[i + 1] if i + 1 < len(text) else ""
            if nxt == "" or nxt.isspace():
                out.append(text[start:i + 1])
                start = i + 1
    out.append(text[start:])
    return [s.strip() for s in out if s.strip()]


def preprocess(raw: str) -> list[str]:
    """Candidate statements from raw text, in order.

    Lines lose leading enumeration markers; an inline ``: Capitalized``
    boundary within a line ends a sentence, while a colon closing a line
    introduces the list that follows it.
    """
    text = _strip_quotes(raw.replace("\r\n", "\n").replace("\r", "\n"))
    text = _TRAILING_ELLIPSIS.sub(".", text)
    lines = []
    for line in text.split("\n"):
        line = _strip_markers(line)
        if line:
            lines.append(_INLINE_COLON.sub(". ", line))
    joined = " ".join(lines)
    result = []
    for sentence in _sentences(joined):
        sentence = _strip_markers(_strip_quotes(sentence))
        if sentence and sentence not in ".!?":
            result.append(sentence)
    return result
