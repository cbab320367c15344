"""Reading and writing the inline coding shorthand."""

from .document import SourceRecord, parse_document, serialize_document
from .parser import parse_annotation, parse_expression, parse_statement
from .serialize import annotation_text, plain_text, serialize

__all__ = [
    "SourceRecord",
    "annotation_text",
    "parse_annotation",
    "parse_document",
    "parse_expression",
    "parse_statement",
    "plain_text",
    "serialize",
    "serialize_document",
]
