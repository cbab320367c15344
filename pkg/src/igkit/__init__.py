"""igkit: parse, validate and transform policy text coded in the
Institutional Grammar inline shorthand."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import IgkitError, ParseError
from .model import (
    Atomic,
    Combination,
    Component,
    Diagnostic,
    Negation,
    OrElse,
    PropertyNode,
    SemanticAnnotation,
    Severity,
    Statement,
    StatementKind,
    classify,
    is_atomic,
)
from .notation import (
    SourceRecord,
    parse_document,
    parse_expression,
    parse_statement,
    plain_text,
    serialize,
    serialize_document,
)
from .profiles import Profile, expand_features, format_profile, parse_profile, profile_includes
from .taxonomy import TaxonomyRegistry, load_builtin, merge_user_taxonomy
from .transforms import Level, MonitoredPair, decompose_combinations, flatten_vertical, normalize_negation, project
from .validator import (
    ValidationReport,
    check_completeness,
    check_profile_conformance,
    feature_usage,
    validate,
    validate_annotations,
)


def parse(text: str) -> Statement:
    """Parse an expression, raising :class:`ParseError` on any error diagnostic."""
    statement, diags = parse_expression(text)
    errors = [d for d in diags if d.severity == Severity.ERROR]
    if errors or statement is None:
        raise ParseError(errors)
    return statement


__all__ = [
    "Atomic", "Combination", "Component", "Diagnostic", "IgkitError", "Level", "MonitoredPair",
    "Negation", "OrElse", "ParseError", "Profile", "PropertyNode", "SemanticAnnotation", "Severity",
    "SourceRecord", "Statement", "StatementKind", "TaxonomyRegistry", "ValidationReport",
    "check_completeness", "check_profile_conformance", "classify", "decompose_combinations",
    "expand_features", "feature_usage", "flatten_vertical", "format_profile", "is_atomic",
    "load_builtin", "merge_user_taxonomy", "normalize_negation", "parse", "parse_document",
    "parse_expression", "parse_profile", "parse_statement", "plain_text", "profile_includes",
    "project", "serialize", "serialize_document", "validate", "validate_annotations",
]
