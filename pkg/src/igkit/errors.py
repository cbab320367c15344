"""Exception types raised by igkit.

Parsing and validation report problems as :class:`~igkit.model.Diagnostic`
values; the exceptions below are reserved for API misuse and for operations
whose contract is to fail outright (taxonomy merges, profile parsing,
transformations with unmet preconditions).
"""

from __future__ import annotations


class IgkitError(Exception):
    """Base class for all igkit errors."""

    code = "IgkitError"


class TaxonomyError(IgkitError):
    code = "TaxonomyError"


class UnknownPrefix(TaxonomyError):
    code = "UnknownPrefix"


class UnknownLabel(TaxonomyError):
    code = "UnknownLabel"

    def __init__(self, prefix: str, label: str, suggestion: str | None = None):
        self.prefix = prefix
        self.label = label
        self.suggestion = suggestion
        msg = f"unknown label {label!r} in taxonomy {prefix!r}"
        if suggestion:
            msg += f" (did you mean {suggestion!r}?)"
        super().__init__(msg)


class DuplicateCode(TaxonomyError):
    code = "DuplicateCode"


class CycleDetected(TaxonomyError):
    code = "CycleDetected"


class ReservedPrefixModification(TaxonomyError):
    code = "ReservedPrefixModification"


class UnknownParent(TaxonomyError):
    code = "UnknownParent"


class TaxonomyFormatError(TaxonomyError):
    code = "TaxonomyFormatError"


class ProfileError(IgkitError):
    code = "ProfileError"


class UnknownBaseline(ProfileError):
    code = "UnknownBaseline"


class UnknownFeatureSymbol(ProfileError):
    code = "UnknownFeatureSymbol"


class RemovalNotInBaseline(ProfileError):
    code = "RemovalNotInBaseline"


class AdditionAlreadyPresent(ProfileError):
    code = "AdditionAlreadyPresent"


class TransformError(IgkitError):
    code = "TransformError"


class MixedOperatorsWithoutGrouping(TransformError):
    code = "MixedOperatorsWithoutGrouping"


class NoModalToNegate(TransformError):
    code = "NoModalToNegate"


class ParseError(IgkitError):
    """Raised by the strict :func:`igkit.parse` helper when parsing yields errors."""

    code = "ParseError"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(f"{first.code}: {first.message}" if first else "parse failed")


class ManifestError(IgkitError):
    code = "ManifestError"


class InterchangeError(IgkitError):
    code = "InterchangeError"
