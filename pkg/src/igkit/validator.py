"""Structural and semantic checks on parsed statements.

Checks never raise on bad input; each returns a list of
:class:`~igkit.model.Diagnostic` values.  :func:`validate` bundles them into
a :class:`ValidationReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import UnknownLabel, UnknownPrefix
from .model import (
    CONSTITUTIVE,
    REGULATIVE,
    Atomic,
    Component,
    Diagnostic,
    OrElse,
    Severity,
    Statement,
    StatementKind,
    children,
    classify,
    iter_components,
    leaves,
    nested_statements,
)
from .profiles import Profile, profile_includes, sorted_features
from .taxonomy import TaxonomyRegistry, load_builtin
from .transforms import _own_families, keeps_nesting_at_core

NECESSARY = {
    REGULATIVE: (("A", "MissingAttributes", "Attribute"), ("I", "MissingAim", "Aim")),
    CONSTITUTIVE: (
        ("E", "MissingConstitutedEntity", "Constituted Entity"),
        ("F", "MissingConstitutiveFunction", "Constitutive Function"),
    ),
}
_ENTITY_CODES = frozenset({"A", "B", "Bdir", "Bind", "E", "P"})
PLACEMENT = {
    "regfunc": frozenset({"I"}),
    "confunc": frozenset({"F"}),
    "ctx": frozenset({"Cac", "Cex"}),
    "role": _ENTITY_CODES,
    "anim": _ENTITY_CODES,
    "metatype": _ENTITY_CODES,
    "governance": frozenset(),
    "consequence": frozenset(),
}
_EXT = {
    "A": "A_Ext", "B": "B_Ext", "Bdir": "Bdir_Ext", "Bind": "Bind_Ext",
    "Cac": "Cac_Ext", "Cex": "Cex_Ext", "P": "P_Ext", "E": "E_Ext",
}
_ANNOTATION_FEATURE = {"regfunc": "U_reg", "confunc": "U_con", "polref": "R"}


def _diag(severity, code, message, statement_id) -> Diagnostic:
    return Diagnostic(severity, code, message, statement_id=statement_id)


@dataclass(frozen=True)
class ValidationReport:
    statement_id: str
    kind: Optional[StatementKind]
    diagnostics: tuple[Diagnostic, ...] = ()
    feature_usage: frozenset[str] = field(default_factory=frozenset)

    def by_severity(self, severity: Severity) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == severity)

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return self.by_severity(Severity.ERROR)

    @property
    def warnings(self) -> tuple[Diagnostic, ...]:
        return self.by_severity(Severity.WARNING)

    def passed(self, strict: bool = False) -> bool:
        return not self.errors and not (strict and self.warnings)


# -- feature usage -------------------------------------------------------------


def _annotation_features(comp: Component, anns) -> Iterator[str]:
    for ann in anns:
        if ann.prefix == "ctx" and comp.code in ("Cac", "Cex"):
            yield _EXT[comp.code]
        else:
            yield _ANNOTATION_FEATURE.get(ann.prefix, "S")


def feature_usage(statement: Statement) -> frozenset[str]:
    """Profile feature symbols a statement tree relies on."""
    used: set[str] = set()

    def visit(s: Statement) -> None:
        if isinstance(s, OrElse):
            used.add("O")
        if s.governance or s.consequence_type:
            used.add("S")
        if isinstance(s, Atomic):
            atomic_(s)
        for child in children(s):
            visit(child)

    def atomic_(a: Atomic) -> None:
        for comp in a.explicit:
            used.update(comp.codes)
            ext = _EXT.get(comp.code)
            if comp.properties and ext:
                used.add(ext)
            used.update(_annotation_features(comp, comp.annotations))
            for prop in comp.walk_properties():
                used.update(_annotation_features(comp, prop.annotations))
                if prop.nested is not None:
                    visit(prop.nested)
            if comp.nested is not None:
                if ext and not keeps_nesting_at_core(a, comp.nested):
                    used.add(ext)
                visit(comp.nested)

    visit(statement)
    return frozenset(used)


# -- completeness ----------------------------------------------------------------


def _available(atomic: Atomic) -> set[str]:
    codes = {code for c in atomic.explicit for code in c.codes}
    if any(c.alt_code for c in atomic.explicit):
        for inner in nested_statements(atomic):
            codes |= {code for c in iter_components(inner) if not c.implied for code in c.codes}
    return codes


def check_completeness(statement: Statement, profile: Optional[Profile] = None,
                       statement_id: str = "anonymous") -> list[Diagnostic]:
    """Necessary components per statement family, for every atomic node.

    Component-level nested statements may take necessary components of a
    shared family from their host.  Implied context is reported once per
    statement-level atomic node.
    """
    out: list[Diagnostic] = []

    def check(atomic: Atomic, inherited: set[str], host_fams: set[str], top: bool) -> None:
        fams, _ = _own_families(atomic)
        if not fams:
            fams = {REGULATIVE}
        have = _available(atomic)
        if fams & host_fams:
            have |= inherited
        for fam in sorted(fams):
            for code, diag_code, label in NECESSARY[fam]:
                if code in have:
                    continue
                if profile is not None and not profile_includes(profile, code):
                    continue
                out.append(_diag(Severity.ERROR, diag_code,
                                 f"{fam} statement without {label} ({code})", statement_id))
        if top:
            implied = [c.code for c in atomic.components if c.implied]
            if implied:
                out.append(_diag(Severity.INFO, "ImpliedContext",
                                 "context defaults apply for " + ", ".join(implied), statement_id))
        for inner in nested_statements(atomic):
            for leaf in leaves(inner):
                check(leaf, have, fams, False)

    for leaf in leaves(statement):
        check(leaf, set(), set(), True)
    return out


# -- annotations -------------------------------------------------------------------


def _check_annotation(ann, codes: tuple[str, ...], registry: TaxonomyRegistry, strict: bool,
                      statement_id: str) -> Iterator[Diagnostic]:
    if ann.prefix == "polref":
        if not ann.value:
            yield _diag(Severity.ERROR, "InvalidAnnotation", "polref needs a reference value", statement_id)
        return
    if ann.prefix == "custom":
        return
    try:
        node = registry.resolve(ann.prefix, ann.label)
    except UnknownPrefix:
        yield _diag(Severity.ERROR, "UnknownTaxonomyLabel",
                    f"unknown taxonomy prefix {ann.prefix!r}", statement_id)
        return
    except UnknownLabel as exc:
        yield _diag(Severity.ERROR, "UnknownTaxonomyLabel", str(exc), statement_id)
        return
    # only coded descendants can be written, so they alone make a label a category
    if strict and any(d.code for d in registry.descendants(node)):
        yield _diag(Severity.WARNING, "NonLeafLabel",
                    f"{ann} is a category; a more specific label is expected", statement_id)
    allowed = PLACEMENT.get(ann.prefix)
    if allowed is not None and not set(codes) & allowed:
        where = "/".join(codes)
        yield _diag(Severity.ERROR, "MisplacedAnnotation",
                    f"{ann} cannot annotate {where}", statement_id)


def _statement_nodes(statement: Statement) -> Iterator[Statement]:
    yield statement
    for child in children(statement):
        yield from _statement_nodes(child)
    if isinstance(statement, Atomic):
        for inner in nested_statements(statement):
            yield from _statement_nodes(inner)


def validate_annotations(statement: Statement, registry: Optional[TaxonomyRegistry] = None,
                         strict: bool = False, statement_id: str = "anonymous") -> list[Diagnostic]:
    registry = registry or load_builtin()
    out: list[Diagnostic] = []
    for comp in iter_components(statement):
        for ann in comp.annotations:
            out.extend(_check_annotation(ann, comp.codes, registry, strict, statement_id))
        for prop in comp.walk_properties():
            for ann in prop.annotations:
                out.extend(_check_annotation(ann, comp.codes, registry, strict, statement_id))
    for node in _statement_nodes(statement):
        if node.consequence_type and node.governance != "consequential":
            out.append(_diag(Severity.WARNING, "ConsequenceTypeOnNonConsequential",
                             "consequence type given for a statement not marked consequential",
                             statement_id))
    return out


# -- profiles ----------------------------------------------------------------------


def check_profile_conformance(statement: Statement, profile: Profile,
                              statement_id: str = "anonymous") -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for feature in sorted_features(feature_usage(statement)):
        if not profile_includes(profile, feature):
            out.append(_diag(Severity.ERROR, "FeatureNotInProfile",
                             f"{feature} is used but not part of {profile}", statement_id))
    fams: set[str] = set()
    for leaf in leaves(statement):
        fams |= _own_families(leaf)[0] or {REGULATIVE}
    for fam in sorted(fams):
        for code, _, label in NECESSARY[fam]:
            if not profile_includes(profile, code):
                out.append(_diag(Severity.INFO, "NecessaryFeatureOmitted",
                                 f"{label} ({code}) is omitted by {profile}", statement_id))
    return out


def validate(statement: Statement, registry: Optional[TaxonomyRegistry] = None,
             profile: Optional[Profile] = None, strict: bool = False,
             statement_id: str = "anonymous") -> ValidationReport:
    diags = check_completeness(statement, profile, statement_id)
    diags += validate_annotations(statement, registry, strict, statement_id)
    if profile is not None:
        diags += check_profile_conformance(statement, profile, statement_id)
    return ValidationReport(statement_id, classify(statement), tuple(diags), feature_usage(statement))


def validate_record(record, registry: Optional[TaxonomyRegistry] = None,
                    profile: Optional[Profile] = None, strict: bool = False) -> ValidationReport:
    """Validate a parsed :class:`~igkit.notation.SourceRecord`, keeping parse diagnostics."""
    if record.parsed is None:
        return ValidationReport(record.id, None, tuple(record.diagnostics))
    report = validate(record.parsed, registry, profile, strict, record.id)
    return ValidationReport(record.id, report.kind, tuple(record.diagnostics) + report.diagnostics,
                            report.feature_usage)


def validate_records(records: Iterable, registry: Optional[TaxonomyRegistry] = None,
                     profile: Optional[Profile] = None, strict: bool = False) -> list[ValidationReport]:
    registry = registry or load_builtin()
    return [validate_record(r, registry, profile, strict) for r in records]
