"""Typed tree model for coded institutional statements.

Statements form a small algebra: :class:`Atomic` leaves built from
:class:`Component` values, combined by :class:`Combination`,
:class:`Negation` and :class:`OrElse`.  All nodes are frozen dataclasses, so
trees are hashable and compare structurally.

Every explicit component and property carries a ``position``: its ordinal
among the annotated segments of the enclosing atomic statement.  Positions
let the serializer restore source order after properties have been attached
to their heads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional

REGULATIVE_CODES = frozenset({"A", "B", "Bdir", "Bind", "D", "I"})
CONSTITUTIVE_CODES = frozenset({"E", "F", "M", "P"})
CONTEXT_CODES = frozenset({"Cac", "Cex"})
CODES = ("A", "B", "Bdir", "Bind", "D", "I", "E", "F", "M", "P", "Cac", "Cex")
NESTABLE_CODES = frozenset({"A", "B", "Bdir", "Bind", "Cac", "Cex", "E", "P"})
MODAL_CODES = frozenset({"D", "M"})
IMPLIED_TEXT = {"Cac": "under all conditions", "Cex": "no constraints"}

OPERATORS = ("AND", "OR", "XOR")
GOVERNANCE_TYPES = ("monitored", "consequential", "monitoring")
CONSEQUENCE_TYPES = ("existential", "non-existential")

REGULATIVE = "regulative"
CONSTITUTIVE = "constitutive"
SHARED = "shared"


class StatementKind(str, Enum):
    REGULATIVE = "Regulative"
    CONSTITUTIVE = "Constitutive"
    HYBRID = "Hybrid"
    POLYMORPHIC = "Polymorphic"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


def family(code: str) -> str:
    """Return ``"regulative"``, ``"constitutive"`` or ``"shared"`` for a code."""
    if code in REGULATIVE_CODES:
        return REGULATIVE
    if code in CONSTITUTIVE_CODES:
        return CONSTITUTIVE
    if code in CONTEXT_CODES:
        return SHARED
    raise ValueError(f"unknown component code {code!r}")


@dataclass(frozen=True)
class Span:
    offset: int
    length: int


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    statement_id: Optional[str] = None
    span: Optional[Span] = None

    def with_id(self, statement_id: str) -> "Diagnostic":
        return replace(self, statement_id=statement_id)

    def __str__(self) -> str:
        where = self.statement_id or "-"
        if self.span is not None:
            where += f"@{self.span.offset}"
        return f"{where}: {self.severity.value} {self.code}: {self.message}"


@dataclass(frozen=True)
class SemanticAnnotation:
    """A label attached to a component or property.

    ``polref`` annotations keep the referenced document in ``value`` and an
    empty ``label``; free-form ``key=value`` pairs use the ``custom`` prefix.
    """

    prefix: str
    label: str = ""
    value: Optional[str] = None

    def __str__(self) -> str:
        if self.prefix == "polref":
            return f"polref={self.value or ''}"
        if self.prefix == "custom" and self.value is not None:
            return f"{self.label}={self.value}"
        return f"{self.prefix}:{self.label}"


@dataclass(frozen=True)
class PropertyNode:
    text: str
    dependence: str = "dependent"
    index_path: tuple[int, ...] = ()
    group_id: Optional[str] = None
    sibling_operator: Optional[str] = None
    nested: Optional["Statement"] = None
    annotations: tuple[SemanticAnnotation, ...] = ()
    children: tuple["PropertyNode", ...] = ()
    inferred: bool = False
    filler: str = ""
    position: int = 0

    def __post_init__(self) -> None:
        if self.dependence not in ("dependent", "independent"):
            raise ValueError(f"bad dependence {self.dependence!r}")
        if self.sibling_operator is not None and self.sibling_operator not in OPERATORS:
            raise ValueError(f"bad operator {self.sibling_operator!r}")
        if any(i < 1 for i in self.index_path):
            raise ValueError("index path entries must be positive")

    @property
    def independent(self) -> bool:
        return self.dependence == "independent"

    def walk(self) -> Iterator["PropertyNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class Component:
    code: str
    text: str = ""
    implied: bool = False
    inferred: bool = False
    properties: tuple[PropertyNode, ...] = ()
    nested: Optional["Statement"] = None
    annotations: tuple[SemanticAnnotation, ...] = ()
    alt_code: Optional[str] = None
    negated: bool = False
    grouped: bool = False
    filler: str = ""
    position: int = 0

    def __post_init__(self) -> None:
        if self.code not in CODES:
            raise ValueError(f"unknown component code {self.code!r}")
        if self.implied:
            if self.code not in IMPLIED_TEXT or self.text != IMPLIED_TEXT[self.code]:
                raise ValueError("only Cac/Cex may be implied, with their default text")
        if self.alt_code is not None:
            if self.alt_code not in CODES or family(self.alt_code) == family(self.code):
                raise ValueError("alternative code must come from the other statement family")
        if self.nested is not None and self.code not in NESTABLE_CODES:
            raise ValueError(f"component {self.code} cannot hold a nested statement")

    @property
    def codes(self) -> tuple[str, ...]:
        return (self.code,) if self.alt_code is None else (self.code, self.alt_code)

    @property
    def members(self) -> tuple[PropertyNode, ...]:
        return tuple(p for p in self.properties if p.independent)

    @property
    def shared_properties(self) -> tuple[PropertyNode, ...]:
        return tuple(p for p in self.properties if not p.independent)

    def walk_properties(self) -> Iterator[PropertyNode]:
        for prop in self.properties:
            yield from prop.walk()


def implied_component(code: str) -> Component:
    return Component(code=code, text=IMPLIED_TEXT[code], implied=True, position=-1)


@dataclass(frozen=True)
class Statement:
    """Common base.  Governance metadata is optional and uninterpreted."""

    governance: Optional[str] = field(default=None, kw_only=True)
    consequence_type: Optional[str] = field(default=None, kw_only=True)

    def _check_meta(self) -> None:
        if self.governance is not None and self.governance not in GOVERNANCE_TYPES:
            raise ValueError(f"unknown governance type {self.governance!r}")
        if self.consequence_type is not None and self.consequence_type not in CONSEQUENCE_TYPES:
            raise ValueError(f"unknown consequence type {self.consequence_type!r}")

    def strip_meta(self) -> "Statement":
        return replace(self, governance=None, consequence_type=None)


@dataclass(frozen=True)
class Atomic(Statement):
    components: tuple[Component, ...] = ()
    trailing: str = ""

    def __post_init__(self) -> None:
        self._check_meta()
        comps = tuple(self.components)
        explicit = {c.code for c in comps if not c.implied}
        comps = tuple(c for c in comps if not (c.implied and c.code in explicit))
        present = {c.code for c in comps}
        for code in ("Cac", "Cex"):
            if code not in present:
                comps += (implied_component(code),)
        object.__setattr__(self, "components", comps)

    @property
    def explicit(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if not c.implied)

    def with_components(self, components) -> "Atomic":
        return replace(self, components=tuple(c for c in components if not c.implied))


def renumber(atomic: Atomic) -> Atomic:
    """Reassign positions as dense ranks, matching what the parser would produce."""
    order: list[int] = []
    for comp in atomic.explicit:
        order.append(comp.position)
        order.extend(p.position for p in comp.walk_properties())
    rank = {pos: i for i, pos in enumerate(sorted(set(order)))}

    def prop(node: PropertyNode) -> PropertyNode:
        return replace(node, position=rank[node.position], children=tuple(prop(c) for c in node.children))

    return atomic.with_components(
        replace(c, position=rank[c.position], properties=tuple(prop(p) for p in c.properties))
        for c in atomic.explicit
    )


@dataclass(frozen=True)
class Combination(Statement):
    operator: str = "AND"
    operands: tuple[Statement, ...] = ()

    def __post_init__(self) -> None:
        self._check_meta()
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}")
        if len(self.operands) < 2:
            raise ValueError("a combination needs at least two operands")
        object.__setattr__(self, "operands", tuple(self.operands))


@dataclass(frozen=True)
class Negation(Statement):
    operand: Statement = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self._check_meta()
        if not isinstance(self.operand, Statement):
            raise ValueError("negation needs an operand")


@dataclass(frozen=True)
class OrElse(Statement):
    monitored: Statement = None  # type: ignore[assignment]
    consequential: Statement = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self._check_meta()
        if not isinstance(self.monitored, Statement) or not isinstance(self.consequential, Statement):
            raise ValueError("OR ELSE needs a monitored and a consequential statement")


# -- traversal ---------------------------------------------------------------


def children(statement: Statement) -> tuple[Statement, ...]:
    """Statement-level children (no component nesting)."""
    if isinstance(statement, Combination):
        return statement.operands
    if isinstance(statement, Negation):
        return (statement.operand,)
    if isinstance(statement, OrElse):
        return (statement.monitored, statement.consequential)
    return ()


def leaves(statement: Statement) -> Iterator[Atomic]:
    """Atomic leaves of the statement-level tree, in document order."""
    if isinstance(statement, Atomic):
        yield statement
        return
    for child in children(statement):
        yield from leaves(child)


def nested_statements(atomic: Atomic) -> Iterator[Statement]:
    """Statements nested directly in components or properties of ``atomic``."""
    for comp in atomic.components:
        if comp.nested is not None:
            yield comp.nested
        for prop in comp.walk_properties():
            if prop.nested is not None:
                yield prop.nested


def iter_atomics(statement: Statement) -> Iterator[Atomic]:
    """Every atomic node, including those inside component-level nesting."""
    for leaf in leaves(statement):
        yield leaf
        for inner in nested_statements(leaf):
            yield from iter_atomics(inner)


def iter_components(statement: Statement) -> Iterator[Component]:
    for atomic in iter_atomics(statement):
        yield from atomic.components


def has_component_nesting(statement: Statement) -> bool:
    return any(True for leaf in leaves(statement) for _ in nested_statements(leaf))


# -- classification ----------------------------------------------------------


def families_of(statement: Statement) -> set[str]:
    """Statement families evidenced by explicit, non-context codes anywhere."""
    found: set[str] = set()
    for comp in iter_components(statement):
        if comp.implied:
            continue
        for code in comp.codes:
            fam = family(code)
            if fam != SHARED:
                found.add(fam)
    return found


def is_polymorphic(statement: Statement) -> bool:
    return any(c.alt_code is not None for c in iter_components(statement))


def classify(statement: Statement) -> StatementKind:
    """Classify a statement tree.

    Dual-coded components win over everything else.  A tree without any
    family evidence (only context) is reported as regulative.
    """
    if is_polymorphic(statement):
        return StatementKind.POLYMORPHIC
    fams = families_of(statement)
    if fams == {REGULATIVE, CONSTITUTIVE}:
        return StatementKind.HYBRID
    if fams == {CONSTITUTIVE}:
        return StatementKind.CONSTITUTIVE
    return StatementKind.REGULATIVE


def is_atomic(statement: Statement) -> bool:
    """True for a single statement without nesting or component-level combinations.

    Several context clauses may coexist in an atomic statement; duplicated
    components of any other code read as an implicit AND and make the
    statement non-atomic, as does a compound group with more than one member.
    """
    if not isinstance(statement, Atomic):
        return False
    if any(True for _ in nested_statements(statement)):
        return False
    seen: set[str] = set()
    for comp in statement.explicit:
        if comp.grouped and len(comp.members) > 1:
            return False
        if comp.code in CONTEXT_CODES:
            continue
        if comp.code in seen:
            return False
        seen.add(comp.code)
    return True
