"""Tree transformations: decomposition, level projection, vertical
flattening and negation normalization.  All functions are pure."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator, Union

from .errors import MixedOperatorsWithoutGrouping, NoModalToNegate
from .model import (
    CONTEXT_CODES,
    MODAL_CODES,
    SHARED,
    Atomic,
    Combination,
    Component,
    Negation,
    OrElse,
    PropertyNode,
    Statement,
    families_of,
    family,
    renumber,
)
from .notation.parser import split_filler
from .notation.serialize import _join, _plain_property, plain_items


class Level(str, Enum):
    CORE = "core"
    EXTENDED = "extended"
    LOGICO = "logico"

    @property
    def rank(self) -> int:
        return ("core", "extended", "logico").index(self.value)


def _has_meta(s: Statement) -> bool:
    return s.governance is not None or s.consequence_type is not None


# -- decomposition -------------------------------------------------------------


def _group_operator(comp: Component) -> str:
    ops = {m.sibling_operator for m in comp.members[1:]}
    explicit = ops - {None}
    if len(explicit) > 1 or (explicit and None in ops):
        raise MixedOperatorsWithoutGrouping(
            f"{comp.code} group mixes operators {sorted(o or 'implied AND' for o in ops)}"
        )
    return explicit.pop() if explicit else "AND"


def _ungroup(comp: Component, member: PropertyNode) -> Component:
    props = tuple(sorted(member.children + comp.shared_properties, key=lambda p: p.position))
    plain = member.nested is None and not member.inferred
    if plain:
        filler, text = split_filler(_join([comp.filler, member.filler, member.text]))
    else:
        filler, text = _join([comp.filler, member.filler]), member.text
    return Component(
        code=comp.code, text=text, inferred=member.inferred, properties=props,
        nested=member.nested, annotations=comp.annotations + member.annotations,
        alt_code=comp.alt_code, negated=comp.negated, filler=filler, position=comp.position,
    )


def _first_dimension(atomic: Atomic):
    """Earliest component-level alternative set: (operator, variants) or None."""
    best = None
    by_code: dict[str, list[Component]] = {}
    for comp in atomic.explicit:
        by_code.setdefault(comp.code, []).append(comp)
    for code, comps in by_code.items():
        # repeated context clauses accumulate; only their groups expand
        if len(comps) > 1 and code not in CONTEXT_CODES:
            pos = min(c.position for c in comps)
            if best is None or pos < best[0]:
                best = (pos, "dup", comps)
            continue
        for comp in comps:
            if comp.grouped and len(comp.members) > 1 and (best is None or comp.position < best[0]):
                best = (comp.position, "group", [comp])
    if best is None:
        return None
    _, kind, comps = best
    base = [c for c in atomic.explicit if c not in comps]
    if kind == "dup":
        variants = [base + [c] for c in comps]
        op = "AND"
    else:
        comp = comps[0]
        op = _group_operator(comp)
        variants = [base + [_ungroup(comp, m)] for m in comp.members]
    stripped = atomic.strip_meta()
    return op, [renumber(stripped.with_components(sorted(v, key=lambda c: c.position))) for v in variants]


def _decompose_atomic(atomic: Atomic) -> Statement:
    dim = _first_dimension(atomic)
    if dim is None:
        return atomic
    op, variants = dim
    operands: list[Statement] = []
    for variant in variants:
        sub = _decompose_atomic(variant)
        if isinstance(sub, Combination) and sub.operator == op:
            operands.extend(sub.operands)
        else:
            operands.append(sub)
    return Combination(operator=op, operands=tuple(operands),
                       governance=atomic.governance, consequence_type=atomic.consequence_type)


def decompose_combinations(statement: Statement) -> Statement:
    """Expand component-level combinations into statement-level ones.

    Alternatives expand distributively in source order; everything else in
    the atomic statement is replicated into each leaf.  Statement-level
    structure (including OR ELSE) and component-level nesting are kept.
    """
    if isinstance(statement, Atomic):
        return _decompose_atomic(statement)
    if isinstance(statement, Combination):
        return replace(statement, operands=tuple(decompose_combinations(o) for o in statement.operands))
    if isinstance(statement, Negation):
        return replace(statement, operand=decompose_combinations(statement.operand))
    if isinstance(statement, OrElse):
        return replace(
            statement,
            monitored=decompose_combinations(statement.monitored),
            consequential=decompose_combinations(statement.consequential),
        )
    raise TypeError(f"not a statement: {statement!r}")


# -- projection ----------------------------------------------------------------


def _map_statement(statement: Statement, atomic_fn) -> Statement:
    if isinstance(statement, Atomic):
        return atomic_fn(statement)
    if isinstance(statement, Combination):
        return replace(statement, operands=tuple(_map_statement(o, atomic_fn) for o in statement.operands))
    if isinstance(statement, Negation):
        return replace(statement, operand=_map_statement(statement.operand, atomic_fn))
    if isinstance(statement, OrElse):
        return replace(statement, monitored=_map_statement(statement.monitored, atomic_fn),
                       consequential=_map_statement(statement.consequential, atomic_fn))
    raise TypeError(f"not a statement: {statement!r}")


def _strip_node(node: PropertyNode) -> PropertyNode:
    return replace(
        node, annotations=(), children=tuple(_strip_node(c) for c in node.children),
        nested=_to_extended(node.nested) if node.nested is not None else None,
    )


def _strip_atomic(atomic: Atomic) -> Atomic:
    comps = [
        replace(c, annotations=(), properties=tuple(_strip_node(p) for p in c.properties),
                nested=_to_extended(c.nested) if c.nested is not None else None)
        for c in atomic.explicit
    ]
    return atomic.with_components(comps)


def _to_extended(statement: Statement) -> Statement:
    return _strip_all_meta(_map_statement(statement, _strip_atomic))


def _strip_all_meta(statement: Statement) -> Statement:
    statement = statement.strip_meta()
    if isinstance(statement, Combination):
        return replace(statement, operands=tuple(_strip_all_meta(o) for o in statement.operands))
    if isinstance(statement, Negation):
        return replace(statement, operand=_strip_all_meta(statement.operand))
    if isinstance(statement, OrElse):
        return replace(statement, monitored=_strip_all_meta(statement.monitored),
                       consequential=_strip_all_meta(statement.consequential))
    return statement


def _own_families(atomic: Atomic) -> tuple[set[str], bool]:
    fams: set[str] = set()
    alt = False
    for comp in atomic.explicit:
        alt = alt or comp.alt_code is not None
        for code in comp.codes:
            if family(code) != SHARED:
                fams.add(family(code))
    return fams, alt


def keeps_nesting_at_core(host: Atomic, inner: Statement) -> bool:
    """Whether a nested statement marks a hybrid embedding that Core retains.

    Nested content whose statement family (or dual coding) is absent from
    the host cannot be dissolved into prose without changing how the tree
    classifies, so it stays nested.  A dual-coded host takes its necessary
    components from nested statements, so those stay as well.
    """
    from .model import is_polymorphic

    host_fams, host_alt = _own_families(host)
    if host_alt or families_of(inner) - host_fams:
        return True
    return is_polymorphic(inner)


def _merge_text(comp: Component) -> tuple[str, str, int]:
    items = plain_items(comp)
    merged = _join(t for _, t in sorted(items, key=lambda it: it[0]))
    merged = merged.replace("[", "").replace("]", "")
    filler, text = split_filler(merged)
    return filler, text, min(pos for pos, _ in items)


def _core_atomic(atomic: Atomic) -> Atomic:
    comps = []
    for comp in atomic.explicit:
        if comp.nested is not None:
            inner = _to_core(comp.nested)
            if keeps_nesting_at_core(atomic, inner):
                prose = [t for _, t in sorted(
                    (it for p in comp.properties for it in _plain_property(p)), key=lambda it: it[0])]
                filler = _join([comp.filler] + prose).replace("[", "").replace("]", "")
                comps.append(replace(comp, nested=inner, properties=(), filler=filler, grouped=False))
                continue
            comp = replace(comp, nested=inner)
        if comp.inferred and not comp.properties and not comp.grouped:
            comps.append(comp)
            continue
        filler, text, pos = _merge_text(comp)
        comps.append(Component(
            code=comp.code, text=text, inferred=comp.inferred, alt_code=comp.alt_code,
            negated=comp.negated, filler=filler, position=pos,
        ))
    return renumber(atomic.with_components(sorted(comps, key=lambda c: c.position)))


def _to_core(statement: Statement) -> Statement:
    return _map_statement(_to_extended(statement), _core_atomic)


def project(statement: Statement, target: Union[Level, str]) -> Statement:
    """Project a tree onto a coarser coding level.

    Extended drops semantic annotations, policy references and governance
    metadata.  Core additionally folds properties, compound groups and
    same-family nested statements into component text.  Projecting onto a
    level at or above the statement's own is the identity.
    """
    level = Level(target.lower()) if isinstance(target, str) else target
    if level is Level.LOGICO:
        return statement
    if level is Level.EXTENDED:
        return _to_extended(statement)
    return _to_core(statement)


# -- vertical flattening ---------------------------------------------------------


@dataclass(frozen=True)
class MonitoredPair:
    monitored: Statement
    consequential: Statement
    depth: int


def _pairs(statement: Statement, depth: int) -> Iterator[MonitoredPair]:
    if isinstance(statement, OrElse):
        yield MonitoredPair(statement.monitored, statement.consequential, depth + 1)
        yield from _pairs(statement.monitored, depth + 1)
        yield from _pairs(statement.consequential, depth + 1)
    elif isinstance(statement, Combination):
        for o in statement.operands:
            yield from _pairs(o, depth)
    elif isinstance(statement, Negation):
        yield from _pairs(statement.operand, depth)
    elif isinstance(statement, Atomic):
        from .model import nested_statements

        for inner in nested_statements(statement):
            yield from _pairs(inner, depth)


def flatten_vertical(statement: Statement) -> list[MonitoredPair]:
    """One (monitored, consequential, depth) triple per OR ELSE, in document order."""
    return list(_pairs(statement, 0))


# -- negation ---------------------------------------------------------------------


def _modal_negated(comp: Component) -> bool:
    words = comp.text.split()
    return comp.negated or (bool(words) and words[-1].lower() == "not")


def _unnegate(comp: Component) -> Component:
    words = comp.text.split()
    if words and words[-1].lower() == "not" and len(words) > 1:
        words = words[:-1]
    return replace(comp, text=" ".join(words), negated=False)


def _is_modal(comp: Component) -> bool:
    return any(code in MODAL_CODES for code in comp.codes)


def _map_nested(atomic: Atomic, fn) -> Atomic:
    def node(n: PropertyNode) -> PropertyNode:
        return replace(n, nested=fn(n.nested) if n.nested is not None else None,
                       children=tuple(node(c) for c in n.children))

    comps = [
        replace(c, nested=fn(c.nested) if c.nested is not None else None,
                properties=tuple(node(p) for p in c.properties))
        for c in atomic.explicit
    ]
    return atomic.with_components(comps)


def _hoist(statement: Statement) -> Statement:
    if isinstance(statement, Atomic):
        atomic = _map_nested(statement, _hoist)
        flips = 0
        comps = []
        for comp in atomic.explicit:
            if _is_modal(comp) and _modal_negated(comp) and comp.text.split() != ["not"]:
                comp = _unnegate(comp)
                flips += 1
            comps.append(comp)
        atomic = atomic.with_components(comps)
        return Negation(operand=atomic) if flips % 2 else atomic
    if isinstance(statement, Negation):
        inner = _hoist(statement.operand)
        if isinstance(inner, Negation) and not _has_meta(inner) and not _has_meta(statement):
            return inner.operand
        return replace(statement, operand=inner)
    return _map_children(statement, _hoist)


def _map_children(statement: Statement, fn) -> Statement:
    if isinstance(statement, Combination):
        return replace(statement, operands=tuple(fn(o) for o in statement.operands))
    if isinstance(statement, OrElse):
        return replace(statement, monitored=fn(statement.monitored), consequential=fn(statement.consequential))
    if isinstance(statement, Negation):
        return replace(statement, operand=fn(statement.operand))
    return statement


def _negate_modal(atomic: Atomic) -> Atomic:
    comps = list(atomic.explicit)
    for i, comp in enumerate(comps):
        if _is_modal(comp):
            if _modal_negated(comp):
                comps[i] = _unnegate(comp)
            else:
                comps[i] = replace(comp, text=f"{comp.text} not", negated=True)
            return atomic.with_components(comps)
    raise NoModalToNegate("negated statement has no Deontic or Modal component")


def _push(statement: Statement) -> Statement:
    if isinstance(statement, Atomic):
        return _map_nested(statement, _push)
    if isinstance(statement, Negation):
        inner = _push(statement.operand)
        if isinstance(inner, Negation) and not _has_meta(inner) and not _has_meta(statement):
            return inner.operand
        if isinstance(inner, Atomic) and not (_has_meta(inner) and _has_meta(statement)):
            negated = _negate_modal(inner)
            if _has_meta(statement):
                negated = replace(negated, governance=statement.governance,
                                  consequence_type=statement.consequence_type)
            return negated
        return replace(statement, operand=inner)
    return _map_children(statement, _push)


def normalize_negation(statement: Statement, mode: str = "hoist") -> Statement:
    """Move negation between Deontic/Modal wording and statement level.

    ``hoist`` turns "must not" into ``[NOT]`` around the statement; ``push``
    does the reverse and fails with NoModalToNegate on leaves without a
    Deontic or Modal.  Double negations cancel.
    """
    if mode == "hoist":
        return _hoist(statement)
    if mode == "push":
        return _push(statement)
    raise ValueError(f"mode must be 'hoist' or 'push', not {mode!r}")
