"""Random generators for canonical statement trees.

Trees obey the constraints under which the shorthand is unambiguous:
distinct codes per atomic statement, lowercase alphabetic words, punctuation
filler only on plain spans, distinct property index paths within a component,
group ids on every member that carries properties, and bounded depth.

Generation is driven by a ``random.Random`` so the acceptance suite can use
fixed seeds; ``statements()`` wraps it for hypothesis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Optional

from hypothesis import strategies as st

from igkit.model import (
    CONSTITUTIVE_CODES,
    NESTABLE_CODES,
    REGULATIVE_CODES,
    Atomic,
    Combination,
    Component,
    Negation,
    OrElse,
    PropertyNode,
    SemanticAnnotation,
    Statement,
)

WORDS = (
    "farmers", "organic", "board", "members", "public", "review", "market", "goods",
    "council", "standards", "within", "days", "annual", "report", "sell", "produce",
    "label", "certified", "agency", "records", "keep", "state", "local", "permit",
)
OPERATORS = ("AND", "OR", "XOR")
NEST_FILLERS = ("", "that", "under the condition that")
ANNOTATIONS = {
    "Cac": [SemanticAnnotation("ctx", "tfr"), SemanticAnnotation("ctx", "evt"), SemanticAnnotation("ctx", "ste")],
    "Cex": [SemanticAnnotation("ctx", "ord"), SemanticAnnotation("ctx", "pur")],
    "A": [SemanticAnnotation("anim", "animate"), SemanticAnnotation("role", "originator")],
    "Bdir": [SemanticAnnotation("anim", "inanimate"), SemanticAnnotation("role", "possessor")],
    "E": [SemanticAnnotation("anim", "animate")],
    "F": [SemanticAnnotation("confunc", "definition")],
    "I": [SemanticAnnotation("regfunc", "comply")],
}
PROPERTY_ANNOTATIONS = [SemanticAnnotation("role", "possessor"), SemanticAnnotation("anim", "animate")]
ENTITY_CODES = {"A", "B", "Bdir", "Bind", "E", "P"}


def words(rng: random.Random) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 3)))


@dataclass
class _Draft:
    """Mutable property draft; positions are assigned once source order is fixed."""

    text: str
    path: tuple[int, ...] = ()
    children: list["_Draft"] = field(default_factory=list)
    annotations: tuple = ()
    independent: bool = False
    gid: Optional[str] = None
    operator: Optional[str] = None
    filler: str = ""
    position: int = 0

    def build(self) -> PropertyNode:
        return PropertyNode(
            text=self.text, dependence="independent" if self.independent else "dependent",
            index_path=self.path, group_id=self.gid, sibling_operator=self.operator,
            annotations=self.annotations,
            children=tuple(c.build() for c in sorted(self.children, key=lambda c: c.position)),
            filler=self.filler, position=self.position,
        )


def _properties(rng, code, max_top=2, indices=(1, 2, 3)) -> list[_Draft]:
    props = []
    free = list(indices)
    for _ in range(rng.randint(0, max_top)):
        index = rng.choice([None] + free)
        prop = _Draft(words(rng))
        if index is not None:
            free.remove(index)
            prop.path = (index,)
            if rng.random() < 0.5:
                prop.children.append(_Draft(words(rng), (index, 1)))
        if code in ENTITY_CODES and rng.random() < 0.25:
            prop.annotations = (rng.choice(PROPERTY_ANNOTATIONS),)
        props.append(prop)
    return props


def _shuffled(rng, items):
    items = list(items)
    rng.shuffle(items)
    return items


def random_atomic(rng: random.Random, nest: int = 0, family: Optional[str] = None,
                  groups: bool = True, group_operator: Optional[str] = None,
                  max_components: int = 6) -> Atomic:
    fam = family or rng.choice(["regulative", "constitutive"])
    pool = sorted(REGULATIVE_CODES if fam == "regulative" else CONSTITUTIVE_CODES)
    core = rng.sample(pool, rng.randint(1, min(4, max_components)))
    context = rng.sample(["Cac", "Cex"], rng.randint(0, min(2, max_components - len(core))))
    codes = _shuffled(rng, core + context)

    heads, units = [], []
    for code in codes:
        kind = rng.choice(["plain", "plain", "plain", "inferred", "nested", "group"])
        if kind == "nested" and (code not in NESTABLE_CODES or nest >= 2):
            kind = "plain"
        if kind == "group" and not groups:
            kind = "plain"
        head = {"code": code, "kind": kind, "props": [], "members": [], "block": []}
        if kind in ("plain", "group"):
            # members index their own properties from 1, so shared ones start at 2
            head["props"] = _properties(rng, code, 1, (2, 3)) if kind == "group" else _properties(rng, code)
            units += [("prop", _shuffled(rng, [p] + p.children)) for p in head["props"]]
        if kind == "plain":
            head["text"] = words(rng)
            if code in ANNOTATIONS and rng.random() < 0.3:
                head["annotations"] = (rng.choice(ANNOTATIONS[code]),)
            if code in ("D", "M"):
                head["negated"] = rng.random() < 0.2
                if rng.random() < 0.15:
                    head["alt"] = "M" if code == "D" else "D"
        elif kind == "inferred":
            head["text"] = words(rng)
        elif kind == "nested":
            head["nested"] = random_statement(rng, depth=2, nest=nest + 1)
            head["filler"] = rng.choice(NEST_FILLERS)
        else:
            op = group_operator or rng.choice(OPERATORS)
            head["filler"] = rng.choice(["", "a", "the"])
            for i in range(rng.randint(2, 3)):
                member = _Draft(words(rng), independent=True, operator=op if i else None)
                if rng.random() < 0.33:
                    member.children.append(_Draft(words(rng), (1,)))
                if member.children or rng.random() < 0.5:
                    member.gid = "abc"[i]
                head["members"].append(member)
                head["block"] += _shuffled(rng, [member] + member.children)
        heads.append(head)
        units.append(("head", head))

    pos = 0
    for i, (kind, payload) in enumerate(_shuffled(rng, units)):
        if kind == "prop":
            for j, item in enumerate(payload):
                item.position = pos
                pos += 1
                if i and not j:
                    item.filler = rng.choice(["", ","])
            continue
        payload["position"] = pos
        pos += 1
        for item in payload["block"]:
            item.position = pos
            pos += 1
        if payload["kind"] == "plain" and i:
            payload["filler"] = rng.choice(["", ","])

    comps = [
        Component(
            code=h["code"], text=h.get("text", ""), inferred=h["kind"] == "inferred",
            properties=tuple(p.build() for p in sorted(h["members"] + h["props"], key=lambda p: p.position)),
            nested=h.get("nested"), annotations=h.get("annotations", ()),
            alt_code=h.get("alt"), negated=h.get("negated", False),
            grouped=h["kind"] == "group", filler=h.get("filler", ""), position=h["position"],
        )
        for h in heads
    ]
    return Atomic(components=tuple(sorted(comps, key=lambda c: c.position)))


def _with_meta(rng, node: Statement) -> Statement:
    if rng.random() < 0.15:
        gov = rng.choice(["monitored", "consequential", "monitoring"])
        cons = rng.choice([None, "existential"]) if gov == "consequential" else None
        return replace(node, governance=gov, consequence_type=cons)
    return node


def random_statement(rng: random.Random, depth: int = 0, nest: int = 0, max_depth: int = 3) -> Statement:
    if depth >= max_depth or rng.random() < 0.4:
        node: Statement = random_atomic(rng, nest=nest)
    else:
        kind = rng.choice(["combo", "combo", "neg", "orelse"])

        def sub():
            return random_statement(rng, depth + 1, nest, max_depth)

        if kind == "combo":
            op = rng.choice(OPERATORS)
            operands, n = [], rng.randint(2, 3)
            while len(operands) < n:
                child = sub()
                if not (isinstance(child, Combination) and child.operator == op):
                    operands.append(child)
            node = Combination(operator=op, operands=tuple(operands))
        elif kind == "neg":
            child = sub()
            while isinstance(child, Negation):
                child = sub()
            node = Negation(operand=child)
        else:
            node = OrElse(monitored=sub(), consequential=sub())
    return _with_meta(rng, node) if nest == 0 else node


def random_top_statement(rng: random.Random) -> Statement:
    node = random_statement(rng)
    if isinstance(node, Atomic) and node.governance is None and rng.random() < 0.5:
        node = replace(node, trailing=".")
    return node


def statements() -> st.SearchStrategy[Statement]:
    return st.randoms(use_true_random=False).map(random_top_statement)
