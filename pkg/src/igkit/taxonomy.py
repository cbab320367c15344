"""Hierarchical label vocabularies for semantic annotations.

A :class:`TaxonomyRegistry` holds one forest per prefix (``ctx``, ``role``,
``regfunc`` ...).  Nodes with a ``code`` can be referenced from annotations;
uncoded nodes (umbrella categories, named specializations) exist only to
structure the hierarchy.

User extensions are JSON documents::

    {"schema": "igkit-taxonomy-1",
     "nodes": [{"prefix": "regfunc", "code": "escalate",
                "name": "Escalate", "parent": "enforce"}]}
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import (
    CycleDetected,
    DuplicateCode,
    ReservedPrefixModification,
    TaxonomyFormatError,
    UnknownLabel,
    UnknownParent,
    UnknownPrefix,
)

SCHEMA = "igkit-taxonomy-1"


@dataclass(eq=False)
class TaxonomyNode:
    prefix: str
    key: str
    name: str
    code: Optional[str] = None
    description: str = ""
    aliases: tuple[str, ...] = ()
    builtin: bool = True
    parent: Optional["TaxonomyNode"] = field(default=None, repr=False)
    children: list["TaxonomyNode"] = field(default_factory=list, repr=False)

    def _identity(self):
        parent_key = self.parent.key if self.parent is not None else None
        return (self.prefix, self.key, self.code, self.name, self.description, parent_key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TaxonomyNode):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self) -> int:
        return hash(self._identity())

    @property
    def is_leaf(self) -> bool:
        return not self.children


# Built-in vocabularies: (key, code or None, name, description, children)

def _n(key, code, name, description="", children=(), aliases=()):
    return (key, code, name, description, tuple(children), tuple(aliases))


_CTX = (
    _n("substantive", None, "Substantive Context", "", [
        _n("tmp", "tmp", "Temporal", "temporal characteristics", [
            _n("tim", "tim", "Point in time", "references to specific points in time", [
                _n("tim.beginning", None, "Beginning"),
                _n("tim.end", None, "End"),
            ]),
            _n("tfr", "tfr", "Time frame", "duration of a given activity"),
            _n("frq", "frq", "Frequency", "repetition or regularity of an activity"),
        ]),
        _n("spt", "spt", "Spatial", "spatial characteristics", [
            _n("loc", "loc", "Location", "position in space", [
                _n("loc.beginning", None, "Beginning"),
                _n("loc.end", None, "End"),
            ]),
            _n("dir", "dir", "Direction", "movement towards a target"),
            _n("pth", "pth", "Path", "route between two locations"),
        ]),
        _n("dom", "dom", "Domanial", "realm in which the statement applies", [
            _n("dom.activity", None, "Activity realm"),
            _n("dom.topical", None, "Topical realm"),
            _n("dom.existential", None, "Existential realm"),
        ]),
    ]),
    _n("procedural", None, "Procedural Context", "", [
        _n("ord", "ord", "Order", "sequence relative to other activities"),
        _n("met", "met", "Method", "how an activity is carried out", [
            _n("met.means", None, "Means"),
            _n("met.instrument", None, "Instrument"),
        ]),
    ]),
    _n("aspirational", None, "Aspirational Context", "", [
        _n("pur", "pur", "Purpose/Function", "goal pursued by an activity"),
    ]),
    _n("situational", None, "Situational Context", "", [
        _n("ste", "ste", "State", "conditions holding when the statement applies"),
        _n("evt", "evt", "Event", "occurrence that triggers the statement"),
    ]),
)

_ANIM = (
    _n("animate", "animate", "Animate", "living actor"),
    _n("inanimate", "inanimate", "Inanimate", "non-living object or entity"),
)

_METATYPE = (
    _n("abstract", "abstract", "Abstract", "non-physical concept"),
    _n("concrete", "concrete", "Concrete", "physical artefact or being"),
)

_ROLE = (
    _n("originator", "originator", "Originator", "entity from which an action originates",
       aliases=("causer", "agent")),
    _n("recipient", "recipient", "Recipient", "entity receiving an object or action"),
    _n("possessor", "possessor", "Possessor", "owner of an object/entity"),
    _n("experiencer", "experiencer", "Experiencer", "entity affected by an action"),
    _n("beneficiary", "beneficiary", "Beneficiary", "entity benefiting from an action"),
    _n("position", "position", "Position", "formal role occupied by an actor"),
)

_REGFUNC = (
    _n("compliance-action", "compliance-action", "Compliance action", "", [
        _n("comply", "comply", "Comply"),
        _n("violate", "violate", "Violate"),
    ]),
    _n("monitor", "monitor", "Monitor", "", [
        _n("detect-compliance", "detect-compliance", "Detect compliance"),
        _n("detect-violation", "detect-violation", "Detect violation"),
    ]),
    _n("enforce", "enforce", "Enforce", "", [
        _n("reward", "reward", "Reward"),
        _n("sanction", "sanction", "Sanction"),
    ]),
    _n("enforcement-response", "enforcement-response", "Enforcement response", "", [
        _n("accept", "accept", "Accept"),
        _n("reject", "reject", "Reject", "", [
            _n("appeal", "appeal", "Appeal"),
        ]),
    ]),
)

_CONFUNC = (
    _n("entity", "entity", "Entity-related", "", [
        _n("definition", "definition", "Definition"),
        _n("composition", "composition", "Composition"),
        _n("organization", "organization", "Organization"),
        _n("lifecycle", "lifecycle", "Lifecycle", "entity lifecycle"),
        _n("conferral", "conferral", "Conferral"),
    ]),
    _n("policy", "policy", "Policy-related", "", [
        _n("policy-lifecycle", "policy-lifecycle", "Policy lifecycle", "policy lifecycle",
           aliases=("policy/lifecycle",)),
        _n("relationship", "relationship", "Relationship"),
        _n("intent", "intent", "Intent"),
        _n("information", "information", "Information"),
    ]),
)

_GOVERNANCE = (
    _n("monitored", "monitored", "Monitored statement"),
    _n("consequential", "consequential", "Consequential statement"),
    _n("monitoring", "monitoring", "Monitoring statement"),
)

_CONSEQUENCE = (
    _n("existential", "existential", "Existential consequence"),
    _n("non-existential", "non-existential", "Non-existential consequence"),
)

BUILTIN_TREES = {
    "ctx": _CTX,
    "anim": _ANIM,
    "metatype": _METATYPE,
    "role": _ROLE,
    "regfunc": _REGFUNC,
    "confunc": _CONFUNC,
    "governance": _GOVERNANCE,
    "consequence": _CONSEQUENCE,
}
BUILTIN_PREFIXES = frozenset(BUILTIN_TREES)


def _codes(tree) -> Iterator[str]:
    for key, code, _name, _desc, kids, _aliases in tree:
        if code:
            yield code
        yield from _codes(kids)


BUILTIN_CTX_CODES = frozenset(_codes(_CTX))


class TaxonomyRegistry:
    """Read-only collection of taxonomy forests keyed by prefix."""

    def __init__(self, nodes: Iterable[TaxonomyNode] = ()):
        self._nodes: dict[tuple[str, str], TaxonomyNode] = {}
        self._codes: dict[tuple[str, str], TaxonomyNode] = {}
        for node in nodes:
            self._add(node)

    def _add(self, node: TaxonomyNode) -> None:
        self._nodes[(node.prefix, node.key)] = node
        if node.code:
            self._codes[(node.prefix, node.code)] = node
            for alias in node.aliases:
                self._codes.setdefault((node.prefix, alias), node)

    # queries ---------------------------------------------------------------

    @property
    def prefixes(self) -> list[str]:
        return sorted({prefix for prefix, _ in self._nodes})

    def nodes(self, prefix: Optional[str] = None) -> list[TaxonomyNode]:
        return [n for (p, _), n in self._nodes.items() if prefix is None or p == prefix]

    def roots(self, prefix: str) -> list[TaxonomyNode]:
        return [n for n in self.nodes(prefix) if n.parent is None]

    def coded(self, prefix: str) -> list[TaxonomyNode]:
        return [n for n in self.nodes(prefix) if n.code]

    def resolve(self, prefix: str, label: str) -> TaxonomyNode:
        """Return the coded node for ``prefix:label`` (codes and aliases match)."""
        if prefix not in {p for p, _ in self._nodes}:
            raise UnknownPrefix(f"unknown taxonomy prefix {prefix!r}")
        node = self._codes.get((prefix, label)) or self._codes.get((prefix, label.lower()))
        if node is None:
            options = [code for (p, code) in self._codes if p == prefix]
            close = difflib.get_close_matches(label.lower(), options, n=1)
            raise UnknownLabel(prefix, label, close[0] if close else None)
        return node

    def ancestors(self, node: TaxonomyNode) -> list[TaxonomyNode]:
        out = []
        seen = set()
        cur = node.parent
        while cur is not None and id(cur) not in seen:
            seen.add(id(cur))
            out.append(cur)
            cur = cur.parent
        return out

    def descendants(self, node: TaxonomyNode) -> list[TaxonomyNode]:
        out = []
        stack = list(reversed(node.children))
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(reversed(cur.children))
        return out

    def edges(self) -> list[tuple[TaxonomyNode, TaxonomyNode]]:
        return [(n.parent, n) for n in self._nodes.values() if n.parent is not None]

    def __contains__(self, item: tuple[str, str]) -> bool:
        return item in self._codes

    def __len__(self) -> int:
        return len(self._nodes)

    # merging ---------------------------------------------------------------

    def copy(self) -> "TaxonomyRegistry":
        clones = {
            k: TaxonomyNode(n.prefix, n.key, n.name, n.code, n.description, n.aliases, n.builtin)
            for k, n in self._nodes.items()
        }
        for k, n in self._nodes.items():
            if n.parent is not None:
                parent = clones[(n.parent.prefix, n.parent.key)]
                clones[k].parent = parent
        for k, n in self._nodes.items():
            clones[k].children = [clones[(c.prefix, c.key)] for c in n.children]
        return TaxonomyRegistry(clones.values())

    def merge(self, definition: Union[Mapping, str, Path]) -> "TaxonomyRegistry":
        """Return a new registry extended by a user taxonomy definition.

        ``definition`` is a parsed JSON mapping or a path to a JSON file.
        The receiver is left untouched.
        """
        data = _load_definition(definition)
        entries = _validate_entries(data)
        merged = self.copy()
        incoming: dict[tuple[str, str], dict] = {}
        for entry in entries:
            key = (entry["prefix"], entry["code"])
            existing = merged._nodes.get(key) or merged._codes.get(key)
            if existing is not None and existing.builtin:
                raise ReservedPrefixModification(
                    f"{entry['prefix']}:{entry['code']} is a built-in label and cannot be redefined"
                )
            if existing is not None or key in incoming:
                raise DuplicateCode(f"label {entry['prefix']}:{entry['code']} defined twice")
            incoming[key] = entry
        _check_cycles(incoming)
        new_nodes = {
            key: TaxonomyNode(
                prefix=e["prefix"], key=e["code"], name=e["name"], code=e["code"],
                description=e.get("description", ""), builtin=False,
            )
            for key, e in incoming.items()
        }
        for key, entry in incoming.items():
            merged._add(new_nodes[key])
        for key, entry in incoming.items():
            parent_label = entry.get("parent")
            if parent_label is None:
                continue
            pkey = (entry["prefix"], parent_label)
            parent = new_nodes.get(pkey) or merged._codes.get(pkey) or merged._nodes.get(pkey)
            if parent is None:
                raise UnknownParent(f"parent {parent_label!r} of {entry['prefix']}:{entry['code']} not found")
            node = new_nodes[key]
            node.parent = parent
            parent.children.append(node)
        return merged


def _load_definition(definition) -> dict:
    if isinstance(definition, Mapping):
        return dict(definition)
    try:
        text = Path(definition).read_text(encoding="utf-8")
    except OSError as exc:
        raise TaxonomyFormatError(f"cannot read taxonomy file {definition}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaxonomyFormatError(f"invalid JSON in {definition}: {exc}") from exc


def _validate_entries(data: dict) -> list[dict]:
    if data.get("schema") != SCHEMA:
        raise TaxonomyFormatError(f"expected schema {SCHEMA!r}")
    nodes = data.get("nodes")
    if not isinstance(nodes, list):
        raise TaxonomyFormatError("'nodes' must be a list")
    for entry in nodes:
        if not isinstance(entry, dict):
            raise TaxonomyFormatError("each node must be an object")
        for name in ("prefix", "code", "name"):
            if not isinstance(entry.get(name), str) or not entry[name].strip():
                raise TaxonomyFormatError(f"node field {name!r} must be a non-empty string")
        if entry.get("parent") is not None and not isinstance(entry["parent"], str):
            raise TaxonomyFormatError("node field 'parent' must be a string or null")
        if any(ch in entry["code"] for ch in " ,;:=()[]{}"):
            raise TaxonomyFormatError(f"code {entry['code']!r} contains reserved characters")
    return nodes


def _check_cycles(incoming: dict[tuple[str, str], dict]) -> None:
    # only new nodes can close a loop; built-in parents are acyclic
    state: dict[tuple[str, str], int] = {}
    for start in incoming:
        path = []
        cur = start
        while cur in incoming and state.get(cur) != 2:
            if state.get(cur) == 1:
                loop = path[path.index(cur):] + [cur]
                raise CycleDetected(" -> ".join(f"{p}:{c}" for p, c in loop))
            state[cur] = 1
            path.append(cur)
            parent = incoming[cur].get("parent")
            if parent is None:
                break
            cur = (cur[0], parent)
        for node in path:
            state[node] = 2


def _build(prefix: str, tree, parent: Optional[TaxonomyNode], out: list) -> None:
    for key, code, name, desc, kids, aliases in tree:
        node = TaxonomyNode(prefix, key, name, code, desc, aliases, True, parent)
        if parent is not None:
            parent.children.append(node)
        out.append(node)
        _build(prefix, kids, node, out)


def load_builtin() -> TaxonomyRegistry:
    nodes: list[TaxonomyNode] = []
    for prefix, tree in BUILTIN_TREES.items():
        _build(prefix, tree, None, nodes)
    return TaxonomyRegistry(nodes)


def merge_user_taxonomy(registry: TaxonomyRegistry, definition) -> TaxonomyRegistry:
    return registry.merge(definition)
