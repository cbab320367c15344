from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Union

from ..model import CODES, Atomic, Statement, iter_components, leaves, nested_statements
from ..transforms import flatten_vertical


@dataclass
class FrequencyTable:
    """Occurrence counts over a corpus.

    ``components`` counts explicit components by code and ``implied`` the
    default contexts added for missing Cac/Cex.  Depth histograms map a
    depth to the number of OR ELSE pairs or nested statements found there.
    """

    components: Counter = field(default_factory=Counter)
    implied: Counter = field(default_factory=Counter)
    annotations: Counter = field(default_factory=Counter)
    vertical_depths: Counter = field(default_factory=Counter)
    nesting_depths: Counter = field(default_factory=Counter)
    statements: int = 0

    @property
    def total_components(self) -> int:
        return sum(self.components.values())

    def as_dict(self) -> dict:
        order = {c: i for i, c in enumerate(CODES)}
        return {
            "statements": self.statements,
            "components": {k: self.components[k] for k in sorted(self.components, key=order.get)},
            "implied": {k: self.implied[k] for k in sorted(self.implied, key=order.get)},
            "annotations": {f"{p}:{l}" if l else p: n for (p, l), n in sorted(self.annotations.items())},
            "verticalDepths": {str(k): v for k, v in sorted(self.vertical_depths.items())},
            "nestingDepths": {str(k): v for k, v in sorted(self.nesting_depths.items())},
        }


def _nesting(statement: Statement, depth: int, table: FrequencyTable) -> None:
    for leaf in leaves(statement):
        for inner in nested_statements(leaf):
            table.nesting_depths[depth + 1] += 1
            _nesting(inner, depth + 1, table)


def stats(corpus: Iterable[Union[Statement, object]]) -> FrequencyTable:
    """Frequencies over statements or parsed records (unparsed records are skipped)."""
    table = FrequencyTable()
    for item in corpus:
        statement = getattr(item, "parsed", item)
        if statement is None:
            continue
        table.statements += 1
        for comp in iter_components(statement):
            (table.implied if comp.implied else table.components)[comp.code] += 1
            for ann in comp.annotations:
                table.annotations[(ann.prefix, ann.label)] += 1
            for prop in comp.walk_properties():
                for ann in prop.annotations:
                    table.annotations[(ann.prefix, ann.label)] += 1
        for pair in flatten_vertical(statement):
            table.vertical_depths[pair.depth] += 1
        _nesting(statement, 0, table)
    return table
