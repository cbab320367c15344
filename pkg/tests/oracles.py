"""Independent reference implementations used to check the transforms."""

from __future__ import annotations

import itertools
import random
from math import prod

from igkit.model import Atomic, Combination, Statement

from strategies import random_atomic


def single_operator_atomic(rng: random.Random) -> tuple[str, Atomic]:
    """An atomic statement whose compound groups all share one operator and that holds no nesting."""
    op = rng.choice(["AND", "OR", "XOR"])
    return op, random_atomic(rng, nest=2, group_operator=op)


def expected_leaves(atomic: Atomic) -> list[tuple[str, ...]]:
    """Cross product of group member choices, spelled as the text each leaf should carry."""
    groups = sorted((c for c in atomic.explicit if c.grouped), key=lambda c: c.position)
    choices = [
        [" ".join(part for part in (g.filler, m.filler, m.text) if part) for m in g.members]
        for g in groups
    ]
    return list(itertools.product(*choices)) if groups else [()]


def leaf_count(atomic: Atomic) -> int:
    return prod(len(c.members) for c in atomic.explicit if c.grouped)


def leaf_texts(result: Statement, atomic: Atomic) -> list[tuple[str, ...]]:
    codes = [c.code for c in sorted(atomic.explicit, key=lambda c: c.position) if c.grouped]
    leaves = result.operands if isinstance(result, Combination) else (result,)
    out = []
    for leaf in leaves:
        by_code = {c.code: c.text for c in leaf.explicit}
        out.append(tuple(by_code[code] for code in codes))
    return out
